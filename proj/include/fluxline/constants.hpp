#pragma once

// Physical constants (SI, 2019 redefinition where exact) and the unit
// conversions used throughout: all Hamiltonians are expressed as H/h in GHz,
// inductances in henries, capacitances in farads, flux in radians (Phi/phi0).

#include <cmath>

namespace fluxline::constants {

inline constexpr double h_planck = 6.62607015e-34;      // J/Hz (exact)
inline constexpr double hbar = h_planck / (2.0 * M_PI); // J s
inline constexpr double e_charge = 1.602176634e-19;     // C (exact)
inline constexpr double k_boltzmann = 1.380649e-23;     // J/K (exact)
inline constexpr double m_electron = 9.1093837015e-31;  // kg
inline constexpr double phi0_reduced = hbar / (2.0 * e_charge); // hbar/2e, Wb

// E_C = e^2/2C expressed in GHz.
inline double charging_energy_ghz(double c_farad) {
    return e_charge * e_charge / (2.0 * c_farad * h_planck) * 1e-9;
}

// E_L = phi0^2/L expressed in GHz.
inline double inductive_energy_ghz(double l_henry) {
    return phi0_reduced * phi0_reduced / (l_henry * h_planck) * 1e-9;
}

inline double capacitance_from_charging_energy(double e_c_ghz) {
    return e_charge * e_charge / (2.0 * e_c_ghz * 1e9 * h_planck);
}

inline double inductance_from_inductive_energy(double e_l_ghz) {
    return phi0_reduced * phi0_reduced / (e_l_ghz * 1e9 * h_planck);
}

// L_J = phi0^2/(h E_J), the linear inductance of a junction with energy E_J.
inline double josephson_inductance(double e_j_ghz) {
    return phi0_reduced * phi0_reduced / (h_planck * e_j_ghz * 1e9);
}

inline double josephson_energy_from_inductance(double l_j_henry) {
    return phi0_reduced * phi0_reduced / (h_planck * l_j_henry) * 1e-9;
}

} // namespace fluxline::constants
