#pragma once

// Parameter records for the circuit models.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "fluxline/constants.hpp"

namespace fluxline {

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Single-mode fluxonium, H/h = 4 E_C n^2 + 1/2 E_L phi^2 - E_J cos(phi + phi_ext).
struct SingleModeParams {
    double e_c = 0.0; // charging energy, GHz
    double e_l = 0.0; // inductive energy, GHz
    double e_j = 0.0; // Josephson energy, GHz

    void validate() const {
        if (!(e_c > 0.0) || !(e_l > 0.0) || !(e_j >= 0.0))
            throw ParameterError("SingleModeParams: energies must be positive (E_J >= 0)");
        if (!std::isfinite(e_j / e_c))
            throw ParameterError("SingleModeParams: E_J/E_C must be finite");
    }

    double plasma_frequency() const { return std::sqrt(8.0 * e_c * e_l); }
};

// Two antisymmetric modes coupled through a junction: effective capacitances,
// inductances and offset charges, plus the junction energy. The mode
// coordinates sum to the phase difference across the junction.
struct TwoModeParams {
    std::array<double, 2> c_eff{0.0, 0.0};   // farads
    std::array<double, 2> l_eff{0.0, 0.0};   // henries (junction contribution removed)
    std::array<double, 2> q_offset{0.0, 0.0}; // offset charges, units of 2e
    double e_j = 0.0;                         // GHz
    double l_j = 0.0;                         // henries, phi0^2/(h e_j)

    void validate() const {
        for (int i = 0; i < 2; ++i) {
            if (!(c_eff[i] > 0.0) || !(l_eff[i] > 0.0))
                throw ParameterError("TwoModeParams: effective L and C must be positive");
        }
        if (!(e_j > 0.0)) throw ParameterError("TwoModeParams: e_j must be positive");
        const double l_j_expected = constants::josephson_inductance(e_j);
        if (std::abs(l_j - l_j_expected) > 1e-12 * l_j_expected)
            throw ParameterError("TwoModeParams: l_j inconsistent with e_j");
    }

    static TwoModeParams make(std::array<double, 2> c, std::array<double, 2> l,
                              std::array<double, 2> q, double e_j_ghz) {
        TwoModeParams p;
        p.c_eff = c;
        p.l_eff = l;
        p.q_offset = q;
        p.e_j = e_j_ghz;
        p.l_j = constants::josephson_inductance(e_j_ghz);
        return p;
    }
};

// External flux in radians, Phi_ext/phi0.
struct FluxBias {
    double phi_ext = 0.0;

    void validate() const {
        if (!std::isfinite(phi_ext)) throw ParameterError("FluxBias: phi_ext must be finite");
    }
};

struct ResonatorParams {
    double omega_r = 0.0;  // GHz
    double q_loaded = 0.0; // dimensionless
    double g = 0.0;        // qubit-resonator charge coupling, GHz

    void validate() const {
        if (!(omega_r > 0.0)) throw ParameterError("ResonatorParams: omega_r must be positive");
        if (!(q_loaded > 1.0)) throw ParameterError("ResonatorParams: q_loaded must exceed 1");
    }

    // Resonator linewidth omega_r/Q, GHz.
    double kappa() const { return omega_r / q_loaded; }
};

struct LossModel {
    double q_l = 0.0;           // inductive quality factor
    double q_c = 0.0;           // capacitive quality factor
    double temperature = 0.020; // kelvin

    void validate() const {
        if (!(q_l > 0.0) || !(q_c > 0.0))
            throw ParameterError("LossModel: quality factors must be positive");
        if (temperature < 0.0) throw ParameterError("LossModel: temperature must be >= 0");
    }
};

} // namespace fluxline
