#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

#include <lapacke.h>

namespace oracles {

std::vector<double> second_derivative_weights(int p, double h) {
    // a_0 = -2 sum a_j;  a_j = 2 (-1)^{j+1} (p!)^2 / (j^2 (p-j)! (p+j)!)
    std::vector<double> w(p + 1, 0.0);
    auto fact = [](int n) {
        double f = 1.0;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    const double p_fact_sq = fact(p) * fact(p);
    double sum = 0.0;
    for (int j = 1; j <= p; ++j) {
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        w[j] = 2.0 * sign * p_fact_sq / (j * j * fact(p - j) * fact(p + j));
        sum += w[j];
    }
    w[0] = -2.0 * sum;
    for (double& v : w) v /= h * h;
    return w;
}

std::vector<double> grid_spectrum(const fluxline::SingleModeParams& p, double phi_ext, int k,
                                  int n_points, double phi_max) {
    const int n = n_points;
    const double h = 2.0 * phi_max / (n - 1);
    const int half_band = 6; // 12th-order stencil
    const std::vector<double> w = second_derivative_weights(half_band, h);

    // Symmetric band storage, lower triangle, column major: ab(i-j, j).
    const int ldab = half_band + 1;
    std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);
    for (int j = 0; j < n; ++j) {
        const double phi = -phi_max + j * h;
        const double v = 0.5 * p.e_l * phi * phi - p.e_j * std::cos(phi + phi_ext);
        ab[0 + static_cast<std::size_t>(j) * ldab] = -4.0 * p.e_c * w[0] + v;
        for (int d = 1; d <= half_band && j + d < n; ++d)
            ab[d + static_cast<std::size_t>(j) * ldab] = -4.0 * p.e_c * w[d];
    }

    std::vector<double> evals(n);
    const lapack_int info =
        LAPACKE_dsbevd(LAPACK_COL_MAJOR, 'N', 'L', n, half_band, ab.data(), ldab, evals.data(),
                       nullptr, 1);
    if (info != 0) throw std::runtime_error("grid_spectrum: dsbevd failed");
    evals.resize(k);
    return evals;
}

double open_line_mode_frequency(int n, double l_total, double c_total) {
    return n / (2.0 * std::sqrt(l_total * c_total)) * 1e-9; // GHz
}

double perturbative_dressed_energy(const Eigen::VectorXd& qubit_energies,
                                   const Eigen::MatrixXcd& charge_elements, double omega_r,
                                   double g, int i, int m, int n_fock) {
    const int nq = static_cast<int>(qubit_energies.size());
    double energy = qubit_energies(i) + m * omega_r;
    for (int j = 0; j < nq; ++j) {
        const double coupling_sq = g * g * std::norm(charge_elements(i, j));
        if (coupling_sq == 0.0) continue;
        if (m + 1 < n_fock) {
            const double denom = qubit_energies(i) - qubit_energies(j) - omega_r;
            energy += coupling_sq * (m + 1) / denom;
        }
        if (m >= 1) {
            const double denom = qubit_energies(i) - qubit_energies(j) + omega_r;
            energy += coupling_sq * m / denom;
        }
    }
    return energy;
}

double bloch_steady_excited(double rabi_angular, double detuning_angular, double gamma) {
    const double s = 0.25 * rabi_angular * rabi_angular;
    return s / (detuning_angular * detuning_angular + 0.25 * gamma * gamma + 2.0 * s);
}

} // namespace oracles
