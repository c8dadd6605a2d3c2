#pragma once

// Operator algebra in truncated harmonic-oscillator bases.
//
// The Josephson cosine is evaluated from closed-form matrix elements of the
// displacement exponential exp(i s (a + a^dag)) (associated Laguerre form),
// so the truncated matrix is the exact projection of the infinite-dimensional
// operator: no Taylor expansion of the cosine is involved.

#include <Eigen/Dense>

#include "fluxline/params.hpp"

namespace fluxline {

struct OscillatorOps {
    Eigen::MatrixXd phase;   // phi_zpf (a + a^dag)
    Eigen::MatrixXcd charge; // i n_zpf (a^dag - a)
    double phi_zpf = 0.0;
    double n_zpf = 0.0;
};

// Zero-point phase spread of the quadratic part of 4 E_C n^2 + 1/2 E_L phi^2.
inline double phase_zpf(double e_c, double e_l) {
    return std::pow(8.0 * e_c / e_l, 0.25) / std::sqrt(2.0);
}

Eigen::MatrixXd annihilation_re(int dim);

// Phase and charge operators for the oscillator defined by (e_c, e_l).
OscillatorOps oscillator_operators(int dim, double e_c, double e_l);

// exp(i s (a + a^dag)) in the dim-dimensional Fock basis, exact projection.
Eigen::MatrixXcd phase_exponential(int dim, double s);

// cos(s(a+a^dag)) and sin(s(a+a^dag)); a flux offset enters as
// cos(phi^ + x) = cos(x) C - sin(x) S.
struct CosSinPair {
    Eigen::MatrixXd cos_mat;
    Eigen::MatrixXd sin_mat;
};
CosSinPair cosine_sine(int dim, double s);

Eigen::MatrixXcd kronecker(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
Eigen::MatrixXd kronecker_real(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

} // namespace fluxline
