#include "fluxline/operators.hpp"

#include <cmath>
#include <complex>

namespace fluxline {

Eigen::MatrixXd annihilation_re(int dim) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

OscillatorOps oscillator_operators(int dim, double e_c, double e_l) {
    if (dim < 2) throw ParameterError("oscillator_operators: dim must be >= 2");
    if (!(e_c > 0.0) || !(e_l > 0.0))
        throw ParameterError("oscillator_operators: energies must be positive");
    OscillatorOps ops;
    ops.phi_zpf = phase_zpf(e_c, e_l);
    ops.n_zpf = 1.0 / (2.0 * ops.phi_zpf);
    const Eigen::MatrixXd a = annihilation_re(dim);
    ops.phase = ops.phi_zpf * (a + a.transpose());
    const std::complex<double> i_unit(0.0, 1.0);
    ops.charge = i_unit * ops.n_zpf * (a.transpose() - a).cast<std::complex<double>>();
    return ops;
}

namespace {

// <m| exp(i s (a+a^dag)) |n> for m >= n equals
//   sqrt(n!/m!) (i s)^(m-n) exp(-s^2/2) L_n^{m-n}(s^2).
// The Laguerre recurrence is carried with a running scale factor so that
// large-order values never overflow before the damping prefactor is applied.
double laguerre_scaled(int n, int k, double x, double log_prefactor) {
    // returns exp(log_prefactor) * L_n^k(x)
    double scale_log = 0.0;
    double lkm1 = 1.0;             // L_0^k
    if (n == 0) return std::exp(log_prefactor) * lkm1;
    double lk = 1.0 + k - x;       // L_1^k
    for (int j = 1; j < n; ++j) {
        const double next = ((2.0 * j + 1.0 + k - x) * lk - (j + k) * lkm1) / (j + 1.0);
        lkm1 = lk;
        lk = next;
        const double mag = std::abs(lk);
        if (mag > 1e250) {
            lk *= 1e-250;
            lkm1 *= 1e-250;
            scale_log += 250.0 * std::log(10.0);
        }
    }
    return std::exp(log_prefactor + scale_log) * lk;
}

} // namespace

Eigen::MatrixXcd phase_exponential(int dim, double s) {
    Eigen::MatrixXcd d(dim, dim);
    const double x = s * s;
    const std::complex<double> i_unit(0.0, 1.0);
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n <= m; ++n) {
            const int k = m - n;
            const double log_pref = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)) +
                                    k * std::log(std::abs(s) > 0 ? std::abs(s) : 1.0) - 0.5 * x;
            double val = (s == 0.0 && k > 0) ? 0.0 : laguerre_scaled(n, k, x, log_pref);
            if (s < 0.0 && (k % 2 != 0)) val = -val;
            std::complex<double> phase = 1.0;
            switch (k % 4) {
                case 0: phase = {1.0, 0.0}; break;
                case 1: phase = {0.0, 1.0}; break;
                case 2: phase = {-1.0, 0.0}; break;
                case 3: phase = {0.0, -1.0}; break;
            }
            d(m, n) = phase * val;
            d(n, m) = d(m, n); // symmetric: sqrt(n!/m!) s^{m-n} L_n^{m-n} both ways
        }
    }
    return d;
}

CosSinPair cosine_sine(int dim, double s) {
    const Eigen::MatrixXcd d = phase_exponential(dim, s);
    CosSinPair p;
    // exp(i phi^) = C + i S with C, S real symmetric
    p.cos_mat = d.real();
    p.sin_mat = d.imag();
    return p;
}

Eigen::MatrixXcd kronecker(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Eigen::MatrixXd kronecker_real(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace fluxline
