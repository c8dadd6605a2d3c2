#pragma once

// Nelder-Mead simplex minimizer with deterministic jittered restarts.
// Derivative-free on purpose: the spectroscopy objectives are piecewise
// smooth because of point-to-line assignment switching.

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace fluxline {

struct SimplexOptions {
    int max_iterations = 600;
    double f_tolerance = 1e-10;
    double x_tolerance = 1e-10;
    int restarts = 1;        // total runs, first from x0, rest jittered
    double jitter = 0.15;    // relative scale of restart perturbations
    std::uint64_t seed = 1;
    int threads = 1;
};

struct SimplexResult {
    Eigen::VectorXd x;
    double fval = 0.0;
    int iterations = 0;
    bool converged = false;
};

using ObjectiveFn = std::function<double(const Eigen::VectorXd&)>;

// Single Nelder-Mead run from x0 with the given initial step per coordinate.
SimplexResult nelder_mead(const ObjectiveFn& f, const Eigen::VectorXd& x0,
                          const Eigen::VectorXd& step, const SimplexOptions& opts = {});

// Restarted search; the winner is the lowest objective value, ties broken by
// lexicographic parameter order so the result is schedule independent.
SimplexResult nelder_mead_restarts(const ObjectiveFn& f, const Eigen::VectorXd& x0,
                                   const Eigen::VectorXd& step, const SimplexOptions& opts = {});

} // namespace fluxline
