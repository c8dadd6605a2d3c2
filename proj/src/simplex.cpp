#include "fluxline/simplex.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include "fluxline/parallel.hpp"

namespace fluxline {

SimplexResult nelder_mead(const ObjectiveFn& f, const Eigen::VectorXd& x0,
                          const Eigen::VectorXd& step, const SimplexOptions& opts) {
    const int n = static_cast<int>(x0.size());
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    std::vector<Eigen::VectorXd> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    for (int i = 0; i < n; ++i) pts[i + 1](i) += (step(i) != 0.0 ? step(i) : 1e-4);
    for (int i = 0; i <= n; ++i) vals[i] = f(pts[i]);

    auto order = [&] {
        std::vector<int> idx(n + 1);
        for (int i = 0; i <= n; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] < vals[b]; });
        std::vector<Eigen::VectorXd> p2(n + 1);
        std::vector<double> v2(n + 1);
        for (int i = 0; i <= n; ++i) {
            p2[i] = pts[idx[i]];
            v2[i] = vals[idx[i]];
        }
        pts.swap(p2);
        vals.swap(v2);
    };

    SimplexResult res;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        order();
        const double spread = std::abs(vals[n] - vals[0]);
        double xspread = 0.0;
        for (int i = 1; i <= n; ++i) xspread = std::max(xspread, (pts[i] - pts[0]).norm());
        if (spread < opts.f_tolerance && xspread < opts.x_tolerance) {
            res.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += pts[i];
        centroid /= n;

        const Eigen::VectorXd xr = centroid + alpha * (centroid - pts[n]);
        const double fr = f(xr);
        if (fr < vals[0]) {
            const Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
            const double fe = f(xe);
            if (fe < fr) {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
        } else if (fr < vals[n - 1]) {
            pts[n] = xr;
            vals[n] = fr;
        } else {
            const Eigen::VectorXd xc = centroid + rho * (pts[n] - centroid);
            const double fc = f(xc);
            if (fc < vals[n]) {
                pts[n] = xc;
                vals[n] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    pts[i] = pts[0] + sigma * (pts[i] - pts[0]);
                    vals[i] = f(pts[i]);
                }
            }
        }
    }
    order();
    res.x = pts[0];
    res.fval = vals[0];
    res.iterations = it;
    return res;
}

SimplexResult nelder_mead_restarts(const ObjectiveFn& f, const Eigen::VectorXd& x0,
                                   const Eigen::VectorXd& step, const SimplexOptions& opts) {
    const int n = static_cast<int>(x0.size());
    const int runs = std::max(1, opts.restarts);

    // Precompute every start deterministically before any parallel work.
    std::vector<Eigen::VectorXd> starts(runs, x0);
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int r = 1; r < runs; ++r)
        for (int i = 0; i < n; ++i)
            starts[r](i) = x0(i) * (1.0 + opts.jitter * u(rng)) +
                           ((x0(i) == 0.0) ? opts.jitter * step(i) * u(rng) : 0.0);

    std::vector<SimplexResult> results(runs);
    parallel_for(runs, opts.threads,
                 [&](std::size_t r) { results[r] = nelder_mead(f, starts[r], step, opts); });

    int best = 0;
    for (int r = 1; r < runs; ++r) {
        const auto& a = results[r];
        const auto& b = results[best];
        if (a.fval < b.fval) {
            best = r;
        } else if (a.fval == b.fval) {
            for (int i = 0; i < n; ++i) {
                if (a.x(i) == b.x(i)) continue;
                if (a.x(i) < b.x(i)) best = r;
                break;
            }
        }
    }
    return results[best];
}

} // namespace fluxline
