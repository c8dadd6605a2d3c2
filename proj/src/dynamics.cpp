#include "fluxline/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "fluxline/parallel.hpp"
#include "fluxline/simplex.hpp"

namespace fluxline {

namespace {
constexpr double kAngularPerGhz = 2.0 * M_PI * 1e9; // rad/s per GHz
}

std::vector<CollapseOp> collapse_from_loss(const LabeledSpectrum& s, const LossModel& m,
                                           bool thermal_excitation) {
    m.validate();
    std::vector<CollapseOp> ops;
    const int k = s.size();
    for (int i = 1; i < k; ++i) {
        for (int j = 0; j < i; ++j) {
            const double f = s.energies(i) - s.energies(j);
            if (f <= 0.0) continue;
            const double msq = std::norm(s.phi_elements(i, j));
            if (!(s.circuit_e_l > 0.0) || !(s.circuit_e_c > 0.0))
                throw ParameterError("collapse_from_loss: spectrum lacks circuit energies");
            const double rate = msq * (gamma_inductive(s.circuit_e_l, f, 1.0, m) +
                                       gamma_capacitive(s.circuit_e_c, f, 1.0, m));
            if (rate > 0.0) ops.push_back({i, j, rate});
            if (thermal_excitation && m.temperature > 0.0 && rate > 0.0) {
                const double boltzmann = std::exp(-constants::h_planck * f * 1e9 /
                                                  (constants::k_boltzmann * m.temperature));
                if (boltzmann > 1e-300) ops.push_back({j, i, rate * boltzmann});
            }
        }
    }
    return ops;
}

std::vector<ToneAssignment> resolve_assignments(const LabeledSpectrum& s, const DrivePlan& plan) {
    if (plan.frame != FrameKind::multi_rotating)
        throw ParameterError("resolve_assignments: plan must use the multi-rotating frame");
    const int k = s.size();
    std::vector<ToneAssignment> out;
    for (const auto& tone : plan.tones) {
        tone.validate();
        ToneAssignment a;
        a.photon_order = tone.photon_order;
        if (tone.target) {
            a.from_index = s.index_of(tone.target->first);
            a.to_index = s.index_of(tone.target->second);
            if (a.from_index < 0 || a.to_index < 0)
                throw ParameterError("resolve_assignments: target label not in spectrum");
        } else {
            double best = std::numeric_limits<double>::max();
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j) {
                    const double miss = std::abs((s.energies(j) - s.energies(i)) /
                                                     tone.photon_order -
                                                 tone.frequency);
                    if (miss < best) {
                        best = miss;
                        a.from_index = i;
                        a.to_index = j;
                    }
                }
        }
        if (a.from_index == a.to_index)
            throw ParameterError("resolve_assignments: tone assigned to a single level");
        // Normalize so `to` is the upper level; the frame hop is then always
        // +p*omega along from->to regardless of which direction is driven.
        if (s.energies(a.to_index) < s.energies(a.from_index))
            std::swap(a.from_index, a.to_index);
        out.push_back(a);
    }
    return out;
}

HamiltonianMatrix effective_hamiltonian(const LabeledSpectrum& s, const DrivePlan& plan) {
    return effective_hamiltonian(s, plan, resolve_assignments(s, plan));
}

HamiltonianMatrix effective_hamiltonian(const LabeledSpectrum& s, const DrivePlan& plan,
                                        const std::vector<ToneAssignment>& assignments) {
    if (plan.frame != FrameKind::multi_rotating)
        throw ParameterError("effective_hamiltonian: plan must use the multi-rotating frame");
    if (assignments.size() != plan.tones.size())
        throw ParameterError("effective_hamiltonian: assignment count mismatch");
    const int k = s.size();

    // Frame frequencies by breadth-first propagation over the assignment graph.
    std::vector<double> frame(k, std::numeric_limits<double>::quiet_NaN());
    int root = k;
    for (const auto& a : assignments) root = std::min({root, a.from_index, a.to_index});
    if (root == k) root = 0;
    frame[root] = s.energies(root);
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t t = 0; t < assignments.size(); ++t) {
            const auto& a = assignments[t];
            const double hop = plan.tones[t].photon_order * plan.tones[t].frequency;
            const bool from_known = std::isfinite(frame[a.from_index]);
            const bool to_known = std::isfinite(frame[a.to_index]);
            if (from_known && !to_known) {
                frame[a.to_index] = frame[a.from_index] + hop;
                progress = true;
            } else if (!from_known && to_known) {
                frame[a.from_index] = frame[a.to_index] - hop;
                progress = true;
            } else if (from_known && to_known) {
                const double mismatch = frame[a.to_index] - frame[a.from_index] - hop;
                if (std::abs(mismatch) > 1e-9)
                    throw ParameterError(
                        "effective_hamiltonian: loop-inconsistent assignment at tone " +
                        std::to_string(t) + " (" + s.labels[a.from_index].str() + "->" +
                        s.labels[a.to_index].str() + "), mismatch " + std::to_string(mismatch) +
                        " GHz");
            }
        }
    }
    for (int i = 0; i < k; ++i)
        if (!std::isfinite(frame[i])) frame[i] = s.energies(i); // spectator level

    HamiltonianMatrix h;
    h.basis = BasisTag::SingleOscillator;
    h.elements = Eigen::MatrixXcd::Zero(k, k);
    for (int i = 0; i < k; ++i) h.elements(i, i) = s.energies(i) - frame[i];

    for (std::size_t t = 0; t < assignments.size(); ++t) {
        const auto& a = assignments[t];
        const DriveTone& tone = plan.tones[t];
        if (tone.photon_order == 1) {
            const std::complex<double> coupling =
                0.5 * tone.amplitude * s.n_elements(a.from_index, a.to_index);
            h.elements(a.to_index, a.from_index) += std::conj(coupling);
            h.elements(a.from_index, a.to_index) += coupling;
        } else if (tone.photon_order == 2) {
            // Second-order effective coupling through off-resonant intermediaries
            // plus the drive's ac-Stark shifts on every retained level.
            const double w = tone.frequency;
            const int ia = a.from_index, ib = a.to_index;
            std::complex<double> coupling = 0.0;
            for (int m = 0; m < k; ++m) {
                if (m == ia || m == ib) continue;
                const double d1 = s.energies(m) - s.energies(ia) - w;
                const double d2 = s.energies(m) - s.energies(ib) + w;
                if (std::abs(d1) < 1e-6 || std::abs(d2) < 1e-6) continue;
                coupling += -(tone.amplitude * tone.amplitude / 8.0) *
                            s.n_elements(ia, m) * s.n_elements(m, ib) * (1.0 / d1 + 1.0 / d2);
            }
            h.elements(ib, ia) += std::conj(coupling);
            h.elements(ia, ib) += coupling;
            for (int l = 0; l < k; ++l) {
                double shift = 0.0;
                for (int m = 0; m < k; ++m) {
                    if (m == l) continue;
                    const double dmw = s.energies(l) - s.energies(m);
                    if (std::abs(dmw + w) < 1e-6 || std::abs(dmw - w) < 1e-6) continue;
                    shift += (tone.amplitude * tone.amplitude / 4.0) *
                             std::norm(s.n_elements(l, m)) *
                             (1.0 / (dmw + w) + 1.0 / (dmw - w));
                }
                h.elements(l, l) += shift;
            }
        } else {
            throw ParameterError("effective_hamiltonian: photon orders above 2 not supported");
        }
    }
    return h;
}

Eigen::MatrixXcd liouvillian(const HamiltonianMatrix& h_eff,
                             const std::vector<CollapseOp>& collapse) {
    const int d = h_eff.dim();
    const Eigen::MatrixXcd h = h_eff.elements * kAngularPerGhz;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    const std::complex<double> i_unit(0.0, 1.0);
    Eigen::MatrixXcd l = -i_unit * (kronecker(id, h) - kronecker(h.transpose(), id));
    for (const auto& c : collapse) {
        Eigen::MatrixXcd jump = Eigen::MatrixXcd::Zero(d, d);
        jump(c.to_index, c.from_index) = 1.0;
        const Eigen::MatrixXcd jdj = jump.adjoint() * jump;
        l += c.rate * (kronecker(jump.conjugate(), jump) - 0.5 * kronecker(id, jdj) -
                       0.5 * kronecker(jdj.transpose(), id));
    }
    return l;
}

namespace {

Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& h_ang,
                              const std::vector<CollapseOp>& collapse,
                              const Eigen::MatrixXcd& rho) {
    const std::complex<double> i_unit(0.0, 1.0);
    Eigen::MatrixXcd drho = -i_unit * (h_ang * rho - rho * h_ang);
    for (const auto& c : collapse) {
        const auto row = rho.row(c.from_index);
        const std::complex<double> pop = rho(c.from_index, c.from_index);
        Eigen::MatrixXcd diss = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
        diss(c.to_index, c.to_index) = pop;
        diss.row(c.from_index) -= 0.5 * row;
        diss.col(c.from_index) -= 0.5 * rho.col(c.from_index);
        drho += c.rate * diss;
    }
    return drho;
}

void check_step(const Eigen::MatrixXcd& h_ghz, const std::vector<CollapseOp>& collapse,
                double dt_s) {
    double h_max = h_ghz.cwiseAbs().maxCoeff() * kAngularPerGhz;
    for (const auto& c : collapse) h_max = std::max(h_max, c.rate);
    if (dt_s * h_max >= 0.1)
        throw ParameterError("evolve: dt too coarse for the dynamics; use dt < " +
                             std::to_string(0.1 / h_max) + " s");
}

} // namespace

Trajectory evolve(const DensityState& rho0, const HamiltonianMatrix& h_eff,
                  const std::vector<CollapseOp>& collapse, double duration_s, double dt_s,
                  int n_samples) {
    if (!(duration_s >= 0.0) || !(dt_s > 0.0))
        throw ParameterError("evolve: duration and dt must be positive");
    check_step(h_eff.elements, collapse, dt_s);

    const Eigen::MatrixXcd h_ang = h_eff.elements * kAngularPerGhz;
    const long n_steps = std::max(1L, std::lround(duration_s / dt_s));
    const double dt = duration_s / n_steps;
    const long stride = std::max(1L, n_steps / std::max(1, n_samples - 1));

    Trajectory traj;
    traj.min_eigenvalue = 0.0;
    Eigen::MatrixXcd rho = rho0.rho;
    auto sample = [&](double t) {
        DensityState d;
        d.rho = rho;
        traj.times.push_back(t);
        traj.states.push_back(std::move(d));
        traj.max_trace_drift =
            std::max(traj.max_trace_drift, std::abs(rho.trace().real() - 1.0));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
        traj.min_eigenvalue = std::min(traj.min_eigenvalue, es.eigenvalues().minCoeff());
    };
    sample(0.0);
    for (long step = 0; step < n_steps; ++step) {
        const Eigen::MatrixXcd k1 = lindblad_rhs(h_ang, collapse, rho);
        const Eigen::MatrixXcd k2 = lindblad_rhs(h_ang, collapse, rho + 0.5 * dt * k1);
        const Eigen::MatrixXcd k3 = lindblad_rhs(h_ang, collapse, rho + 0.5 * dt * k2);
        const Eigen::MatrixXcd k4 = lindblad_rhs(h_ang, collapse, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = 0.5 * (rho + rho.adjoint().eval()); // keep Hermitian against roundoff
        if ((step + 1) % stride == 0 || step + 1 == n_steps) sample((step + 1) * dt);
    }
    return traj;
}

SteadyStateResult steady_state(const HamiltonianMatrix& h_eff,
                               const std::vector<CollapseOp>& collapse) {
    const int d = h_eff.dim();
    const Eigen::MatrixXcd l = liouvillian(h_eff, collapse);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(l, Eigen::ComputeThinV);
    const auto& sing = svd.singularValues();
    const int n = static_cast<int>(sing.size());
    const double scale = sing(0);

    SteadyStateResult out;
    Eigen::VectorXcd v = svd.matrixV().col(n - 1);
    Eigen::MatrixXcd rho = Eigen::Map<Eigen::MatrixXcd>(v.data(), d, d);
    rho = 0.5 * (rho + rho.adjoint().eval());
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-12 * rho.norm())
        throw NumericalError("steady_state: traceless null vector; generator may be defective");
    rho /= tr;
    out.rho.rho = rho;
    out.null_gap = (n >= 2) ? sing(n - 2) / std::max(scale, 1e-300) : 0.0;
    // A second near-null direction signals a non-unique steady state.
    out.unique = out.null_gap > 1e-10;
    return out;
}

PopulationMap drive_map(const LabeledSpectrum& s, const DrivePlan& base_plan,
                        std::pair<int, Eigen::VectorXd> sweep1,
                        std::pair<int, Eigen::VectorXd> sweep2,
                        const std::vector<CollapseOp>& collapse, const DriveMapOptions& opts) {
    if (sweep1.first == sweep2.first)
        throw ParameterError("drive_map: the two swept tones must be distinct");
    const auto assignments = resolve_assignments(s, base_plan);

    std::vector<int> target_indices;
    for (const auto& t : opts.targets) {
        const int idx = s.index_of(t);
        if (idx < 0) throw ParameterError("drive_map: target label not in spectrum");
        target_indices.push_back(idx);
    }
    if (target_indices.empty()) throw ParameterError("drive_map: no target states");

    PopulationMap map;
    map.axis1 = sweep1.second;
    map.axis2 = sweep2.second;
    const int n1 = static_cast<int>(map.axis1.size());
    const int n2 = static_cast<int>(map.axis2.size());
    map.values.resize(n1, n2);
    map.flagged.setConstant(n1, n2, false);

    parallel_for(static_cast<std::size_t>(n1) * n2, opts.threads, [&](std::size_t cell) {
        const int i = static_cast<int>(cell) / n2;
        const int j = static_cast<int>(cell) % n2;
        DrivePlan plan = base_plan;
        plan.tones[sweep1.first].frequency = map.axis1(i);
        plan.tones[sweep2.first].frequency = map.axis2(j);
        const HamiltonianMatrix h = effective_hamiltonian(s, plan, assignments);
        const SteadyStateResult ss = steady_state(h, collapse);
        double pop = 0.0;
        for (int t : target_indices) pop += ss.rho.rho(t, t).real();
        map.values(i, j) = std::clamp(pop, 0.0, 1.0);
        map.flagged(i, j) = !ss.unique;
    });
    return map;
}

namespace {

double fit_exponential_decay(const std::vector<double>& t, const std::vector<double>& y,
                             bool& ok, std::string& diagnostic) {
    // Model a e^{-t/T} + c.
    const int n = static_cast<int>(t.size());
    const double c0 = y.back();
    const double a0 = y.front() - c0;
    const double span = *std::max_element(y.begin(), y.end()) -
                        *std::min_element(y.begin(), y.end());
    if (a0 <= 0.0 || span < 1e-4 * std::max(std::abs(y.front()), 1e-12)) {
        ok = false;
        diagnostic = "flat or rising trace: no decay to fit";
        return 0.0;
    }
    double t0 = (t.back() - t.front()) / 3.0;
    for (int i = 0; i < n; ++i) {
        if ((y[i] - c0) / a0 < std::exp(-1.0)) {
            t0 = std::max(t[i], 1e-12);
            break;
        }
    }
    auto objective = [&](const Eigen::VectorXd& x) {
        const double a = x(0), tau = std::exp(x(1)), c = x(2);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = y[i] - (a * std::exp(-t[i] / tau) + c);
            sum += r * r;
        }
        return sum;
    };
    Eigen::VectorXd x0(3);
    x0 << a0, std::log(t0), c0;
    Eigen::VectorXd step(3);
    step << 0.1 * std::abs(a0), 0.3, 0.05 * std::max(std::abs(c0), 1e-3);
    SimplexOptions opts;
    opts.max_iterations = 2000;
    opts.f_tolerance = 1e-16;
    opts.x_tolerance = 1e-10;
    opts.restarts = 3;
    const SimplexResult res = nelder_mead_restarts(objective, x0, step, opts);
    ok = res.converged || res.fval < 1e-10;
    if (!ok) diagnostic = "exponential fit did not converge";
    return std::exp(res.x(1));
}

} // namespace

PulseT1Result pulse_sequence_t1(const LabeledSpectrum& s, const std::vector<PulseSpec>& pulses,
                                const std::vector<CollapseOp>& collapse,
                                const std::vector<double>& wait_grid,
                                const PulseProtocolOptions& opts) {
    if (wait_grid.empty()) throw ParameterError("pulse_sequence_t1: empty wait grid");
    const int k = s.size();
    const int readout_idx = s.index_of(opts.readout_state);
    if (readout_idx < 0)
        throw ParameterError("pulse_sequence_t1: readout state not in spectrum");

    // Pulse rotations act pairwise in the frame of each carrier; collapse runs
    // throughout.
    DensityState rho = DensityState::pure(k, 0);
    for (const auto& pulse : pulses) {
        pulse.validate();
        int ia = -1, ib = -1;
        if (pulse.target) {
            ia = s.index_of(pulse.target->first);
            ib = s.index_of(pulse.target->second);
        } else {
            double best = std::numeric_limits<double>::max();
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j) {
                    const double miss =
                        std::abs(std::abs(s.energies(j) - s.energies(i)) - pulse.carrier);
                    if (miss < best) {
                        best = miss;
                        ia = i;
                        ib = j;
                    }
                }
        }
        if (ia < 0 || ib < 0)
            throw ParameterError("pulse_sequence_t1: pulse target not in spectrum");

        const double span = 2.0 * pulse.truncation * pulse.sigma;
        const double norm = pulse.sigma * std::sqrt(2.0 * M_PI) *
                            std::erf(pulse.truncation / std::sqrt(2.0));
        const double peak_angular = pulse.area / norm; // rad/s at the peak
        const double t_center = 0.5 * span;

        const long n_steps = std::max(8L, std::lround(span / opts.dt));
        const double dt = span / n_steps;
        auto h_at = [&](double time) {
            Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(k, k);
            const double arg = (time - t_center) / pulse.sigma;
            const double omega = peak_angular * std::exp(-0.5 * arg * arg);
            h(ia, ib) = 0.5 * omega;
            h(ib, ia) = 0.5 * omega;
            return h; // already angular (rad/s)
        };
        for (long step = 0; step < n_steps; ++step) {
            const double t = step * dt;
            const Eigen::MatrixXcd k1 = lindblad_rhs(h_at(t), collapse, rho.rho);
            const Eigen::MatrixXcd k2 =
                lindblad_rhs(h_at(t + 0.5 * dt), collapse, rho.rho + 0.5 * dt * k1);
            const Eigen::MatrixXcd k3 =
                lindblad_rhs(h_at(t + 0.5 * dt), collapse, rho.rho + 0.5 * dt * k2);
            const Eigen::MatrixXcd k4 = lindblad_rhs(h_at(t + dt), collapse, rho.rho + dt * k3);
            rho.rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            rho.rho = 0.5 * (rho.rho + rho.rho.adjoint().eval());
        }
    }

    // Free relaxation: populations decouple from coherences, so the wait scan
    // only needs the classical rate equations, solved by matrix exponential.
    Eigen::VectorXd pops(k);
    for (int i = 0; i < k; ++i) pops(i) = rho.rho(i, i).real();
    Eigen::MatrixXd rates = Eigen::MatrixXd::Zero(k, k);
    for (const auto& c : collapse) {
        rates(c.to_index, c.from_index) += c.rate;
        rates(c.from_index, c.from_index) -= c.rate;
    }

    PulseT1Result out;
    out.wait_times = wait_grid;
    for (double t : wait_grid) {
        const Eigen::VectorXd p = (rates * t).exp() * pops;
        out.population.push_back(std::max(0.0, p(readout_idx)));
        // dispersive readout proxy: populations weighted by level energy
        double proxy = 0.0;
        for (int i = 0; i < k; ++i) proxy += p(i) * s.energies(i);
        out.readout.push_back(proxy);
    }

    out.fitted_t1 = fit_exponential_decay(out.wait_times, out.population, out.fit_ok,
                                          out.diagnostic);
    return out;
}

Trajectory evolve_lab(const DensityState& rho0, const LabeledSpectrum& s,
                      const std::vector<DriveTone>& tones,
                      const std::vector<CollapseOp>& collapse, double duration_s, double dt_s,
                      int n_samples) {
    const int k = s.size();
    Eigen::MatrixXcd h0 = Eigen::MatrixXcd::Zero(k, k);
    for (int i = 0; i < k; ++i) h0(i, i) = s.energies(i) * kAngularPerGhz;

    const long n_steps = std::max(1L, std::lround(duration_s / dt_s));
    const double dt = duration_s / n_steps;
    const long stride = std::max(1L, n_steps / std::max(1, n_samples - 1));

    auto h_at = [&](double t) {
        Eigen::MatrixXcd h = h0;
        for (const auto& tone : tones) {
            const double envelope =
                tone.amplitude * kAngularPerGhz * std::cos(tone.frequency * kAngularPerGhz * t);
            h += envelope * s.n_elements;
        }
        return h;
    };

    Trajectory traj;
    Eigen::MatrixXcd rho = rho0.rho;
    auto sample = [&](double t) {
        DensityState d;
        d.rho = rho;
        traj.times.push_back(t);
        traj.states.push_back(std::move(d));
        traj.max_trace_drift =
            std::max(traj.max_trace_drift, std::abs(rho.trace().real() - 1.0));
    };
    sample(0.0);
    for (long step = 0; step < n_steps; ++step) {
        const double t = step * dt;
        const Eigen::MatrixXcd k1 = lindblad_rhs(h_at(t), collapse, rho);
        const Eigen::MatrixXcd k2 = lindblad_rhs(h_at(t + 0.5 * dt), collapse, rho + 0.5 * dt * k1);
        const Eigen::MatrixXcd k3 = lindblad_rhs(h_at(t + 0.5 * dt), collapse, rho + 0.5 * dt * k2);
        const Eigen::MatrixXcd k4 = lindblad_rhs(h_at(t + dt), collapse, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = 0.5 * (rho + rho.adjoint().eval());
        if ((step + 1) % stride == 0 || step + 1 == n_steps) sample((step + 1) * dt);
    }
    return traj;
}

} // namespace fluxline
