#include "fluxline/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fluxline/parallel.hpp"

namespace fluxline {

std::string StateLabel::str() const {
    static const char* names = "gefh";
    std::string out;
    if (rank < 4) out = std::string(1, names[rank]);
    else out = std::string(1, static_cast<char>('h' + rank - 3));
    out += std::to_string(well_index);
    if (delocalized) out += "*";
    return out;
}

StateLabel parse_label(const std::string& text) {
    if (text.empty()) throw ParameterError("parse_label: empty label");
    StateLabel l;
    const char c = text[0];
    switch (c) {
        case 'g': l.rank = 0; break;
        case 'e': l.rank = 1; break;
        case 'f': l.rank = 2; break;
        case 'h': l.rank = 3; break;
        default:
            if (c >= 'i' && c <= 'z') l.rank = c - 'h' + 3;
            else throw ParameterError("parse_label: bad rank letter in '" + text + "'");
    }
    std::string rest = text.substr(1);
    if (!rest.empty() && rest.back() == '*') rest.pop_back();
    l.well_index = rest.empty() ? 0 : std::stoi(rest);
    return l;
}

namespace {

double potential_slope(const SingleModeParams& p, double phi_ext, double phi) {
    return p.e_l * phi + p.e_j * std::sin(phi + phi_ext);
}

double potential_curvature(const SingleModeParams& p, double phi_ext, double phi) {
    return p.e_l + p.e_j * std::cos(phi + phi_ext);
}

// Safeguarded Newton on V'(phi) within a bracketing interval.
double refine_root(const SingleModeParams& p, double phi_ext, double lo, double hi) {
    double flo = potential_slope(p, phi_ext, lo);
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 80; ++it) {
        const double f = potential_slope(p, phi_ext, x);
        if (f == 0.0) break;
        if ((f < 0.0) == (flo < 0.0)) lo = x;
        else hi = x;
        const double d = potential_curvature(p, phi_ext, x);
        double step = (d != 0.0) ? -f / d : 0.0;
        double next = x + step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) < 1e-13 * std::max(1.0, std::abs(x))) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

} // namespace

PotentialWells find_wells(const SingleModeParams& p, double phi_ext) {
    p.validate();
    PotentialWells w;
    const double reach = p.e_j / p.e_l + 2.0 * M_PI;
    const double step = 2.0 * M_PI / 64.0;
    std::vector<double> extrema; // alternating minima/maxima
    std::vector<bool> is_min;
    double prev_phi = -reach;
    double prev_f = potential_slope(p, phi_ext, prev_phi);
    for (double phi = -reach + step; phi <= reach + 0.5 * step; phi += step) {
        const double f = potential_slope(p, phi_ext, phi);
        if ((prev_f < 0.0 && f >= 0.0) || (prev_f > 0.0 && f <= 0.0)) {
            const double root = refine_root(p, phi_ext, prev_phi, phi);
            extrema.push_back(root);
            is_min.push_back(prev_f < 0.0);
        }
        prev_phi = phi;
        prev_f = f;
    }
    for (std::size_t i = 0; i < extrema.size(); ++i) {
        if (is_min[i]) w.minima.push_back(extrema[i]);
        else if (!w.minima.empty() && i + 1 < extrema.size()) w.barriers.push_back(extrema[i]);
    }
    if (w.minima.empty()) w.minima.push_back(0.0); // quadratic-dominated fallback
    for (double m : w.minima)
        w.indices.push_back(static_cast<int>(std::lround((m + phi_ext) / (2.0 * M_PI))));
    return w;
}

int PotentialWells::basin_of(double phi) const {
    int idx = 0;
    for (std::size_t b = 0; b < barriers.size(); ++b)
        if (phi > barriers[b]) idx = static_cast<int>(b) + 1;
    return idx;
}

Eigen::MatrixXd hermite_basis_matrix(const Eigen::VectorXd& grid, int dim, double phi_zpf) {
    const double s = phi_zpf * std::sqrt(2.0);
    const int g = static_cast<int>(grid.size());
    Eigen::MatrixXd h(g, dim);
    const double norm0 = std::pow(M_PI, -0.25) / std::sqrt(s);
    for (int i = 0; i < g; ++i) {
        const double xi = grid(i) / s;
        double hm1 = 0.0;
        double h0 = norm0 * std::exp(-0.5 * xi * xi);
        h(i, 0) = h0;
        for (int n = 1; n < dim; ++n) {
            const double hn = xi * std::sqrt(2.0 / n) * h0 - std::sqrt((n - 1.0) / n) * hm1;
            hm1 = h0;
            h0 = hn;
            h(i, n) = hn;
        }
    }
    return h;
}

int LabeledSpectrum::index_of(const StateLabel& l) const {
    for (int i = 0; i < size(); ++i)
        if (labels[i] == l) return i;
    return -1;
}

namespace {

// Shared labeling: given per-state masses over well basins, assign labels.
std::vector<StateLabel> assign_labels(const Eigen::MatrixXd& mass, // states x wells
                                      const PotentialWells& wells, double delocalized_threshold) {
    const int k = static_cast<int>(mass.rows());
    std::vector<StateLabel> labels(k);
    std::map<int, int> rank_counter;
    for (int i = 0; i < k; ++i) {
        int best = 0;
        mass.row(i).maxCoeff(&best);
        StateLabel l;
        l.well_index = wells.indices[best];
        l.delocalized = mass(i, best) < delocalized_threshold;
        l.rank = rank_counter[l.well_index]++;
        labels[i] = l;
    }
    return labels;
}

} // namespace

LabeledSpectrum label_states(const EigenSolution& sol, const SingleModeParams& p, FluxBias flux,
                             const LabelOptions& opts) {
    flux.validate();
    const int k = static_cast<int>(sol.energies.size());
    const int dim = static_cast<int>(sol.vectors.rows());
    const double zpf = phase_zpf(p.e_c, p.e_l);

    LabeledSpectrum s;
    s.phi_ext = flux.phi_ext;
    s.energies = sol.energies;

    const double reach =
        std::max(zpf * (2.0 * std::sqrt(static_cast<double>(dim)) + 6.0), p.e_j / p.e_l + 2.0 * M_PI);
    s.phi_grid = Eigen::VectorXd::LinSpaced(opts.grid_points, -reach, reach);
    const Eigen::MatrixXd basis = hermite_basis_matrix(s.phi_grid, dim, zpf);
    s.wavefunctions = basis.cast<std::complex<double>>() * sol.vectors;

    const PotentialWells wells = find_wells(p, flux.phi_ext);
    const int n_wells = static_cast<int>(wells.minima.size());

    // Integrated probability mass per basin (uniform grid, normalized row-wise).
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(k, n_wells);
    for (int i = 0; i < k; ++i) {
        for (int gidx = 0; gidx < opts.grid_points; ++gidx) {
            const double w = std::norm(s.wavefunctions(gidx, i));
            mass(i, wells.basin_of(s.phi_grid(gidx))) += w;
        }
        const double total = mass.row(i).sum();
        if (total > 0.0) mass.row(i) /= total;
    }
    s.labels = assign_labels(mass, wells, opts.delocalized_threshold);

    const OscillatorOps ops = oscillator_operators(dim, p.e_c, p.e_l);
    s.n_elements = sol.vectors.adjoint() * ops.charge * sol.vectors;
    s.phi_elements =
        sol.vectors.adjoint() * ops.phase.cast<std::complex<double>>() * sol.vectors;
    s.circuit_e_c = p.e_c;
    s.circuit_e_l = p.e_l;
    return s;
}

std::string to_string(TransitionKind k) {
    switch (k) {
        case TransitionKind::plasmon: return "plasmon";
        case TransitionKind::fluxon: return "fluxon";
        case TransitionKind::sideband: return "sideband";
        case TransitionKind::jj_mode: return "jj_mode";
    }
    return "?";
}

std::vector<TransitionRecord> transition_catalog(const LabeledSpectrum& s, int max_photon,
                                                 const CatalogOptions& opts) {
    if (max_photon < 1) throw ParameterError("transition_catalog: max_photon must be >= 1");
    const int k = s.size();
    std::vector<TransitionRecord> out;
    if (k == 0) return out;

    // Initial states: the ground state plus anything within 3 k_B T of it.
    const double window_ghz =
        3.0 * constants::k_boltzmann * opts.temperature_k / constants::h_planck * 1e-9;
    std::vector<int> initials;
    for (int i = 0; i < k; ++i)
        if (i == 0 || s.energies(i) - s.energies(0) <= window_ghz) initials.push_back(i);

    // Dipole adjacency and its boolean powers for multi-photon reachability.
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> adj(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            adj(i, j) = std::abs(s.n_elements(i, j)) > opts.dipole_threshold;
    std::vector<Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>> reach(max_photon + 1);
    reach[1] = adj;
    for (int p = 2; p <= max_photon; ++p) {
        reach[p].resize(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                bool r = false;
                for (int m = 0; m < k && !r; ++m) r = reach[p - 1](i, m) && adj(m, j);
                reach[p](i, j) = r;
            }
    }

    const bool has_mode1 = s.mode1_occupation.size() == k;
    for (int i : initials) {
        for (int j = 0; j < k; ++j) {
            const double de = s.energies(j) - s.energies(i);
            if (de <= 1e-12) continue;
            for (int p = 1; p <= max_photon; ++p) {
                if (!reach[p](i, j)) continue;
                TransitionRecord t;
                t.from = s.labels[i];
                t.to = s.labels[j];
                t.frequency = de / p;
                t.photon_order = p;
                t.dipole_n = std::abs(s.n_elements(i, j));
                t.dipole_phi = std::abs(s.phi_elements(i, j));
                if (has_mode1 &&
                    s.mode1_occupation(j) - s.mode1_occupation(i) > 0.5)
                    t.kind = TransitionKind::jj_mode;
                else if (t.from.well_index != t.to.well_index)
                    t.kind = TransitionKind::fluxon;
                else
                    t.kind = TransitionKind::plasmon;
                out.push_back(t);
            }
        }
    }
    return out;
}

SweepResult flux_sweep(const SingleModeParams& p, const std::vector<double>& flux_grid,
                       const SweepOptions& opts) {
    if (flux_grid.empty()) throw ParameterError("flux_sweep: empty flux grid");
    const SingleModeBasis basis = make_single_mode_basis(p, opts.dim);
    SweepResult result;
    result.points.resize(flux_grid.size());
    CatalogOptions cat = opts.catalog;
    parallel_for(flux_grid.size(), opts.threads, [&](std::size_t idx) {
        SweepPoint& pt = result.points[idx];
        pt.phi_ext = flux_grid[idx];
        try {
            const EigenSolution sol = diagonalize(basis.at_flux(pt.phi_ext), opts.levels);
            const LabeledSpectrum s = label_states(sol, p, FluxBias{pt.phi_ext}, opts.label);
            pt.transitions = transition_catalog(s, opts.max_photon, cat);
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.diagnostic = e.what();
        }
    });
    return result;
}

namespace {

struct ThetaQuadrature {
    Eigen::MatrixXd basis; // eigenvectors of theta_sum, columns are nodes
    Eigen::VectorXd nodes; // summed-phase node positions

    explicit ThetaQuadrature(const TwoModeBasis& b) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.theta_sum);
        basis = es.eigenvectors();
        nodes = es.eigenvalues();
    }
};

SingleModeParams junction_phase_effective(const TwoModeBasis& basis) {
    // Static stiffness over the summed phase: the mode inductances in series.
    SingleModeParams eff;
    eff.e_c = 1.0; // irrelevant for well geometry
    eff.e_l = (basis.e_l[0] * basis.e_l[1]) / (basis.e_l[0] + basis.e_l[1]);
    eff.e_j = basis.params.e_j;
    return eff;
}

LabeledSpectrum label_two_mode_impl(const EigenSolution& sol, const TwoModeBasis& basis,
                                    double phi_ext, const LabelOptions& opts,
                                    const ThetaQuadrature& quad) {
    const int k = static_cast<int>(sol.energies.size());
    LabeledSpectrum s;
    s.phi_ext = phi_ext;
    s.energies = sol.energies;
    s.n_elements = sol.vectors.adjoint() * basis.charge_sum * sol.vectors;
    s.phi_elements =
        sol.vectors.adjoint() * basis.theta_sum.cast<std::complex<double>>() * sol.vectors;
    s.mode1_occupation.resize(k);
    const Eigen::MatrixXcd n1c = basis.mode1_number.cast<std::complex<double>>();
    for (int i = 0; i < k; ++i)
        s.mode1_occupation(i) = (sol.vectors.col(i).adjoint() * n1c * sol.vectors.col(i))(0).real();

    const PotentialWells wells = find_wells(junction_phase_effective(basis), phi_ext);
    const Eigen::MatrixXcd q =
        quad.basis.transpose().cast<std::complex<double>>() * sol.vectors; // nodes x states
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(k, static_cast<int>(wells.minima.size()));
    for (int i = 0; i < k; ++i) {
        for (int node = 0; node < q.rows(); ++node)
            mass(i, wells.basin_of(quad.nodes(node))) += std::norm(q(node, i));
        const double total = mass.row(i).sum();
        if (total > 0.0) mass.row(i) /= total;
    }
    s.labels = assign_labels(mass, wells, opts.delocalized_threshold);
    // Circuit energies seen by the junction coordinate: inductances in
    // series, capacitances in parallel.
    s.circuit_e_l = (basis.e_l[0] * basis.e_l[1]) / (basis.e_l[0] + basis.e_l[1]);
    s.circuit_e_c = 1.0 / (1.0 / basis.e_c[0] + 1.0 / basis.e_c[1]);
    return s;
}

} // namespace

LabeledSpectrum label_two_mode_states(const EigenSolution& sol, const TwoModeBasis& basis,
                                      double phi_ext, const LabelOptions& opts) {
    return label_two_mode_impl(sol, basis, phi_ext, opts, ThetaQuadrature(basis));
}

SweepResult flux_sweep(const TwoModeParams& p, const std::vector<double>& flux_grid,
                       const SweepOptions& opts) {
    if (flux_grid.empty()) throw ParameterError("flux_sweep: empty flux grid");
    const TwoModeBasis basis = make_two_mode_basis(p, opts.dims);
    const ThetaQuadrature quad(basis); // flux independent, shared by all points

    SweepResult result;
    result.points.resize(flux_grid.size());
    parallel_for(flux_grid.size(), opts.threads, [&](std::size_t idx) {
        SweepPoint& pt = result.points[idx];
        pt.phi_ext = flux_grid[idx];
        try {
            const EigenSolution sol = diagonalize(basis.at_flux(pt.phi_ext), opts.levels);
            const LabeledSpectrum s =
                label_two_mode_impl(sol, basis, pt.phi_ext, opts.label, quad);
            pt.transitions = transition_catalog(s, opts.max_photon, opts.catalog);
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.diagnostic = e.what();
        }
    });
    return result;
}

std::vector<TransitionRecord> sideband_lines(const HamiltonianMatrix& h_coupled,
                                             const ResonatorParams& r, const LabeledSpectrum& s) {
    const int dim = h_coupled.dim();
    const int dq = s.size();
    if (dq == 0 || dim % dq != 0)
        throw ParameterError("sideband_lines: coupled dimension not a multiple of qubit levels");
    const int n_fock = dim / dq;

    const EigenSolution sol = diagonalize(h_coupled, dim);

    // Assign each dressed state to the bare |qubit i, photon m> with the
    // largest overlap (basis index i*n_fock + m).
    std::vector<int> bare_of(dim);
    for (int d = 0; d < dim; ++d) {
        int best = 0;
        sol.vectors.col(d).cwiseAbs().maxCoeff(&best);
        bare_of[d] = best;
    }

    int ground = -1;
    for (int d = 0; d < dim && ground < 0; ++d)
        if (bare_of[d] == 0) ground = d; // |qubit 0, 0 photons>
    if (ground < 0) throw NumericalError("sideband_lines: dressed ground state not identified");

    std::vector<TransitionRecord> out;
    for (int d = 0; d < dim; ++d) {
        if (d == ground) continue;
        const int qi = bare_of[d] / n_fock;
        const int m = bare_of[d] % n_fock;
        if (qi == 0 || m != 1) continue;
        const double de = sol.energies(d) - sol.energies(ground);
        if (de <= 0.0) continue;
        TransitionRecord t;
        t.from = s.labels[0];
        t.to = s.labels[qi];
        t.frequency = de;
        t.photon_order = 1;
        t.kind = TransitionKind::sideband;
        t.dipole_n = 0.0;
        t.dipole_phi = 0.0;
        out.push_back(t);
    }
    std::sort(out.begin(), out.end(), [](const TransitionRecord& a, const TransitionRecord& b) {
        return a.frequency < b.frequency;
    });
    return out;
}

} // namespace fluxline
