#include "fluxline/nanowire.hpp"

#include <algorithm>
#include <cmath>

namespace fluxline {

double kinetic_inductance(const NanowireGeometry& g) {
    g.validate();
    if (!g.n_s || !(*g.n_s > 0.0))
        throw ParameterError("kinetic_inductance: Cooper-pair density n_s is required");
    using namespace constants;
    return (m_electron / (2.0 * e_charge * e_charge * (*g.n_s))) *
           (g.length / (g.width * g.thickness));
}

double sheet_density_from_inductance(double l_k, const NanowireGeometry& g) {
    g.validate();
    if (!(l_k > 0.0)) throw ParameterError("sheet_density_from_inductance: l_k must be positive");
    using namespace constants;
    return (m_electron / (2.0 * e_charge * e_charge * l_k)) *
           (g.length / (g.width * g.thickness));
}

LadderNetwork build_ladder(const CircuitTopology& t, std::optional<double> junction_inductance) {
    t.validate();
    const int n_nodes = t.n_cells + 1;
    LadderNetwork net;
    net.cap = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
    net.ind_inv = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
    net.port_lo = 0;
    net.port_hi = n_nodes - 1;

    const double l_cell = t.l_nw / t.n_cells;
    const double c_cell = t.c_nw / t.n_cells;
    for (int i = 0; i < t.n_cells; ++i) {
        const double g = 1.0 / l_cell;
        net.ind_inv(i, i) += g;
        net.ind_inv(i + 1, i + 1) += g;
        net.ind_inv(i, i + 1) -= g;
        net.ind_inv(i + 1, i) -= g;
    }
    // Trapezoidal split of the distributed ground capacitance.
    for (int i = 0; i < n_nodes; ++i)
        net.cap(i, i) += (i == 0 || i == n_nodes - 1) ? 0.5 * c_cell : c_cell;
    // Port terminations: ground cap plus gate cap with its drive node AC-grounded.
    for (int p : {net.port_lo, net.port_hi}) net.cap(p, p) += t.c_0 + t.c_g;
    // Junction capacitance bridges the ports.
    net.cap(net.port_lo, net.port_lo) += t.c_j;
    net.cap(net.port_hi, net.port_hi) += t.c_j;
    net.cap(net.port_lo, net.port_hi) -= t.c_j;
    net.cap(net.port_hi, net.port_lo) -= t.c_j;

    if (junction_inductance) {
        if (!(*junction_inductance > 0.0))
            throw ParameterError("build_ladder: junction inductance must be positive");
        const double g = 1.0 / *junction_inductance;
        net.ind_inv(net.port_lo, net.port_lo) += g;
        net.ind_inv(net.port_hi, net.port_hi) += g;
        net.ind_inv(net.port_lo, net.port_hi) -= g;
        net.ind_inv(net.port_hi, net.port_lo) -= g;
        net.junction_included = true;
        net.l_junction = *junction_inductance;
    }
    return net;
}

std::vector<ModeRecord> normal_modes(const LadderNetwork& ladder) {
    const int n = static_cast<int>(ladder.cap.rows());
    {
        Eigen::LLT<Eigen::MatrixXd> llt(ladder.cap);
        if (llt.info() != Eigen::Success)
            throw NumericalError("normal_modes: capacitance matrix is not positive definite");
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ladder.ind_inv, ladder.cap);
    if (es.info() != Eigen::Success)
        throw NumericalError("normal_modes: generalized eigensolver failed");

    std::vector<ModeRecord> modes;
    modes.reserve(n);
    const double freq_floor_ghz = 1e-6;
    for (int k = 0; k < n; ++k) {
        const double lambda = es.eigenvalues()(k); // omega^2, rad^2/s^2
        if (lambda <= 0.0) continue;               // common mode
        const double omega = std::sqrt(lambda);
        const double f_ghz = omega / (2.0 * M_PI) * 1e-9;
        if (f_ghz < freq_floor_ghz) continue;

        Eigen::VectorXd u = es.eigenvectors().col(k);
        // Eigen returns u^T C u = 1 already; renormalize defensively.
        u /= std::sqrt(u.dot(ladder.cap * u));

        // Parity about the wire midpoint (ports are mirror images).
        double sym_res = 0.0, anti_res = 0.0;
        for (int i = 0; i < n; ++i) {
            sym_res += std::pow(u(i) - u(n - 1 - i), 2);
            anti_res += std::pow(u(i) + u(n - 1 - i), 2);
        }
        const bool antisymmetric = anti_res < sym_res;

        double d = u(ladder.port_hi) - u(ladder.port_lo);
        if (antisymmetric && d < 0.0) {
            u = -u;
            d = -d;
        } else if (!antisymmetric && u(ladder.port_lo) < 0.0) {
            u = -u;
        }

        ModeRecord rec;
        rec.frequency = f_ghz;
        rec.symmetry = antisymmetric ? ModeSymmetry::antisymmetric : ModeSymmetry::symmetric;
        // The recorded shape difference is dimensionless (unit-norm mode
        // function); effective parameters keep the energy normalization.
        rec.port_difference = (u(ladder.port_hi) - u(ladder.port_lo)) / u.norm();
        // Normalize to the port coordinate that survives the mode's parity:
        // the difference for antisymmetric modes, the sum for symmetric ones.
        const double amp = antisymmetric ? d : (u(ladder.port_hi) + u(ladder.port_lo));
        if (std::abs(amp) > 1e-12) {
            rec.c_eff = 1.0 / (amp * amp);
            rec.l_eff = (amp * amp) / lambda;
        }
        modes.push_back(rec);
    }
    std::sort(modes.begin(), modes.end(),
              [](const ModeRecord& a, const ModeRecord& b) { return a.frequency < b.frequency; });
    return modes;
}

TwoModeParams reduce_to_modes(const std::vector<ModeRecord>& modes, int count, double e_j_ghz) {
    if (count != 2 && count < 1)
        throw ParameterError("reduce_to_modes: count must be >= 1");
    if (!(e_j_ghz > 0.0)) throw ParameterError("reduce_to_modes: e_j must be positive");
    if (count != 2)
        throw ParameterError("reduce_to_modes: only count=2 is supported by TwoModeParams");

    std::vector<ModeRecord> anti;
    for (const auto& m : modes)
        if (m.symmetry == ModeSymmetry::antisymmetric) anti.push_back(m);
    if (static_cast<int>(anti.size()) < count)
        throw NumericalError("reduce_to_modes: fewer than requested antisymmetric modes");

    const double l_j = constants::josephson_inductance(e_j_ghz);
    std::array<double, 2> c{}, l{};
    for (int i = 0; i < 2; ++i) {
        c[i] = anti[i].c_eff;
        // The ladder modes include the junction's linear inductance; Eq.-5-style
        // effective inductances have it removed so the explicit bilinear term
        // and the cosine's quadratic part restore the mode frequencies.
        const double inv_l = 1.0 / anti[i].l_eff - 1.0 / l_j;
        if (!(inv_l > 0.0))
            throw NumericalError("reduce_to_modes: junction-removed inductance not positive; "
                                 "modes were not computed with the junction included");
        l[i] = 1.0 / inv_l;
    }
    return TwoModeParams::make(c, l, {0.0, 0.0}, e_j_ghz);
}

TwoModeParams two_mode_from_topology(const CircuitTopology& t, double e_j_ghz) {
    const double l_j = constants::josephson_inductance(e_j_ghz);
    const LadderNetwork ladder = build_ladder(t, l_j);
    return reduce_to_modes(normal_modes(ladder), 2, e_j_ghz);
}

} // namespace fluxline
