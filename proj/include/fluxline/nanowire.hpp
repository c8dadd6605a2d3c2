#pragma once

// Kinetic-inductance estimation and reduction of the distributed nanowire to
// effective antisymmetric-mode parameters through a discretized LC ladder.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fluxline/params.hpp"

namespace fluxline {

struct NanowireGeometry {
    double length = 0.0;    // meters, full wire length
    double width = 0.0;     // meters
    double thickness = 0.0; // meters
    std::optional<double> n_s; // Cooper-pair density, 1/m^3

    void validate() const {
        if (!(length > 0.0) || !(width > 0.0) || !(thickness > 0.0))
            throw ParameterError("NanowireGeometry: dimensions must be positive");
        if (length / width < 1.0)
            throw ParameterError("NanowireGeometry: length must be >= width");
    }
    double squares() const { return length / width; }
};

// L_k = (m / 2 e^2 n_s) (l / w d)
double kinetic_inductance(const NanowireGeometry& g);
double sheet_density_from_inductance(double l_k, const NanowireGeometry& g);

struct CircuitTopology {
    double l_nw = 0.0; // total nanowire inductance, H
    double c_nw = 0.0; // total ground capacitance, F
    double c_0 = 0.0;  // port ground capacitance, F
    double c_g = 0.0;  // gate capacitance, F
    double c_j = 4e-15; // junction capacitance, F
    int n_cells = 64;

    void validate() const {
        if (!(l_nw > 0.0) || !(c_nw > 0.0))
            throw ParameterError("CircuitTopology: l_nw and c_nw must be positive");
        if (c_0 < 0.0 || c_g < 0.0 || c_j < 0.0)
            throw ParameterError("CircuitTopology: capacitances must be >= 0");
        if (n_cells < 8 || n_cells % 2 != 0)
            throw ParameterError("CircuitTopology: n_cells must be even and >= 8");
    }
    double z_nw() const { return std::sqrt(l_nw / c_nw); }
};

struct NanowireParams {
    double z_nw = 0.0; // ohms
};

// Linearized circuit of the discretized wire: node fluxes at n_cells+1 nodes,
// ports at the ends, junction capacitance bridging the ports and optionally
// the junction's linear inductance.
struct LadderNetwork {
    Eigen::MatrixXd cap;     // F
    Eigen::MatrixXd ind_inv; // 1/H
    int port_lo = 0;
    int port_hi = 0;
    bool junction_included = false;
    double l_junction = 0.0;
};

LadderNetwork build_ladder(const CircuitTopology& t,
                           std::optional<double> junction_inductance = std::nullopt);

enum class ModeSymmetry { symmetric, antisymmetric };

struct ModeRecord {
    double frequency = 0.0;       // GHz
    ModeSymmetry symmetry = ModeSymmetry::symmetric;
    double port_difference = 0.0; // C-normalized mode amplitude difference across ports
    double c_eff = 0.0;           // F
    double l_eff = 0.0;           // H, satisfies 1/sqrt(l_eff c_eff) = 2 pi f
};

// Generalized eigenproblem of the linear network, classified by parity about
// the wire midpoint. The zero-frequency common mode is dropped.
std::vector<ModeRecord> normal_modes(const LadderNetwork& ladder);

// Select the lowest `count` antisymmetric modes of a junction-included ladder
// and emit effective parameters whose coordinates sum to the junction phase.
TwoModeParams reduce_to_modes(const std::vector<ModeRecord>& modes, int count, double e_j_ghz);

// build_ladder -> normal_modes -> reduce_to_modes with the junction
// inductance implied by e_j.
TwoModeParams two_mode_from_topology(const CircuitTopology& t, double e_j_ghz);

} // namespace fluxline
