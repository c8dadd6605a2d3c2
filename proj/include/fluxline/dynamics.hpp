#pragma once

// Driven-dissipative multilevel dynamics: multi-rotating-frame effective
// Hamiltonians, Lindblad propagation, steady-state maps and pulsed T1.

#include <optional>
#include <utility>
#include <vector>

#include "fluxline/loss.hpp"
#include "fluxline/spectra.hpp"

namespace fluxline {

struct DriveTone {
    double frequency = 0.0; // GHz
    double amplitude = 0.0; // GHz, charge-coupled Rabi scale
    int photon_order = 1;
    std::optional<std::pair<StateLabel, StateLabel>> target;
    double detuning_report = 0.0; // E_b - E_a - p w, filled by the frame builder

    void validate() const {
        if (!(frequency > 0.0)) throw ParameterError("DriveTone: frequency must be positive");
        if (amplitude < 0.0) throw ParameterError("DriveTone: amplitude must be >= 0");
        if (photon_order < 1) throw ParameterError("DriveTone: photon_order must be >= 1");
    }
};

enum class FrameKind { multi_rotating, lab };

struct DrivePlan {
    std::vector<DriveTone> tones;
    int level_count = 8;
    FrameKind frame = FrameKind::multi_rotating;
};

struct DensityState {
    Eigen::MatrixXcd rho;

    double trace_error() const { return std::abs(rho.trace().real() - 1.0) +
                                        std::abs(rho.trace().imag()); }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
        return es.eigenvalues().minCoeff();
    }
    void validate() const {
        if (trace_error() > 1e-9) throw NumericalError("DensityState: trace deviates from 1");
        if (min_eigenvalue() < -1e-10) throw NumericalError("DensityState: negative population");
    }
    static DensityState pure(int dim, int level) {
        DensityState d;
        d.rho = Eigen::MatrixXcd::Zero(dim, dim);
        d.rho(level, level) = 1.0;
        return d;
    }
};

struct CollapseOp {
    int from_index = 0;
    int to_index = 0;
    double rate = 0.0; // 1/s
};

// One relaxation channel per downward level pair, rates from the combined
// inductive + capacitive model with that pair's phase matrix element.
std::vector<CollapseOp> collapse_from_loss(const LabeledSpectrum& s, const LossModel& m,
                                           bool thermal_excitation = false);

// Tone-to-transition assignment pinned independently of later frequency
// changes (drive maps move tones around a fixed assignment).
struct ToneAssignment {
    int from_index = 0;
    int to_index = 0;
    int photon_order = 1;
};

std::vector<ToneAssignment> resolve_assignments(const LabeledSpectrum& s, const DrivePlan& plan);

// Time-independent rotating-frame Hamiltonian. Single-photon tones couple at
// half their amplitude times the charge matrix element; multi-photon tones
// enter as second-order effective couplings with ac-Stark corrections.
HamiltonianMatrix effective_hamiltonian(const LabeledSpectrum& s, const DrivePlan& plan);
HamiltonianMatrix effective_hamiltonian(const LabeledSpectrum& s, const DrivePlan& plan,
                                        const std::vector<ToneAssignment>& assignments);

// vec(rho) generator: -2 pi 1e9 i [H, .] + dissipators; H in GHz, rates in 1/s.
Eigen::MatrixXcd liouvillian(const HamiltonianMatrix& h_eff,
                             const std::vector<CollapseOp>& collapse);

struct Trajectory {
    std::vector<double> times; // s
    std::vector<DensityState> states;
    double max_trace_drift = 0.0;
    double min_eigenvalue = 0.0;
};

// Fixed-step RK4 Lindblad propagation. dt must resolve both the Hamiltonian
// scale (dt * 2 pi 1e9 * max|H| < 0.1) and the fastest collapse rate.
Trajectory evolve(const DensityState& rho0, const HamiltonianMatrix& h_eff,
                  const std::vector<CollapseOp>& collapse, double duration_s, double dt_s,
                  int n_samples = 101);

struct SteadyStateResult {
    DensityState rho;
    bool unique = true;
    double null_gap = 0.0; // second-smallest singular value over the scale
};

SteadyStateResult steady_state(const HamiltonianMatrix& h_eff,
                               const std::vector<CollapseOp>& collapse);

struct PopulationMap {
    Eigen::VectorXd axis1; // GHz, swept frequency of tones[sweep.first]
    Eigen::VectorXd axis2; // GHz
    Eigen::MatrixXd values; // axis1 rows x axis2 cols, population in [0,1]
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> flagged; // non-unique steady state
};

struct DriveMapOptions {
    int threads = 1;
    std::vector<StateLabel> targets; // populations are summed over these
};

// Steady-state population over a two-axis tone-frequency sweep.
PopulationMap drive_map(const LabeledSpectrum& s, const DrivePlan& base_plan,
                        std::pair<int, Eigen::VectorXd> sweep1,
                        std::pair<int, Eigen::VectorXd> sweep2,
                        const std::vector<CollapseOp>& collapse,
                        const DriveMapOptions& opts);

struct PulseSpec {
    double sigma = 15e-9;      // s
    double carrier = 0.0;      // GHz
    double area = M_PI;        // radians
    double truncation = 4.0;   // +/- sigmas
    std::optional<std::pair<StateLabel, StateLabel>> target;

    void validate() const {
        if (!(sigma > 0.0)) throw ParameterError("PulseSpec: sigma must be positive");
    }
};

struct PulseT1Result {
    std::vector<double> wait_times; // s
    std::vector<double> population; // target-state population per wait time
    std::vector<double> readout;    // population-weighted dispersive proxy, a.u.
    double fitted_t1 = 0.0;         // s
    bool fit_ok = false;
    std::string diagnostic;
};

struct PulseProtocolOptions {
    StateLabel readout_state{-1, 0, false}; // g_-1
    double dt = 5e-10;                      // s, pulse integration step
};

// Sequential pi pulses prepare the upper-well chain; the target population is
// then tracked against the wait time and fitted with a single exponential.
PulseT1Result pulse_sequence_t1(const LabeledSpectrum& s, const std::vector<PulseSpec>& pulses,
                                const std::vector<CollapseOp>& collapse,
                                const std::vector<double>& wait_grid,
                                const PulseProtocolOptions& opts = {});

// Lab-frame integration with explicit cosine drives; used to validate the
// rotating-frame reduction on short horizons.
Trajectory evolve_lab(const DensityState& rho0, const LabeledSpectrum& s,
                      const std::vector<DriveTone>& tones,
                      const std::vector<CollapseOp>& collapse, double duration_s, double dt_s,
                      int n_samples = 101);

} // namespace fluxline
