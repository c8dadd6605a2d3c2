"""Nanowire-superinductance fluxonium modeling: Hamiltonians, spectra,
loss-channel T1 prediction and driven-dissipative dynamics.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._core import (  # noqa: F401
    CircuitTopology,
    EigenSolution,
    HamiltonianMatrix,
    LabeledSpectrum,
    LossModel,
    ModeRecord,
    NanowireGeometry,
    NumericalError,
    ParameterError,
    SingleModeParams,
    StateLabel,
    TransitionRecord,
    TwoModeParams,
    __version__,
    build_single_mode_hamiltonian,
    build_two_mode_hamiltonian,
    diagonalize,
    flux_sweep,
    gamma_capacitive,
    gamma_inductive,
    gamma_purcell,
    kinetic_inductance,
    label_states,
    normal_modes,
    parse_label,
    sheet_density_from_inductance,
    synthesize_spectroscopy,
    t1_curve,
    transition_catalog,
    two_mode_from_topology,
)
