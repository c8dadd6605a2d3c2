"""Smoke tests for the python bindings: import, a few anchored numbers, and
round trips through the main operations."""

import math

import pytest

import fluxline as fl

DEVICE1 = dict(e_c=0.89, e_l=1.37, e_j=10.95)


def test_version_and_import():
    assert fl.__version__


def test_harmonic_spacing():
    p = fl.SingleModeParams(e_c=0.89, e_l=1.37, e_j=1e-12)
    h = fl.build_single_mode_hamiltonian(p, phi_ext=0.4, dim=50)
    sol = fl.diagonalize(h, 8)
    spacing = math.sqrt(8 * 0.89 * 1.37)
    gaps = [sol.energies[i + 1] - sol.energies[i] for i in range(7)]
    for g in gaps:
        assert abs(g - spacing) / spacing < 1e-8


def test_kinetic_inductance_round_trip():
    g = fl.NanowireGeometry(length=730e-6, width=110e-9, thickness=15e-9, n_s=6.5e25)
    l_k = fl.kinetic_inductance(g)
    n_s = fl.sheet_density_from_inductance(l_k, g)
    assert n_s == pytest.approx(6.5e25, rel=1e-12)
    with pytest.raises(ValueError):
        fl.kinetic_inductance(
            fl.NanowireGeometry(length=730e-6, width=110e-9, thickness=15e-9)
        )


def test_nanowire_modes_and_reduction():
    topo = fl.CircuitTopology(
        l_nw=121e-9, c_nw=35.4e-15, c_0=20e-15, c_g=1e-15, c_j=4e-15, n_cells=64
    )
    modes = fl.normal_modes(topo, e_j=10.95)
    anti = [m for m in modes if m.antisymmetric]
    assert len(anti) >= 2
    assert anti[0].frequency < anti[1].frequency
    for m in modes:
        if not m.antisymmetric:
            assert abs(m.port_difference) < 1e-10
    p = fl.two_mode_from_topology(topo, 10.95)
    assert p.l_eff[0] > 0 and p.c_eff[0] > 0


def test_labels_and_catalog():
    p = fl.SingleModeParams(**DEVICE1)
    h = fl.build_single_mode_hamiltonian(p, phi_ext=-0.38 * math.pi, dim=80)
    sol = fl.diagonalize(h, 6)
    spectrum = fl.label_states(sol, p, -0.38 * math.pi)
    names = [str(l) for l in spectrum.labels]
    assert "g0" in names
    catalog = fl.transition_catalog(spectrum, max_photon=2)
    assert catalog
    for t in catalog:
        assert t.frequency > 0
        assert t.kind in ("plasmon", "fluxon", "sideband", "jj_mode")


def test_t1_curve_peak_band():
    p = fl.SingleModeParams(e_c=1.90, e_l=0.53, e_j=5.90)
    loss = fl.LossModel(q_l=39000, q_c=15100, temperature=0.020)
    grid = [math.pi * (0.6 + 0.38 * i / 20) for i in range(21)]
    curve = fl.t1_curve(p, loss, grid, threads=2)
    assert curve
    best = max(curve, key=lambda row: row[2])
    assert 1.5 < best[1] < 3.6  # peak frequency, GHz
    assert 2e-6 < best[2] < 2e-5  # peak T1, s


def test_synthesis_determinism():
    p = fl.SingleModeParams(**DEVICE1)
    grid = [-math.pi + i * 0.2 for i in range(8)]
    a = fl.synthesize_spectroscopy(p, grid, 0.01, 7)
    b = fl.synthesize_spectroscopy(p, grid, 0.01, 7)
    assert a == b
    c = fl.synthesize_spectroscopy(p, grid, 0.01, 8)
    assert a != c
