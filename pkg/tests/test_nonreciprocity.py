import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nhcircuit.model import CircuitParams, derive_effective_model
from nhcircuit.nonreciprocity import (
    LOG10_CLIP,
    DirectionalCoupling,
    asymmetry_dynamics,
    both_excited_populations,
    directional_coupling,
    identical_qubits,
    nonrecip_map,
)
from nhcircuit.sweep import SweepAxis

from .conftest import circuit_params, fuzz_params

OMEGA_N = 121 / 65


def test_directional_identity_fuzz():
    for p in fuzz_params():
        m = derive_effective_model(p)
        c = directional_coupling(m)
        lhs = abs(c.g_fwd) ** 2 - abs(c.g_bwd) ** 2
        rhs = -4 * m.g_e * m.omega_n * math.sin(m.delta_theta)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(m.g_e) ** 2 + m.omega_n**2)


def test_reciprocal_at_zero_phase(fig2):
    c = directional_coupling(derive_effective_model(fig2.with_delta_theta(0.0)))
    assert abs(c.g_fwd) == pytest.approx(abs(c.g_bwd), rel=1e-15)
    assert c.ratio == pytest.approx(1.0, rel=1e-15)


def test_unidirectional_at_half_pi(fig2):
    base = fig2.with_delta_theta(math.pi / 2)
    fwd_dead = directional_coupling(derive_effective_model(replace(base, g_e=OMEGA_N)))
    assert abs(fwd_dead.g_fwd) <= 1e-14
    assert abs(fwd_dead.g_bwd) == pytest.approx(2 * OMEGA_N, rel=1e-14)
    bwd_dead = directional_coupling(derive_effective_model(replace(base, g_e=-OMEGA_N)))
    assert abs(bwd_dead.g_bwd) <= 1e-14
    assert bwd_dead.log10_ratio <= -10


def test_ratio_edge_cases():
    assert DirectionalCoupling(0j, 1 + 0j).ratio == math.inf
    assert DirectionalCoupling(0j, 1 + 0j).log10_ratio == LOG10_CLIP
    assert DirectionalCoupling(0j, 0j).ratio == 1.0
    assert DirectionalCoupling(1 + 0j, 0j).log10_ratio == -LOG10_CLIP
    assert DirectionalCoupling(1 + 0j, 1e30 + 0j).log10_ratio == LOG10_CLIP


@settings(max_examples=200, deadline=None)
@given(circuit_params())
def test_label_swap_exchanges_directions(p):
    a = directional_coupling(derive_effective_model(p))
    b = directional_coupling(derive_effective_model(p.swapped()))
    assert b.g_fwd == pytest.approx(a.g_bwd, rel=1e-13, abs=1e-13)
    assert b.g_bwd == pytest.approx(a.g_fwd, rel=1e-13, abs=1e-13)


def test_map_extrema_do_not_coincide(fig2):
    grid = nonrecip_map(fig2, SweepAxis.linspace("g_e", -3, 3, 601), SweepAxis.linspace("delta_theta", 0, math.pi, 201))
    ex = grid.extrema()
    (gf, tf), (gb, tb) = ex["min_g_fwd"], ex["min_g_bwd"]
    assert gf == pytest.approx(OMEGA_N, abs=0.01) and tf == pytest.approx(math.pi / 2, abs=0.02)
    assert gb == pytest.approx(-OMEGA_N, abs=0.01) and tb == pytest.approx(math.pi / 2, abs=0.02)
    i, j = np.unravel_index(np.argmax(grid.log10_ratio), grid.g_fwd.shape)
    assert grid.axis1.values[i] == pytest.approx(OMEGA_N, abs=0.01)
    i, j = np.unravel_index(np.argmin(grid.log10_ratio), grid.g_fwd.shape)
    assert grid.axis1.values[i] == pytest.approx(-OMEGA_N, abs=0.01)


def test_map_cells_match_pointwise(fig2):
    a1, a2 = SweepAxis.linspace("g_e", -3, 3, 7), SweepAxis.linspace("delta_theta", 0, math.pi, 5)
    grid = nonrecip_map(fig2, a1, a2)
    rows = list(grid.rows())
    assert len(rows) == 35
    for x, y, af, ab, r, lr in rows:
        c = directional_coupling(derive_effective_model(replace(fig2, g_e=x).with_delta_theta(y)))
        assert (af, ab) == pytest.approx((abs(c.g_fwd), abs(c.g_bwd)), rel=1e-15)
        assert lr == pytest.approx(c.log10_ratio, abs=1e-12)


def test_map_masks_degenerate_detuning(fig2):
    grid = nonrecip_map(fig2, SweepAxis("omega_c", (4500.0, 5200.0)), SweepAxis("delta_theta", (0.0,)))
    assert grid.mask.tolist() == [[True], [False]]


def _asym(base, thetas, t_max=10.0, n_steps=201):
    return asymmetry_dynamics(identical_qubits(base), SweepAxis("delta_theta", tuple(thetas)), t_max, n_steps)


def test_asymmetry_vanishes_at_zero_phase(fig2):
    grid = _asym(fig2, [0.0])
    assert np.max(np.abs(grid.p2_minus_p1)) <= 1e-10


def test_asymmetry_odd_in_phase(fig2):
    grid = _asym(fig2, [-1.1, 1.1])
    assert np.max(np.abs(grid.p2_minus_p1[0] + grid.p2_minus_p1[1])) <= 1e-10
    assert np.max(np.abs(grid.p2_minus_p1[1])) > 1e-4


def test_asymmetry_vanishes_without_dissipative_link(fig2):
    p = identical_qubits(replace(fig2, lambda_q=(0.0, 0.0), g_e=0.8).with_delta_theta(1.0))
    _, p1, p2 = both_excited_populations(derive_effective_model(p), 10.0, 101, time_axis="raw")
    assert np.max(np.abs(p2 - p1)) <= 1e-12


def test_identical_qubits_copies_qubit_one():
    p = identical_qubits(CircuitParams(), sigma_z=(1, 1))
    assert p.omega_q[0] == p.omega_q[1] and p.g_qc[0] == p.g_qc[1] and p.gamma_q[0] == p.gamma_q[1]
    assert p.sigma_z == (1, 1)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(-2.0, 2.0))
def test_both_excited_populations_in_unit_interval(theta, g):
    p = identical_qubits(replace(CircuitParams(), g_e=g).with_delta_theta(theta))
    _, p1, p2 = both_excited_populations(derive_effective_model(p), 10.0, 51)
    assert np.all((p1 >= -1e-12) & (p1 <= 1 + 1e-12)) and np.all((p2 >= -1e-12) & (p2 <= 1 + 1e-12))
