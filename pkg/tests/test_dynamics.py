import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.linalg import expm

from nhcircuit.dynamics import (
    EvolveSpec,
    _taylor_expm,
    evolve,
    initial_rho,
    propagator,
    steady_populations,
    trajectory_arrays,
)
from nhcircuit.errors import DegenerateDecay, NonFiniteState
from nhcircuit.figures import fig5_models
from nhcircuit.model import CircuitParams, derive_effective_model


def _rabi_model(g=0.7):
    p = CircuitParams(omega_q=(4500.0, 4500.0), g_qc=(30.0, 30.0), gamma_q=(0.0, 0.0), lambda_q=(0.0, 0.0), g_e=g)
    return derive_effective_model(p)


def _arrays(m, **kw):
    return trajectory_arrays(evolve(m, EvolveSpec(**kw)))


def test_initial_states():
    assert np.array_equal(initial_rho((1, -1)), np.diag([1, 0]))
    assert np.array_equal(initial_rho((-1, 1)), np.diag([0, 1]))
    with pytest.raises(ValueError, match="both_excited_populations"):
        initial_rho((1, 1))
    with pytest.raises(ValueError):
        EvolveSpec(initial=(-1, -1))


@pytest.mark.parametrize("kw", [dict(t_max=0), dict(n_steps=1), dict(engine="euler"),
                                dict(population_feedback="on"), dict(time_axis="seconds")])
def test_spec_validation(kw):
    with pytest.raises(ValueError):
        EvolveSpec(**kw)


def test_stationary_excited_population():
    p = CircuitParams(gamma_q=(0, 0), lambda_q=(0, 0), g_qc=(0, 0), g_xy=0.0)
    for engine in ("exact", "rk4"):
        a = _arrays(derive_effective_model(p), t_max=30.0, n_steps=61, time_axis="raw", engine=engine)
        assert np.allclose(a["p1"], 1.0, atol=1e-12) and np.allclose(a["p1_raw"], 1.0, atol=1e-12)


@pytest.mark.parametrize("engine", ["exact", "rk4"])
def test_rabi_oracle(engine):
    g = 0.7
    a = _arrays(_rabi_model(g), t_max=12.0, n_steps=241, time_axis="raw", engine=engine)
    assert np.max(np.abs(a["p1"] - np.cos(g * a["t"]) ** 2)) <= 1e-8


def test_omega_n_axis_needs_dissipative_channel():
    with pytest.raises(ValueError, match="raw"):
        evolve(_rabi_model(), EvolveSpec())


def test_propagator_matches_expm(fig2):
    for dth in (0.0, 1.0, math.pi / 2):
        h = np.asarray(derive_effective_model(fig2.with_delta_theta(dth)).h_non)
        for t in (0.0, 0.3, 2.5):
            ref = expm(-1j * h * t)
            assert np.linalg.norm(propagator(h, t) - ref) <= 1e-12 * max(1.0, np.linalg.norm(ref))


def test_taylor_fallback_at_exceptional_point(symmetric):
    m = derive_effective_model(replace(symmetric, g_e=121 / 65))
    h = np.asarray(m.h_non)
    for t in (0.5, 3.0, 10.0):
        ref = expm(-1j * h * t)
        assert np.linalg.norm(propagator(h, t) - ref) <= 1e-10 * np.linalg.norm(ref)
        assert np.linalg.norm(_taylor_expm(-1j * h * t) - ref) <= 1e-10 * np.linalg.norm(ref)


def test_semigroup(fig2):
    h = np.asarray(derive_effective_model(fig2.with_delta_theta(1.2)).h_non)
    rng = np.random.default_rng(3)
    for t1, t2 in rng.uniform(0, 5, size=(20, 2)):
        lhs = propagator(h, t1 + t2)
        rhs = propagator(h, t1) @ propagator(h, t2)
        assert np.linalg.norm(lhs - rhs) <= 1e-9 * max(1.0, np.linalg.norm(lhs))


def _normalized(rhos):
    tr = (rhos[:, 0, 0] + rhos[:, 1, 1]).real
    return rhos / tr[:, None, None]


@pytest.mark.parametrize("k", range(8))
def test_engines_agree_fig5(k):
    _, _, m = fig5_models()[k]
    a = _arrays(m, t_max=20.0, n_steps=401, initial=(1, -1))
    b = _arrays(m, t_max=20.0, n_steps=401, initial=(1, -1), engine="rk4")
    assert np.max(np.abs(_normalized(a["rho"]) - _normalized(b["rho"]))) <= 1e-8


def test_rk4_fourth_order():
    _, _, m = fig5_models()[0]
    ref = _normalized(_arrays(m, t_max=20.0, n_steps=401)["rho"])
    errs = [np.max(np.abs(_normalized(_arrays(m, t_max=20.0, n_steps=401, engine="rk4",
                                                rk4_substeps=s)["rho"]) - ref)) for s in (1, 2, 4)]
    assert errs[0] / errs[1] >= 14 and errs[1] / errs[2] >= 14


def test_trace_derivative(fig2):
    m = derive_effective_model(replace(fig2, sigma_z=(1, -1), g_e=0.09).with_delta_theta(5 * math.pi / 12))
    h = np.asarray(m.h_non)
    anti = 1j * (h - h.conj().T)
    rho0 = initial_rho((1, -1))

    def tr(s):
        u = propagator(h, s)
        return np.trace(u @ rho0 @ u.conj().T).real

    def central(t, dt):
        return (tr(t + dt) - tr(t - dt)) / (2 * dt)

    for t in np.linspace(0.5, 10, 12):
        u = propagator(h, t)
        exact = -np.trace(anti @ u @ rho0 @ u.conj().T).real
        fd = (4 * central(t, 1e-3) - central(t, 2e-3)) / 3  # Richardson, O(dt^4)
        assert abs(fd - exact) <= 1e-8 * max(tr(t), 1.0)


@pytest.mark.parametrize("engine", ["exact", "rk4"])
def test_state_invariants(engine):
    for _, _, m in fig5_models():
        a = _arrays(m, t_max=20.0, n_steps=201, engine=engine)
        rho = _normalized(a["rho"])
        assert np.max(np.abs(rho - np.conj(np.swapaxes(rho, 1, 2)))) <= 1e-12
        assert np.min(np.linalg.eigvalsh(0.5 * (rho + np.conj(np.swapaxes(rho, 1, 2))))) >= -1e-10
        assert np.max(np.abs(a["p1"] + a["p2"] - 1)) <= 1e-12
        assert np.allclose(a["p1"] * a["trace"], a["p1_raw"], rtol=1e-12)


def test_omega_n_t_axis(fig2):
    m = derive_effective_model(fig2)
    a = _arrays(m, t_max=20.0, n_steps=11)
    assert np.allclose(a["omega_n_t"], np.linspace(0, 20, 11))
    assert np.allclose(a["t"] * m.omega_n, a["omega_n_t"])


def test_fig5_envelopes_settle():
    _, _, m = fig5_models()[2]  # g_e = 21 kHz
    a = _arrays(m, t_max=50.0, n_steps=2001)
    p1 = a["p1"]
    early, late = p1[:400], p1[-400:]
    assert np.ptp(early) > 10 * np.ptp(late)
    assert late.mean() < 0.9


def test_steady_populations_match_tail():
    for _, _, m in fig5_models():
        p1, p2 = steady_populations(m)
        a = _arrays(m, t_max=50.0, n_steps=101)
        assert abs(a["p1"][-1] - p1) <= 1e-3 and abs(a["p2"][-1] - p2) <= 1e-3
        assert p1 + p2 == pytest.approx(1.0)


def test_steady_populations_diagonal():
    p = CircuitParams(lambda_q=(0, 0), g_qc=(0, 0), g_xy=0.0, gamma_q=(2.0, 1.0))
    assert steady_populations(derive_effective_model(p)) == (0.0, 1.0)


def test_steady_populations_degenerate():
    with pytest.raises(DegenerateDecay):
        steady_populations(_rabi_model())


def test_non_finite_state_reports_step():
    p = CircuitParams(lambda_q=(30.0, 30.0), gamma_a=10.0)
    with pytest.raises(NonFiniteState) as info:
        evolve(derive_effective_model(p), EvolveSpec(t_max=1e4, n_steps=11))
    assert info.value.step > 0


def test_self_consistent_feedback_changes_trajectory():
    _, _, m = fig5_models()[1]
    frozen = _arrays(m, t_max=10.0, n_steps=201)
    fb = _arrays(m, t_max=10.0, n_steps=201, population_feedback="self_consistent")
    fb_rk4 = _arrays(m, t_max=10.0, n_steps=201, population_feedback="self_consistent", engine="rk4")
    assert np.max(np.abs(frozen["p1"] - fb["p1"])) > 1e-3
    assert np.max(np.abs(fb["p1"] - fb_rk4["p1"])) <= 1e-8
    off = _arrays(m, t_max=10.0, n_steps=201, population_feedback="off")
    assert np.array_equal(off["p1"], frozen["p1"])
