"""Reference datasets fig2 ... fig7, with their parameter sets hard-coded.

Every builder returns ``{dataset_name: (Table, header_dict)}``; the CLI writes
one file per dataset. Values are unshifted (no cosmetic offsets between curves).
Open axis ranges are chosen to cover the features of interest.
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from .dynamics import EvolveSpec, evolve
from .eplocator import find_degeneracies_1d
from .io import Table
from .model import CircuitParams, derive_effective_model
from .nonreciprocity import asymmetry_dynamics, directional_coupling, identical_qubits, nonrecip_map
from .spectrum import eigenmodes, scan_2d
from .sweep import SweepAxis

PI = math.pi
FIG2 = CircuitParams()


def _hdr(p: CircuitParams, **extra):
    out = {f"circuit.{k}": v for k, v in p.as_dict().items()}
    out.update(extra)
    return out


def _ge_axis(num=201):
    return SweepAxis.linspace("g_e", -3.0, 3.0, num)


def fig2(base: CircuitParams = FIG2, num: int = 201, threads: int = 1):
    """Level and damping splittings over (g_e, dtheta), ground-state qubits."""
    ax1, ax2 = _ge_axis(num), SweepAxis.linspace("delta_theta", 0.0, PI, num)
    grid = scan_2d(base, ax1, ax2, workers=threads)
    de, dg = grid.delta_e, grid.delta_gamma
    out = {}
    for name, arr, col in (("fig2a_dEq", de, "dEq"), ("fig2b_dGq", dg, "dGq")):
        rows = [(x, y, arr[i, j]) for i, x in enumerate(ax1.values) for j, y in enumerate(ax2.values)]
        out[name] = (Table(("g_e", "delta_theta", col), rows), _hdr(base, figure=name))
    return out


FIG3_THETAS = (0.5, 0.501, 0.502)


def fig3_params(base: CircuitParams = FIG2) -> CircuitParams:
    return replace(base, lambda_q=(11.3, 11.6))


def fig3(base: CircuitParams = FIG2, num: int = 1201, tol_disc: float = 1e-9):
    """Eigenvalue curves versus g_e at three phase differences, plus degeneracy loci."""
    p0 = fig3_params(base)
    ax = _ge_axis(num)
    curves, loci = [], []
    for frac in FIG3_THETAS:
        p = p0.with_delta_theta(frac * PI)
        for g in ax.values:
            sp = eigenmodes(derive_effective_model(replace(p, g_e=g)))
            curves.append((frac, g, sp.omega_plus.real, sp.omega_minus.real,
                           sp.omega_plus.imag, sp.omega_minus.imag, sp.delta_e, sp.delta_gamma))
        for L in find_degeneracies_1d(p, ax, n_grid=num, tol_disc=tol_disc):
            loci.append((frac, L.kind.value, L.location[0], L.residuals[0], L.residuals[1]))
    hdr = _hdr(p0, delta_theta_over_pi=list(FIG3_THETAS))
    return {
        "fig3_curves": (Table(("delta_theta_over_pi", "g_e", "re_wp", "re_wm", "im_wp", "im_wm", "dEq", "dGq"),
                              curves), hdr),
        "fig3_loci": (Table(("delta_theta_over_pi", "kind", "g_e", "R_residual", "I_residual"), loci), hdr),
    }


def _equal_big_gamma(p: CircuitParams, ratio: float = 1.0) -> CircuitParams:
    """Set gamma_2 so that Gamma_2 = ratio * Gamma_1 at the current lambda and sigma_z."""
    purcell = [p.lambda_q[j] ** 2 * p.sigma_z[j] / p.gamma_a for j in (0, 1)]
    g1 = p.gamma_q[0] + purcell[0]
    return replace(p, gamma_q=(p.gamma_q[0], ratio * g1 - purcell[1]))


FIG4A_CURVES = {
    "blue": dict(g_e=1.137, gamma_a=65.0, gamma_ratio=1.0),
    "green": dict(g_e=1.224, gamma_a=65.0, gamma_ratio=1.0),
    "red": dict(g_e=1.137, gamma_a=66.0, gamma_ratio=1.0),
    "black": dict(g_e=1.137, gamma_a=65.0, gamma_ratio=0.99),
}

FIG4B_CURVES = {
    "blue": dict(dtheta=0.5, lam=11.0, g_e=1.137),
    "red": dict(dtheta=0.5005, lam=11.0, g_e=1.137),
    "black": dict(dtheta=0.5, lam=10.6, g_e=1.224),
}


def fig4a(base: CircuitParams = FIG2, num: int = 401, lam_max: float = 20.0):
    """Re(omega_pm) versus a common resonator coupling lambda."""
    rows, hdr = [], _hdr(base, curves=FIG4A_CURVES)
    for label, c in FIG4A_CURVES.items():
        p0 = replace(base, g_e=c["g_e"], gamma_a=c["gamma_a"]).with_delta_theta(0.5 * PI)
        for lam in np.linspace(0.0, lam_max, num):
            p = _equal_big_gamma(replace(p0, lambda_q=(lam, lam)), c["gamma_ratio"])
            sp = eigenmodes(derive_effective_model(p))
            rows.append((label, lam, sp.omega_plus.real, sp.omega_minus.real, sp.delta_e))
    return {"fig4a": (Table(("curve", "lambda", "re_wp", "re_wm", "dEq"), rows), hdr)}


def fig4b(base: CircuitParams = FIG2, num: int = 401):
    """Re(omega_pm) versus opposite qubit populations sigma_z1 = -sigma_z2."""
    rows, hdr = [], _hdr(base, curves=FIG4B_CURVES)
    for label, c in FIG4B_CURVES.items():
        p0 = replace(base, g_e=c["g_e"], lambda_q=(c["lam"], c["lam"])).with_delta_theta(c["dtheta"] * PI)
        for s in np.linspace(-1.0, 1.0, num):
            sp = eigenmodes(derive_effective_model(replace(p0, sigma_z=(s, -s))))
            rows.append((label, s, sp.omega_plus.real, sp.omega_minus.real, sp.delta_e))
    return {"fig4b": (Table(("curve", "sigma_z", "re_wp", "re_wm", "dEq"), rows), hdr)}


FIG5_GE = (-0.080, -0.035, 0.021, 0.090)
FIG5_THETA = (0.46, 0.48, 0.50, 0.52)
FIG5_SIGMA = (1.0, -1.0)


def fig5_models(base: CircuitParams = FIG2):
    """The eight (panel, label, EffectiveModel) trajectory settings."""
    p = replace(base, sigma_z=FIG5_SIGMA)
    out = []
    for g in FIG5_GE:
        out.append(("ab", f"g_e={g}", derive_effective_model(replace(p, g_e=g).with_delta_theta(5 * PI / 12))))
    for frac in FIG5_THETA:
        out.append(("cd", f"dtheta={frac}pi", derive_effective_model(replace(p, g_e=-0.031).with_delta_theta(frac * PI))))
    return out


def fig5(base: CircuitParams = FIG2, t_max: float = 50.0, n_steps: int = 501, engine: str = "exact"):
    """Populations after exciting qubit 1, for four g_e values and four phase differences."""
    spec = EvolveSpec(t_max=t_max, n_steps=n_steps, initial=FIG5_SIGMA, engine=engine)
    out = {}
    for k, (panel, label, m) in enumerate(fig5_models(base)):
        rows = [s.row() for s in evolve(m, spec)]
        name = f"fig5{panel}_{k % 4}"
        hdr = _hdr(m.params, curve=label, t_max=t_max, n_steps=n_steps, engine=engine)
        out[name] = (Table(("omega_n_t", "p1", "p2", "p1_raw", "p2_raw", "trace"), rows), hdr)
    return out


def fig6(base: CircuitParams = FIG2, num: int = 201):
    """|g_fwd|, |g_bwd| over (g_e, dtheta) and cuts at dtheta = pi/2, pi/3."""
    grid = nonrecip_map(base, _ge_axis(num), SweepAxis.linspace("delta_theta", 0.0, PI, num))
    cols = ("g_e", "delta_theta", "abs_g_fwd", "abs_g_bwd", "ratio", "log10_ratio")
    out = {"fig6ab_map": (Table(cols, list(grid.rows())), _hdr(base))}
    for tag, dth in (("fig6cd_pi_2", PI / 2), ("fig6ef_pi_3", PI / 3)):
        rows = []
        for g in _ge_axis(num).values:
            dc = directional_coupling(derive_effective_model(replace(base, g_e=g).with_delta_theta(dth)))
            rows.append((g, dth, abs(dc.g_fwd), abs(dc.g_bwd), dc.ratio, dc.log10_ratio))
        out[tag] = (Table(cols, rows), _hdr(base, delta_theta=dth))
    return out


FIG7_GE = 0.0053


def fig7_params(base: CircuitParams = FIG2) -> CircuitParams:
    """Identical qubits, both initially excited (sigma_z = +1)."""
    return identical_qubits(replace(base, omega_q=(4500.0, 4500.0), g_qc=(30.0, 30.0),
                                    lambda_q=(11.0, 11.0), gamma_q=(1.0, 1.0)), sigma_z=(1.0, 1.0))


def fig7(base: CircuitParams = FIG2, num: int = 81, t_max: float = 20.0, n_steps: int = 401):
    """P2 - P1 heatmaps over (Omega_n t, g_e) at dtheta = pi/2 and over (Omega_n t, dtheta) at g_e = 5.3 kHz."""
    p = fig7_params(base)
    pa = p.with_delta_theta(PI / 2)
    ga = asymmetry_dynamics(pa, SweepAxis.linspace("g_e", -3.0, 3.0, num), t_max, n_steps)
    pb = replace(p, g_e=FIG7_GE)
    gb = asymmetry_dynamics(pb, SweepAxis.linspace("delta_theta", 0.0, PI, num), t_max, n_steps)
    return {
        "fig7a": (Table(("omega_n_t", "g_e", "p2_minus_p1"), list(ga.rows())), _hdr(pa)),
        "fig7b": (Table(("omega_n_t", "delta_theta", "p2_minus_p1"), list(gb.rows())), _hdr(pb)),
    }


FIGURES = {"fig2": fig2, "fig3": fig3, "fig4a": fig4a, "fig4b": fig4b, "fig5": fig5, "fig6": fig6, "fig7": fig7}
