"""Directional qubit-qubit couplings and the asymmetric-exchange diagnostic.

The coupling that carries an excitation from qubit 1 to qubit 2 is the
lower off-diagonal element of ``h_non``::

    g_fwd = g(1 -> 2) = h_non[1, 0] = g_e - i Omega_n exp(-i dtheta)
    g_bwd = g(1 <- 2) = h_non[0, 1] = g_e - i Omega_n exp(+i dtheta)

so that ``|g_fwd|**2 - |g_bwd|**2 = -4 g_e Omega_n sin(dtheta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import EvolveSpec, _evolve_rho
from .errors import DegenerateDetuning, NonPositiveResonatorLoss
from .model import CircuitParams, EffectiveModel, derive_effective_model
from .sweep import SweepAxis

LOG10_CLIP = 12.0


@dataclass(frozen=True)
class DirectionalCoupling:
    g_fwd: complex
    g_bwd: complex

    @property
    def ratio(self) -> float:
        """|g_bwd| / |g_fwd|; ``inf`` for a perfectly unidirectional link."""
        a, b = abs(self.g_fwd), abs(self.g_bwd)
        if a == 0:
            return math.inf if b > 0 else 1.0
        return b / a

    @property
    def log10_ratio(self) -> float:
        r = self.ratio
        if r == 0:
            return -LOG10_CLIP
        if math.isinf(r):
            return LOG10_CLIP
        return float(np.clip(math.log10(r), -LOG10_CLIP, LOG10_CLIP))


def directional_coupling(m: EffectiveModel) -> DirectionalCoupling:
    return DirectionalCoupling(g_fwd=complex(m.h_non[1, 0]), g_bwd=complex(m.h_non[0, 1]))


@dataclass
class NonrecipGrid:
    axis1: SweepAxis
    axis2: SweepAxis
    g_fwd: np.ndarray
    g_bwd: np.ndarray
    mask: np.ndarray

    columns = ("axis1", "axis2", "abs_g_fwd", "abs_g_bwd", "ratio", "log10_ratio")

    @property
    def abs_g_fwd(self):
        return np.abs(self.g_fwd)

    @property
    def abs_g_bwd(self):
        return np.abs(self.g_bwd)

    @property
    def ratio(self):
        a, b = self.abs_g_fwd, self.abs_g_bwd
        with np.errstate(divide="ignore", invalid="ignore"):
            r = b / a
        r = np.where((a == 0) & (b == 0), 1.0, r)
        return r

    @property
    def log10_ratio(self):
        with np.errstate(divide="ignore"):
            return np.clip(np.log10(self.ratio), -LOG10_CLIP, LOG10_CLIP)

    def extrema(self) -> dict[str, tuple[float, float]]:
        """Axis coordinates of min/max |g_fwd| and |g_bwd| over unmasked cells."""
        out = {}
        for name, arr in (("g_fwd", self.abs_g_fwd), ("g_bwd", self.abs_g_bwd)):
            a = np.where(self.mask, np.nan, arr)
            for label, fn in (("min", np.nanargmin), ("max", np.nanargmax)):
                i, j = np.unravel_index(fn(a), a.shape)
                out[f"{label}_{name}"] = (self.axis1.values[i], self.axis2.values[j])
        return out

    def rows(self):
        af, ab, r, lr = self.abs_g_fwd, self.abs_g_bwd, self.ratio, self.log10_ratio
        for i, x in enumerate(self.axis1.values):
            for j, y in enumerate(self.axis2.values):
                yield (x, y, af[i, j], ab[i, j], r[i, j], lr[i, j])


def nonrecip_map(base: CircuitParams, axis1: SweepAxis, axis2: SweepAxis) -> NonrecipGrid:
    shape = (len(axis1), len(axis2))
    fwd = np.full(shape, np.nan + 0j)
    bwd = np.full(shape, np.nan + 0j)
    mask = np.ones(shape, dtype=bool)
    for i, x in enumerate(axis1.values):
        p1 = axis1.apply(base, x)
        for j, y in enumerate(axis2.values):
            try:
                m = derive_effective_model(axis2.apply(p1, y))
            except (DegenerateDetuning, NonPositiveResonatorLoss):
                continue
            fwd[i, j], bwd[i, j] = m.h_non[1, 0], m.h_non[0, 1]
            mask[i, j] = False
    return NonrecipGrid(axis1, axis2, fwd, bwd, mask)


def both_excited_populations(m: EffectiveModel, t_max, n_steps, engine="exact", time_axis="omega_n_t"):
    """P1(t), P2(t) for two qubits that both start excited.

    The single-excitation model cannot hold two excitations, so each qubit is
    followed in its own run: P1 from rho(0) = |eg><eg|, P2 from rho(0) = |ge><ge|,
    each qubit exchanging with a partner that starts in the ground state.
    Returns (Omega_n*t, P1, P2) with trace-normalized populations.
    """
    kw = dict(t_max=t_max, n_steps=n_steps, engine=engine, time_axis=time_axis)
    _, tau, rho_a = _evolve_rho(m, EvolveSpec(initial=(1, -1), **kw))
    _, _, rho_b = _evolve_rho(m, EvolveSpec(initial=(-1, 1), **kw))
    tr_a = (rho_a[:, 0, 0] + rho_a[:, 1, 1]).real
    tr_b = (rho_b[:, 0, 0] + rho_b[:, 1, 1]).real
    return tau, rho_a[:, 0, 0].real / tr_a, rho_b[:, 1, 1].real / tr_b


@dataclass
class AsymmetryGrid:
    axis: SweepAxis
    omega_n_t: np.ndarray
    p2_minus_p1: np.ndarray  # shape (len(axis), n_steps)

    columns = ("omega_n_t", "axis", "p2_minus_p1")

    def rows(self):
        for i, x in enumerate(self.axis.values):
            for k, t in enumerate(self.omega_n_t):
                yield (t, x, self.p2_minus_p1[i, k])


def identical_qubits(p: CircuitParams, sigma_z=(1.0, 1.0)) -> CircuitParams:
    """Copy qubit-1 parameters onto qubit 2 (frequency, couplings, decay)."""
    return replace(
        p,
        omega_q=(p.omega_q[0],) * 2,
        gamma_q=(p.gamma_q[0],) * 2,
        g_qc=(p.g_qc[0],) * 2,
        lambda_q=(p.lambda_q[0],) * 2,
        sigma_z=tuple(sigma_z),
    )


def asymmetry_dynamics(base: CircuitParams, axis: SweepAxis, t_max: float, n_steps: int,
                       engine: str = "exact") -> AsymmetryGrid:
    """P2 - P1 on the (Omega_n t, axis) plane for two initially excited qubits.

    ``base`` is used as given; pass it through :func:`identical_qubits` to get
    the identical-qubit setting.
    """
    out = np.empty((len(axis), n_steps))
    tau = None
    for i, x in enumerate(axis.values):
        m = derive_effective_model(axis.apply(base, x))
        tau, p1, p2 = both_excited_populations(m, t_max, n_steps, engine=engine)
        out[i] = p2 - p1
    return AsymmetryGrid(axis, tau, out)
