"""Seeded invariant sweep run by ``nhcircuit selftest``."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .eplocator import DegeneracyKind, find_degeneracies_1d
from .model import CircuitParams, derive_effective_model
from .nonreciprocity import directional_coupling
from .oracle import offdiag_identity_residual
from .spectrum import discriminant, eigenmodes
from .sweep import SweepAxis


def random_params(rng: np.random.Generator) -> CircuitParams:
    """A random circuit well inside the dispersive coupler regime."""
    omega_a = rng.uniform(4000, 5000)
    omega_q = tuple(omega_a + rng.uniform(-100, 100, size=2))
    omega_c = max(omega_q) + rng.uniform(200, 1500)
    return CircuitParams(
        omega_a=omega_a,
        omega_q=omega_q,
        omega_c=omega_c,
        gamma_q=tuple(rng.uniform(0.1, 5, size=2)),
        gamma_a=rng.uniform(10, 500),
        g_xy=rng.uniform(-10, 10),
        g_qc=tuple(rng.uniform(5, 50, size=2)),
        lambda_q=tuple(rng.uniform(0, 30, size=2)),
        theta_q=tuple(rng.uniform(0, 2 * math.pi, size=2)),
        sigma_z=tuple(rng.uniform(-1, 1, size=2)),
    )


@dataclass(frozen=True)
class CheckResult:
    name: str
    worst: float
    tol: float

    @property
    def ok(self) -> bool:
        return bool(self.worst <= self.tol)

    columns = ("check", "worst_residual", "tolerance", "ok")

    def row(self):
        return (self.name, self.worst, self.tol, self.ok)


def _scale(h):
    return max(1.0, float(np.max(np.abs(h))))


def run_selftest(seed: int = 0, draws: int = 1000) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    worst = dict.fromkeys(("eig_vs_lapack", "gap_squared", "trace", "swap", "nonrecip", "elimination"), 0.0)
    for _ in range(draws):
        p = random_params(rng)
        m = derive_effective_model(p)
        h = np.asarray(m.h_non)
        s = _scale(h)
        sp = eigenmodes(m)
        r, i = discriminant(m)
        ref = np.sort_complex(np.linalg.eigvals(h))
        got = np.sort_complex(np.array([sp.omega_plus, sp.omega_minus]))
        worst["eig_vs_lapack"] = max(worst["eig_vs_lapack"], float(np.max(np.abs(ref - got))) / s)
        gap = (sp.omega_plus - sp.omega_minus) ** 2
        worst["gap_squared"] = max(worst["gap_squared"], abs(gap - (r + 1j * i)) / s**2)
        worst["trace"] = max(worst["trace"], abs(sp.omega_plus + sp.omega_minus - np.trace(h)) / s)
        sw = eigenmodes(derive_effective_model(p.swapped()))
        worst["swap"] = max(worst["swap"], (abs(sw.omega_plus - sp.omega_plus) + abs(sw.omega_minus - sp.omega_minus)) / s)
        dc = directional_coupling(m)
        lhs = abs(dc.g_fwd) ** 2 - abs(dc.g_bwd) ** 2
        rhs = -4 * m.g_e * m.omega_n * math.sin(m.delta_theta)
        worst["nonrecip"] = max(worst["nonrecip"], abs(lhs - rhs) / max(abs(dc.g_fwd) ** 2 + abs(dc.g_bwd) ** 2, 1e-300))
        worst["elimination"] = max(worst["elimination"], offdiag_identity_residual(p))

    tols = {"eig_vs_lapack": 1e-10, "gap_squared": 1e-10, "trace": 1e-12, "swap": 1e-10,
            "nonrecip": 1e-12, "elimination": 1e-12}
    out = [CheckResult(k, v, tols[k]) for k, v in worst.items()]

    # symmetric exceptional points at g_e = +-lambda1 lambda2 / gamma_a
    p = replace(CircuitParams(), omega_q=(4500.0, 4500.0), g_qc=(30.0, 30.0), gamma_q=(1.0, 1.0)).with_delta_theta(math.pi / 2)
    loci = find_degeneracies_1d(p, SweepAxis.linspace("g_e", -3.0, 3.0, 2), n_grid=401)
    eps = sorted(L.location[0] for L in loci if L.kind is DegeneracyKind.EXCEPTIONAL)
    want = p.lambda_q[0] * p.lambda_q[1] / p.gamma_a
    err = max((abs(a - b) for a, b in zip(eps, (-want, want))), default=math.inf) if len(eps) == 2 else math.inf
    out.append(CheckResult("symmetric_ep", err, 1e-6))
    return out
