"""Full single-excitation circuit models used to check the 2x2 reduction.

Two generators are built, both written as a non-Hermitian matrix ``M`` with
``dx/dt = -i M x`` in the frame rotating at the resonator frequency:

* dim 3, basis (q1, q2, a): qubits coupled by ``g_e``, Lamb-shifted detunings.
* dim 4, basis (q1, q2, a, c): bare qubit detunings, explicit coupler,
  couplings ``g_xy``, ``g_1``, ``g_2``. The coupler does not talk to the
  resonator.

Photon amplitudes decay as ``-gamma_a a`` and qubit amplitudes as
``-(gamma_j / 2) sigma_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import NonPositiveResonatorLoss, SlowModeAmbiguity
from .model import CircuitParams, coupler_detunings, coupler_mediated_ge, derive_effective_model
from .spectrum import eigenmodes


@dataclass(frozen=True)
class FullModel:
    dim: int
    matrix: np.ndarray
    basis_labels: tuple[str, ...]

    @property
    def qubit_slice(self):
        return slice(0, 2)


@dataclass(frozen=True)
class ReductionReport:
    gamma_a: float
    eff_splitting: complex
    full_splitting: complex
    rel_error: float
    offdiag_identity_residual: float
    qubit_overlap: tuple[float, float]

    columns = ("gamma_a", "re_eff", "im_eff", "re_full", "im_full", "rel_error", "offdiag_residual")

    def row(self):
        e, f = self.eff_splitting, self.full_splitting
        return (self.gamma_a, e.real, e.imag, f.real, f.imag, self.rel_error, self.offdiag_identity_residual)


def build_full_model(p: CircuitParams, with_coupler: bool = False) -> FullModel:
    d1c, d2c = coupler_detunings(p)
    l1 = p.lambda_q[0] * np.exp(1j * p.theta_q[0])
    l2 = p.lambda_q[1] * np.exp(1j * p.theta_q[1])
    d1a = p.omega_q[0] - p.omega_a
    d2a = p.omega_q[1] - p.omega_a

    if not with_coupler:
        g_e = coupler_mediated_ge(p) if p.g_e is None else p.g_e
        m = np.zeros((3, 3), dtype=complex)
        m[0, 0] = d1a + p.g_qc[0] ** 2 / d1c - 0.5j * p.gamma_q[0]
        m[1, 1] = d2a + p.g_qc[1] ** 2 / d2c - 0.5j * p.gamma_q[1]
        m[2, 2] = -1j * p.gamma_a
        m[0, 1] = m[1, 0] = g_e
        m[0, 2], m[2, 0] = l1, np.conj(l1)
        m[1, 2], m[2, 1] = l2, np.conj(l2)
        labels = ("q1", "q2", "a")
    else:
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0] = d1a - 0.5j * p.gamma_q[0]
        m[1, 1] = d2a - 0.5j * p.gamma_q[1]
        m[2, 2] = -1j * p.gamma_a
        m[3, 3] = p.omega_c - p.omega_a - 0.5j * p.gamma_c
        m[0, 1] = m[1, 0] = p.g_xy
        m[0, 3] = m[3, 0] = p.g_qc[0]
        m[1, 3] = m[3, 1] = p.g_qc[1]
        m[0, 2], m[2, 0] = l1, np.conj(l1)
        m[1, 2], m[2, 1] = l2, np.conj(l2)
        labels = ("q1", "q2", "a", "c")
    m.setflags(write=False)
    return FullModel(m.shape[0], m, labels)


def schur_reduce(fm: FullModel, omega: complex = 0.0) -> np.ndarray:
    """Eliminate the photon at probe frequency ``omega``; returns the 2x2 ``M_eff``.

    ``M_eff(omega) = M_qq - M_qa (M_aa - omega)^-1 M_aq``. Eigenvalues of the
    full model are exactly the self-consistent solutions of
    ``det(M_eff(w) - w) = 0``.
    """
    if fm.dim != 3:
        raise ValueError("photon elimination is defined for the 3-mode model")
    m = np.asarray(fm.matrix)
    m_qq, m_qa, m_aq, m_aa = m[:2, :2], m[:2, 2], m[2, :2], m[2, 2]
    return m_qq - np.outer(m_qa, m_aq) / (m_aa - omega)


def adiabatic_elimination(fm: FullModel) -> np.ndarray:
    """Adiabatically eliminate the lossy photon; returns the 2x2 generator ``-i M_eff``.

    The photon responds instantaneously, ``a = -i sum_j lambda_j e^{-i theta_j}
    sigma_j / gamma_a``, which is the Schur complement with the photon
    diagonal taken as ``-i gamma_a`` alone.
    """
    if not np.asarray(fm.matrix)[2, 2].imag < 0:
        raise NonPositiveResonatorLoss("photon mode must be lossy")
    return -1j * schur_reduce(fm, 0.0)


def offdiag_identity_residual(p: CircuitParams) -> float:
    """max |G_eff[j,k] - (-i (g_e - i Omega_n e^{+-i dtheta}))| over both off-diagonals."""
    gen = adiabatic_elimination(build_full_model(p))
    g_e = coupler_mediated_ge(p) if p.g_e is None else p.g_e
    om = p.lambda_q[0] * p.lambda_q[1] / p.gamma_a
    dth = p.theta_q[0] - p.theta_q[1]
    want01 = -1j * (g_e - 1j * om * np.exp(1j * dth))
    want10 = -1j * (g_e - 1j * om * np.exp(-1j * dth))
    return float(max(abs(gen[0, 1] - want01), abs(gen[1, 0] - want10)))


def slow_modes(fm: FullModel, min_overlap: float = 0.5):
    """The two eigenpairs with the largest weight on the qubit subspace.

    Returns (eigenvalues[2], eigenvectors[dim, 2], overlaps[2]) ordered by
    descending real part.
    """
    w, v = np.linalg.eig(np.asarray(fm.matrix))
    v = v / np.linalg.norm(v, axis=0)
    weight = np.sum(np.abs(v[:2]) ** 2, axis=0)
    idx = np.argsort(-weight)[:2]
    if np.any(weight[idx] < min_overlap):
        raise SlowModeAmbiguity(f"qubit-subspace overlaps {weight[idx]} below {min_overlap}")
    idx = idx[np.argsort(-w[idx].real)]
    return w[idx], v[:, idx], tuple(float(x) for x in weight[idx])


def _matched_splitting(pair, reference):
    d = pair[0] - pair[1]
    return d if abs(d - reference) <= abs(-d - reference) else -d


def compare_reduction(p: CircuitParams, gamma_a_schedule) -> list[ReductionReport]:
    """Effective-model eigen-splitting vs the two slow modes of the 3-mode model."""
    reports = []
    for ga in gamma_a_schedule:
        pk = replace(p, gamma_a=float(ga))
        sp = eigenmodes(derive_effective_model(pk))
        eff = sp.omega_plus - sp.omega_minus
        w, _, ov = slow_modes(build_full_model(pk))
        full = _matched_splitting(w, eff)
        rel = abs(eff - full) / abs(full) if full != 0 else abs(eff - full)
        reports.append(ReductionReport(float(ga), complex(eff), complex(full), float(rel),
                                       offdiag_identity_residual(pk), ov))
    return reports


def compare_elimination(p: CircuitParams, gamma_a_schedule) -> list[tuple[float, float]]:
    """(gamma_a, rel_error) of the eliminated 2x2 generator's splitting vs the full model.

    Unlike :func:`compare_reduction` this uses the reduced matrix produced by the
    elimination itself, so it isolates the adiabatic approximation.
    """
    out = []
    for ga in gamma_a_schedule:
        pk = replace(p, gamma_a=float(ga))
        fm = build_full_model(pk)
        w_eff = np.linalg.eigvals(schur_reduce(fm, 0.0))
        w_eff = w_eff[np.argsort(-w_eff.real)]
        eff = w_eff[0] - w_eff[1]
        w, _, _ = slow_modes(fm)
        full = _matched_splitting(w, eff)
        out.append((float(ga), float(abs(eff - full) / abs(full))))
    return out


def track_slow_modes(p: CircuitParams, gamma_a_schedule):
    """Slow-mode eigenvectors along a gamma_a schedule, with consecutive overlaps."""
    vecs, overlaps = [], []
    for ga in gamma_a_schedule:
        _, v, _ = slow_modes(build_full_model(replace(p, gamma_a=float(ga))))
        if vecs:
            prev = vecs[-1]
            o = np.abs(prev.conj().T @ v)
            # best assignment of the two tracked modes
            keep, swap = min(o[0, 0], o[1, 1]), min(o[0, 1], o[1, 0])
            if swap > keep:
                v = v[:, ::-1]
            overlaps.append(max(keep, swap))
        vecs.append(v)
    return vecs, overlaps


def compare_coupler_reduction(p: CircuitParams, omega_c_values) -> list[tuple[float, float, float]]:
    """4-mode (explicit coupler) vs 3-mode (g_e) slow-mode splittings with the photon decoupled.

    Returns (omega_c, max_j g_j/|Delta_jc|, rel_error) per coupler frequency.
    """
    out = []
    for wc in omega_c_values:
        pk = replace(p, omega_c=float(wc), g_e=None, lambda_q=(0.0, 0.0))
        d1c, d2c = coupler_detunings(pk)
        ratio = max(abs(pk.g_qc[0] / d1c), abs(pk.g_qc[1] / d2c))
        w3, _, _ = slow_modes(build_full_model(pk, with_coupler=False))
        w4, _, _ = slow_modes(build_full_model(pk, with_coupler=True))
        s3 = w3[0] - w3[1]
        s4 = _matched_splitting(w4, s3)
        out.append((float(wc), float(ratio), float(abs(s3 - s4) / abs(s4))))
    return out
