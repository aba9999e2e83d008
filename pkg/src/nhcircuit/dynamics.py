"""No-jump evolution ``d(rho)/dt = -i (H rho - rho H^dagger)`` in the basis (|eg>, |ge>).

Two engines are provided and are interchangeable:

``"exact"``
    ``rho(t) = V rho(0) V^dagger`` with ``V = exp(-i H t)`` from the eigen-
    decomposition of H. Near an exceptional point the eigenvector matrix
    becomes singular; above a condition number of 1e8 the propagator switches
    to a scaled-and-squared Taylor series.
``"rk4"``
    Classical fixed-step fourth-order Runge-Kutta applied to the equation of
    motion itself.

Populations are reported both raw (diagonal of rho) and trace-normalized;
the normalized pair is the quantity that settles to finite values at long
times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateDecay, IllConditionedEigenbasis, NonFiniteState
from .model import EffectiveModel, derive_effective_model
from .spectrum import eigenmodes

COND_LIMIT = 1e8
RK4_STEP_SCALE = 0.01  # h * ||L|| per internal step

_FEEDBACK = {"frozen": "frozen", "off": "frozen", "self_consistent": "self_consistent"}


@dataclass(frozen=True)
class EvolveSpec:
    """How to run one trajectory.

    ``initial`` is the pair of initial sigma_z values: ``(1, -1)`` starts in
    |eg><eg|, ``(-1, 1)`` in |ge><ge|. ``t_max`` is measured on the
    ``Omega_n * t`` axis unless ``time_axis == "raw"``. ``n_steps`` is the
    number of output times including t = 0.
    """

    t_max: float = 20.0
    n_steps: int = 401
    initial: tuple[float, float] = (1.0, -1.0)
    population_feedback: str = "frozen"
    engine: str = "exact"
    time_axis: str = "omega_n_t"
    rk4_substeps: int | None = None

    def __post_init__(self):
        if not self.t_max > 0:
            raise ValueError("t_max must be > 0")
        if self.n_steps < 2:
            raise ValueError("n_steps must be >= 2")
        if self.population_feedback not in _FEEDBACK:
            raise ValueError(f"population_feedback must be one of {sorted(_FEEDBACK)}")
        if self.engine not in ("exact", "rk4"):
            raise ValueError("engine must be 'exact' or 'rk4'")
        if self.time_axis not in ("omega_n_t", "raw"):
            raise ValueError("time_axis must be 'omega_n_t' or 'raw'")
        object.__setattr__(self, "initial", tuple(float(s) for s in self.initial))
        initial_rho(self.initial)


@dataclass(frozen=True)
class TrajectoryState:
    t: float
    omega_n_t: float
    rho: np.ndarray
    trace: float
    p1: float
    p2: float
    p1_raw: float
    p2_raw: float

    columns = ("omega_n_t", "p1", "p2", "p1_raw", "p2_raw", "trace")

    def row(self):
        return (self.omega_n_t, self.p1, self.p2, self.p1_raw, self.p2_raw, self.trace)


def initial_rho(sigma_pair) -> np.ndarray:
    s1, s2 = sigma_pair
    if s1 == 1 and s2 == -1:
        return np.array([[1, 0], [0, 0]], dtype=complex)
    if s1 == -1 and s2 == 1:
        return np.array([[0, 0], [0, 1]], dtype=complex)
    if s1 == 1 and s2 == 1:
        raise ValueError(
            "both qubits excited does not fit the single-excitation basis; "
            "use nonreciprocity.both_excited_populations for the two-run construction"
        )
    raise ValueError(f"initial sigma_z pair {sigma_pair} has no excitation to evolve")


def _time_grid(m: EffectiveModel, spec: EvolveSpec):
    tau = np.linspace(0.0, spec.t_max, spec.n_steps)
    if spec.time_axis == "raw":
        return tau, tau * m.omega_n
    if m.omega_n == 0:
        raise ValueError("Omega_n = 0: the Omega_n*t axis is undefined; use time_axis='raw'")
    return tau / m.omega_n, tau


def _taylor_expm(a: np.ndarray) -> np.ndarray:
    """exp(a) by scaling and squaring with a degree-18 Taylor polynomial."""
    nrm = np.linalg.norm(a, 1)
    s = max(0, int(math.ceil(math.log2(nrm / 0.5)))) if nrm > 0.5 else 0
    b = a / (2**s)
    term = np.eye(a.shape[0], dtype=complex)
    out = term.copy()
    for k in range(1, 19):
        term = term @ b / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def _eigen_propagator(h):
    w, p = np.linalg.eig(h)
    cond = np.linalg.cond(p)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise IllConditionedEigenbasis(f"eigenvector condition number {cond:.3g}")
    return w, p, np.linalg.inv(p)


def propagator(m_or_h, t) -> np.ndarray:
    """V(t) = exp(-i H t) for scalar or array ``t`` (returns (..., 2, 2))."""
    h = np.asarray(m_or_h.h_non if isinstance(m_or_h, EffectiveModel) else m_or_h, dtype=complex)
    t = np.asarray(t, dtype=float)
    try:
        w, p, pinv = _eigen_propagator(h)
    except IllConditionedEigenbasis:
        flat = np.array([_taylor_expm(-1j * h * tk) for tk in t.ravel()])
        return flat.reshape(t.shape + (2, 2))
    # overflow under strong gain surfaces as NonFiniteState in the caller
    with np.errstate(over="ignore", invalid="ignore"):
        phases = np.exp(-1j * w * t[..., None])
        return np.einsum("ij,...j,jk->...ik", p, phases, pinv)


def _rhs(h, hd, rho):
    return -1j * (h @ rho - rho @ hd)


def _rk4_substeps(h, dt, requested):
    if requested:
        return int(requested)
    # the generator's scale is set by differences of eigenvalues, not by tr(H)
    shifted = h - 0.5 * np.trace(h).real * np.eye(2)
    scale = 2 * np.linalg.norm(shifted, 2)
    return max(1, int(math.ceil(dt * scale / RK4_STEP_SCALE)))


def _check_finite(rho, step):
    if not np.all(np.isfinite(rho)):
        raise NonFiniteState(step)


def _evolve_rho(m: EffectiveModel, spec: EvolveSpec):
    """Return (raw times, Omega_n*t, rho array (n, 2, 2))."""
    t, tau = _time_grid(m, spec)
    rho0 = initial_rho(spec.initial)
    feedback = _FEEDBACK[spec.population_feedback] == "self_consistent"
    h = np.asarray(m.h_non)

    if spec.engine == "exact" and not feedback:
        v = propagator(h, t)
        rhos = v @ rho0 @ np.conj(np.swapaxes(v, -1, -2))
        for k, r in enumerate(rhos):
            _check_finite(r, k)
        return t, tau, rhos

    rhos = np.empty((len(t), 2, 2), dtype=complex)
    rhos[0] = rho0
    rho = rho0.copy()
    dt = t[1] - t[0]
    n_sub = _rk4_substeps(h, dt, spec.rk4_substeps)
    hstep = dt / n_sub
    for k in range(1, len(t)):
        if feedback:
            h = _feedback_hamiltonian(m, rho)
            if spec.engine == "exact":
                v = propagator(h, dt)
                rho = v @ rho @ v.conj().T
                _check_finite(rho, k)
                rhos[k] = rho
                continue
        hd = h.conj().T
        for _ in range(n_sub):
            k1 = _rhs(h, hd, rho)
            k2 = _rhs(h, hd, rho + 0.5 * hstep * k1)
            k3 = _rhs(h, hd, rho + 0.5 * hstep * k2)
            k4 = _rhs(h, hd, rho + hstep * k3)
            rho = rho + (hstep / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        _check_finite(rho, k)
        rhos[k] = rho
    return t, tau, rhos


def _feedback_hamiltonian(m: EffectiveModel, rho):
    """Rebuild H with sigma_z^(j) = 2 p_j,raw - 1 (not part of the frozen model)."""
    p1, p2 = rho[0, 0].real, rho[1, 1].real
    sz = (float(np.clip(2 * p1 - 1, -1, 1)), float(np.clip(2 * p2 - 1, -1, 1)))
    return np.asarray(derive_effective_model(replace(m.params, sigma_z=sz)).h_non)


def _states(t, tau, rhos):
    out = []
    for tk, sk, r in zip(t, tau, rhos):
        tr = float((r[0, 0] + r[1, 1]).real)
        p1r, p2r = float(r[0, 0].real), float(r[1, 1].real)
        out.append(TrajectoryState(float(tk), float(sk), r, tr, p1r / tr, p2r / tr, p1r, p2r))
    return out


def evolve(m: EffectiveModel, spec: EvolveSpec = EvolveSpec()) -> list[TrajectoryState]:
    """Integrate the no-jump master equation and return the trajectory.

    Raises
    ------
    NonFiniteState
        If the density matrix overflows; ``.step`` holds the output index.
    """
    return _states(*_evolve_rho(m, spec))


def trajectory_arrays(states) -> dict[str, np.ndarray]:
    cols = {name: np.array([getattr(s, name) for s in states]) for name in TrajectoryState.columns}
    cols["t"] = np.array([s.t for s in states])
    cols["rho"] = np.array([s.rho for s in states])
    return cols


def steady_populations(m: EffectiveModel) -> tuple[float, float]:
    """Long-time normalized populations, set by the slowest-decaying eigenmode."""
    sp = eigenmodes(m)
    if abs(sp.omega_plus.imag - sp.omega_minus.imag) < 1e-9:
        raise DegenerateDecay("eigenmodes decay at equal rates; the long-time state is not unique")
    k = 0 if sp.omega_plus.imag > sp.omega_minus.imag else 1
    v = sp.eigvecs[:, k]
    w = np.abs(v) ** 2
    w = w / w.sum()
    return float(w[0]), float(w[1])
