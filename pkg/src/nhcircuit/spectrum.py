"""Complex eigenmodes of the effective Hamiltonian and their splittings.

The eigenvalues of ``h_non`` are::

    omega_pm = tr(h_non) / 2  +-  sqrt(R + i I) / 2

with R and I the real and imaginary parts of ``4 * [((h00 - h11)/2)**2 + h01 h10]``.
The square root follows a fixed branch rule: principal root (``Re >= 0``), and
``Im >= 0`` when the real part vanishes. Hence ``omega_plus`` is always the
upper energy level.

The level and damping splittings are reported on the figure scale::

    delta_e     = 2 Re sqrt(R + i I)
    delta_gamma = 2 Im sqrt(R + i I)

which is twice the gap between the two eigenvalues. ``delta_e >= 0``
everywhere and ``delta_gamma`` carries the sign.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDetuning, NonPositiveResonatorLoss, ResidualCheckFailed
from .model import CircuitParams, EffectiveModel, derive_effective_model
from .sweep import SweepAxis

RESIDUAL_TOL = 1e-10
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SpectrumPoint:
    omega_plus: complex
    omega_minus: complex
    r_disc: float
    i_disc: float
    delta_e: float
    delta_gamma: float
    eigvecs: np.ndarray  # columns: right eigenvectors for (omega_plus, omega_minus)


def discriminant(m: EffectiveModel) -> tuple[float, float]:
    """Return (R, I), the real and imaginary parts of the discriminant."""
    dp = m.delta_prime[0] - m.delta_prime[1]
    dg = m.big_gamma[0] - m.big_gamma[1]
    r = dp * dp / 4 - dg * dg / 4 + 4 * m.g_e**2 - 4 * m.omega_n**2
    i = -8 * m.g_e * m.omega_n * np.cos(m.delta_theta) - dg * dp / 2
    return float(r), float(i)


def branch_sqrt(z):
    """Principal square root with ``Im >= 0`` on the negative real axis. Vectorized."""
    s = np.sqrt(np.asarray(z, dtype=complex))
    flip = (s.real == 0) & (s.imag < 0)
    return np.where(flip, -s, s)


def _eigvecs(h, w):
    """Right eigenvectors of stacked 2x2 matrices ``h`` (..., 2, 2) for eigenvalues ``w`` (...)."""
    a, b = h[..., 0, 0], h[..., 0, 1]
    c, d = h[..., 1, 0], h[..., 1, 1]
    v1 = np.stack([b, w - a], axis=-1)
    v2 = np.stack([w - d, c], axis=-1)
    n1 = np.linalg.norm(v1, axis=-1)
    n2 = np.linalg.norm(v2, axis=-1)
    use1 = (n1 >= n2)[..., None]
    v = np.where(use1, v1, v2)
    n = np.maximum(n1, n2)[..., None]
    return v, n


def _spectrum_batch(h, r, i, check=True):
    """Closed-form eigenpairs for a stack of 2x2 matrices, verified against LAPACK."""
    center = 0.5 * (h[..., 0, 0] + h[..., 1, 1])
    s = branch_sqrt(r + 1j * i)
    wp = center + 0.5 * s
    wm = center - 0.5 * s

    vecs = np.empty(h.shape, dtype=complex)
    for k, w in enumerate((wp, wm)):
        v, n = _eigvecs(h, w)
        degenerate = n[..., 0] <= 1e-300
        v = np.where(degenerate[..., None], np.eye(2)[k], v / np.where(n > 0, n, 1.0))
        vecs[..., :, k] = v

    if check:
        nrm = np.maximum(np.linalg.norm(h, axis=(-2, -1)), 1e-300)
        for k, w in enumerate((wp, wm)):
            v = vecs[..., :, k]
            res = np.einsum("...ij,...j->...i", h, v) - w[..., None] * v
            bad = np.linalg.norm(res, axis=-1) > RESIDUAL_TOL * nrm
            if np.any(bad):
                raise ResidualCheckFailed(f"eigenpair residual exceeds {RESIDUAL_TOL} * ||H||")
        direct = np.linalg.eigvals(h)
        # defective matrices perturb eigenvalues by ~sqrt(eps) * ||H||
        tol = RESIDUAL_TOL * nrm + 8 * np.sqrt(_EPS) * nrm
        d_same = np.maximum(abs(direct[..., 0] - wp), abs(direct[..., 1] - wm))
        d_swap = np.maximum(abs(direct[..., 0] - wm), abs(direct[..., 1] - wp))
        if np.any(np.minimum(d_same, d_swap) > tol):
            raise ResidualCheckFailed("closed-form eigenvalues disagree with direct eigendecomposition")
    return wp, wm, s, vecs


def eigenmodes(m: EffectiveModel) -> SpectrumPoint:
    """Eigenvalues, discriminant and splittings of ``m.h_non``."""
    r, i = discriminant(m)
    wp, wm, s, vecs = _spectrum_batch(np.asarray(m.h_non)[None], np.array([r]), np.array([i]))
    return SpectrumPoint(
        omega_plus=complex(wp[0]),
        omega_minus=complex(wm[0]),
        r_disc=r,
        i_disc=i,
        delta_e=float(2 * s[0].real),
        delta_gamma=float(2 * s[0].imag),
        eigvecs=vecs[0],
    )


def track_branches(omegas) -> np.ndarray:
    """Reorder eigenvalue pairs along a sweep so that curves stay continuous.

    ``omegas`` has shape (n, 2). Each point is matched to its predecessor by the
    assignment (keep or swap) with the smaller total complex distance.
    """
    out = np.array(omegas, dtype=complex, copy=True)
    for k in range(1, len(out)):
        prev = out[k - 1]
        keep = abs(out[k, 0] - prev[0]) + abs(out[k, 1] - prev[1])
        swap = abs(out[k, 1] - prev[0]) + abs(out[k, 0] - prev[1])
        if swap < keep:
            out[k] = out[k, ::-1]
    return out


@dataclass
class SpectrumGrid:
    """Spectrum evaluated on ``axis1 x axis2`` (row-major, ``[i, j]`` = axis1[i], axis2[j]).

    Cells where the model could not be built (e.g. a coupler sweep crossing a
    qubit) are flagged in ``mask`` and hold NaN.
    """

    axis1: SweepAxis
    axis2: SweepAxis
    omega_plus: np.ndarray
    omega_minus: np.ndarray
    r_disc: np.ndarray
    i_disc: np.ndarray
    eigvecs: np.ndarray
    mask: np.ndarray

    @property
    def shape(self):
        return self.r_disc.shape

    @property
    def delta_e(self):
        return 2 * branch_sqrt(self.r_disc + 1j * self.i_disc).real

    @property
    def delta_gamma(self):
        return 2 * branch_sqrt(self.r_disc + 1j * self.i_disc).imag

    def point(self, i, j) -> SpectrumPoint | None:
        if self.mask[i, j]:
            return None
        s = branch_sqrt(self.r_disc[i, j] + 1j * self.i_disc[i, j])
        return SpectrumPoint(
            complex(self.omega_plus[i, j]),
            complex(self.omega_minus[i, j]),
            float(self.r_disc[i, j]),
            float(self.i_disc[i, j]),
            float(2 * s.real),
            float(2 * s.imag),
            self.eigvecs[i, j],
        )

    def rows(self):
        """Yield CSV rows: axis1, axis2, re_wp, im_wp, re_wm, im_wm, R, I, dEq, dGq."""
        de, dg = self.delta_e, self.delta_gamma
        for i, x in enumerate(self.axis1.values):
            for j, y in enumerate(self.axis2.values):
                wp, wm = self.omega_plus[i, j], self.omega_minus[i, j]
                yield (x, y, wp.real, wp.imag, wm.real, wm.imag,
                       self.r_disc[i, j], self.i_disc[i, j], de[i, j], dg[i, j])

    columns = ("axis1", "axis2", "re_wp", "im_wp", "re_wm", "im_wm", "R", "I", "dEq", "dGq")


def _models_for_row(base, axis1, axis2, x):
    row = []
    p1 = axis1.apply(base, x)
    for y in axis2.values:
        try:
            row.append(derive_effective_model(axis2.apply(p1, y)))
        except (DegenerateDetuning, NonPositiveResonatorLoss):
            row.append(None)
    return row


def evaluate_models(models):
    """Stack a flat list of EffectiveModel (or None) into h, R, I, mask arrays."""
    n = len(models)
    h = np.zeros((n, 2, 2), dtype=complex)
    r = np.full(n, np.nan)
    i = np.full(n, np.nan)
    mask = np.ones(n, dtype=bool)
    for k, m in enumerate(models):
        if m is None:
            continue
        h[k] = m.h_non
        r[k], i[k] = discriminant(m)
        mask[k] = False
    return h, r, i, mask


def scan_2d(base: CircuitParams, axis1: SweepAxis, axis2: SweepAxis, workers: int = 1) -> SpectrumGrid:
    """Evaluate the spectrum on a dense parameter grid.

    Rows (axis1 values) may be distributed over ``workers`` threads; the result
    is assembled by index, so it does not depend on the worker count.
    """
    xs = axis1.values
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(lambda x: _models_for_row(base, axis1, axis2, x), xs))
    else:
        rows = [_models_for_row(base, axis1, axis2, x) for x in xs]

    flat = [m for row in rows for m in row]
    h, r, i, mask = evaluate_models(flat)
    ok = ~mask
    wp = np.full(len(flat), np.nan + 0j)
    wm = np.full(len(flat), np.nan + 0j)
    vecs = np.full((len(flat), 2, 2), np.nan + 0j)
    if ok.any():
        wp[ok], wm[ok], _, vecs[ok] = _spectrum_batch(h[ok], r[ok], i[ok])

    shape = (len(axis1), len(axis2))
    return SpectrumGrid(
        axis1=axis1,
        axis2=axis2,
        omega_plus=wp.reshape(shape),
        omega_minus=wm.reshape(shape),
        r_disc=r.reshape(shape),
        i_disc=i.reshape(shape),
        eigvecs=vecs.reshape(shape + (2, 2)),
        mask=mask.reshape(shape),
    )


def strict_local_minima(values, mask=None) -> np.ndarray:
    """Indices of interior cells strictly below all eight neighbours."""
    v = np.array(values, dtype=float)
    if mask is not None:
        v[mask] = np.inf
    v[~np.isfinite(v)] = np.inf
    c = v[1:-1, 1:-1]
    is_min = np.isfinite(c)
    n1, n2 = v.shape
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == dj == 0:
                continue
            nb = v[1 + di:n1 - 1 + di, 1 + dj:n2 - 1 + dj]
            is_min &= c < nb
    return np.argwhere(is_min) + 1


def joint_splitting_minima(grid: SpectrumGrid) -> np.ndarray:
    """Cells where level and damping splittings are simultaneously locally smallest.

    Uses ``hypot(delta_e, delta_gamma) = 2 |R + i I|**0.5``; these cells mark the
    neighbourhood of exceptional points on the grid.
    """
    return strict_local_minima(np.hypot(grid.delta_e, grid.delta_gamma), grid.mask)
