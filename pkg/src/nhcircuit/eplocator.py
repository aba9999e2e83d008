"""Locate level degeneracies, damping degeneracies and exceptional points.

A point of the discriminant ``R + i I`` with ``I = 0`` is classified by the
sign of ``R``:

* ``R < 0``  -- level degeneracy (equal energies, split damping rates)
* ``R > 0``  -- damping degeneracy (equal damping rates, split energies)
* ``R = 0``  -- exceptional point (eigenvalues and eigenvectors coalesce)

In one dimension the ``I = 0`` set is a set of points, found by bisection. In
two dimensions it is a contour, traced cell by cell (marching squares); along
each contour segment where ``R`` changes sign an exceptional point is refined
by nested bisection.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import CircuitParams, derive_effective_model
from .spectrum import branch_sqrt, discriminant
from .sweep import SweepAxis, apply_axis

TOL_DISC = 1e-9
MAX_DEPTH = 80


class DegeneracyKind(str, enum.Enum):
    LEVEL = "LevelDegeneracy"
    DAMPING = "DampingDegeneracy"
    EXCEPTIONAL = "ExceptionalPoint"


@dataclass(frozen=True)
class DegeneracyLocus:
    kind: DegeneracyKind
    location: tuple[float, ...]
    axes: tuple[str, ...]
    residuals: tuple[float, float]  # (|R|, |I|) at the refined point, MHz^2
    refinement_width: tuple[float, ...]

    def row(self):
        a1 = self.location[0]
        a2 = self.location[1] if len(self.location) > 1 else float("nan")
        return (self.kind.value, a1, a2, self.residuals[0], self.residuals[1], max(self.refinement_width))

    columns = ("kind", "axis1", "axis2", "R_residual", "I_residual", "bracket_width")


def classify(r, i, tol_disc=TOL_DISC) -> DegeneracyKind | None:
    if abs(i) > tol_disc:
        return None
    if abs(r) <= tol_disc:
        return DegeneracyKind.EXCEPTIONAL
    return DegeneracyKind.LEVEL if r < 0 else DegeneracyKind.DAMPING


class _Disc:
    """Discriminant as a function of axis coordinates, with a small memo."""

    def __init__(self, base: CircuitParams, names):
        self.base = base
        self.names = tuple(names)
        self.calls = 0

    def params(self, *coords):
        p = self.base
        for name, x in zip(self.names, coords):
            p = apply_axis(p, name, x)
        return p

    def __call__(self, *coords):
        self.calls += 1
        return discriminant(derive_effective_model(self.params(*coords)))


def _sign(v, tol):
    return 0 if abs(v) <= tol else (1 if v > 0 else -1)


def _bisect(f, lo, hi, f_lo, tol_f, max_depth=MAX_DEPTH, x_tol=0.0):
    """Plain bisection on a sign change of scalar ``f`` in [lo, hi]; returns (x, width)."""
    s_lo = math.copysign(1.0, f_lo)
    for _ in range(max_depth):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = f(mid)
        if abs(fm) <= tol_f and (hi - lo) <= x_tol:
            lo = hi = mid
            break
        if fm == 0:
            lo = hi = mid
            break
        if math.copysign(1.0, fm) == s_lo:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    return x, hi - lo


def find_degeneracies_1d(base: CircuitParams, axis: SweepAxis, n_grid: int = 401,
                         tol_disc: float = TOL_DISC) -> list[DegeneracyLocus]:
    """Find and classify zeros of ``I`` (and EP candidates) along one axis.

    Sign changes of ``I`` on an ``n_grid``-point grid are refined by bisection and
    classified by ``R`` at the refined point. Where ``I`` vanishes identically on
    a stretch of the sweep, sign changes of ``R`` along that stretch are
    refined as exceptional-point candidates. An empty list means no bracket was
    found.
    """
    if n_grid < 16:
        raise ValueError("n_grid must be >= 16")
    f = _Disc(base, (axis.name,))
    lo, hi = axis.bounds
    xs = np.linspace(lo, hi, n_grid)
    vals = np.array([f(x) for x in xs])
    rs, is_ = vals[:, 0], vals[:, 1]
    span = hi - lo
    x_tol = 1e-13 * max(span, 1.0)

    loci = []
    for k in range(n_grid - 1):
        s0, s1 = _sign(is_[k], tol_disc), _sign(is_[k + 1], tol_disc)
        if s0 * s1 < 0:
            x, w = _bisect(lambda x: f(x)[1], xs[k], xs[k + 1], is_[k], tol_disc * 1e-3, x_tol=x_tol)
            r, i = f(x)
            kind = classify(r, i, tol_disc)
            if kind is not None:
                loci.append(DegeneracyLocus(kind, (x,), (axis.name,), (abs(r), abs(i)), (w,)))
        elif s0 == 0 and s1 == 0 and rs[k] * rs[k + 1] < 0:
            x, w = _bisect(lambda x: f(x)[0], xs[k], xs[k + 1], rs[k], tol_disc * 1e-3, x_tol=x_tol)
            r, i = f(x)
            if abs(i) <= tol_disc and abs(r) <= tol_disc:
                loci.append(DegeneracyLocus(DegeneracyKind.EXCEPTIONAL, (x,), (axis.name,), (abs(r), abs(i)), (w,)))

    # isolated grid nodes that sit exactly on I = 0 between nonzero neighbours
    for k in range(1, n_grid - 1):
        if _sign(is_[k], tol_disc) == 0 and _sign(is_[k - 1], tol_disc) * _sign(is_[k + 1], tol_disc) < 0:
            kind = classify(rs[k], is_[k], tol_disc)
            loci.append(DegeneracyLocus(kind, (xs[k],), (axis.name,), (abs(rs[k]), abs(is_[k])), (0.0,)))

    return _dedupe(sorted(loci, key=lambda L: L.location), (x_tol * 10,))


def _dedupe(loci, scale):
    out = []
    for L in loci:
        dup = False
        for k, M in enumerate(out):
            if M.kind == L.kind and all(abs(a - b) <= s for a, b, s in zip(L.location, M.location, scale)):
                if max(L.residuals) < max(M.residuals):
                    out[k] = L
                dup = True
                break
        if not dup:
            out.append(L)
    return out


# --- 2-D -------------------------------------------------------------------

def _cell_contour_points(xs, ys, ivals, i, j, tol):
    """Points of the I = 0 contour on the boundary of cell (i, j), in cyclic order."""
    corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
    pts = []
    for k in range(4):
        a, b = corners[k], corners[(k + 1) % 4]
        va, vb = ivals[a], ivals[b]
        sa, sb = _sign(va, tol), _sign(vb, tol)
        if sa == 0:
            pts.append(("node", a, (xs[a[0]], ys[a[1]])))
        if sa * sb < 0:
            pts.append(("edge", (a, b), None))
    return pts


def find_ep_2d(base: CircuitParams, axis1: SweepAxis, axis2: SweepAxis, n_grid: int | None = None,
               tol_disc: float = TOL_DISC) -> list[DegeneracyLocus]:
    """Trace the ``I = 0`` contour on a 2-D grid and return exceptional points on it.

    ``n_grid`` resamples both axes on ``n_grid`` points between their bounds;
    when ``None`` the axis values are used as given. Whole grid lines on which
    ``I`` vanishes identically are handled as degenerate contours and searched
    for ``R`` sign changes directly.
    """
    if n_grid is not None:
        axis1, axis2 = axis1.with_num(n_grid), axis2.with_num(n_grid)
    xs, ys = axis1.array, axis2.array
    f = _Disc(base, (axis1.name, axis2.name))
    vals = np.array([[f(x, y) for y in ys] for x in xs])
    rvals, ivals = vals[..., 0], vals[..., 1]
    hx = (xs[-1] - xs[0]) / max(len(xs) - 1, 1)
    hy = (ys[-1] - ys[0]) / max(len(ys) - 1, 1)
    x_tol, y_tol = 1e-13 * max(abs(hx) * len(xs), 1.0), 1e-13 * max(abs(hy) * len(ys), 1.0)

    edge_cache = {}

    def edge_point(a, b):
        key = (a, b) if a < b else (b, a)
        if key not in edge_cache:
            (ia, ja), (ib, jb) = key
            if ia == ib:  # varies along axis2
                x = xs[ia]
                y, _ = _bisect(lambda y: f(x, y)[1], ys[ja], ys[jb], ivals[key[0]], tol_disc * 1e-3, x_tol=y_tol)
            else:
                y = ys[ja]
                x, _ = _bisect(lambda x: f(x, y)[1], xs[ia], xs[ib], ivals[key[0]], tol_disc * 1e-3, x_tol=x_tol)
            edge_cache[key] = (x, y)
        return edge_cache[key]

    loci = []
    seen_segments = set()
    for i in range(len(xs) - 1):
        for j in range(len(ys) - 1):
            raw = _cell_contour_points(xs, ys, ivals, i, j, tol_disc)
            if len(raw) < 2:
                continue
            pts = []
            for kind, ref, xy in raw:
                pts.append((ref, xy if kind == "node" else edge_point(*ref)))
            if len(pts) == 2:
                segs = [(pts[0], pts[1])]
            elif len(pts) == 4 and all(k == "edge" for k, _, _ in raw):
                # saddle: pair crossings according to the sign at the cell centre
                cx, cy = 0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])
                s_center = _sign(f(cx, cy)[1], tol_disc)
                s_corner = _sign(ivals[i, j], tol_disc)
                if s_center == s_corner:
                    segs = [(pts[0], pts[1]), (pts[2], pts[3])]
                else:
                    segs = [(pts[3], pts[0]), (pts[1], pts[2])]
            else:
                segs = [(pts[k], pts[(k + 1) % len(pts)]) for k in range(len(pts))]

            for (ra, pa), (rb, pb) in segs:
                key = tuple(sorted((str(ra), str(rb))))
                if key in seen_segments:
                    continue
                seen_segments.add(key)
                ep = _ep_on_segment(f, pa, pb, (hx, hy), tol_disc)
                if ep is not None:
                    loci.append(ep)

    loci = [L for L in loci if L.residuals[0] <= tol_disc and L.residuals[1] <= tol_disc]
    loci = _dedupe(sorted(loci, key=lambda L: L.location), (abs(hx), abs(hy)))
    return sorted(loci, key=lambda L: L.location)


def _project_to_contour(f, p, normal, half_width, tol):
    """Move ``p`` along ``normal`` onto I = 0 by bisection; None if no sign change."""
    i0 = f(*p)[1]
    if abs(i0) <= tol:
        return p, 0.0
    ends = [(p[0] - normal[0] * half_width, p[1] - normal[1] * half_width),
            (p[0] + normal[0] * half_width, p[1] + normal[1] * half_width)]
    for e in ends:
        ie = f(*e)[1]
        if ie * i0 < 0:
            t, w = _bisect(lambda t: f(p[0] + t * (e[0] - p[0]), p[1] + t * (e[1] - p[1]))[1],
                           0.0, 1.0, i0, tol * 1e-3, x_tol=1e-15)
            return (p[0] + t * (e[0] - p[0]), p[1] + t * (e[1] - p[1])), w * half_width
    return None


def _ep_on_segment(f, pa, pb, h, tol):
    ra, ia = f(*pa)
    rb, ib = f(*pb)
    if abs(ra) <= tol and abs(ia) <= tol:
        return _locus(f, pa, (0.0, 0.0))
    if abs(rb) <= tol and abs(ib) <= tol:
        return _locus(f, pb, (0.0, 0.0))
    if ra * rb >= 0:
        return None

    hx, hy = abs(h[0]) or 1.0, abs(h[1]) or 1.0
    # work in grid-scaled coordinates so that both axes have unit spacing
    dx, dy = (pb[0] - pa[0]) / hx, (pb[1] - pa[1]) / hy
    length = math.hypot(dx, dy) or 1.0
    normal = (-dy / length * hx, dx / length * hy)

    def on_contour(t):
        p = (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))
        q = _project_to_contour(f, p, normal, 1.0, tol)
        return q

    lo, hi, r_lo = 0.0, 1.0, ra
    point, width = None, 1.0
    for _ in range(MAX_DEPTH):
        mid = 0.5 * (lo + hi)
        q = on_contour(mid)
        if q is None:
            point = None
            break
        point, _ = q
        rm = f(*point)[0]
        if abs(rm) <= tol * 1e-3 or hi - lo < 1e-15:
            width = hi - lo
            break
        if (rm > 0) == (r_lo > 0):
            lo, r_lo = mid, rm
        else:
            hi = mid
        width = hi - lo

    if point is None:
        # contour leaves the projection window; polish the linear estimate instead
        t0 = ra / (ra - rb)
        point = _newton_polish(f, (pa[0] + t0 * (pb[0] - pa[0]), pa[1] + t0 * (pb[1] - pa[1])), (hx, hy), tol)
        if point is None:
            return None
    elif max(abs(v) for v in f(*point)) > tol:
        polished = _newton_polish(f, point, (hx, hy), tol)
        point = polished if polished is not None else point
    return _locus(f, point, (width * abs(pb[0] - pa[0]), width * abs(pb[1] - pa[1])))


def _newton_polish(f, p, h, tol, max_iter=50):
    """Newton iteration on (R, I) = 0 with a finite-difference Jacobian."""
    x = np.array(p, dtype=float)
    scale = np.array(h, dtype=float)
    for _ in range(max_iter):
        fx = np.array(f(*x))
        if np.max(np.abs(fx)) <= tol * 1e-3:
            return tuple(x)
        jac = np.empty((2, 2))
        for k in range(2):
            step = np.zeros(2)
            step[k] = 1e-7 * scale[k]
            jac[:, k] = (np.array(f(*(x + step))) - np.array(f(*(x - step)))) / (2 * step[k])
        try:
            dx = np.linalg.solve(jac, -fx)
        except np.linalg.LinAlgError:
            return None
        x = x + dx
        if not np.all(np.isfinite(x)):
            return None
    fx = np.array(f(*x))
    return tuple(x) if np.max(np.abs(fx)) <= tol else None


def _locus(f, point, width):
    r, i = f(*point)
    return DegeneracyLocus(DegeneracyKind.EXCEPTIONAL, tuple(float(v) for v in point), f.names,
                           (abs(r), abs(i)), tuple(float(w) for w in width))


def eigenvector_angle(h) -> float:
    """Angle (radians) between the two right eigenvectors of a 2x2 matrix.

    Zero at an exceptional point, pi/2 for a normal matrix with distinct
    eigenvalues.
    """
    h = np.asarray(h, dtype=complex)
    a, b, c, d = h[0, 0], h[0, 1], h[1, 0], h[1, 1]
    s = branch_sqrt(((a - d) / 2) ** 2 + b * c)
    vecs = []
    for w in ((a + d) / 2 + s, (a + d) / 2 - s):
        v1 = np.array([b, w - a])
        v2 = np.array([w - d, c])
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        n = np.linalg.norm(v)
        vecs.append(v / n if n > 0 else v)
    u, v = vecs
    overlap = abs(np.vdot(u, v))
    cross = abs(u[0] * v[1] - u[1] * v[0])
    return float(math.atan2(cross, overlap))


def locus_eigenvector_angle(base: CircuitParams, locus: DegeneracyLocus) -> float:
    p = base
    for name, x in zip(locus.axes, locus.location):
        p = apply_axis(p, name, x)
    return eigenvector_angle(derive_effective_model(p).h_non)
