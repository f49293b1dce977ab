"""Counting the crossings of two closed trigonometric plane curves.

Pipeline: adaptive closed polylines -> uniform-grid candidate generation ->
strict segment-crossing tests -> 2-D Newton refinement on the parameter
torus -> dedup. Anything that looks non-transversal (refinement failure,
near-singular Jacobian, odd total, overlapping polyline geometry) raises the
``degenerate`` flag instead of guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import TrigCurve, evaluate, evaluate_many, lipschitz_bound, point_radius_bound

TWO_PI = 2.0 * math.pi

_MIN_VERTICES = 64
_SEG_TARGET_FACTOR = 0.02

__all__ = [
    "CountingConfig",
    "IntersectionResult",
    "segment_proper_cross",
    "newton_refine",
    "count_intersections",
    "brute_force_count",
]


@dataclass(frozen=True)
class CountingConfig:
    """Tunables for the crossing counter.

    seg_target is the polyline chord-length target; None resolves to 2% of
    the value-disc radius for the curves' degree. newton_tol is a step size
    in parameter space; dedupe_radius a torus distance.
    """

    seg_target: float | None = None
    newton_tol: float = 1e-12
    dedupe_radius: float = 1e-6
    max_newton_iters: int = 50
    degeneracy_threshold: float = 1e-8

    def __post_init__(self):
        if self.seg_target is not None and not self.seg_target > 0:
            raise ValueError("seg_target must be positive")
        for name in ("newton_tol", "dedupe_radius", "degeneracy_threshold"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_newton_iters < 1:
            raise ValueError("max_newton_iters must be >= 1")

    def resolved_seg_target(self, degree: int) -> float:
        if self.seg_target is not None:
            return self.seg_target
        return _SEG_TARGET_FACTOR * point_radius_bound(degree, 0)


@dataclass
class IntersectionResult:
    """Solution pairs (phi, psi) of f(phi) = g(psi) plus quality diagnostics.

    count == len(solutions); min_abs_det is the smallest |det(f', -g')| over
    the refined roots (inf when there are none); oracle_stable is filled only
    by cross-validation helpers.
    """

    count: int
    solutions: list[tuple[float, float]]
    min_abs_det: float
    degenerate: bool
    oracle_stable: bool | None = None


def _orient(ax, ay, bx, by, cx, cy) -> float:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def segment_proper_cross(p1, p2, q1, q2) -> bool:
    """True iff the open segments p1p2 and q1q2 cross transversally.

    Endpoint touches and collinear overlaps are not proper crossings; a
    zero-length segment is an error.
    """
    p1x, p1y = float(p1[0]), float(p1[1])
    p2x, p2y = float(p2[0]), float(p2[1])
    q1x, q1y = float(q1[0]), float(q1[1])
    q2x, q2y = float(q2[0]), float(q2[1])
    if (p1x == p2x and p1y == p2y) or (q1x == q2x and q1y == q2y):
        raise ValueError("zero-length segment")
    d1 = _orient(p1x, p1y, p2x, p2y, q1x, q1y)
    d2 = _orient(p1x, p1y, p2x, p2y, q2x, q2y)
    d3 = _orient(q1x, q1y, q2x, q2y, p1x, p1y)
    d4 = _orient(q1x, q1y, q2x, q2y, p2x, p2y)
    return d1 * d2 < 0.0 and d3 * d4 < 0.0


def _curve_lists(c: TrigCurve):
    return (c.degree, c.xa.tolist(), c.xb.tolist(), c.ya.tolist(), c.yb.tolist())


def _xy_and_vel(cl, t: float):
    """Position and velocity of a list-form curve at angle t (scalar path)."""
    n, xa, xb, ya, yb = cl
    x = xa[0]
    y = ya[0]
    dx = 0.0
    dy = 0.0
    for j in range(1, n + 1):
        cj = math.cos(j * t)
        sj = math.sin(j * t)
        aj = xa[j]
        bj = xb[j - 1]
        cyj = ya[j]
        dyj = yb[j - 1]
        x += aj * cj + bj * sj
        y += cyj * cj + dyj * sj
        dx += j * (bj * cj - aj * sj)
        dy += j * (dyj * cj - cyj * sj)
    return x, y, dx, dy


def _newton(fl, gl, phi, psi, res_tol, max_iters, degen_thresh):
    """Newton on F(phi, psi) = f(phi) - g(psi); returns (phi, psi, det) or None."""
    for _ in range(max_iters + 1):
        fx, fy, dfx, dfy = _xy_and_vel(fl, phi)
        gx, gy, dgx, dgy = _xy_and_vel(gl, psi)
        rx = fx - gx
        ry = fy - gy
        det = dgx * dfy - dfx * dgy
        if abs(det) < degen_thresh:
            return None
        if math.hypot(rx, ry) <= res_tol:
            return (phi % TWO_PI, psi % TWO_PI, det)
        phi += (rx * dgy - ry * dgx) / det
        psi += (rx * dfy - ry * dfx) / det
    return None


def newton_refine(f: TrigCurve, g: TrigCurve, phi0: float, psi0: float,
                  cfg: CountingConfig | None = None):
    """Refine a crossing seed; returns (phi, psi, det_J) wrapped to the torus,
    or None when iterations run out or the Jacobian turns near-singular."""
    cfg = cfg or CountingConfig()
    scale = point_radius_bound(max(f.degree, g.degree), 0)
    res_tol = 10.0 * cfg.newton_tol * scale
    return _newton(_curve_lists(f), _curve_lists(g), float(phi0), float(psi0),
                   res_tol, cfg.max_newton_iters, cfg.degeneracy_threshold)


def _closed_polyline(c: TrigCurve, m: int):
    phis = np.arange(m + 1, dtype=float) * (TWO_PI / m)
    phis[m] = 0.0  # exact closure
    return evaluate_many(c, phis)


def _segment_boxes(xs: np.ndarray, ys: np.ndarray, inv_cell: float):
    """Per-segment bounding boxes and grid cell ranges, as plain lists."""
    x1 = xs[:-1]
    x2 = xs[1:]
    y1 = ys[:-1]
    y2 = ys[1:]
    bx0 = np.minimum(x1, x2)
    bx1 = np.maximum(x1, x2)
    by0 = np.minimum(y1, y2)
    by1 = np.maximum(y1, y2)
    ix0 = np.floor(bx0 * inv_cell).astype(np.int64)
    ix1 = np.floor(bx1 * inv_cell).astype(np.int64)
    iy0 = np.floor(by0 * inv_cell).astype(np.int64)
    iy1 = np.floor(by1 * inv_cell).astype(np.int64)
    return (
        bx0.tolist(), bx1.tolist(), by0.tolist(), by1.tolist(),
        ix0.tolist(), ix1.tolist(), iy0.tolist(), iy1.tolist(),
    )


def _torus_gap(a: float, b: float) -> float:
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


def count_intersections(f: TrigCurve, g: TrigCurve,
                        cfg: CountingConfig | None = None) -> IntersectionResult:
    """Count the solutions of f(phi) = g(psi) on the parameter torus."""
    if f.degree != g.degree:
        raise ValueError(f"degree mismatch: {f.degree} vs {g.degree}")
    cfg = cfg or CountingConfig()
    seg_target = cfg.resolved_seg_target(f.degree)

    lf = lipschitz_bound(f)
    lg = lipschitz_bound(g)
    if lf == 0.0 and lg == 0.0:
        # two constant maps: distinct points never meet, coincident ones overlap
        pf = evaluate(f, 0.0)
        pg = evaluate(g, 0.0)
        coincident = pf.x == pg.x and pf.y == pg.y
        return IntersectionResult(0, [], math.inf, coincident)
    if lf == 0.0 or lg == 0.0:
        # point versus curve: meets only on a measure-zero set; report no
        # crossings (a transversal crossing needs two moving branches)
        return IntersectionResult(0, [], math.inf, False)

    mf = max(_MIN_VERTICES, math.ceil(TWO_PI * lf / seg_target))
    mg = max(_MIN_VERTICES, math.ceil(TWO_PI * lg / seg_target))
    fxa, fya = _closed_polyline(f, mf)
    gxa, gya = _closed_polyline(g, mg)
    fxs = fxa.tolist()
    fys = fya.tolist()
    gxs = gxa.tolist()
    gys = gya.tolist()

    cell = 2.0 * seg_target
    inv_cell = 1.0 / cell
    _, _, _, _, fix0, fix1, fiy0, fiy1 = _segment_boxes(fxa, fya, inv_cell)
    gbx0, gbx1, gby0, gby1, gix0, gix1, giy0, giy1 = _segment_boxes(gxa, gya, inv_cell)

    # hashed uniform grid over f's segments; keys mix the two cell indices
    grid: dict[int, list[int]] = {}
    for i in range(mf):
        if fxs[i] == fxs[i + 1] and fys[i] == fys[i + 1]:
            continue
        for ix in range(fix0[i], fix1[i] + 1):
            base = ix * 0x1000003
            for iy in range(fiy0[i], fiy1[i] + 1):
                key = base + iy
                bucket = grid.get(key)
                if bucket is None:
                    grid[key] = [i]
                else:
                    bucket.append(i)

    step_f = TWO_PI / mf
    step_g = TWO_PI / mg
    seeds: list[tuple[float, float]] = []
    touch = False
    last_seen = [-1] * mf
    for jseg in range(mg):
        q1x = gxs[jseg]
        q1y = gys[jseg]
        q2x = gxs[jseg + 1]
        q2y = gys[jseg + 1]
        if q1x == q2x and q1y == q2y:
            continue
        bx0 = gbx0[jseg]
        bx1 = gbx1[jseg]
        by0 = gby0[jseg]
        by1 = gby1[jseg]
        for ix in range(gix0[jseg], gix1[jseg] + 1):
            base = ix * 0x1000003
            for iy in range(giy0[jseg], giy1[jseg] + 1):
                bucket = grid.get(base + iy)
                if bucket is None:
                    continue
                for i in bucket:
                    if last_seen[i] == jseg:
                        continue
                    last_seen[i] = jseg
                    p1x = fxs[i]
                    p1y = fys[i]
                    p2x = fxs[i + 1]
                    p2y = fys[i + 1]
                    # reject disjoint boxes before the orientation tests
                    if p1x > bx1 and p2x > bx1:
                        continue
                    if p1x < bx0 and p2x < bx0:
                        continue
                    if p1y > by1 and p2y > by1:
                        continue
                    if p1y < by0 and p2y < by0:
                        continue
                    d1 = _orient(p1x, p1y, p2x, p2y, q1x, q1y)
                    d2 = _orient(p1x, p1y, p2x, p2y, q2x, q2y)
                    d3 = _orient(q1x, q1y, q2x, q2y, p1x, p1y)
                    d4 = _orient(q1x, q1y, q2x, q2y, p2x, p2y)
                    if d1 * d2 < 0.0 and d3 * d4 < 0.0:
                        t = d3 / (d3 - d4)
                        s = d1 / (d1 - d2)
                        seeds.append(((i + t) * step_f, (jseg + s) * step_g))
                    elif d1 == 0.0 or d2 == 0.0 or d3 == 0.0 or d4 == 0.0:
                        # exact touch or collinear overlap: non-generic geometry
                        touch = True

    fl = _curve_lists(f)
    gl = _curve_lists(g)
    scale = point_radius_bound(f.degree, 0)
    res_tol = 10.0 * cfg.newton_tol * scale
    failed = False
    roots: list[tuple[float, float, float]] = []
    dedupe = cfg.dedupe_radius
    for phi0, psi0 in seeds:
        hit = _newton(fl, gl, phi0, psi0, res_tol, cfg.max_newton_iters,
                      cfg.degeneracy_threshold)
        if hit is None:
            failed = True
            continue
        phi, psi, det = hit
        for rp, rq, _ in roots:
            if _torus_gap(phi, rp) <= dedupe and _torus_gap(psi, rq) <= dedupe:
                break
        else:
            roots.append((phi, psi, det))

    roots.sort(key=lambda rec: (rec[0], rec[1]))
    solutions = [(phi, psi) for phi, psi, _ in roots]
    min_abs_det = min((abs(det) for _, _, det in roots), default=math.inf)
    count = len(solutions)
    degenerate = (
        touch
        or failed
        or count % 2 == 1
        or min_abs_det < cfg.degeneracy_threshold
    )
    return IntersectionResult(count, solutions, min_abs_det, degenerate)


def _polyline_cross_count(f: TrigCurve, g: TrigCurve, m: int) -> int:
    """Strict crossing count of the two closed m-vertex polylines (vectorized)."""
    fxs, fys = evaluate_many(f, np.arange(m, dtype=float) * (TWO_PI / m))
    gxs, gys = evaluate_many(g, np.arange(m, dtype=float) * (TWO_PI / m))
    p1x = fxs
    p1y = fys
    p2x = np.roll(fxs, -1)
    p2y = np.roll(fys, -1)
    q1x = gxs
    q1y = gys
    q2x = np.roll(gxs, -1)
    q2y = np.roll(gys, -1)
    fminx = np.minimum(p1x, p2x)
    fmaxx = np.maximum(p1x, p2x)
    fminy = np.minimum(p1y, p2y)
    fmaxy = np.maximum(p1y, p2y)
    gminx = np.minimum(q1x, q2x)
    gmaxx = np.maximum(q1x, q2x)
    gminy = np.minimum(q1y, q2y)
    gmaxy = np.maximum(q1y, q2y)

    total = 0
    block = 2048
    for lo in range(0, m, block):
        hi = min(lo + block, m)
        overlap = (
            (fminx[lo:hi, None] <= gmaxx[None, :])
            & (fmaxx[lo:hi, None] >= gminx[None, :])
            & (fminy[lo:hi, None] <= gmaxy[None, :])
            & (fmaxy[lo:hi, None] >= gminy[None, :])
        )
        ii, jj = np.nonzero(overlap)
        if ii.size == 0:
            continue
        ii = ii + lo
        rx = p2x[ii] - p1x[ii]
        ry = p2y[ii] - p1y[ii]
        d1 = rx * (q1y[jj] - p1y[ii]) - ry * (q1x[jj] - p1x[ii])
        d2 = rx * (q2y[jj] - p1y[ii]) - ry * (q2x[jj] - p1x[ii])
        sx = q2x[jj] - q1x[jj]
        sy = q2y[jj] - q1y[jj]
        d3 = sx * (p1y[ii] - q1y[jj]) - sy * (p1x[ii] - q1x[jj])
        d4 = sx * (p2y[ii] - q1y[jj]) - sy * (p2x[ii] - q1x[jj])
        total += int(np.count_nonzero((d1 * d2 < 0.0) & (d3 * d4 < 0.0)))
    return total


def brute_force_count(f: TrigCurve, g: TrigCurve, M: int = 256) -> tuple[int, bool]:
    """Resolution-doubling crossing oracle.

    Counts strict polyline crossings at M, 2M and 4M vertices; stable means
    all three agree (the agreed count is returned, else the finest one).
    """
    if M < 256:
        raise ValueError("oracle resolution must be at least 256 vertices")
    counts = [_polyline_cross_count(f, g, m) for m in (M, 2 * M, 4 * M)]
    stable = counts[0] == counts[1] == counts[2]
    return counts[2], stable
