"""Classification of pyramid foot points by 4-cycle existence over heights.

For a fixed base triangle and reflection order, a foot point O is scanned
over apex heights h. Existence as a function of h falls into one of three
classes: above a threshold for all sampled heights (alpha), inside a single
bounded window (beta), or nowhere (gamma). Thresholds are located by
bisection. A grid of such scans over a rectangle of foot points forms the
map of cycles; the 2D overlay construction supplies the straight lines that
organize that map.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .cycles import ReflectionOrder, find_cycle_for_order, validate_order
from .errors import (
    DegenerateGeometryError,
    IdentityRotationError,
    OverlayError,
    UnclassifiableScanError,
)
from .geometry import Tetrahedron
from .linalg import is_exact

Point2 = Tuple[float, float]

GEOMETRIC_SAMPLES = 64
UNIFORM_SAMPLES = 64


def _dist2d(p: Point2, q: Point2) -> float:
    return math.hypot(float(p[0]) - float(q[0]), float(p[1]) - float(q[1]))


def base_diameter(base: Sequence[Point2]) -> float:
    a, b, c = base
    return max(_dist2d(a, b), _dist2d(a, c), _dist2d(b, c))


def cycle_exists(base: Sequence[Point2], foot: Point2, h: float,
                 order: ReflectionOrder) -> bool:
    """True iff the pyramid with apex at height h over `foot` has a
    certified 4-cycle for the given order."""
    if h <= 0:
        raise ValueError("height must be positive")
    order = validate_order(order)
    base_f = [(float(p[0]), float(p[1])) for p in base]
    foot_f = (float(foot[0]), float(foot[1]))
    tet = Tetrahedron.from_base_foot_height(base_f, foot_f, float(h))
    try:
        return find_cycle_for_order(tet, order) is not None
    except IdentityRotationError:
        # Near-flat pyramids can leave the axis numerically indeterminate;
        # no certifiable cycle exists there.
        return False


@dataclass(frozen=True)
class HeightClassification:
    """Existence class of a (base, foot, order) triple over heights.

    kind is "alpha" (exists at every sample above a), "beta" (exists on a
    single window (a, b)) or "gamma" (never). a and b sit at bisection
    midpoints, accurate to tol.
    """

    kind: str
    a: Optional[float]
    b: Optional[float]
    order: ReflectionOrder
    foot: Point2
    h_max: float
    tol: float


def _bisect_boundary(exists, lo: float, hi: float, lo_exists: bool,
                     tol: float) -> float:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if exists(mid) == lo_exists:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def height_scan(base: Sequence[Point2], foot: Point2, order: ReflectionOrder,
                h_max: Optional[float] = None, tol: Optional[float] = None,
                n_geometric: int = GEOMETRIC_SAMPLES,
                n_uniform: int = UNIFORM_SAMPLES) -> HeightClassification:
    """Classify cycle existence over h in (0, h_max] for one foot point.

    Samples on a merged geometric and uniform height grid, then refines
    each existence boundary by bisection to width tol. More than one
    existence interval raises UnclassifiableScanError with the raw samples
    attached.
    """
    order = validate_order(order)
    diam = base_diameter(base)
    if h_max is None:
        h_max = 50.0 * diam
    if tol is None:
        tol = 1e-3 * diam
    if h_max <= 0 or tol <= 0:
        raise ValueError("h_max and tol must be positive")

    h_lo = 1e-3 * diam
    ratio = (h_max / h_lo) ** (1.0 / max(n_geometric - 1, 1))
    heights = sorted(set(
        [h_lo * ratio ** i for i in range(n_geometric)]
        + [h_max * (i + 1) / n_uniform for i in range(n_uniform)]
    ))

    cache = {}

    def exists(h: float) -> bool:
        hit = cache.get(h)
        if hit is None:
            hit = cycle_exists(base, foot, h, order)
            cache[h] = hit
        return hit

    flags = [exists(h) for h in heights]
    runs = []
    i = 0
    while i < len(flags):
        if flags[i]:
            j = i
            while j + 1 < len(flags) and flags[j + 1]:
                j += 1
            runs.append((i, j))
            i = j + 1
        else:
            i += 1

    if not runs:
        return HeightClassification("gamma", None, None, order, tuple(foot),
                                    h_max, tol)
    if len(runs) > 1:
        raise UnclassifiableScanError(
            f"{len(runs)} existence intervals detected at foot {tuple(foot)}",
            samples=list(zip(heights, flags)))

    i0, i1 = runs[0]
    lo = heights[i0 - 1] if i0 > 0 else 0.0
    a = _bisect_boundary(exists, lo, heights[i0], False, tol)
    if i1 == len(heights) - 1:
        return HeightClassification("alpha", a, None, order, tuple(foot),
                                    h_max, tol)
    b = _bisect_boundary(exists, heights[i1], heights[i1 + 1], True, tol)
    return HeightClassification("beta", a, b, order, tuple(foot), h_max, tol)


# ---------------------------------------------------------------------------
# map grid

@dataclass(frozen=True)
class MapCell:
    foot: Point2
    result: Optional[HeightClassification]
    error: Optional[str]

    @property
    def kind(self) -> str:
        return self.result.kind if self.result is not None else "error"


@dataclass(frozen=True)
class CycleMapGrid:
    region: Tuple[float, float, float, float]  # x0, y0, x1, y1
    nx: int
    ny: int
    order: ReflectionOrder
    cells: Tuple[MapCell, ...]  # row major, y varying slowest

    def cell(self, ix: int, iy: int) -> MapCell:
        return self.cells[iy * self.nx + ix]


def _scan_cell(args):
    base, foot, order, h_max, tol = args
    try:
        result = height_scan(base, foot, order, h_max=h_max, tol=tol)
        return MapCell(foot, result, None)
    except UnclassifiableScanError as exc:
        return MapCell(foot, None, str(exc))
    except Exception as exc:  # per-cell isolation, recorded not raised
        return MapCell(foot, None, f"{type(exc).__name__}: {exc}")


def build_map(base: Sequence[Point2], region: Tuple[float, float, float, float],
              nx: int, ny: int, order: ReflectionOrder,
              h_max: Optional[float] = None,
              tol: Optional[float] = None) -> CycleMapGrid:
    """Height-scan every cell center of an nx-by-ny grid over `region`.

    Cell errors (including unclassifiable scans) are recorded per cell.
    Worker parallelism is capped by the BILLIARDS_THREADS environment
    variable; the assembled grid is deterministic either way.
    """
    if nx < 1 or ny < 1:
        raise ValueError("grid resolution must be at least 1x1")
    order = validate_order(order)
    x0, y0, x1, y1 = region
    base_f = [(float(p[0]), float(p[1])) for p in base]
    tasks = []
    for iy in range(ny):
        for ix in range(nx):
            ox = x0 + (x1 - x0) * (ix + 0.5) / nx
            oy = y0 + (y1 - y0) * (iy + 0.5) / ny
            tasks.append((base_f, (ox, oy), order, h_max, tol))
    workers = int(os.environ.get("BILLIARDS_THREADS", "1"))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = tuple(pool.map(_scan_cell, tasks, chunksize=8))
    else:
        cells = tuple(_scan_cell(t) for t in tasks)
    return CycleMapGrid(tuple(float(v) for v in region), nx, ny, order, cells)


# ---------------------------------------------------------------------------
# overlay construction

def _sub2(p, q):
    return (p[0] - q[0], p[1] - q[1])


def _cross2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _dot2(u, v):
    return u[0] * v[0] + u[1] * v[1]


def _foot_of_perpendicular(p, q1, q2):
    """Foot of the perpendicular from p onto the line through q1, q2."""
    d = _sub2(q2, q1)
    dd = _dot2(d, d)
    if dd == 0:
        raise DegenerateGeometryError("degenerate line")
    t = _dot2(_sub2(p, q1), d) / dd
    return (q1[0] + t * d[0], q1[1] + t * d[1])


@dataclass(frozen=True)
class OverlayConstruction:
    """The straight-line scaffold drawn over the base triangle.

    c_prime is the half-turn image of C about the midpoint of AB; f and g
    are the altitude feet from B and A in ABC; f_prime and g_prime their
    analogues in ABC'. The lines ff' and gg' are parallel.
    """

    a: Point2
    b: Point2
    c: Point2
    c_prime: Point2
    f: Point2
    g: Point2
    f_prime: Point2
    g_prime: Point2

    @property
    def line_cc(self) -> Tuple[Point2, Point2]:
        return (self.c, self.c_prime)

    @property
    def line_ff(self) -> Tuple[Point2, Point2]:
        return (self.f, self.f_prime)

    @property
    def line_gg(self) -> Tuple[Point2, Point2]:
        return (self.g, self.g_prime)


def overlay(base: Sequence[Point2]) -> OverlayConstruction:
    """Build C', the four altitude feet and the three organizing lines.

    Exact on rational input. Raises OverlayError for a right-angled base
    (an altitude foot would sit on a vertex) and checks the parallelism of
    ff' and gg'.
    """
    a, b, c = (tuple(p) for p in base)
    ab, ac, bc = _sub2(b, a), _sub2(c, a), _sub2(c, b)
    area2 = _cross2(ab, ac)
    if area2 == 0:
        raise DegenerateGeometryError("degenerate base triangle")
    exact = is_exact(a[0], a[1], b[0], b[1], c[0], c[1])
    scale2 = max(_dot2(ab, ab), _dot2(ac, ac), _dot2(bc, bc))
    for corner in (_dot2(ab, ac), _dot2(_sub2(a, b), _sub2(c, b)),
                   _dot2(_sub2(a, c), _sub2(b, c))):
        right = corner == 0 if exact else abs(float(corner)) <= 1e-12 * float(scale2)
        if right:
            raise OverlayError("right-angled base: altitude foot at a vertex")

    c_prime = (a[0] + b[0] - c[0], a[1] + b[1] - c[1])
    g = _foot_of_perpendicular(a, b, c)
    f = _foot_of_perpendicular(b, a, c)
    g_prime = _foot_of_perpendicular(a, b, c_prime)
    f_prime = _foot_of_perpendicular(b, a, c_prime)

    dir_ff = _sub2(f_prime, f)
    dir_gg = _sub2(g_prime, g)
    skew = _cross2(dir_ff, dir_gg)
    parallel = skew == 0 if exact else (
        abs(float(skew)) <= 1e-9 * math.sqrt(float(_dot2(dir_ff, dir_ff)))
        * math.sqrt(float(_dot2(dir_gg, dir_gg))))
    if not parallel:
        raise OverlayError("altitude-foot lines failed the parallelism check")
    return OverlayConstruction(a, b, c, c_prime, f, g, f_prime, g_prime)


# ---------------------------------------------------------------------------
# threshold profile along a line

@dataclass(frozen=True)
class ProfileSample:
    y: float
    foot: Point2
    kind: str
    a: Optional[float]
    b: Optional[float]


def a_profile(base: Sequence[Point2], line: Tuple[float, float, float],
              y_values: Sequence[float], order: ReflectionOrder,
              h_max: Optional[float] = None,
              tol: Optional[float] = None) -> List[ProfileSample]:
    """Threshold profile a(y) along the line p*x + q*y = r, parameterized
    by y. Unclassifiable scans are recorded with kind "error"."""
    p, q, r = (float(v) for v in line)
    if p == 0:
        raise ValueError("line must not be horizontal (x must be solvable)")
    if len(y_values) < 2:
        raise ValueError("need at least two samples")
    samples = []
    for y in y_values:
        x = (r - q * y) / p
        foot = (x, float(y))
        try:
            hc = height_scan(base, foot, order, h_max=h_max, tol=tol)
            samples.append(ProfileSample(float(y), foot, hc.kind, hc.a, hc.b))
        except UnclassifiableScanError:
            samples.append(ProfileSample(float(y), foot, "error", None, None))
    return samples
