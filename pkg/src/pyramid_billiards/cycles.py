"""Period-4 trajectories of the straight-line billiard in a tetrahedron.

A 4-cycle hits each face once per period and is identified by its reflection
order; an order and its reverse describe the same trajectory, which leaves
three essentially distinct orders. For one order the pipeline is:

  1. compose the four face reflections into a single rotation,
  2. take its fixed axis as the candidate flight direction,
  3. unfold the pyramid across the three non-base faces in bounce order,
  4. solve the collinearity system for the start point on the base,
  5. certify by forward simulation: every bounce must land strictly inside
     the scheduled face and the path must close exactly.

On exact rational input every step is exact; on floats the tolerances from
`geometry` apply.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .errors import IdentityRotationError, StartSystemDegenerateError
from .geometry import (
    FACE_VERTICES,
    FACES,
    Barycentric,
    Tetrahedron,
    barycentric_of,
    plane_from_points,
    point_from_barycentric,
    point_in_triangle_strict,
)
from .linalg import (
    IDENTITY3,
    Mat3,
    Vec3,
    canonical_direction,
    is_exact,
    is_zero_mat,
    mmul,
    msub,
    mvec,
    nullspace3,
    vadd,
    vcross,
    vdist,
    vdot,
    vnorm,
    vscale,
    vsub,
    reflect_direction,
)

ReflectionOrder = Tuple[str, str, str, str]

# The three distinct orders, written starting at the base face. Each one
# stands for itself and its reverse.
CANONICAL_ORDERS: Tuple[ReflectionOrder, ...] = (
    ("ABC", "ABD", "ACD", "BCD"),
    ("ABC", "ACD", "ABD", "BCD"),
    ("ABC", "ABD", "BCD", "ACD"),
)

RANK_EPS = 1e-10  # relative pivot threshold for float rank decisions


def order_from_index(idx: int) -> ReflectionOrder:
    """Orders are numbered 1..3 on the command line."""
    if idx not in (1, 2, 3):
        raise ValueError("reflection order index must be 1, 2 or 3")
    return CANONICAL_ORDERS[idx - 1]


def validate_order(order) -> ReflectionOrder:
    order = tuple(order)
    if order not in CANONICAL_ORDERS:
        raise ValueError(f"not a canonical reflection order: {order}")
    return order


def reflection_sequence(order: ReflectionOrder) -> Tuple[str, str, str, str]:
    """Faces in the temporal order they are hit, ending on the start face."""
    return (order[1], order[2], order[3], order[0])


def reversed_order(order: ReflectionOrder) -> Tuple[str, str, str, str]:
    """Same cyclic visit sequence walked backwards, starting at the base."""
    return (order[0], order[3], order[2], order[1])


REVERSED_ORDERS: Tuple[ReflectionOrder, ...] = tuple(
    reversed_order(o) for o in CANONICAL_ORDERS)


def _validate_schedule(order) -> ReflectionOrder:
    """A certifiable bounce schedule: a canonical order or its reverse."""
    order = tuple(order)
    if order not in CANONICAL_ORDERS and order not in REVERSED_ORDERS:
        raise ValueError(f"not a reflection order or its reverse: {order}")
    return order


# ---------------------------------------------------------------------------
# rotation and axis

def cycle_rotation_matrix(tet: Tetrahedron, order: ReflectionOrder) -> Mat3:
    """Product of the four face reflection matrices, last bounce leftmost.

    The result is a rotation: orthogonal with determinant +1.
    """
    order = validate_order(order)
    m = IDENTITY3
    for face in reflection_sequence(order):
        m = mmul(tet.face_plane(face).reflection_matrix(), m)
    return m


def rotation_axis(m: Mat3) -> Vec3:
    """Fixed axis of a rotation matrix: the eigenvector with eigenvalue 1.

    Computed as the null space of m - I (exact on rationals). The result is
    scaled to coprime integers (exact) or unit length (float), with the
    first nonzero component positive; callers pick the traversal sign.
    """
    r = msub(m, IDENTITY3)
    exact = all(is_exact(x) for row in m for x in row)
    if exact:
        near_identity = is_zero_mat(r)
    else:
        near_identity = all(abs(float(x)) <= 1e-12 for row in r for x in row)
    if near_identity:
        raise IdentityRotationError("rotation is the identity, no unique axis")
    # Orthogonal matrices have unit scale, so rank decisions on m - I are
    # measured against 1, not against the (possibly tiny) entries of m - I.
    basis = nullspace3(r, eps_rel=RANK_EPS, scale=None if exact else 1.0)
    if len(basis) == 0:
        raise IdentityRotationError("matrix has no fixed axis")
    if len(basis) > 1:
        raise IdentityRotationError("fixed space has dimension > 1")
    axis = canonical_direction(basis[0])
    if exact and mvec(m, axis) != axis:
        raise IdentityRotationError("axis verification failed")
    return axis


# ---------------------------------------------------------------------------
# unfolding

@dataclass(frozen=True)
class UnfoldedChain:
    """Vertex images after successively mirroring across the bounce faces.

    stages[0] holds the original vertex positions; stages[k] the positions
    after reflecting across the (current image of the) k-th bounce face.
    """

    order: ReflectionOrder
    stages: Tuple[Dict[str, Vec3], ...]

    @property
    def final(self) -> Dict[str, Vec3]:
        return self.stages[-1]

    def base_images(self) -> Tuple[Vec3, Vec3, Vec3]:
        labels = FACE_VERTICES[self.order[0]]
        return tuple(self.final[l] for l in labels)


def unfold(tet: Tetrahedron, order: ReflectionOrder) -> UnfoldedChain:
    """Mirror the pyramid across the three non-base faces in bounce order.

    Each step reflects every current vertex image across the plane spanned
    by the current images of the next scheduled face's vertices.
    """
    order = validate_order(order)
    positions = dict(tet.vertices)
    stages = [dict(positions)]
    for face in reflection_sequence(order)[:3]:
        va, vb, vc = FACE_VERTICES[face]
        plane = plane_from_points(positions[va], positions[vb], positions[vc])
        positions = {l: plane.reflect_point(p) for l, p in positions.items()}
        stages.append(dict(positions))
    return UnfoldedChain(order=order, stages=tuple(stages))


# ---------------------------------------------------------------------------
# start point

def starting_point(tet: Tetrahedron, order: ReflectionOrder,
                   chain: Optional[UnfoldedChain] = None,
                   axis: Optional[Vec3] = None):
    """Start point on the base face, or None when no interior one exists.

    Solves for barycentric weights (x, y, z), x+y+z = 1, such that the
    segment from F in the base triangle to the point with equal weights in
    the unfolded image triangle is parallel to the rotation axis. The
    homogeneous part always has rank 2; anything less would mean a line of
    solutions and raises StartSystemDegenerateError.

    Returns (Barycentric, F) or None (solution missing or not strictly
    positive).
    """
    order = validate_order(order)
    if chain is None:
        chain = unfold(tet, order)
    if axis is None:
        axis = rotation_axis(cycle_rotation_matrix(tet, order))
    base_labels = FACE_VERTICES[order[0]]
    originals = [tet.vertex(l) for l in base_labels]
    images = chain.base_images()
    cols = [vsub(img, org) for org, img in zip(originals, images)]
    cols = [vcross(c, axis) for c in cols]
    k = tuple(tuple(cols[j][i] for j in range(3)) for i in range(3))
    basis = nullspace3(k, eps_rel=RANK_EPS)
    if len(basis) >= 2:
        raise StartSystemDegenerateError(
            "collinearity system is rank deficient (expected unique or none)")
    if len(basis) == 0:
        return None
    w0 = basis[0]
    s = w0[0] + w0[1] + w0[2]
    if is_exact(s):
        if s == 0:
            return None
    elif abs(float(s)) <= 1e-12 * max(abs(float(x)) for x in w0):
        return None
    weights = tuple(x / s for x in w0)
    if not all(x > 0 for x in weights):
        return None
    bary = Barycentric(*weights)
    f = point_from_barycentric(tet.face_triangle(order[0]), bary)
    return bary, f


# ---------------------------------------------------------------------------
# simulation and certification

@dataclass(frozen=True)
class BilliardTrajectory:
    points: Tuple[Vec3, ...]       # start point followed by bounce points
    directions: Tuple[Vec3, ...]   # direction leaving each point
    faces: Tuple[str, ...]         # face hit at each bounce
    exit: str                      # "completed" | "edge" | "no_hit"


def _first_face_hit(tet: Tetrahedron, p: Vec3, d: Vec3):
    """Earliest strictly forward intersection of the ray p + t d with a face
    plane. Returns (face, t, point, ambiguous) or None; `ambiguous` flags a
    tie between faces, i.e. an edge or vertex hit.
    """
    exact = tet.is_exact
    tol = tet.tol
    dn = vnorm(d)
    hits = []
    for face in FACES:
        plane = tet.face_plane(face)
        den = vdot(plane.normal, d)
        if den == 0:
            continue
        if not exact and abs(float(den)) <= 1e-14 * vnorm(plane.normal) * dn:
            continue
        t = -plane.evaluate(p) / den
        if exact:
            if t <= 0:
                continue
        elif float(t) * dn <= tol:
            continue
        hits.append((t, face))
    if not hits:
        return None
    hits.sort(key=lambda h: h[0])
    t, face = hits[0]
    if len(hits) > 1:
        gap = hits[1][0] - t
        ambiguous = (gap == 0) if exact else float(gap) * dn <= tol
    else:
        ambiguous = False
    point = vadd(p, vscale(d, t))
    return face, t, point, ambiguous


def simulate_billiard(tet: Tetrahedron, p: Vec3, v: Vec3,
                      n_bounces: int) -> BilliardTrajectory:
    """Straight-line flow with specular reflection at the faces.

    Stops early with exit="edge" when a bounce lands on a face boundary
    (vertex or edge, a terminal event for the billiard) and with
    exit="no_hit" when the ray leaves every face plane behind.
    """
    points = [tuple(p)]
    directions = [tuple(v)]
    faces: List[str] = []
    d = tuple(v)
    pos = tuple(p)
    for _ in range(n_bounces):
        hit = _first_face_hit(tet, pos, d)
        if hit is None:
            return BilliardTrajectory(tuple(points), tuple(directions),
                                      tuple(faces), "no_hit")
        face, _, q, ambiguous = hit
        interior = (not ambiguous
                    and point_in_triangle_strict(tet.face_triangle(face), q))
        points.append(q)
        faces.append(face)
        if not interior:
            directions.append(d)
            return BilliardTrajectory(tuple(points), tuple(directions),
                                      tuple(faces), "edge")
        d = reflect_direction(d, tet.face_plane(face).normal)
        directions.append(d)
        pos = q
    return BilliardTrajectory(tuple(points), tuple(directions),
                              tuple(faces), "completed")


@dataclass(frozen=True)
class FourCycle:
    """A certified period-4 trajectory.

    points[0] is the start F on the base face, followed by the bounce
    points on the other three faces in traversal order.
    """

    order: ReflectionOrder
    start: Vec3
    barycentric: Barycentric
    direction: Vec3
    points: Tuple[Vec3, Vec3, Vec3, Vec3]
    length: float
    exact: bool

    def bounce_on(self, face: str) -> Vec3:
        seq = (self.order[0],) + reflection_sequence(self.order)[:3]
        return self.points[seq.index(face)]


def certify_cycle(tet: Tetrahedron, order: ReflectionOrder,
                  f: Vec3, v: Vec3) -> Optional[FourCycle]:
    """Forward-simulate from (f, v) and accept only a clean period-4 closure.

    The sign of v is chosen to leave the base into the pyramid. Acceptance
    requires each bounce to hit the scheduled face first, strictly inside
    it, and the path to return to f with direction v (exactly on the
    rational backend, within tolerance on floats). A trajectory can be
    walked both ways, so reversed schedules are certifiable too; the
    finder itself only searches the canonical representatives.
    """
    order = _validate_schedule(order)
    base_plane = tet.face_plane(order[0])
    side = vdot(base_plane.normal, v)
    if side == 0:
        return None
    if not tet.is_exact and abs(float(side)) <= 1e-12 * vnorm(base_plane.normal) * vnorm(v):
        return None
    if side < 0:
        v = vscale(v, -1)

    exact = tet.is_exact
    tol = tet.tol
    pos = tuple(f)
    d = tuple(v)
    bounce_points = []
    for face in reflection_sequence(order):
        hit = _first_face_hit(tet, pos, d)
        if hit is None:
            return None
        hit_face, _, q, ambiguous = hit
        if hit_face != face or ambiguous:
            return None
        if not point_in_triangle_strict(tet.face_triangle(face), q):
            return None
        bounce_points.append(q)
        d = reflect_direction(d, tet.face_plane(face).normal)
        pos = q

    closing = bounce_points[3]
    if exact:
        if closing != tuple(f) or d != tuple(v):
            return None
    else:
        if vdist(closing, f) > tol:
            return None
        if vdist(canonical_direction(d), canonical_direction(v)) > 1e-9:
            return None

    pts = (tuple(f), bounce_points[0], bounce_points[1], bounce_points[2])
    length = sum(vdist(pts[i], pts[(i + 1) % 4]) for i in range(4))
    bary = barycentric_of(tet.face_triangle(order[0]), f)
    return FourCycle(order=order, start=tuple(f), barycentric=bary,
                     direction=tuple(v), points=pts, length=length,
                     exact=exact)


def find_cycle_for_order(tet: Tetrahedron,
                         order: ReflectionOrder) -> Optional[FourCycle]:
    """Run the full pipeline for one reflection order."""
    order = validate_order(order)
    m = cycle_rotation_matrix(tet, order)
    axis = rotation_axis(m)
    chain = unfold(tet, order)
    start = starting_point(tet, order, chain=chain, axis=axis)
    if start is None:
        return None
    bary, f = start
    return certify_cycle(tet, order, f, axis)


def find_cycles(tet: Tetrahedron) -> List[FourCycle]:
    """All certified 4-cycles of the pyramid (at most one per order)."""
    cycles = []
    for order in CANONICAL_ORDERS:
        cycle = find_cycle_for_order(tet, order)
        if cycle is not None:
            cycles.append(cycle)
    return cycles


def unfolded_endpoint(tet: Tetrahedron, order: ReflectionOrder,
                      bary: Barycentric,
                      chain: Optional[UnfoldedChain] = None) -> Vec3:
    """Point with the same barycentric weights in the unfolded image triangle."""
    if chain is None:
        chain = unfold(tet, order)
    return point_from_barycentric(chain.base_images(), bary)
