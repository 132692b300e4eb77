"""Planes, triangles, barycentric coordinates and the labeled tetrahedron.

All constructions work on either backend: exact rationals (int / Fraction
coordinates) or floats. Exact input yields exact output; float input uses
absolute tolerances scaled to the figure size (1e-9 of the diameter unless
stated otherwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .errors import (
    DegenerateGeometryError,
    IntersectingLinesError,
    OffPlaneError,
    ParallelLinesError,
)
from .linalg import (
    Mat3,
    Scalar,
    Vec3,
    as_float_vec,
    is_exact,
    is_zero_vec,
    mdet,
    solve3,
    vadd,
    vcross,
    vdist,
    vdot,
    vnorm,
    vnorm2,
    vscale,
    vsub,
)

FLOAT_EPS = 1e-9  # absolute coordinate tolerance per unit of figure size

Triangle = Tuple[Vec3, Vec3, Vec3]


@dataclass(frozen=True)
class Plane:
    """Plane {p : normal . p + offset = 0}; the normal need not be unit."""

    normal: Vec3
    offset: Scalar

    def __post_init__(self):
        if is_zero_vec(self.normal):
            raise DegenerateGeometryError("plane normal must be nonzero")

    def evaluate(self, p: Vec3) -> Scalar:
        return vdot(self.normal, p) + self.offset

    def reflect_point(self, p: Vec3) -> Vec3:
        n = self.normal
        s = 2 * self.evaluate(p) / vnorm2(n)
        return (p[0] - s * n[0], p[1] - s * n[1], p[2] - s * n[2])

    def reflection_matrix(self) -> Mat3:
        """Linear part of the reflection: the Householder matrix I - 2nn^T/(n^T n)."""
        n = self.normal
        nn = vnorm2(n)
        return tuple(
            tuple(
                (1 if i == j else 0) - 2 * n[i] * n[j] / nn
                for j in range(3)
            )
            for i in range(3)
        )

    def flipped(self) -> "Plane":
        return Plane((-self.normal[0], -self.normal[1], -self.normal[2]),
                     -self.offset)


def plane_from_points(p: Vec3, q: Vec3, r: Vec3,
                      toward: Optional[Vec3] = None) -> Plane:
    """Plane through three affinely independent points.

    The normal is (q-p) x (r-p); when `toward` is given the plane is
    reoriented so that point evaluates positive (used for inward normals).
    """
    n = vcross(vsub(q, p), vsub(r, p))
    if is_exact(*n):
        degenerate = is_zero_vec(n)
    else:
        scale = max(vnorm(vsub(q, p)), vnorm(vsub(r, p)), 1e-300)
        degenerate = vnorm(n) <= FLOAT_EPS * scale * scale
    if degenerate:
        raise DegenerateGeometryError("collinear points define no plane")
    plane = Plane(n, -vdot(n, p))
    if toward is not None:
        side = plane.evaluate(toward)
        if side == 0 or (not is_exact(side)
                         and abs(float(side)) <= FLOAT_EPS * vnorm(n)):
            raise DegenerateGeometryError("orientation point lies on the plane")
        if side < 0:
            plane = plane.flipped()
    return plane


def reflection_matrix(plane: Plane) -> Mat3:
    return plane.reflection_matrix()


@dataclass(frozen=True)
class Barycentric:
    """Affine weights (x, y, z) with x + y + z = 1 for a labeled triangle."""

    x: Scalar
    y: Scalar
    z: Scalar

    def astuple(self) -> Tuple[Scalar, Scalar, Scalar]:
        return (self.x, self.y, self.z)

    def strictly_interior(self, eps: Scalar = 0) -> bool:
        return self.x > eps and self.y > eps and self.z > eps


def barycentric_of(tri: Triangle, p: Vec3, tol: Optional[float] = None) -> Barycentric:
    """Barycentric weights of p with respect to tri.

    Raises OffPlaneError when p is off the supporting plane (exact test on
    the rational backend, scaled tolerance on floats) and
    DegenerateGeometryError for a degenerate triangle.
    """
    a, b, c = tri
    n = vcross(vsub(b, a), vsub(c, a))
    nn = vnorm2(n)
    if nn == 0:
        raise DegenerateGeometryError("degenerate triangle")
    off = vdot(n, vsub(p, a))
    if is_exact(off, nn):
        if off != 0:
            raise OffPlaneError("point is not in the triangle plane")
    else:
        scale = max(vdist(a, b), vdist(a, c), vdist(b, c))
        limit = (tol if tol is not None else FLOAT_EPS * scale) * vnorm(n)
        if abs(float(off)) > limit:
            raise OffPlaneError("point is off the triangle plane")
    x = vdot(vcross(vsub(b, p), vsub(c, p)), n) / nn
    y = vdot(vcross(vsub(c, p), vsub(a, p)), n) / nn
    z = vdot(vcross(vsub(a, p), vsub(b, p)), n) / nn
    return Barycentric(x, y, z)


def point_from_barycentric(tri: Triangle, w: Barycentric) -> Vec3:
    a, b, c = tri
    return vadd(vadd(vscale(a, w.x), vscale(b, w.y)), vscale(c, w.z))


def point_in_triangle_strict(tri: Triangle, p: Vec3,
                             eps: Optional[Scalar] = None) -> bool:
    """True iff every barycentric weight of p is strictly positive."""
    w = barycentric_of(tri, p)
    if eps is None:
        eps = 0 if is_exact(*w.astuple()) else FLOAT_EPS
    return w.strictly_interior(eps)


@dataclass(frozen=True)
class Line3:
    point: Vec3
    direction: Vec3

    def __post_init__(self):
        if is_zero_vec(self.direction):
            raise DegenerateGeometryError("line direction must be nonzero")

    def at(self, t: Scalar) -> Vec3:
        return vadd(self.point, vscale(self.direction, t))


def common_perpendicular(l1: Line3, l2: Line3,
                         tol: Optional[float] = None) -> Tuple[Vec3, Vec3]:
    """Feet of the common perpendicular of two skew lines.

    Returns (foot on l1, foot on l2). Raises ParallelLinesError or
    IntersectingLinesError when the lines are not skew.
    """
    d1, d2 = l1.direction, l2.direction
    w = vcross(d1, d2)
    exact = is_exact(*d1, *d2, *l1.point, *l2.point)
    if exact:
        if is_zero_vec(w):
            raise ParallelLinesError("lines are parallel")
    else:
        limit = (tol if tol is not None else FLOAT_EPS) * vnorm(d1) * vnorm(d2)
        if vnorm(w) <= limit:
            raise ParallelLinesError("lines are parallel")
    # foot1 + ... : l1.point + s d1 + mu w = l2.point + t d2
    m = tuple(zip(d1, vscale(d2, -1), w))  # columns (d1, -d2, w)
    rhs = vsub(l2.point, l1.point)
    sol = solve3(m, rhs, eps_rel=0.0 if exact else 1e-14)
    if sol is None:
        raise DegenerateGeometryError("common perpendicular system singular")
    s, t, mu = sol
    if exact:
        intersecting = mu == 0
    else:
        sep = abs(float(mu)) * vnorm(w)
        scale = max(vdist(l1.point, l2.point), vnorm(d1), vnorm(d2))
        intersecting = sep <= (tol if tol is not None else FLOAT_EPS) * max(scale, 1e-300)
    if intersecting:
        raise IntersectingLinesError("lines intersect")
    return l1.at(s), l2.at(t)


# ---------------------------------------------------------------------------
# tetrahedron

VERTEX_LABELS = ("A", "B", "C", "D")
FACES = ("ABC", "ABD", "ACD", "BCD")
FACE_VERTICES: Dict[str, Tuple[str, str, str]] = {
    "ABC": ("A", "B", "C"),
    "ABD": ("A", "B", "D"),
    "ACD": ("A", "C", "D"),
    "BCD": ("B", "C", "D"),
}
OPPOSITE_VERTEX = {"ABC": "D", "ABD": "C", "ACD": "B", "BCD": "A"}
EDGES = (("A", "B"), ("A", "C"), ("A", "D"),
         ("B", "C"), ("B", "D"), ("C", "D"))
EDGE_FACES = {
    ("A", "B"): ("ABC", "ABD"),
    ("A", "C"): ("ABC", "ACD"),
    ("A", "D"): ("ABD", "ACD"),
    ("B", "C"): ("ABC", "BCD"),
    ("B", "D"): ("ABD", "BCD"),
    ("C", "D"): ("ACD", "BCD"),
}


class Tetrahedron:
    """Labeled tetrahedron ABCD with derived face planes (inward normals).

    Immutable; all operations treat it as a value. The backend (exact or
    float) is decided by the vertex coordinate types.
    """

    __slots__ = ("_verts", "_planes", "_diameter")

    def __init__(self, a: Vec3, b: Vec3, c: Vec3, d: Vec3):
        verts = {"A": tuple(a), "B": tuple(b), "C": tuple(c), "D": tuple(d)}
        for label, v in verts.items():
            if len(v) != 3:
                raise DegenerateGeometryError(f"vertex {label} must have 3 coordinates")
        object.__setattr__(self, "_verts", verts)
        object.__setattr__(self, "_planes", {})
        object.__setattr__(self, "_diameter", None)
        vol6 = self.signed_volume() * 6
        if vol6 == 0 or (not is_exact(vol6)
                         and abs(float(vol6)) <= (FLOAT_EPS * self.diameter) ** 3):
            raise DegenerateGeometryError("tetrahedron has zero volume")

    def __setattr__(self, key, value):
        raise AttributeError("Tetrahedron is immutable")

    def __repr__(self):
        vs = ", ".join(f"{l}={as_float_vec(v)}" for l, v in self._verts.items())
        return f"Tetrahedron({vs})"

    @classmethod
    def from_vertices(cls, mapping) -> "Tetrahedron":
        return cls(mapping["A"], mapping["B"], mapping["C"], mapping["D"])

    @classmethod
    def from_base_foot_height(cls, base, foot, height) -> "Tetrahedron":
        """Pyramid over a 2D base triangle with apex above `foot` at `height`.

        The base is brought to canonical pose (A at the origin, B on the
        positive x axis, C in the upper half plane). A base already in
        canonical pose passes through unchanged, which keeps exact
        coordinates exact; otherwise a float rigid motion is applied.
        """
        if height <= 0:
            raise DegenerateGeometryError("height must be positive")
        (ax, ay), (bx, by), (cx, cy) = [tuple(p) for p in base]
        ox, oy = tuple(foot)
        canonical = (ax == 0 and ay == 0 and by == 0 and bx > 0 and cy > 0)
        if not canonical:
            ax, ay, bx, by, cx, cy, ox, oy = map(float, (ax, ay, bx, by, cx, cy, ox, oy))
            bx, by = bx - ax, by - ay
            cx, cy = cx - ax, cy - ay
            ox, oy = ox - ax, oy - ay
            ax = ay = 0.0
            blen = math.hypot(bx, by)
            if blen == 0:
                raise DegenerateGeometryError("degenerate base edge AB")
            co, si = bx / blen, by / blen  # rotate B onto the +x axis
            def rot(x, y):
                return (co * x + si * y, -si * x + co * y)
            bx, by = rot(bx, by)
            cx, cy = rot(cx, cy)
            ox, oy = rot(ox, oy)
            if cy < 0:  # mirror to the upper half plane
                cy, oy = -cy, -oy
            if cy == 0:
                raise DegenerateGeometryError("degenerate base triangle")
        zero = 0 if is_exact(ax, bx, cx, cy, ox, oy, height) else 0.0
        return cls((ax, ay, zero), (bx, by, zero), (cx, cy, zero),
                   (ox, oy, height + zero))

    def vertex(self, label: str) -> Vec3:
        return self._verts[label]

    @property
    def vertices(self) -> Dict[str, Vec3]:
        return dict(self._verts)

    @property
    def is_exact(self) -> bool:
        return all(is_exact(*v) for v in self._verts.values())

    def signed_volume(self) -> Scalar:
        a, b, c, d = (self._verts[l] for l in VERTEX_LABELS)
        return mdet((vsub(b, a), vsub(c, a), vsub(d, a))) / 6

    @property
    def diameter(self) -> float:
        if self._diameter is None:
            vs = list(self._verts.values())
            diam = max(vdist(p, q) for i, p in enumerate(vs) for q in vs[i + 1:])
            object.__setattr__(self, "_diameter", diam)
        return self._diameter

    @property
    def tol(self) -> float:
        """Absolute coordinate tolerance: 0 on the exact backend."""
        return 0.0 if self.is_exact else FLOAT_EPS * self.diameter

    def face_triangle(self, face: str) -> Triangle:
        va, vb, vc = FACE_VERTICES[face]
        return (self._verts[va], self._verts[vb], self._verts[vc])

    def face_plane(self, face: str) -> Plane:
        """Supporting plane of a face, normal oriented into the pyramid."""
        plane = self._planes.get(face)
        if plane is None:
            tri = self.face_triangle(face)
            plane = plane_from_points(*tri,
                                      toward=self._verts[OPPOSITE_VERTEX[face]])
            self._planes[face] = plane
        return plane

    def as_float(self) -> "Tetrahedron":
        return Tetrahedron(*(as_float_vec(self._verts[l]) for l in VERTEX_LABELS))

    def as_exact(self) -> "Tetrahedron":
        return Tetrahedron(*(tuple(Fraction(x) for x in self._verts[l])
                             for l in VERTEX_LABELS))


def dihedral_angles(tet: Tetrahedron):
    """Interior dihedral angle (radians) at each of the six edges."""
    result = []
    for edge in EDGES:
        f1, f2 = EDGE_FACES[edge]
        n1 = tet.face_plane(f1).normal
        n2 = tet.face_plane(f2).normal
        cosang = -float(vdot(n1, n2)) / (vnorm(n1) * vnorm(n2))
        cosang = max(-1.0, min(1.0, cosang))
        result.append((edge, math.acos(cosang)))
    return result


def obtuse_dihedral_count(tet: Tetrahedron) -> int:
    """Number of obtuse dihedral angles, decided by exact sign when possible.

    With inward normals the interior angle at an edge is obtuse iff
    n1 . n2 > 0.
    """
    count = 0
    for edge in EDGES:
        f1, f2 = EDGE_FACES[edge]
        if vdot(tet.face_plane(f1).normal, tet.face_plane(f2).normal) > 0:
            count += 1
    return count
