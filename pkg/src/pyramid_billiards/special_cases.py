"""Structural checks on special pyramid families.

Covers corner pyramids (no 4-cycles at all), pyramids with a right dihedral
angle (reflections across the orthogonal faces commute, which caps the
cycle count at two), mirror-symmetric pyramids (the cycle start sits on the
common perpendicular of two skew lines, no search needed), and the
empirical bound "cycles <= 3 - obtuse dihedral count".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .cycles import (
    CANONICAL_ORDERS,
    FourCycle,
    certify_cycle,
    find_cycles,
)
from .errors import NotCornerPyramidError, NotSymmetricError
from .geometry import (
    EDGE_FACES,
    EDGES,
    Line3,
    Tetrahedron,
    common_perpendicular,
    obtuse_dihedral_count,
)
from .linalg import (
    is_exact,
    mat_close,
    mat_eq,
    vadd,
    vdot,
    vnorm,
    vscale,
    vsub,
)

SYMMETRIC_CYCLE_ORDER = CANONICAL_ORDERS[1]  # ABC -> ACD -> ABD -> BCD


def _dots_zero(tet: Tetrahedron, pairs) -> bool:
    for u, v in pairs:
        d = vdot(u, v)
        if tet.is_exact:
            if d != 0:
                return False
        elif abs(float(d)) > 1e-9 * vnorm(u) * vnorm(v):
            return False
    return True


def corner_vertex(tet: Tetrahedron) -> Optional[str]:
    """Label of a vertex whose three incident edges are mutually orthogonal."""
    for label, v in tet.vertices.items():
        others = [p for l, p in tet.vertices.items() if l != label]
        e = [vsub(p, v) for p in others]
        if _dots_zero(tet, [(e[0], e[1]), (e[0], e[2]), (e[1], e[2])]):
            return label
    return None


@dataclass(frozen=True)
class CornerReport:
    corner: str
    n_cycles: int
    cycles: Tuple[FourCycle, ...]

    @property
    def ok(self) -> bool:
        return self.n_cycles == 0


def check_corner_pyramid(tet: Tetrahedron) -> CornerReport:
    """Run the cycle finder on a corner pyramid; the expected count is zero."""
    corner = corner_vertex(tet)
    if corner is None:
        raise NotCornerPyramidError("no trihedral right corner found")
    cycles = tuple(find_cycles(tet))
    return CornerReport(corner, len(cycles), cycles)


def orthogonal_face_pairs(tet: Tetrahedron) -> List[Tuple[str, str]]:
    """Face pairs whose common-edge dihedral angle is exactly pi/2.

    With inward normals this is n1 . n2 = 0, an exact test on rationals.
    """
    pairs = []
    for edge in EDGES:
        f1, f2 = EDGE_FACES[edge]
        n1 = tet.face_plane(f1).normal
        n2 = tet.face_plane(f2).normal
        d = vdot(n1, n2)
        if tet.is_exact:
            ortho = d == 0
        else:
            ortho = abs(float(d)) <= 1e-9 * vnorm(n1) * vnorm(n2)
        if ortho:
            pairs.append((f1, f2))
    return pairs


def commuting_reflections_check(tet: Tetrahedron, face1: str, face2: str) -> bool:
    """True iff the reflection matrices of the two faces commute."""
    m1 = tet.face_plane(face1).reflection_matrix()
    m2 = tet.face_plane(face2).reflection_matrix()
    ab = tuple(tuple(sum(m1[i][k] * m2[k][j] for k in range(3)) for j in range(3))
               for i in range(3))
    ba = tuple(tuple(sum(m2[i][k] * m1[k][j] for k in range(3)) for j in range(3))
               for i in range(3))
    if tet.is_exact:
        return mat_eq(ab, ba)
    return mat_close(ab, ba, 1e-9)


# ---------------------------------------------------------------------------
# symmetric pyramids

class SymmetricPyramid:
    """Pyramid with |AD| = |BD| and |AC| = |BC|.

    The mirror plane carries C, D and the midpoint E of AB; E_prime is the
    mirror image of E across the face ACD.
    """

    def __init__(self, tet: Tetrahedron):
        a, b = tet.vertex("A"), tet.vertex("B")
        c, d = tet.vertex("C"), tet.vertex("D")
        dc = vdot(vsub(c, a), vsub(c, a)) - vdot(vsub(c, b), vsub(c, b))
        dd = vdot(vsub(d, a), vsub(d, a)) - vdot(vsub(d, b), vsub(d, b))
        scale2 = tet.diameter ** 2
        for diff in (dc, dd):
            if tet.is_exact:
                if diff != 0:
                    raise NotSymmetricError("|AC| != |BC| or |AD| != |BD|")
            elif abs(float(diff)) > 1e-9 * scale2:
                raise NotSymmetricError("|AC| != |BC| or |AD| != |BD|")
        self.tet = tet
        self.e = vscale(vadd(a, b), _half_of(a))
        self.e_prime = tet.face_plane("ACD").reflect_point(self.e)

    @property
    def mirror_points(self):
        return (self.tet.vertex("C"), self.tet.vertex("D"), self.e)


def _half_of(sample):
    # keeps Fractions exact; floats get 0.5
    from fractions import Fraction
    return Fraction(1, 2) if is_exact(*sample) else 0.5


def symmetric_cycle_direct(sp: SymmetricPyramid) -> Optional[FourCycle]:
    """Construct the symmetric 4-cycle without solving the general system.

    The start point is the foot, on CE, of the common perpendicular of the
    skew lines CE and DE', and the start vector points along that
    perpendicular. Certification still decides existence, which depends on
    the pyramid's proportions.
    """
    tet = sp.tet
    c, d = tet.vertex("C"), tet.vertex("D")
    line_ce = Line3(c, vsub(sp.e, c))
    line_de = Line3(d, vsub(sp.e_prime, d))
    foot_ce, foot_de = common_perpendicular(line_ce, line_de)
    direction = vsub(foot_de, foot_ce)
    return certify_cycle(tet, SYMMETRIC_CYCLE_ORDER, foot_ce, direction)


# ---------------------------------------------------------------------------
# obtuse-angle bound

@dataclass(frozen=True)
class ObtuseBoundReport:
    """Observed cycle count against the bound 3 - (obtuse dihedral count)."""

    vertices: Tuple
    k_obtuse: int
    n_cycles: int

    @property
    def bound(self) -> int:
        return 3 - self.k_obtuse

    @property
    def holds(self) -> bool:
        return self.n_cycles <= self.bound


def obtuse_bound_report(tet: Tetrahedron) -> ObtuseBoundReport:
    k = obtuse_dihedral_count(tet)
    cycles = find_cycles(tet)
    verts = tuple(tet.vertex(l) for l in ("A", "B", "C", "D"))
    return ObtuseBoundReport(verts, k, len(cycles))


def obtuse_bound_reports(tets) -> List[ObtuseBoundReport]:
    """Batch form; counterexamples are reported, never raised, because they
    would falsify the bound rather than the code."""
    return [obtuse_bound_report(t) for t in tets]
