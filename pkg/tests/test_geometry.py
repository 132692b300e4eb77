import math
import random
from fractions import Fraction as F

import pytest

from pyramid_billiards.errors import (
    DegenerateGeometryError,
    IntersectingLinesError,
    OffPlaneError,
    ParallelLinesError,
)
from pyramid_billiards.geometry import (
    EDGE_FACES,
    FACE_VERTICES,
    Barycentric,
    Line3,
    Plane,
    Tetrahedron,
    barycentric_of,
    common_perpendicular,
    dihedral_angles,
    obtuse_dihedral_count,
    plane_from_points,
    point_from_barycentric,
    point_in_triangle_strict,
)
from pyramid_billiards.linalg import (
    IDENTITY3,
    mat_eq,
    mdet,
    mmul,
    mtranspose,
    vcross,
    vdot,
    vsub,
)
from pyramid_billiards.sampling import random_canonical_pyramid

Z = F(0)


class TestPlaneFromPoints:
    def test_slanted_face_normal(self):
        # (q-p) x (r-p) for A=(0,0,0), B=(4,0,0), D=(2,3,3) is (0,-12,12)
        plane = plane_from_points((Z, Z, Z), (F(4), Z, Z), (F(2), F(3), F(3)))
        assert vcross(plane.normal, (0, 1, -1)) == (0, 0, 0)
        for p in ((Z, Z, Z), (F(4), Z, Z), (F(2), F(3), F(3))):
            assert plane.evaluate(p) == 0

    def test_base_plane(self):
        plane = plane_from_points((Z, Z, Z), (F(4), Z, Z), (F(2), F(4), Z),
                                  toward=(0, 0, 5))
        assert plane.normal[0] == 0 and plane.normal[1] == 0
        assert plane.normal[2] > 0
        assert plane.offset == 0

    def test_inward_normal_of_far_face(self, gravity_demo_pyramid_exact):
        # derived from the vertices; the inward normal is (-9,-3,-5)
        plane = gravity_demo_pyramid_exact.face_plane("BCD")
        k = plane.normal[0] / F(-9)
        assert plane.normal == (F(-9) * k, F(-3) * k, F(-5) * k)
        assert plane.offset == F(36) * k
        assert k > 0

    def test_collinear_error(self):
        with pytest.raises(DegenerateGeometryError):
            plane_from_points((0, 0, 0), (1, 1, 1), (2, 2, 2))

    def test_orientation_point_on_plane_error(self):
        with pytest.raises(DegenerateGeometryError):
            plane_from_points((Z, Z, Z), (F(1), Z, Z), (Z, F(1), Z),
                              toward=(F(1), F(1), Z))


class TestReflectionMatrix:
    def test_base_plane_reflection(self):
        plane = Plane((Z, Z, F(1)), Z)
        assert plane.reflection_matrix() == ((1, 0, 0), (0, 1, 0), (0, 0, -1))

    def test_swap_plane_reflection(self):
        # plane y = z reflects by swapping the y and z coordinates
        plane = Plane((Z, F(1), F(-1)), Z)
        assert plane.reflection_matrix() == ((1, 0, 0), (0, 0, 1), (0, 1, 0))

    def test_demo_side_face_matrix(self, exact_demo_pyramid):
        m = exact_demo_pyramid.face_plane("ACD").reflection_matrix()
        expected = ((F(-13, 23), F(18, 23), F(6, 23)),
                    (F(18, 23), F(14, 23), F(-3, 23)),
                    (F(6, 23), F(-3, 23), F(22, 23)))
        assert m == expected

    def test_demo_far_face_matrix(self, exact_demo_pyramid):
        m = exact_demo_pyramid.face_plane("BCD").reflection_matrix()
        expected = ((F(-13, 23), F(-18, 23), F(-6, 23)),
                    (F(-18, 23), F(14, 23), F(-3, 23)),
                    (F(-6, 23), F(-3, 23), F(22, 23)))
        assert m == expected

    def test_involution_orthogonality_det(self):
        rng = random.Random(3)
        for _ in range(25):
            n = tuple(F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(3))
            if n == (0, 0, 0):
                continue
            m = Plane(n, F(rng.randint(-3, 3))).reflection_matrix()
            assert mat_eq(mmul(m, m), IDENTITY3)
            assert mat_eq(mmul(mtranspose(m), m), IDENTITY3)
            assert mdet(m) == -1

    def test_zero_normal_rejected(self):
        with pytest.raises(DegenerateGeometryError):
            Plane((0, 0, 0), 1)

    def test_affine_reflection_fixes_plane_points(self):
        plane = plane_from_points((F(1), Z, Z), (Z, F(1), Z), (Z, Z, F(1)))
        assert plane.reflect_point((F(1), Z, Z)) == (F(1), Z, Z)
        # reflecting the origin through x+y+z=1 gives (2/3, 2/3, 2/3)
        assert plane.reflect_point((Z, Z, Z)) == (F(2, 3), F(2, 3), F(2, 3))


class TestBarycentric:
    tri = ((Z, Z, Z), (F(4), Z, Z), (F(2), F(4), Z))

    def test_vertex(self):
        w = barycentric_of(self.tri, (Z, Z, Z))
        assert w.astuple() == (1, 0, 0)

    def test_centroid(self):
        c = point_from_barycentric(self.tri, Barycentric(F(1, 3), F(1, 3), F(1, 3)))
        assert barycentric_of(self.tri, c).astuple() == (F(1, 3), F(1, 3), F(1, 3))

    def test_demo_start_point_weights(self):
        w = barycentric_of(self.tri, (F(2246, 889), F(2160, 889), Z))
        assert w.astuple() == (F(115, 1778), F(583, 1778), F(540, 889))

    def test_roundtrip(self):
        rng = random.Random(11)
        for _ in range(30):
            x = F(rng.randint(-3, 6), rng.randint(1, 5))
            y = F(rng.randint(-3, 6), rng.randint(1, 5))
            w = Barycentric(x, y, 1 - x - y)
            p = point_from_barycentric(self.tri, w)
            assert barycentric_of(self.tri, p).astuple() == w.astuple()
            # and the reverse composition is the identity on in-plane points
            assert point_from_barycentric(self.tri,
                                          barycentric_of(self.tri, p)) == p

    def test_off_plane_error(self):
        with pytest.raises(OffPlaneError):
            barycentric_of(self.tri, (F(1), F(1), F(1)))

    def test_degenerate_triangle_error(self):
        tri = ((Z, Z, Z), (F(1), Z, Z), (F(2), Z, Z))
        with pytest.raises(DegenerateGeometryError):
            barycentric_of(tri, (Z, Z, Z))

    def test_weights_sum_to_one_float(self):
        tri = ((0.0, 0.0, 0.0), (4.0, 0.0, 0.0), (2.0, 4.0, 0.0))
        w = barycentric_of(tri, (1.7, 0.9, 0.0))
        assert abs(sum(w.astuple()) - 1.0) < 1e-12


class TestPointInTriangle:
    tri = ((Z, Z, Z), (F(4), Z, Z), (F(2), F(4), Z))

    def test_centroid_inside(self):
        assert point_in_triangle_strict(self.tri, (F(2), F(4, 3), Z))

    def test_edge_midpoint_excluded(self):
        assert not point_in_triangle_strict(self.tri, (F(2), Z, Z))

    def test_vertex_excluded(self):
        assert not point_in_triangle_strict(self.tri, (Z, Z, Z))


class TestDihedralAngles:
    def test_regular_tetrahedron(self, regular_tetrahedron):
        expected = math.acos(1.0 / 3.0)
        for _, angle in dihedral_angles(regular_tetrahedron):
            assert angle == pytest.approx(expected, abs=1e-12)
        assert obtuse_dihedral_count(regular_tetrahedron) == 0

    def test_right_dihedral_family(self):
        # B and C sit on the coordinate walls through AD, so the faces ABD
        # and ACD meet at a right angle along AD
        tet = Tetrahedron((Z, Z, Z), (F(3), Z, F(1)), (Z, F(2), F(-1)),
                          (Z, Z, F(5)))
        angles = dict(dihedral_angles(tet))
        assert angles[("A", "D")] == pytest.approx(math.pi / 2, abs=1e-12)

    def test_low_apex_pyramid_has_two_obtuse(self, two_obtuse_pyramid):
        # cross-checked against the in-face perpendicular computation below
        assert obtuse_dihedral_count(two_obtuse_pyramid) == 2

    def test_normals_method_matches_in_face_oracle(self, two_obtuse_pyramid):
        tet = two_obtuse_pyramid
        for edge, angle in dihedral_angles(tet):
            assert angle == pytest.approx(_dihedral_in_face(tet, edge), abs=1e-9)

    def test_obtuse_count_matches_angle_list(self):
        rng = random.Random(5)
        for _ in range(20):
            tet = random_canonical_pyramid(rng)
            from_angles = sum(1 for _, a in dihedral_angles(tet)
                              if a > math.pi / 2)
            assert obtuse_dihedral_count(tet) == from_angles


def _dihedral_in_face(tet, edge):
    """Independent oracle: angle between in-face perpendiculars to the edge."""
    p = [float(x) for x in tet.vertex(edge[0])]
    q = [float(x) for x in tet.vertex(edge[1])]
    e = [qi - pi for pi, qi in zip(p, q)]
    en = math.sqrt(sum(x * x for x in e))
    e = [x / en for x in e]
    wings = []
    for face in EDGE_FACES[edge]:
        other = next(l for l in FACE_VERTICES[face] if l not in edge)
        w = [float(x) - pi for pi, x in zip(p, tet.vertex(other))]
        proj = sum(wi * ei for wi, ei in zip(w, e))
        w = [wi - proj * ei for wi, ei in zip(w, e)]
        wn = math.sqrt(sum(x * x for x in w))
        wings.append([x / wn for x in w])
    c = sum(a * b for a, b in zip(*wings))
    return math.acos(max(-1.0, min(1.0, c)))


class TestCommonPerpendicular:
    def test_axis_aligned(self):
        l1 = Line3((Z, Z, Z), (F(1), Z, Z))
        l2 = Line3((Z, F(1), Z), (Z, Z, F(1)))
        f1, f2 = common_perpendicular(l1, l2)
        assert f1 == (0, 0, 0)
        assert f2 == (0, 1, 0)

    def test_feet_orthogonal_to_both(self):
        l1 = Line3((F(1), F(2), Z), (F(2), F(-1), F(3)))
        l2 = Line3((Z, Z, F(5)), (F(1), F(1), F(1)))
        f1, f2 = common_perpendicular(l1, l2)
        seg = vsub(f2, f1)
        assert vdot(seg, l1.direction) == 0
        assert vdot(seg, l2.direction) == 0

    def test_parallel_error(self):
        l1 = Line3((0, 0, 0), (1, 2, 3))
        l2 = Line3((1, 0, 0), (2, 4, 6))
        with pytest.raises(ParallelLinesError):
            common_perpendicular(l1, l2)

    def test_intersecting_error(self):
        l1 = Line3((Z, Z, Z), (F(1), Z, Z))
        l2 = Line3((Z, Z, Z), (Z, F(1), Z))
        with pytest.raises(IntersectingLinesError):
            common_perpendicular(l1, l2)


class TestTetrahedron:
    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateGeometryError):
            Tetrahedron((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0))

    def test_inward_normals(self, exact_demo_pyramid):
        tet = exact_demo_pyramid
        for face in ("ABC", "ABD", "ACD", "BCD"):
            plane = tet.face_plane(face)
            opposite = {"ABC": "D", "ABD": "C", "ACD": "B", "BCD": "A"}[face]
            assert plane.evaluate(tet.vertex(opposite)) > 0

    def test_from_base_foot_height_canonical_exact(self):
        tet = Tetrahedron.from_base_foot_height(
            [(Z, Z), (F(15), Z), (F(5), F(10))], (F(15, 2), Z), F(10))
        assert tet.is_exact
        assert tet.vertex("D") == (F(15, 2), Z, F(10))

    def test_from_base_foot_height_rigid_motion(self):
        # same triangle rotated and shifted; edge lengths must be preserved
        tet = Tetrahedron.from_base_foot_height(
            [(1.0, 1.0), (1.0, 16.0), (-9.0, 6.0)], (1.0, 8.5), 10.0)
        assert tet.vertex("A") == (0.0, 0.0, 0.0)
        b = tet.vertex("B")
        assert b[1] == 0.0 and b[2] == 0.0 and b[0] == pytest.approx(15.0)
        c = tet.vertex("C")
        assert c[1] > 0
        assert math.hypot(c[0], c[1]) == pytest.approx(math.hypot(5, 10))

    def test_height_must_be_positive(self):
        with pytest.raises(DegenerateGeometryError):
            Tetrahedron.from_base_foot_height(
                [(0, 0), (1, 0), (0, 1)], (0.2, 0.2), 0)

    def test_backend_detection(self, exact_demo_pyramid):
        assert exact_demo_pyramid.is_exact
        assert exact_demo_pyramid.tol == 0
        flo = exact_demo_pyramid.as_float()
        assert not flo.is_exact
        assert flo.tol > 0


def test_backend_agreement_on_demo_planes(exact_demo_pyramid):
    exact = exact_demo_pyramid
    flo = exact_demo_pyramid.as_float()
    for face in ("ABC", "ABD", "ACD", "BCD"):
        pe = exact.face_plane(face).reflection_matrix()
        pf = flo.face_plane(face).reflection_matrix()
        for re, rf in zip(pe, pf):
            for xe, xf in zip(re, rf):
                assert abs(float(xe) - xf) <= 1e-12 * max(1.0, abs(float(xe)))
