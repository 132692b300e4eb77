import random
from fractions import Fraction as F

import pytest

from pyramid_billiards.cycles import (
    CANONICAL_ORDERS,
    certify_cycle,
    cycle_rotation_matrix,
    find_cycle_for_order,
    find_cycles,
    order_from_index,
    reversed_order,
    rotation_axis,
    simulate_billiard,
    starting_point,
    unfold,
    unfolded_endpoint,
    validate_order,
)
from pyramid_billiards.errors import IdentityRotationError
from pyramid_billiards.linalg import (
    IDENTITY3,
    mat_eq,
    mdet,
    mmul,
    mtranspose,
    mvec,
    nullspace3,
    msub,
    vcross,
    vdist,
    vdot,
    vnorm,
    vscale,
    vsub,
)
from pyramid_billiards.sampling import random_canonical_pyramid

Z = F(0)
ORDER_1 = CANONICAL_ORDERS[0]

DEMO_ROTATION = tuple(
    tuple(F(n, 529) for n in row)
    for row in ((-191, -156, -468), (468, -216, -119), (-156, -457, 216))
)


class TestOrders:
    def test_exactly_three_canonical_orders(self):
        assert len(CANONICAL_ORDERS) == 3
        for order in CANONICAL_ORDERS:
            assert order[0] == "ABC"
            assert sorted(order) == ["ABC", "ABD", "ACD", "BCD"]

    def test_order_from_index(self):
        assert order_from_index(1) == ("ABC", "ABD", "ACD", "BCD")
        assert order_from_index(2) == ("ABC", "ACD", "ABD", "BCD")
        assert order_from_index(3) == ("ABC", "ABD", "BCD", "ACD")
        with pytest.raises(ValueError):
            order_from_index(4)

    def test_validate_rejects_noncanonical(self):
        with pytest.raises(ValueError):
            validate_order(("ABC", "BCD", "ACD", "ABD"))

    def test_reversal_stays_in_class(self):
        for order in CANONICAL_ORDERS:
            rev = reversed_order(order)
            assert validate_order(reversed_order(rev)) == order


class TestRotationMatrix:
    def test_demo_product_exact(self, exact_demo_pyramid):
        assert cycle_rotation_matrix(exact_demo_pyramid, ORDER_1) == DEMO_ROTATION

    def test_rotation_properties_random(self):
        rng = random.Random(21)
        for _ in range(25):
            tet = random_canonical_pyramid(rng)
            order = CANONICAL_ORDERS[rng.randrange(3)]
            m = cycle_rotation_matrix(tet, order)
            assert mdet(m) == 1
            assert mat_eq(mmul(mtranspose(m), m), IDENTITY3)

    def test_never_identity_fixed_space_dim_one(self):
        # the composed rotation cannot be the identity; its fixed space is a line
        rng = random.Random(22)
        for _ in range(25):
            tet = random_canonical_pyramid(rng)
            for order in CANONICAL_ORDERS:
                m = cycle_rotation_matrix(tet, order)
                assert not mat_eq(m, IDENTITY3)
                assert len(nullspace3(msub(m, IDENTITY3))) == 1


class TestRotationAxis:
    def test_demo_axis(self):
        axis = rotation_axis(DEMO_ROTATION)
        assert vcross(axis, (-13, -12, 24)) == (0, 0, 0)
        assert axis == (13, 12, -24)  # integer primitive, first component positive

    def test_z_rotation(self):
        c, s = F(3, 5), F(4, 5)
        m = ((c, -s, Z), (s, c, Z), (Z, Z, F(1)))
        assert rotation_axis(m) == (0, 0, 1)

    def test_axis_is_fixed_vector(self):
        rng = random.Random(23)
        for _ in range(20):
            tet = random_canonical_pyramid(rng)
            m = cycle_rotation_matrix(tet, CANONICAL_ORDERS[rng.randrange(3)])
            axis = rotation_axis(m)
            assert mvec(m, axis) == axis

    def test_identity_rejected(self):
        with pytest.raises(IdentityRotationError):
            rotation_axis(IDENTITY3)


class TestUnfold:
    def test_demo_images(self, exact_demo_pyramid):
        chain = unfold(exact_demo_pyramid, ORDER_1)
        assert chain.final["C"] == (2, 0, 4)
        assert chain.final["B"] == (F(-52, 23), F(24, 23), F(72, 23))
        assert chain.final["A"] == (F(-432, 529), F(1176, 529), F(3528, 529))

    def test_images_congruent_to_base(self, exact_demo_pyramid):
        tet = exact_demo_pyramid
        chain = unfold(tet, ORDER_1)
        a1, b1, c1 = chain.base_images()
        a, b, c = (tet.vertex(l) for l in ("A", "B", "C"))
        assert vdot(vsub(a1, b1), vsub(a1, b1)) == vdot(vsub(a, b), vsub(a, b))
        assert vdot(vsub(a1, c1), vsub(a1, c1)) == vdot(vsub(a, c), vsub(a, c))
        assert vdot(vsub(b1, c1), vsub(b1, c1)) == vdot(vsub(b, c), vsub(b, c))

    def test_each_stage_is_single_reflection(self, exact_demo_pyramid):
        chain = unfold(exact_demo_pyramid, ORDER_1)
        # first stage mirrors across ABD: A, B, D fixed, C moved
        s0, s1 = chain.stages[0], chain.stages[1]
        for label in ("A", "B", "D"):
            assert s0[label] == s1[label]
        assert s0["C"] != s1["C"]


class TestStartingPoint:
    def test_demo_start(self, exact_demo_pyramid):
        result = starting_point(exact_demo_pyramid, ORDER_1)
        assert result is not None
        bary, f = result
        assert bary.astuple() == (F(115, 1778), F(583, 1778), F(540, 889))
        assert f == (F(2246, 889), F(2160, 889), Z)

    def test_corner_pyramid_yields_no_cycle(self, corner_pyramid):
        for order in CANONICAL_ORDERS:
            cycle = find_cycle_for_order(corner_pyramid, order)
            assert cycle is None

    def test_nonpositive_weight_filtered(self, two_obtuse_pyramid):
        # this pyramid has no cycles; every order must die in the pipeline
        for order in CANONICAL_ORDERS:
            sp = starting_point(two_obtuse_pyramid, order)
            if sp is not None:
                assert certify_cycle(two_obtuse_pyramid, order, sp[1],
                                     rotation_axis(cycle_rotation_matrix(
                                         two_obtuse_pyramid, order))) is None


class TestCertify:
    def test_demo_cycle_certifies(self, exact_demo_pyramid):
        cycle = find_cycle_for_order(exact_demo_pyramid, ORDER_1)
        assert cycle is not None
        assert cycle.start == (F(2246, 889), F(2160, 889), Z)
        assert cycle.points[0] == cycle.start
        assert cycle.exact

    def test_direction_sign_auto_flipped(self, exact_demo_pyramid):
        cycle = find_cycle_for_order(exact_demo_pyramid, ORDER_1)
        flipped = certify_cycle(exact_demo_pyramid, ORDER_1, cycle.start,
                                vscale(cycle.direction, -1))
        assert flipped is not None
        assert flipped.points == cycle.points

    def test_boundary_start_rejected(self, exact_demo_pyramid):
        tet = exact_demo_pyramid
        edge_point = vscale(vsub(tet.vertex("B"), tet.vertex("A")), F(1, 2))
        cycle = find_cycle_for_order(tet, ORDER_1)
        assert certify_cycle(tet, ORDER_1, edge_point, cycle.direction) is None

    def test_bounce_points_strictly_interior(self, exact_demo_pyramid):
        from pyramid_billiards.geometry import point_in_triangle_strict
        cycle = find_cycle_for_order(exact_demo_pyramid, ORDER_1)
        faces = (ORDER_1[0],) + ORDER_1[1:]
        for face, point in zip(faces, cycle.points):
            tri = exact_demo_pyramid.face_triangle(face)
            assert point_in_triangle_strict(tri, point)

    def test_reflection_law_at_each_bounce(self, exact_demo_pyramid):
        tet = exact_demo_pyramid
        cycle = find_cycle_for_order(tet, ORDER_1)
        pts = list(cycle.points) + [cycle.points[0]]
        faces = ORDER_1[1:] + (ORDER_1[0],)
        for i, face in enumerate(faces[:3]):
            incoming = vsub(pts[i + 1], pts[i])
            outgoing = vsub(pts[i + 2], pts[i + 1])
            n = tet.face_plane(face).normal
            # mirror of the incoming direction equals the outgoing direction
            reflected = vsub(incoming, vscale(n, 2 * vdot(incoming, n) / vdot(n, n)))
            assert vcross(reflected, outgoing) == (0, 0, 0)
            assert vdot(reflected, outgoing) > 0


class TestUnfoldingIsometry:
    def test_unfolded_segment_carries_the_cycle(self, exact_demo_pyramid):
        tet = exact_demo_pyramid
        order = ORDER_1
        chain = unfold(tet, order)
        cycle = find_cycle_for_order(tet, order)
        f = cycle.start
        f1 = unfolded_endpoint(tet, order, cycle.barycentric, chain)
        assert vcross(vsub(f1, f), cycle.direction) == (0, 0, 0)

        # unfold the bounce points onto the straight segment f -> f1
        seq = order[1:]
        planes = [tet.face_plane(name) for name in seq]
        images = [cycle.points[1],
                  planes[0].reflect_point(cycle.points[2]),
                  planes[0].reflect_point(planes[1].reflect_point(cycle.points[3]))]
        direction = vsub(f1, f)
        d2 = vdot(direction, direction)
        params = [vdot(vsub(p, f), direction) / d2 for p in images]
        assert all(vcross(vsub(p, f), direction) == (0, 0, 0) for p in images)
        assert Z < params[0] < params[1] < params[2] < 1

        # straight-segment length equals the polygonal path length
        assert vnorm(vsub(f1, f)) == pytest.approx(cycle.length, rel=1e-12)


class TestFindCycles:
    def test_demo_pyramid_has_three(self, exact_demo_pyramid):
        cycles = find_cycles(exact_demo_pyramid)
        assert len(cycles) == 3
        assert {c.order for c in cycles} == set(CANONICAL_ORDERS)

    def test_low_apex_pyramid_has_none(self, two_obtuse_pyramid):
        assert find_cycles(two_obtuse_pyramid) == []

    def test_float_backend_agrees_with_exact(self, exact_demo_pyramid):
        exact_cycles = find_cycles(exact_demo_pyramid)
        float_cycles = find_cycles(exact_demo_pyramid.as_float())
        assert len(float_cycles) == len(exact_cycles)
        by_order = {c.order: c for c in float_cycles}
        for ec in exact_cycles:
            fc = by_order[ec.order]
            for pe, pf in zip(ec.points, fc.points):
                assert vdist(pe, pf) < 1e-9


class TestSimulate:
    def test_zero_bounces(self, exact_demo_pyramid):
        traj = simulate_billiard(exact_demo_pyramid, (F(2), F(2), F(1)),
                                 (Z, Z, F(1)), 0)
        assert traj.points == ((F(2), F(2), F(1)),)
        assert traj.exit == "completed"

    def test_period_four_return(self, exact_demo_pyramid):
        cycle = find_cycle_for_order(exact_demo_pyramid, ORDER_1)
        traj = simulate_billiard(exact_demo_pyramid, cycle.start,
                                 cycle.direction, 8)
        assert traj.exit == "completed"
        assert traj.points[4] == cycle.start
        assert traj.points[8] == cycle.start
        assert traj.directions[4] == cycle.direction

    def test_reversal_symmetry(self, exact_demo_pyramid):
        cycle = find_cycle_for_order(exact_demo_pyramid, ORDER_1)
        back_dir = vsub(cycle.points[3], cycle.points[0])
        traj = simulate_billiard(exact_demo_pyramid, cycle.start, back_dir, 4)
        assert traj.exit == "completed"
        assert traj.points[1:4] == (cycle.points[3], cycle.points[2],
                                    cycle.points[1])
        assert traj.points[4] == cycle.start

    def test_reversed_schedule_certifies(self, exact_demo_pyramid):
        from pyramid_billiards.linalg import reflect_direction
        tet = exact_demo_pyramid
        cycle = find_cycle_for_order(tet, ORDER_1)
        # the reversed trajectory leaves the start along the pre-bounce
        # (incoming) direction of the forward cycle; certify fixes the sign
        incoming = reflect_direction(cycle.direction,
                                     tet.face_plane("ABC").normal)
        back = certify_cycle(tet, reversed_order(ORDER_1), cycle.start,
                             incoming)
        assert back is not None
        assert back.points == (cycle.points[0], cycle.points[3],
                               cycle.points[2], cycle.points[1])
        assert back.length == pytest.approx(cycle.length, rel=1e-12)

    def test_finder_rejects_reversed_order(self, exact_demo_pyramid):
        with pytest.raises(ValueError):
            find_cycle_for_order(exact_demo_pyramid, reversed_order(ORDER_1))

    def test_orthogonal_launch_reverses_in_corner(self, corner_pyramid):
        tet = corner_pyramid
        start = (F(1, 2), F(1, 3), F(1, 6))  # interior, off the symmetry axis
        n = tet.face_plane("ABC").normal  # inward
        traj = simulate_billiard(tet, start, n, 3)
        assert traj.exit == "completed"
        assert set(traj.faces) == {"ABD", "ACD", "BCD"}
        # the three wall reflections compose to -identity
        assert vcross(traj.directions[-1], n) == (0, 0, 0)
        assert vdot(traj.directions[-1], n) < 0

    def test_random_pyramids_close_exactly(self):
        rng = random.Random(31)
        checked = 0
        for _ in range(40):
            tet = random_canonical_pyramid(rng)
            for cycle in find_cycles(tet):
                traj = simulate_billiard(tet, cycle.start, cycle.direction, 4)
                assert traj.exit == "completed"
                assert traj.points[4] == cycle.start
                assert traj.directions[4] == cycle.direction
                checked += 1
        assert checked > 0
