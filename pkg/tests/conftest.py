from fractions import Fraction as F

import pytest

from pyramid_billiards.geometry import Tetrahedron

Z = F(0)


@pytest.fixture
def exact_demo_pyramid():
    """Pyramid with fully rational 4-cycle data, used as the exactness anchor."""
    return Tetrahedron((Z, Z, Z), (F(4), Z, Z), (F(2), F(4), Z), (F(2), F(3), F(3)))


@pytest.fixture
def gravity_demo_pyramid():
    """Pyramid of the worked gravity-billiard family (float backend)."""
    return Tetrahedron((0.0, 0.0, 0.0), (4.0, 0.0, 0.0), (3.0, 3.0, 0.0),
                       (2.0, 1.0, 3.0))


@pytest.fixture
def gravity_demo_pyramid_exact():
    return Tetrahedron((Z, Z, Z), (F(4), Z, Z), (F(3), F(3), Z), (F(2), F(1), F(3)))


@pytest.fixture
def two_obtuse_pyramid():
    """Low-apex pyramid with obtuse dihedrals at AD and BD and no 4-cycles."""
    return Tetrahedron((Z, Z, Z), (F(4), Z, Z), (F(3), F(3), Z), (F(3), F(2), F(1)))


@pytest.fixture
def slanted_base_pyramid():
    """Obtuse-base pyramid (angle at C); one gravity family, no straight cycles."""
    return Tetrahedron((Z, Z, Z), (F(9), Z, Z), (F(6), F(3), Z), (F(6), F(2), F(4)))


@pytest.fixture
def mirror_pyramid():
    """Mirror-symmetric pyramid: |AC| = |BC|, |AD| = |BD|, mirror plane x = 3."""
    return Tetrahedron((Z, Z, Z), (F(6), Z, Z), (F(3), F(4), Z), (F(3), F(2), F(4)))


@pytest.fixture
def corner_pyramid():
    """Trihedral right corner at D."""
    return Tetrahedron((F(1), Z, Z), (Z, F(1), Z), (Z, Z, F(1)), (Z, Z, Z))


@pytest.fixture
def regular_tetrahedron():
    return Tetrahedron((F(1), F(1), F(1)), (F(1), F(-1), F(-1)),
                       (F(-1), F(1), F(-1)), (F(-1), F(-1), F(1)))


@pytest.fixture
def demo_base():
    """Acute base triangle used by the map and profile examples."""
    return [(0.0, 0.0), (15.0, 0.0), (5.0, 10.0)]
