"""Seeded generators of random rational test pyramids.

Coordinates are small-denominator Fractions so that downstream exact
arithmetic stays fast. All generators take a random.Random so runs are
reproducible from a single seed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .geometry import Tetrahedron

_DENOMS = (1, 2, 3, 4)


def _frac(rng: random.Random, lo: int, hi: int, positive: bool = False) -> Fraction:
    den = rng.choice(_DENOMS)
    num = rng.randint(lo * den, hi * den)
    if positive and num <= 0:
        num = rng.randint(1, hi * den)
    return Fraction(num, den)


def random_canonical_pyramid(rng: random.Random) -> Tetrahedron:
    """Pyramid in canonical pose: base in z=0, apex above it.

    A is the origin, B sits on the positive x axis, C in the upper half
    plane, D strictly above the base plane.
    """
    zero = Fraction(0)
    b = (_frac(rng, 2, 10, positive=True), zero, zero)
    c = (_frac(rng, -4, 10), _frac(rng, 1, 10, positive=True), zero)
    d = (_frac(rng, -4, 12), _frac(rng, -4, 10), _frac(rng, 1, 10, positive=True))
    return Tetrahedron((zero, zero, zero), b, c, d)


def random_corner_pyramid(rng: random.Random) -> Tetrahedron:
    """Corner pyramid: D at a trihedral right angle, legs along the axes."""
    zero = Fraction(0)
    a = (_frac(rng, 1, 8, positive=True), zero, zero)
    b = (zero, _frac(rng, 1, 8, positive=True), zero)
    c = (zero, zero, _frac(rng, 1, 8, positive=True))
    return Tetrahedron(a, b, c, (zero, zero, zero))


def random_orthogonal_faces_pyramid(rng: random.Random) -> Tetrahedron:
    """Family with faces ABD and ACD orthogonal along the edge AD.

    A at the origin, B = (a, 0, b), C = (0, c, d), D = (0, 0, e) with
    a, c, e positive puts ABD in the y=0 plane and ACD in the x=0 plane.
    """
    zero = Fraction(0)
    b = (_frac(rng, 1, 8, positive=True), zero, _frac(rng, -4, 4))
    c = (zero, _frac(rng, 1, 8, positive=True), _frac(rng, -4, 4))
    d = (zero, zero, _frac(rng, 1, 8, positive=True))
    return Tetrahedron((zero, zero, zero), b, c, d)


def random_symmetric_pyramid(rng: random.Random) -> Tetrahedron:
    """Pyramid mirror-symmetric across the plane x = |AB|/2.

    |AC| = |BC| and |AD| = |BD| by construction; the mirror plane carries
    C, D and the midpoint of AB.
    """
    zero = Fraction(0)
    w = _frac(rng, 2, 10, positive=True)
    half = w / 2
    c = (half, _frac(rng, 1, 8, positive=True), zero)
    d = (half, _frac(rng, -4, 8), _frac(rng, 1, 8, positive=True))
    return Tetrahedron((zero, zero, zero), (w, zero, zero), c, d)
