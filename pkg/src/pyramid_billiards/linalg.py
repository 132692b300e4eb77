"""Backend-generic scalars and small fixed-size linear algebra.

Vectors are plain 3-tuples and matrices are row-major tuples of three rows.
Every function keeps the arithmetic inside whatever number type the caller
supplies, so the same code runs bit-exact on int/Fraction inputs and fast on
floats. Nothing here ever takes a square root except the explicitly
float-valued norm helpers.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence, Tuple, Union

Scalar = Union[int, float, Fraction]
Vec3 = Tuple[Scalar, Scalar, Scalar]
Mat3 = Tuple[Vec3, Vec3, Vec3]

IDENTITY3: Mat3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def is_exact(*values: Scalar) -> bool:
    """True when every scalar is an int or a Fraction."""
    return all(isinstance(v, (int, Fraction)) for v in values)


def vec_is_exact(*vectors: Sequence[Scalar]) -> bool:
    return all(is_exact(*v) for v in vectors)


# ---------------------------------------------------------------------------
# vectors

def vadd(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def vsub(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def vneg(a: Vec3) -> Vec3:
    return (-a[0], -a[1], -a[2])


def vscale(a: Vec3, s: Scalar) -> Vec3:
    return (a[0] * s, a[1] * s, a[2] * s)


def vdot(a: Vec3, b: Vec3) -> Scalar:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def vcross(a: Vec3, b: Vec3) -> Vec3:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def vnorm2(a: Vec3) -> Scalar:
    """Squared euclidean length, exact on exact inputs."""
    return vdot(a, a)


def vnorm(a: Vec3) -> float:
    """Euclidean length as a float regardless of backend."""
    return math.sqrt(float(vnorm2(a)))


def vdist(a: Vec3, b: Vec3) -> float:
    return vnorm(vsub(a, b))


def is_zero_vec(a: Vec3) -> bool:
    return a[0] == 0 and a[1] == 0 and a[2] == 0


def as_float_vec(a: Sequence[Scalar]) -> Tuple[float, ...]:
    return tuple(float(x) for x in a)


def reflect_direction(v: Vec3, n: Vec3) -> Vec3:
    """Mirror v across the plane with normal n: v - 2(v.n)n/(n.n)."""
    nn = vdot(n, n)
    if nn == 0:
        raise ZeroDivisionError("zero normal")
    s = 2 * vdot(v, n)
    return (v[0] - s * n[0] / nn, v[1] - s * n[1] / nn, v[2] - s * n[2] / nn)


# ---------------------------------------------------------------------------
# matrices (row major)

def mrows(m: Mat3) -> Tuple[Vec3, Vec3, Vec3]:
    return m


def mvec(m: Mat3, v: Vec3) -> Vec3:
    return (vdot(m[0], v), vdot(m[1], v), vdot(m[2], v))


def mmul(a: Mat3, b: Mat3) -> Mat3:
    bt = mtranspose(b)
    return tuple(tuple(vdot(row, col) for col in bt) for row in a)


def mtranspose(m: Mat3) -> Mat3:
    return tuple(zip(*m))


def msub(a: Mat3, b: Mat3) -> Mat3:
    return tuple(vsub(ra, rb) for ra, rb in zip(a, b))


def mdet(m: Mat3) -> Scalar:
    return vdot(m[0], vcross(m[1], m[2]))


def mat_eq(a: Mat3, b: Mat3) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def mat_close(a: Mat3, b: Mat3, tol: float) -> bool:
    return all(abs(float(x) - float(y)) <= tol
               for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def mat_as_float(m: Mat3) -> Mat3:
    return tuple(as_float_vec(r) for r in m)


def is_zero_mat(m: Mat3) -> bool:
    return all(x == 0 for row in m for x in row)


# ---------------------------------------------------------------------------
# small solvers

def solve3(m: Mat3, rhs: Vec3, eps_rel: float = 0.0):
    """Solve the 3x3 system m @ x = rhs by Cramer's rule.

    Returns None when the determinant vanishes (exactly for exact scalars,
    relative to the matrix scale for floats with eps_rel > 0).
    """
    d = mdet(m)
    if is_exact(d):
        if d == 0:
            return None
    else:
        scale = max(abs(float(x)) for row in m for x in row)
        if abs(float(d)) <= eps_rel * max(scale, 1e-300) ** 3:
            return None
    cols = mtranspose(m)
    # Cramer: determinant with column j replaced by the right-hand side
    x = []
    for j in range(3):
        repl = tuple(tuple(rhs[i] if k == j else cols[k][i] for k in range(3))
                     for i in range(3))
        x.append(mdet(repl) / d)
    return tuple(x)


def row_reduce(m: Mat3, eps_rel: float = 1e-10, scale: float = None):
    """Forward Gaussian elimination with partial pivoting.

    Returns (rows, pivots) where pivots is a list of (row, col) positions.
    For exact scalars a pivot must be nonzero; for floats it must exceed
    eps_rel times the largest pivot magnitude seen so far. That magnitude
    is seeded with the largest matrix entry, or with `scale` when the
    caller knows the natural magnitude of the problem (for example 1 for
    differences of orthogonal matrices, whose entries may all be small).
    """
    rows = [list(r) for r in m]
    exact = all(is_exact(x) for row in rows for x in row)
    if scale is None:
        scale = max((abs(float(x)) for row in rows for x in row), default=0.0)
    pivots = []
    largest = scale
    r = 0
    for c in range(3):
        best, best_mag = None, -1.0
        for i in range(r, 3):
            mag = abs(float(rows[i][c]))
            if mag > best_mag:
                best, best_mag = i, mag
        if exact:
            usable = rows[best][c] != 0
        else:
            usable = best_mag > eps_rel * largest and best_mag > 0.0
        if not usable:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        largest = max(largest, best_mag)
        for i in range(r + 1, 3):
            f = rows[i][c] / rows[r][c]
            rows[i] = [rows[i][j] - f * rows[r][j] for j in range(3)]
            rows[i][c] = 0 * rows[i][c]
        pivots.append((r, c))
        r += 1
    return rows, pivots


def nullspace3(m: Mat3, eps_rel: float = 1e-10, scale: float = None):
    """Null-space basis of a 3x3 matrix via row reduction.

    Returns a list of 0 to 3 basis vectors (3 only for the zero matrix).
    """
    rows, pivots = row_reduce(m, eps_rel, scale)
    pivot_cols = [c for _, c in pivots]
    free_cols = [c for c in range(3) if c not in pivot_cols]
    basis = []
    for fc in free_cols:
        x = [0, 0, 0]
        x[fc] = 1
        for r, c in reversed(pivots):
            s = sum(rows[r][j] * x[j] for j in range(3) if j != c)
            x[c] = -s / rows[r][c]
        basis.append(tuple(x))
    return basis


# ---------------------------------------------------------------------------
# canonical forms

def primitive_integer_vector(v: Vec3) -> Vec3:
    """Scale an exact rational vector to coprime integers.

    The sign is fixed so the first nonzero component is positive.
    """
    fracs = [Fraction(x) for x in v]
    denom_lcm = 1
    for f in fracs:
        denom_lcm = denom_lcm * f.denominator // math.gcd(denom_lcm, f.denominator)
    ints = [int(f * denom_lcm) for f in fracs]
    g = 0
    for n in ints:
        g = math.gcd(g, abs(n))
    if g == 0:
        raise ZeroDivisionError("zero vector has no primitive form")
    ints = [n // g for n in ints]
    for n in ints:
        if n != 0:
            if n < 0:
                ints = [-k for k in ints]
            break
    return tuple(ints)


def canonical_direction(v: Vec3) -> Vec3:
    """Normalize a direction: integer-primitive when exact, unit when float.

    Either way, the first nonzero component comes out positive.
    """
    if is_exact(*v):
        return primitive_integer_vector(v)
    n = vnorm(v)
    if n == 0:
        raise ZeroDivisionError("zero vector")
    u = tuple(float(x) / n for x in v)
    for x in u:
        if abs(x) > 1e-300:
            if x < 0:
                u = vneg(u)
            break
    return u
