"""Gravity billiard in a pyramid: parabolic arcs, elastic bounces, and
period-4 closure families.

A period-4 orbit starting on the base is described by ten unknowns: start
point (a, b), launch velocity (k, l, m), gravity g and the four arc times
t1..t4. Nine closure equations apply: one face-incidence equation per
non-base bounce and six return conditions (position back to (a, b, 0),
velocity back to (k, l, -m)). The orbit geometry depends only on the ratio
t = t3/t2, the overall time scale being free, so the solver pins t2 = 1 and
treats t3 = t as the scan parameter, leaving eight unknowns for nine
equations. Families are traced over t by warm-started Gauss-Newton with
random multistarts, and every accepted solution must survive an
event-driven re-simulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cycles import ReflectionOrder, reflection_sequence, validate_order
from .errors import DegenerateGeometryError
from .geometry import Tetrahedron, barycentric_of
from .linalg import Vec3, reflect_direction, vdot, vnorm, vsub

ACCEPT_RESIDUAL = 1e-10     # scaled residual norm accepted as solved
LSTSQ_RCOND = 1e-12         # singular value cutoff in the Gauss-Newton step
MAX_ITERATIONS = 100
INTERIOR_EPS = 1e-9         # strict-interior margin on barycentric weights


@dataclass(frozen=True)
class PhysState:
    """Snapshot of the moving point."""

    pos: Tuple[float, float, float]
    vel: Tuple[float, float, float]
    time: float = 0.0


def flight(state: PhysState, dt: float, g: float) -> PhysState:
    """Free parabolic flight for dt under downward gravity g."""
    x, y, z = state.pos
    vx, vy, vz = state.vel
    return PhysState(
        (x + vx * dt, y + vy * dt, z + vz * dt - 0.5 * g * dt * dt),
        (vx, vy, vz - g * dt),
        state.time + dt,
    )


def bounce(v: Vec3, n: Vec3) -> Vec3:
    """Elastic reflection of velocity v at a wall with normal n."""
    if n[0] == 0 and n[1] == 0 and n[2] == 0:
        raise DegenerateGeometryError("zero wall normal")
    return reflect_direction(v, n)


@dataclass(frozen=True)
class UnknownVector:
    """The ten orbit unknowns {a, b, k, l, m, g, t1, t2, t3, t4}."""

    a: float
    b: float
    k: float
    l: float
    m: float
    g: float
    t1: float
    t2: float
    t3: float
    t4: float

    @property
    def times(self) -> Tuple[float, float, float, float]:
        return (self.t1, self.t2, self.t3, self.t4)

    @property
    def ratio(self) -> float:
        return self.t3 / self.t2

    def all_positive(self) -> bool:
        return (self.m > 0 and self.g > 0
                and all(t > 0 for t in self.times))

    def rescaled(self, lam: float) -> "UnknownVector":
        """Gauge transform: times scale by lam, velocities by 1/lam,
        gravity by 1/lam**2; the orbit geometry is unchanged."""
        return UnknownVector(self.a, self.b,
                             self.k / lam, self.l / lam, self.m / lam,
                             self.g / lam ** 2,
                             self.t1 * lam, self.t2 * lam,
                             self.t3 * lam, self.t4 * lam)


def _require_base_pose(tet: Tetrahedron) -> None:
    for label in ("A", "B", "C"):
        if float(tet.vertex(label)[2]) != 0.0:
            raise ValueError("gravity billiard needs the base ABC in z = 0")
    if float(tet.vertex("D")[2]) <= 0.0:
        raise ValueError("gravity billiard needs the apex above the base")


def residual(u: UnknownVector, tet: Tetrahedron,
             order: ReflectionOrder) -> Tuple[float, ...]:
    """Raw 9-vector of closure defects for the candidate unknowns.

    Components 0..2: face-plane equations at the three non-base bounce
    points, in bounce order. Components 3..5: final position minus
    (a, b, 0). Components 6..8: final velocity minus (k, l, -m).
    """
    order = validate_order(order)
    _require_base_pose(tet)
    seq = reflection_sequence(order)[:3]
    g = u.g
    state = PhysState((u.a, u.b, 0.0), (u.k, u.l, u.m))
    face_res = []
    for face, dt in zip(seq, u.times[:3]):
        state = flight(state, dt, g)
        plane = tet.face_plane(face)
        face_res.append(float(plane.evaluate(state.pos)))
        state = PhysState(state.pos, bounce(state.vel, plane.normal), state.time)
    state = flight(state, u.t4, g)
    pos_res = vsub(state.pos, (u.a, u.b, 0.0))
    vel_res = vsub(state.vel, (u.k, u.l, -u.m))
    return tuple(face_res) + tuple(map(float, pos_res)) + tuple(map(float, vel_res))


def chain_points(u: UnknownVector, tet: Tetrahedron,
                 order: ReflectionOrder):
    """Bounce points (p1..p4) and the pre-bounce velocities along the chain.

    p1 is the start on the base; p2..p4 are the scheduled bounce points.
    """
    order = validate_order(order)
    seq = reflection_sequence(order)[:3]
    state = PhysState((u.a, u.b, 0.0), (u.k, u.l, u.m))
    points = [state.pos]
    for face, dt in zip(seq, u.times[:3]):
        state = flight(state, dt, u.g)
        points.append(state.pos)
        state = PhysState(state.pos, bounce(state.vel, tet.face_plane(face).normal),
                          state.time)
    return tuple(points)


def energy(state: PhysState, g: float) -> float:
    """Specific mechanical energy |v|^2 / 2 + g z, conserved by the flow."""
    return 0.5 * float(vdot(state.vel, state.vel)) + g * float(state.pos[2])


@dataclass(frozen=True)
class PhysicalSolution:
    """An accepted period-4 orbit of the gravity billiard."""

    order: ReflectionOrder
    unknowns: UnknownVector
    points: Tuple[Tuple[float, float, float], ...]  # p1 (start) .. p4
    residual_norm: float  # scaled
    certified: bool

    @property
    def start(self) -> Tuple[float, float]:
        return (self.unknowns.a, self.unknowns.b)


def _residual_scales(tet: Tetrahedron, order: ReflectionOrder) -> np.ndarray:
    seq = reflection_sequence(order)[:3]
    diam = tet.diameter
    scales = [vnorm(tet.face_plane(f).normal) * diam for f in seq]
    scales += [diam] * 6
    return np.array(scales)


def scaled_residual_norm(u: UnknownVector, tet: Tetrahedron,
                         order: ReflectionOrder) -> float:
    r = np.array(residual(u, tet, order)) / _residual_scales(tet, order)
    return float(np.linalg.norm(r))


# ---------------------------------------------------------------------------
# event-driven simulation

def _parabolic_hit_times(plane, pos, vel, g, s_min):
    """Positive times at which the arc from (pos, vel) meets the plane."""
    n = plane.normal
    alpha = -0.5 * g * float(n[2])
    beta = float(vdot(n, vel))
    gamma = float(plane.evaluate(pos))
    roots = []
    if abs(alpha) < 1e-300:
        if beta != 0.0:
            roots.append(-gamma / beta)
    else:
        disc = beta * beta - 4.0 * alpha * gamma
        if disc >= 0.0:
            sq = math.sqrt(disc)
            if beta >= 0.0:
                q = -0.5 * (beta + sq)
            else:
                q = -0.5 * (beta - sq)
            if q != 0.0:
                roots.append(q / alpha)
                roots.append(gamma / q)
            else:
                roots.append(0.0)
    return [s for s in roots if s > s_min and math.isfinite(s)]


def _first_parabolic_hit(tet, pos, vel, g, s_min):
    from .geometry import FACES
    best = None
    for face in FACES:
        for s in _parabolic_hit_times(tet.face_plane(face), pos, vel, g, s_min):
            if best is None or s < best[1]:
                best = (face, s)
    return best


@dataclass(frozen=True)
class PhysTrajectory:
    states: Tuple[PhysState, ...]  # event snapshots (pre-bounce), start first
    faces: Tuple[str, ...]
    exit: str  # "completed" | "edge" | "stuck"


def physical_simulate(tet: Tetrahedron, state0: PhysState, g: float,
                      n_bounces: int) -> PhysTrajectory:
    """Event-driven gravity billiard: find the earliest face crossing of
    each parabolic arc, bounce, repeat. Boundary (edge or vertex) hits and
    arcs with no forward crossing terminate the trajectory with a flag."""
    _require_base_pose(tet)
    states = [state0]
    faces: List[str] = []
    state = state0
    time_scale = max(tet.diameter / max(vnorm(state0.vel), 1e-12), 1e-12)
    for _ in range(n_bounces):
        hit = _first_parabolic_hit(tet, state.pos, state.vel, g,
                                   1e-9 * time_scale)
        if hit is None:
            return PhysTrajectory(tuple(states), tuple(faces), "stuck")
        face, s = hit
        state = flight(state, s, g)
        states.append(state)
        faces.append(face)
        w = barycentric_of(tet.face_triangle(face), state.pos,
                           tol=1e-6).astuple()
        if not all(float(x) > INTERIOR_EPS for x in w):
            return PhysTrajectory(tuple(states), tuple(faces), "edge")
        state = PhysState(state.pos,
                          bounce(state.vel, tet.face_plane(face).normal),
                          state.time)
    return PhysTrajectory(tuple(states), tuple(faces), "completed")


def forward_check(sol: PhysicalSolution, tet: Tetrahedron,
                  order: ReflectionOrder, tol_rel: float = 1e-9) -> bool:
    """Independent certification by event-driven re-simulation.

    Each scheduled face must be the first face the arc meets, strictly
    inside its triangle, and the 4th bounce must land back on the start
    with mirrored vertical velocity.
    """
    order = validate_order(order)
    u = sol.unknowns
    seq = reflection_sequence(order)
    state = PhysState((u.a, u.b, 0.0), (u.k, u.l, u.m))
    total_time = sum(u.times)
    s_min = 1e-9 * total_time
    diam = tet.diameter
    for face in seq:
        hit = _first_parabolic_hit(tet, state.pos, state.vel, u.g, s_min)
        if hit is None or hit[0] != face:
            return False
        state = flight(state, hit[1], u.g)
        try:
            w = barycentric_of(tet.face_triangle(face), state.pos,
                               tol=1e-6).astuple()
        except Exception:
            return False
        if not all(float(x) > INTERIOR_EPS for x in w):
            return False
        if face != seq[-1]:
            state = PhysState(state.pos,
                              bounce(state.vel, tet.face_plane(face).normal),
                              state.time)
    if vnorm(vsub(state.pos, (u.a, u.b, 0.0))) > tol_rel * diam:
        return False
    speed = max(vnorm((u.k, u.l, u.m)), 1e-300)
    if vnorm(vsub(state.vel, (u.k, u.l, -u.m))) > tol_rel * speed * 10:
        return False
    return True


# ---------------------------------------------------------------------------
# Gauss-Newton solver at fixed ratio

def _unknowns_from_free(x: np.ndarray, t: float) -> UnknownVector:
    return UnknownVector(a=x[0], b=x[1], k=x[2], l=x[3], m=x[4], g=x[5],
                         t1=x[6], t2=1.0, t3=t, t4=x[7])


def _free_from_unknowns(u: UnknownVector) -> np.ndarray:
    lam = 1.0 / u.t2  # re-gauge to t2 = 1
    v = u.rescaled(lam)
    return np.array([v.a, v.b, v.k, v.l, v.m, v.g, v.t1, v.t4])


def solve_at_t(tet: Tetrahedron, order: ReflectionOrder, t: float,
               guess, max_iter: int = MAX_ITERATIONS,
               accept_tol: float = ACCEPT_RESIDUAL) -> Optional[PhysicalSolution]:
    """Gauss-Newton solve of the closure system at fixed ratio t = t3/t2.

    The time gauge is pinned at t2 = 1. `guess` is an UnknownVector or an
    array of the eight free unknowns (a, b, k, l, m, g, t1, t4). Returns an
    accepted PhysicalSolution (residual below tolerance, all of m, g, t1,
    t4 positive, event re-simulation clean) or None.
    """
    order = validate_order(order)
    _require_base_pose(tet)
    if t <= 0:
        raise ValueError("ratio t must be positive")
    if isinstance(guess, UnknownVector):
        x = _free_from_unknowns(guess)
    else:
        x = np.asarray(guess, dtype=float).copy()
    if x.shape != (8,):
        raise ValueError("guess must provide 8 free unknowns")

    scales = _residual_scales(tet, order)

    def res(xv):
        u = _unknowns_from_free(xv, t)
        r = np.array(residual(u, tet, order))
        return r / scales

    # clamp t1, t4 into the positive half right away
    x[6] = abs(x[6]) if x[6] != 0 else 1e-3
    x[7] = abs(x[7]) if x[7] != 0 else 1e-3

    r = res(x)
    if not np.all(np.isfinite(r)):
        return None
    rn = float(np.linalg.norm(r))
    for _ in range(max_iter):
        if not math.isfinite(rn) or rn > 1e12:
            return None
        jac = np.empty((9, 8))
        for i in range(8):
            h = 1e-7 * max(1.0, abs(x[i]))
            xp = x.copy(); xp[i] += h
            xm = x.copy(); xm[i] -= h
            jac[:, i] = (res(xp) - res(xm)) / (2.0 * h)
        if not np.all(np.isfinite(jac)):
            return None
        step, *_ = np.linalg.lstsq(jac, -r, rcond=LSTSQ_RCOND)
        improved = False
        alpha = 1.0
        for _ in range(10):
            x_new = x + alpha * step
            r_new = res(x_new)
            if np.all(np.isfinite(r_new)):
                rn_new = float(np.linalg.norm(r_new))
                if rn_new < rn:
                    x, r, rn = x_new, r_new, rn_new
                    improved = True
                    break
            alpha *= 0.5
        if not improved:
            break
        if rn < 1e-15:
            break

    if rn >= accept_tol:
        return None
    u = _unknowns_from_free(x, t)
    if not u.all_positive():
        return None
    points = chain_points(u, tet, order)
    sol = PhysicalSolution(order=order, unknowns=u, points=points,
                           residual_norm=rn, certified=False)
    if not forward_check(sol, tet, order):
        return None
    return PhysicalSolution(order=order, unknowns=u, points=points,
                            residual_norm=rn, certified=True)


# ---------------------------------------------------------------------------
# multistart guesses

def random_guess(tet: Tetrahedron, rng: np.random.Generator) -> np.ndarray:
    """Physically plausible random start for the eight free unknowns."""
    a3, b3, c3 = tet.face_triangle("ABC")
    u, v = rng.random(), rng.random()
    if u + v > 1.0:
        u, v = 1.0 - u, 1.0 - v
    w = 1.0 - u - v
    px = u * float(a3[0]) + v * float(b3[0]) + w * float(c3[0])
    py = u * float(a3[1]) + v * float(b3[1]) + w * float(c3[1])
    diam = tet.diameter
    speed = diam * 10.0 ** rng.uniform(-0.8, 0.4)
    phi = rng.uniform(0.0, 2.0 * math.pi)
    cos_up = rng.uniform(0.15, 0.95)
    sin_up = math.sqrt(1.0 - cos_up * cos_up)
    k = speed * sin_up * math.cos(phi)
    l = speed * sin_up * math.sin(phi)
    m = speed * cos_up
    g = diam * 10.0 ** rng.uniform(-0.7, 0.7)
    t1 = 10.0 ** rng.uniform(-0.8, 0.4)
    t4 = 10.0 ** rng.uniform(-0.8, 0.4)
    return np.array([px, py, k, l, m, g, t1, t4])


# ---------------------------------------------------------------------------
# family scan over the ratio t

@dataclass
class Branch:
    """One connected solution family traced over the ratio grid."""

    id: int
    entries: List[Tuple[float, PhysicalSolution]]

    @property
    def t_values(self) -> List[float]:
        return [t for t, _ in self.entries]

    @property
    def interval(self) -> Tuple[float, float]:
        ts = self.t_values
        return (min(ts), max(ts))

    def start_curve(self) -> List[Tuple[float, float, float]]:
        """(t, a, b) polyline of admissible start points."""
        return [(t, s.unknowns.a, s.unknowns.b) for t, s in self.entries]

    def solution_near(self, t: float) -> PhysicalSolution:
        return min(self.entries, key=lambda e: abs(e[0] - t))[1]


@dataclass(frozen=True)
class FamilyScan:
    order: ReflectionOrder
    t_grid: Tuple[float, ...]
    branches: Tuple[Branch, ...]
    seed: int
    multistart: int

    def intervals(self) -> List[Tuple[float, float]]:
        return [br.interval for br in self.branches]


def _start_distance(s1: PhysicalSolution, s2: PhysicalSolution) -> float:
    return math.hypot(s1.unknowns.a - s2.unknowns.a,
                      s1.unknowns.b - s2.unknowns.b)


def scan_family(tet: Tetrahedron, order: ReflectionOrder,
                t_grid: Sequence[float], multistart: int = 16, seed: int = 0,
                endpoint_tol: float = 1e-3,
                cluster_rel: float = 1e-2) -> FamilyScan:
    """Trace solution families over a grid of ratios t.

    At each grid point every live branch is warm-started from its latest
    solution and `multistart` random guesses look for new branches.
    Distinct solutions at one t are separated by start-point clustering
    (radius cluster_rel times the diameter). Afterwards each branch's
    endpoints are refined by bisection (width endpoint_tol), warm-starting
    from the branch interior; the lower walk continues toward t = 0 as
    long as solutions keep existing.
    """
    order = validate_order(order)
    _require_base_pose(tet)
    if multistart < 1:
        raise ValueError("multistart must be at least 1")
    t_grid = tuple(sorted(float(t) for t in t_grid))
    if not t_grid or t_grid[0] <= 0:
        raise ValueError("t grid must be positive")
    rng = np.random.default_rng(seed)
    cluster_r = cluster_rel * tet.diameter
    match_r = 5.0 * cluster_r

    branches: List[Branch] = []
    for t in t_grid:
        accepted: List[PhysicalSolution] = []
        guesses = [br.entries[-1][1].unknowns for br in branches]
        guesses += [random_guess(tet, rng) for _ in range(multistart)]
        for g0 in guesses:
            sol = solve_at_t(tet, order, t, g0)
            if sol is None:
                continue
            if any(_start_distance(sol, s) < cluster_r for s in accepted):
                continue
            accepted.append(sol)
        extended = set()
        for sol in accepted:
            best, best_d = None, math.inf
            for br in branches:
                if br.id in extended:
                    continue
                d = _start_distance(sol, br.entries[-1][1])
                if d < best_d:
                    best, best_d = br, d
            if best is not None and best_d <= match_r:
                best.entries.append((t, sol))
                extended.add(best.id)
            else:
                nb = Branch(len(branches), [(t, sol)])
                branches.append(nb)
                extended.add(nb.id)

    for br in branches:
        _refine_lower(tet, order, br, endpoint_tol)
        _refine_upper(tet, order, br, t_grid, endpoint_tol)
        br.entries.sort(key=lambda e: e[0])
    return FamilyScan(order=order, t_grid=t_grid, branches=tuple(branches),
                      seed=seed, multistart=multistart)


def _refine_lower(tet, order, br, tol):
    lo_succ = br.entries[0][0]
    warm = br.entries[0][1]
    lo_fail = 0.0
    drift_cap = 0.3 * tet.diameter  # stay on the same family while walking down
    for _ in range(40):
        if lo_succ <= tol:
            return
        probe = lo_succ * 0.5
        sol = solve_at_t(tet, order, probe, warm.unknowns)
        if sol is not None and _start_distance(sol, warm) <= drift_cap:
            br.entries.insert(0, (probe, sol))
            warm, lo_succ = sol, probe
        else:
            lo_fail = probe
            break
    while lo_succ - lo_fail > tol:
        mid = 0.5 * (lo_succ + lo_fail)
        sol = solve_at_t(tet, order, mid, warm.unknowns)
        if sol is not None:
            br.entries.insert(0, (mid, sol))
            warm, lo_succ = sol, mid
        else:
            lo_fail = mid


def _refine_upper(tet, order, br, t_grid, tol):
    hi_succ = br.entries[-1][0]
    warm = br.entries[-1][1]
    above = [t for t in t_grid if t > hi_succ]
    if not above:
        return  # branch alive at the end of the scanned window
    hi_fail = above[0]
    sol = solve_at_t(tet, order, hi_fail, warm.unknowns)
    if sol is not None:
        # the grid scan just missed it; keep the refinement local
        br.entries.append((hi_fail, sol))
        return
    while hi_fail - hi_succ > tol:
        mid = 0.5 * (hi_succ + hi_fail)
        sol = solve_at_t(tet, order, mid, warm.unknowns)
        if sol is not None:
            br.entries.append((mid, sol))
            warm, hi_succ = sol, mid
        else:
            hi_fail = mid
