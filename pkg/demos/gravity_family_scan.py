"""Families of period-4 orbits of the gravity billiard.

With gravity on, closed period-4 orbits form one-parameter families
parameterized by the ratio t of two consecutive flight times (the overall
time scale is a free gauge). The script traces the family of one pyramid
over t, reports its admissible interval and start curve, then shows the
mirror-symmetric pyramid whose family is pinned at t = 1 with every start
on the base altitude.

Writes start_curve.svg and orbit_xz.svg next to this script.
"""

from pathlib import Path

import numpy as np

from pyramid_billiards import (
    PhysState,
    Tetrahedron,
    physical_simulate,
    scan_family,
    solve_at_t,
)
from pyramid_billiards.cycles import CANONICAL_ORDERS
from pyramid_billiards.physics import random_guess
from pyramid_billiards.svg import render_start_curves, render_trajectory_projection

OUT = Path(__file__).resolve().parent


def main():
    tet = Tetrahedron((0.0, 0.0, 0.0), (4.0, 0.0, 0.0), (3.0, 3.0, 0.0),
                      (2.0, 1.0, 3.0))
    order = CANONICAL_ORDERS[0]  # base -> ABD -> ACD -> BCD -> base
    print("pyramid:", tet)
    print("order:", " -> ".join(order))

    print("\nscanning the family over the flight-time ratio t ...")
    scan = scan_family(tet, order, np.linspace(0.02, 0.6, 24),
                       multistart=24, seed=0)
    for br in scan.branches:
        lo, hi = br.interval
        first = br.entries[0][1].unknowns
        last = br.entries[-1][1].unknowns
        print(f"  branch {br.id}: admissible t in ({lo:.4f}, {hi:.4f})")
        print(f"    start curve runs ({first.a:.3f}, {first.b:.3f}) -> "
              f"({last.a:.3f}, {last.b:.3f})")
    base = [tet.vertex(l)[:2] for l in ("A", "B", "C")]
    render_start_curves(base, scan).save(OUT / "start_curve.svg")
    print("  wrote", OUT / "start_curve.svg")

    sol = scan.branches[0].solution_near(0.2)
    u = sol.unknowns
    print(f"\none orbit at t = 0.2: start ({u.a:.4f}, {u.b:.4f}), "
          f"launch ({u.k:.3f}, {u.l:.3f}, {u.m:.3f}), g = {u.g:.4f}")
    traj = physical_simulate(tet, PhysState((u.a, u.b, 0.0), (u.k, u.l, u.m)),
                             u.g, 8)
    print("  re-simulated 8 bounces, faces:", " ".join(traj.faces))
    walls = [tet.vertex(l) for l in ("A", "B", "C", "D")]
    render_trajectory_projection(traj.states, "xz", walls).save(
        OUT / "orbit_xz.svg")
    print("  wrote", OUT / "orbit_xz.svg")

    print("\nmirror-symmetric pyramid: the family sits at t = 1 exactly,")
    print("parameterized by gravity instead of the time ratio:")
    sym = Tetrahedron((0.0, 0.0, 0.0), (6.0, 0.0, 0.0), (3.0, 4.0, 0.0),
                      (3.0, 2.0, 4.0))
    rng = np.random.default_rng(7)
    shown = 0
    for _ in range(64):
        sol = solve_at_t(sym, CANONICAL_ORDERS[1], 1.0, random_guess(sym, rng))
        if sol is None:
            continue
        u = sol.unknowns
        print(f"  start on the altitude: x = {u.a:.12f}, y = {u.b:.4f}, "
              f"g = {u.g:.4f}, sideways launch l = {u.l:.1e}")
        shown += 1
        if shown == 4:
            break


if __name__ == "__main__":
    main()
