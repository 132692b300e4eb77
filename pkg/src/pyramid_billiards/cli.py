"""Command-line interface.

Subcommands: find-cycles, simulate, cycle-map, height-scan, a-profile,
special-checks, physical-scan, physical-simulate. Exit codes: 0 success,
1 usage error, 2 computation error, 3 rank-deficiency sentinel (the
unique-or-none guarantee of the start-point system failed, which indicates
a bug rather than a legitimate result). All randomness flows from --seed.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import __version__
from .cycles import (
    find_cycles,
    order_from_index,
    simulate_billiard,
)
from .cycle_map import a_profile, build_map, height_scan, overlay
from .errors import BilliardError, StartSystemDegenerateError, UsageError
from .formats import (
    SCAN_HEADER,
    cycles_report,
    dump_json,
    grid_rows,
    load_base_triangle,
    load_pyramid,
    parse_scalar,
    profile_rows,
    scan_rows,
    vec_to_json,
    write_csv,
)
from .geometry import dihedral_angles
from .physics import PhysState, physical_simulate, scan_family
from .special_cases import (
    SymmetricPyramid,
    corner_vertex,
    obtuse_bound_report,
    orthogonal_face_pairs,
    symmetric_cycle_direct,
)
from .svg import (
    render_cycle_map,
    render_profile,
    render_start_curves,
    render_trajectory_projection,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


PHYSICAL_COMMANDS = ("physical-scan", "physical-simulate")


@dataclass(frozen=True)
class RunConfig:
    """One validated invocation: exactly one subcommand plus its options.

    The exact backend is rejected for the gravity subcommands, whose
    solutions are irrational.
    """

    command: str
    options: argparse.Namespace

    @property
    def backend(self) -> Optional[str]:
        return getattr(self.options, "backend", None)

    @property
    def seed(self) -> Optional[int]:
        return getattr(self.options, "seed", None)


def parse_config(argv: Optional[List[str]] = None) -> RunConfig:
    """Parse and validate command-line arguments into a RunConfig.

    Raises UsageError (naming the offending flag) for unknown flags,
    malformed values, or an exact backend on a gravity subcommand.
    """
    args = _build_parser().parse_args(argv)
    if args.command in PHYSICAL_COMMANDS and getattr(args, "backend", "") == "exact":
        raise UsageError("--backend exact is not supported for the gravity "
                         "billiard (roots are irrational)")
    return RunConfig(command=args.command, options=args)


def _build_parser() -> _Parser:
    p = _Parser(prog="pyramid-billiards",
                description="Period-4 billiards in triangular pyramids")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    fc = sub.add_parser("find-cycles", help="find all certified 4-cycles")
    fc.add_argument("--pyramid", required=True)
    fc.add_argument("--backend", choices=("exact", "float"), default="exact")
    fc.add_argument("--out")

    sim = sub.add_parser("simulate", help="straight-line billiard simulation")
    sim.add_argument("--pyramid", required=True)
    sim.add_argument("--backend", choices=("exact", "float"), default="float")
    sim.add_argument("--start", required=True, help="x,y,z")
    sim.add_argument("--direction", required=True, help="x,y,z")
    sim.add_argument("--bounces", type=int, default=8)
    sim.add_argument("--out")

    cm = sub.add_parser("cycle-map", help="alpha/beta/gamma map over foot points")
    cm.add_argument("--pyramid-base", required=True)
    cm.add_argument("--order", type=int, choices=(1, 2, 3), required=True)
    cm.add_argument("--region", required=True, help="x0,y0,x1,y1")
    cm.add_argument("--res", required=True, help="NX,NY")
    cm.add_argument("--h-max", type=float)
    cm.add_argument("--tol", type=float)
    cm.add_argument("--out-csv")
    cm.add_argument("--out-svg")

    hs = sub.add_parser("height-scan", help="classify one foot point")
    hs.add_argument("--pyramid-base", required=True)
    hs.add_argument("--order", type=int, choices=(1, 2, 3), required=True)
    hs.add_argument("--foot", required=True, help="x,y")
    hs.add_argument("--h-max", type=float)
    hs.add_argument("--tol", type=float)
    hs.add_argument("--out")

    ap = sub.add_parser("a-profile", help="threshold profile along a line")
    ap.add_argument("--pyramid-base", required=True)
    ap.add_argument("--order", type=int, choices=(1, 2, 3), required=True)
    ap.add_argument("--line", required=True, help="p,q,r for p*x+q*y=r")
    ap.add_argument("--y-min", type=float, required=True)
    ap.add_argument("--y-max", type=float, required=True)
    ap.add_argument("--samples", type=int, default=25)
    ap.add_argument("--h-max", type=float)
    ap.add_argument("--tol", type=float)
    ap.add_argument("--out-csv")
    ap.add_argument("--out-svg")

    sc = sub.add_parser("special-checks", help="corner/orthogonal/symmetric report")
    sc.add_argument("--pyramid", required=True)
    sc.add_argument("--backend", choices=("exact", "float"), default="exact")
    sc.add_argument("--out")

    ps = sub.add_parser("physical-scan", help="gravity billiard family scan")
    ps.add_argument("--pyramid", required=True)
    ps.add_argument("--backend", choices=("exact", "float"), default="float")
    ps.add_argument("--order", type=int, choices=(1, 2, 3), required=True)
    ps.add_argument("--t-min", type=float, required=True)
    ps.add_argument("--t-max", type=float, required=True)
    ps.add_argument("--t-steps", type=int, default=24)
    ps.add_argument("--multistart", type=int, default=16)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--out", help="CSV output path")
    ps.add_argument("--svg-curve", help="start-curve SVG path")

    pm = sub.add_parser("physical-simulate", help="gravity billiard simulation")
    pm.add_argument("--pyramid", required=True)
    pm.add_argument("--backend", choices=("exact", "float"), default="float")
    pm.add_argument("--start", required=True, help="x,y,z")
    pm.add_argument("--velocity", required=True, help="vx,vy,vz")
    pm.add_argument("--gravity", type=float, required=True)
    pm.add_argument("--bounces", type=int, default=8)
    pm.add_argument("--out")
    pm.add_argument("--svg-xz")
    return p


def _parse_tuple(text: str, n: int, what: str, exact: bool = False):
    parts = text.split(",")
    if len(parts) != n:
        raise UsageError(f"{what} needs {n} comma-separated values")
    try:
        return tuple(parse_scalar(_maybe_number(v), exact) for v in parts)
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(f"bad value in {what}: {exc}") from exc


def _maybe_number(text: str):
    text = text.strip()
    if "/" in text:
        return text
    try:
        return int(text)
    except ValueError:
        return float(text)


def _cmd_find_cycles(args) -> int:
    tet = load_pyramid(args.pyramid, exact=args.backend == "exact")
    cycles = find_cycles(tet)
    print(dump_json(cycles_report(tet, cycles), args.out))
    return 0


def _cmd_simulate(args) -> int:
    exact = args.backend == "exact"
    tet = load_pyramid(args.pyramid, exact=exact)
    start = _parse_tuple(args.start, 3, "--start", exact)
    direction = _parse_tuple(args.direction, 3, "--direction", exact)
    traj = simulate_billiard(tet, start, direction, args.bounces)
    data = {
        "exit": traj.exit,
        "faces": list(traj.faces),
        "points": [vec_to_json(p) for p in traj.points],
        "directions": [vec_to_json(d) for d in traj.directions],
    }
    print(dump_json(data, args.out))
    return 0


def _cmd_cycle_map(args) -> int:
    base = load_base_triangle(args.pyramid_base)
    region = _parse_tuple(args.region, 4, "--region")
    res = _parse_tuple(args.res, 2, "--res")
    nx, ny = int(res[0]), int(res[1])
    order = order_from_index(args.order)
    grid = build_map(base, tuple(float(v) for v in region), nx, ny, order,
                     h_max=args.h_max, tol=args.tol)
    text = write_csv(grid_rows(grid), ("ox", "oy", "class", "a", "b"),
                     args.out_csv)
    if args.out_svg:
        try:
            ov = overlay(base)
        except BilliardError:
            ov = None
        render_cycle_map(grid, ov).save(args.out_svg)
    if not args.out_csv:
        print(text, end="")
    else:
        counts = {}
        for cell in grid.cells:
            counts[cell.kind] = counts.get(cell.kind, 0) + 1
        print(dump_json({"cells": len(grid.cells), "classes": counts}, None))
    return 0


def _cmd_height_scan(args) -> int:
    base = load_base_triangle(args.pyramid_base)
    foot = _parse_tuple(args.foot, 2, "--foot")
    order = order_from_index(args.order)
    hc = height_scan(base, tuple(float(v) for v in foot), order,
                     h_max=args.h_max, tol=args.tol)
    data = {
        "foot": [hc.foot[0], hc.foot[1]],
        "order": list(hc.order),
        "class": hc.kind,
        "a": hc.a,
        "b": hc.b,
        "h_max": hc.h_max,
        "tol": hc.tol,
    }
    print(dump_json(data, args.out))
    return 0


def _cmd_a_profile(args) -> int:
    base = load_base_triangle(args.pyramid_base)
    line = _parse_tuple(args.line, 3, "--line")
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    ys = [args.y_min + (args.y_max - args.y_min) * i / (args.samples - 1)
          for i in range(args.samples)]
    order = order_from_index(args.order)
    samples = a_profile(base, tuple(float(v) for v in line), ys, order,
                        h_max=args.h_max, tol=args.tol)
    text = write_csv(profile_rows(samples),
                     ("y", "ox", "oy", "class", "a", "b"), args.out_csv)
    if args.out_svg:
        render_profile(samples).save(args.out_svg)
    if not args.out_csv:
        print(text, end="")
    return 0


def _cmd_special_checks(args) -> int:
    tet = load_pyramid(args.pyramid, exact=args.backend == "exact")
    report = obtuse_bound_report(tet)
    corner = corner_vertex(tet)
    data = {
        "corner": corner,
        "orthogonal_pairs": [list(p) for p in orthogonal_face_pairs(tet)],
        "k_obtuse": report.k_obtuse,
        "n_cycles": report.n_cycles,
        "conjecture_ok": report.holds,
        "dihedral_angles": {
            "".join(edge): angle for edge, angle in dihedral_angles(tet)
        },
        "symmetric": None,
    }
    try:
        sp = SymmetricPyramid(tet)
        cyc = symmetric_cycle_direct(sp)
        data["symmetric"] = {
            "mirror_midpoint": vec_to_json(sp.e),
            "cycle_found": cyc is not None,
            "start": vec_to_json(cyc.start) if cyc else None,
            "direction": vec_to_json(cyc.direction) if cyc else None,
        }
    except BilliardError:
        pass
    print(dump_json(data, args.out))
    return 0


def _cmd_physical_scan(args) -> int:
    tet = load_pyramid(args.pyramid, exact=False)
    order = order_from_index(args.order)
    if args.t_min <= 0 or args.t_max <= args.t_min:
        raise UsageError("need 0 < --t-min < --t-max")
    if args.t_steps < 2:
        raise UsageError("--t-steps must be at least 2")
    grid = np.geomspace(args.t_min, args.t_max, args.t_steps)
    scan = scan_family(tet, order, grid, multistart=args.multistart,
                       seed=args.seed)
    text = write_csv(scan_rows(scan), SCAN_HEADER, args.out)
    if args.svg_curve:
        base = [tet.vertex(l)[:2] for l in ("A", "B", "C")]
        render_start_curves(base, scan).save(args.svg_curve)
    summary = {
        "order": list(order),
        "seed": args.seed,
        "multistart": args.multistart,
        "branches": [
            {"id": br.id,
             "t_interval": [br.interval[0], br.interval[1]],
             "n_solutions": len(br.entries),
             "start_first": [br.entries[0][1].unknowns.a,
                             br.entries[0][1].unknowns.b],
             "start_last": [br.entries[-1][1].unknowns.a,
                            br.entries[-1][1].unknowns.b]}
            for br in scan.branches
        ],
    }
    print(dump_json(summary, None))
    if not args.out:
        print(text, end="")
    return 0


def _cmd_physical_simulate(args) -> int:
    tet = load_pyramid(args.pyramid, exact=False)
    start = tuple(float(v) for v in _parse_tuple(args.start, 3, "--start"))
    vel = tuple(float(v) for v in _parse_tuple(args.velocity, 3, "--velocity"))
    if args.gravity <= 0:
        raise UsageError("--gravity must be positive")
    traj = physical_simulate(tet, PhysState(start, vel), args.gravity,
                             args.bounces)
    data = {
        "exit": traj.exit,
        "faces": list(traj.faces),
        "events": [
            {"time": s.time, "pos": vec_to_json(s.pos), "vel": vec_to_json(s.vel)}
            for s in traj.states
        ],
    }
    if args.svg_xz:
        walls = [tet.vertex(l) for l in ("A", "B", "C", "D")]
        render_trajectory_projection(traj.states, "xz", walls).save(args.svg_xz)
    print(dump_json(data, args.out))
    return 0


_COMMANDS = {
    "find-cycles": _cmd_find_cycles,
    "simulate": _cmd_simulate,
    "cycle-map": _cmd_cycle_map,
    "height-scan": _cmd_height_scan,
    "a-profile": _cmd_a_profile,
    "special-checks": _cmd_special_checks,
    "physical-scan": _cmd_physical_scan,
    "physical-simulate": _cmd_physical_simulate,
}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config = parse_config(argv)
        return _COMMANDS[config.command](config.options)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except StartSystemDegenerateError as exc:
        print(f"start-system degeneracy: {exc}", file=sys.stderr)
        return 3
    except BilliardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
