"""Input parsing and report serialization.

Pyramids arrive as JSON, either four labeled vertices or a 2D base plus
foot and height. Rational literals may be written as strings "p/q" and are
kept exact on the exact backend. All emitters format deterministically:
Fractions as "p/q" strings, floats with 17 significant digits, keys in
fixed order.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .cycles import FourCycle
from .errors import UsageError
from .geometry import Tetrahedron


def parse_scalar(value, exact: bool):
    """One coordinate from JSON: number, or rational literal "p/q"."""
    if isinstance(value, str):
        parts = value.split("/")
        if len(parts) != 2:
            raise UsageError(f"malformed rational literal {value!r}")
        try:
            num, den = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise UsageError(f"malformed rational literal {value!r}") from exc
        if den == 0:
            raise UsageError(f"zero denominator in rational literal {value!r}")
        return Fraction(num, den) if exact else num / den
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise UsageError(f"expected a number, got {value!r}")
    if exact:
        # decimal strings keep user intent exact (0.1 stays 1/10)
        return Fraction(str(value)) if isinstance(value, float) else Fraction(value)
    return float(value)


def _parse_point(values, exact: bool, dim: int, what: str):
    if not isinstance(values, (list, tuple)) or len(values) != dim:
        raise UsageError(f"{what} must be a list of {dim} coordinates")
    return tuple(parse_scalar(v, exact) for v in values)


def pyramid_from_dict(data: Dict, exact: bool) -> Tetrahedron:
    """Build a Tetrahedron from one of the two pyramid JSON schemas."""
    if "vertices" in data:
        verts = data["vertices"]
        missing = [l for l in ("A", "B", "C", "D") if l not in verts]
        if missing:
            raise UsageError(f"pyramid vertices missing labels {missing}")
        return Tetrahedron(*(
            _parse_point(verts[l], exact, 3, f"vertex {l}")
            for l in ("A", "B", "C", "D")))
    if "base" in data:
        base = data["base"]
        missing = [l for l in ("A", "B", "C") if l not in base]
        if missing:
            raise UsageError(f"pyramid base missing labels {missing}")
        if "foot" not in data or "height" not in data:
            raise UsageError("base schema needs 'foot' and 'height'")
        tri = [_parse_point(base[l], exact, 2, f"base {l}") for l in ("A", "B", "C")]
        foot = _parse_point(data["foot"], exact, 2, "foot")
        height = parse_scalar(data["height"], exact)
        return Tetrahedron.from_base_foot_height(tri, foot, height)
    raise UsageError("pyramid JSON needs either 'vertices' or 'base'")


def load_pyramid(path: str, exact: bool) -> Tetrahedron:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise UsageError(f"pyramid file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"pyramid JSON in {path} must be an object")
    return pyramid_from_dict(data, exact)


def load_base_triangle(path: str):
    """2D base triangle from a pyramid file or a bare {"A","B","C"} object."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise UsageError(f"base file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON in {path}: {exc}") from exc
    if "base" in data:
        data = data["base"]
    elif "vertices" in data:
        verts = data["vertices"]
        tri = []
        for l in ("A", "B", "C"):
            if l not in verts:
                raise UsageError(f"vertices missing label {l}")
            p = _parse_point(verts[l], False, 3, f"vertex {l}")
            if p[2] != 0:
                raise UsageError("base triangle must lie in z = 0")
            tri.append((p[0], p[1]))
        return tri
    missing = [l for l in ("A", "B", "C") if l not in data]
    if missing:
        raise UsageError(f"base JSON missing labels {missing}")
    return [_parse_point(data[l], False, 2, f"base {l}") for l in ("A", "B", "C")]


# ---------------------------------------------------------------------------
# serialization

def scalar_to_json(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return x
    return float(format(float(x), ".17g"))


def vec_to_json(v) -> List:
    return [scalar_to_json(x) for x in v]


def cycle_to_dict(cycle: FourCycle) -> Dict:
    return {
        "order": list(cycle.order),
        "barycentric": {
            "x": scalar_to_json(cycle.barycentric.x),
            "y": scalar_to_json(cycle.barycentric.y),
            "z": scalar_to_json(cycle.barycentric.z),
        },
        "start": vec_to_json(cycle.start),
        "direction": vec_to_json(cycle.direction),
        "bounce_points": [vec_to_json(p) for p in cycle.points],
        "length": scalar_to_json(cycle.length),
        "exact": cycle.exact,
        "certified": True,
    }


def parse_cycle_dict(data: Dict, exact: bool):
    """Re-parse an emitted cycle report into (order, start, direction)."""
    order = tuple(data["order"])
    start = tuple(parse_scalar(v, exact) for v in data["start"])
    direction = tuple(parse_scalar(v, exact) for v in data["direction"])
    return order, start, direction


def cycles_report(tet: Tetrahedron, cycles: Sequence[FourCycle]) -> Dict:
    return {
        "pyramid": {l: vec_to_json(v) for l, v in sorted(tet.vertices.items())},
        "backend": "exact" if tet.is_exact else "float",
        "n_cycles": len(cycles),
        "cycles": [cycle_to_dict(c) for c in cycles],
    }


def dump_json(data, path: Optional[str]) -> str:
    text = json.dumps(data, indent=2, sort_keys=False)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text


def write_csv(rows: Sequence[Sequence], header: Sequence[str],
              path: Optional[str]) -> str:
    def fmt(x):
        if x is None:
            return ""
        if isinstance(x, float):
            return format(x, ".17g")
        return str(x)

    lines = [",".join(header)]
    lines += [",".join(fmt(x) for x in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def grid_rows(grid) -> List[List]:
    """CSV rows ox, oy, class, a, b for a cycle map grid."""
    rows = []
    for cell in grid.cells:
        hc = cell.result
        rows.append([
            cell.foot[0], cell.foot[1], cell.kind,
            None if hc is None else hc.a,
            None if hc is None or hc.b is None else hc.b,
        ])
    return rows


def profile_rows(samples) -> List[List]:
    return [[s.y, s.foot[0], s.foot[1], s.kind, s.a, s.b] for s in samples]


def scan_rows(scan) -> List[List]:
    """CSV rows for a physical family scan: one row per accepted solution."""
    rows = []
    for br in scan.branches:
        for t, sol in br.entries:
            u = sol.unknowns
            rows.append([t, u.a, u.b, u.k, u.l, u.m, u.g,
                         u.t1, u.t2, u.t3, u.t4, br.id, sol.residual_norm])
    rows.sort(key=lambda r: (r[11], r[0]))
    return rows


SCAN_HEADER = ("t", "a", "b", "k", "l", "m", "g", "t1", "t2", "t3", "t4",
               "branch_id", "residual")
