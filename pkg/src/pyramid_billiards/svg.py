"""Minimal deterministic SVG emission.

Hand-rolled on purpose: output is diffable text, byte-identical for
identical inputs (fixed precision, stable element order, no timestamps).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

CLASS_COLORS = {
    "alpha": "#2d8a4e",
    "beta": "#e0912f",
    "gamma": "#b8b8b8",
    "error": "#d03030",
}


def _fmt(x: float) -> str:
    s = format(float(x), ".6f").rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


@dataclass
class SvgScene:
    """Collects primitives in user coordinates, renders with y flipped up."""

    x0: float
    y0: float
    x1: float
    y1: float
    width: int = 640
    elements: List[str] = field(default_factory=list)

    @property
    def height(self) -> int:
        span_x = max(self.x1 - self.x0, 1e-12)
        return max(int(round(self.width * (self.y1 - self.y0) / span_x)), 1)

    def _map(self, p) -> Tuple[float, float]:
        sx = self.width / max(self.x1 - self.x0, 1e-12)
        sy = self.height / max(self.y1 - self.y0, 1e-12)
        return ((float(p[0]) - self.x0) * sx,
                self.height - (float(p[1]) - self.y0) * sy)

    def _pts(self, points) -> str:
        return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in map(self._map, points))

    def add_polygon(self, points: Sequence, fill: str, stroke: str = "none",
                    opacity: Optional[float] = None) -> None:
        op = "" if opacity is None else f' fill-opacity="{_fmt(opacity)}"'
        self.elements.append(
            f'<polygon points="{self._pts(points)}" fill="{fill}" '
            f'stroke="{stroke}"{op} />')

    def add_polyline(self, points: Sequence, stroke: str,
                     width: float = 1.5, dashed: bool = False) -> None:
        dash = ' stroke-dasharray="6 4"' if dashed else ""
        self.elements.append(
            f'<polyline points="{self._pts(points)}" fill="none" '
            f'stroke="{stroke}" stroke-width="{_fmt(width)}"{dash} />')

    def add_point(self, p, color: str, radius: float = 3.0) -> None:
        x, y = self._map(p)
        self.elements.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(radius)}" '
            f'fill="{color}" />')

    def add_text(self, p, text: str, size: int = 12,
                 color: str = "#202020") -> None:
        x, y = self._map(p)
        self.elements.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}" '
            f'fill="{color}" font-family="sans-serif">{text}</text>')

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" '
                f'width="{self.width}" height="{self.height}" '
                f'viewBox="0 0 {self.width} {self.height}">')
        body = "\n".join(self.elements)
        return f"{head}\n{body}\n</svg>\n"

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.render())


def _margin_scene(x0, y0, x1, y1, width=640) -> SvgScene:
    mx = 0.06 * max(x1 - x0, 1e-12)
    my = 0.06 * max(y1 - y0, 1e-12)
    return SvgScene(x0 - mx, y0 - my, x1 + mx, y1 + my, width=width)


def render_cycle_map(grid, overlay=None) -> SvgScene:
    """Color-coded class map with the overlay lines drawn on top."""
    x0, y0, x1, y1 = grid.region
    scene = _margin_scene(x0, y0, x1, y1)
    dx = (x1 - x0) / grid.nx
    dy = (y1 - y0) / grid.ny
    for cell in grid.cells:
        cx, cy = cell.foot
        corners = [(cx - dx / 2, cy - dy / 2), (cx + dx / 2, cy - dy / 2),
                   (cx + dx / 2, cy + dy / 2), (cx - dx / 2, cy + dy / 2)]
        scene.add_polygon(corners, CLASS_COLORS.get(cell.kind, "#000000"))
    if overlay is not None:
        tri = [overlay.a, overlay.b, overlay.c]
        scene.add_polyline(tri + tri[:1], "#101010", width=2.0)
        span = max(x1 - x0, y1 - y0)
        for p, q in (overlay.line_cc, overlay.line_ff, overlay.line_gg):
            scene.add_polyline(_extend_line(p, q, span * 4), "#103070",
                               width=1.2, dashed=True)
    return scene


def _extend_line(p, q, reach: float):
    import math
    px, py = float(p[0]), float(p[1])
    qx, qy = float(q[0]), float(q[1])
    dx, dy = qx - px, qy - py
    n = math.hypot(dx, dy)
    if n == 0:
        return [(px, py), (qx, qy)]
    dx, dy = dx / n, dy / n
    return [(px - reach * dx, py - reach * dy),
            (px + reach * dx, py + reach * dy)]


def render_profile(samples) -> SvgScene:
    """Threshold plot a(y) along a profile line."""
    ys = [s.y for s in samples]
    avals = [s.a for s in samples if s.a is not None]
    top = max(avals) * 1.15 if avals else 1.0
    scene = _margin_scene(min(ys), 0.0, max(ys), top)
    scene.add_polyline([(min(ys), 0), (max(ys), 0)], "#404040", width=1.0)
    run = []
    for s in samples:
        if s.a is None:
            if len(run) > 1:
                scene.add_polyline(run, "#104f9e", width=2.0)
            run = []
        else:
            run.append((s.y, s.a))
    if len(run) > 1:
        scene.add_polyline(run, "#104f9e", width=2.0)
    for s in samples:
        if s.a is not None:
            scene.add_point((s.y, s.a), "#104f9e", radius=2.0)
        if s.b is not None:
            scene.add_point((s.y, s.b), "#a04020", radius=2.0)
    return scene


def render_start_curves(base, scan) -> SvgScene:
    """Admissible start curves of a family scan inside the base triangle."""
    xs = [float(p[0]) for p in base]
    ys = [float(p[1]) for p in base]
    scene = _margin_scene(min(xs), min(ys), max(xs), max(ys))
    tri = [(float(p[0]), float(p[1])) for p in base]
    scene.add_polygon(tri, "#f3f3f3", stroke="#101010")
    palette = ("#104f9e", "#a04020", "#2d8a4e", "#7a3f9e", "#9e8210")
    for br in scan.branches:
        pts = [(a, b) for _, a, b in br.start_curve()]
        if len(pts) > 1:
            scene.add_polyline(pts, palette[br.id % len(palette)], width=2.0)
        for p in (pts[0], pts[-1]):
            scene.add_point(p, palette[br.id % len(palette)], radius=2.5)
    return scene


def render_trajectory_projection(states, plane: str = "xz",
                                 walls=None) -> SvgScene:
    """2D projection (xy or xz) of a simulated trajectory's bounce chain."""
    ix, iy = {"xy": (0, 1), "xz": (0, 2), "yz": (1, 2)}[plane]
    pts = [(float(s.pos[ix]), float(s.pos[iy])) for s in states]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    if walls:
        xs += [float(w[ix]) for w in walls]
        ys += [float(w[iy]) for w in walls]
    scene = _margin_scene(min(xs), min(ys), max(xs), max(ys))
    if walls:
        hull = [(float(w[ix]), float(w[iy])) for w in walls]
        scene.add_polygon(hull, "none", stroke="#909090")
    scene.add_polyline(pts, "#104f9e", width=1.5)
    for p in pts:
        scene.add_point(p, "#a04020", radius=2.0)
    return scene
