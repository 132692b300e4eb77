"""Point-in-region predicates for conjectured existence-class maps.

The class regions of a map of cycles are unions of convex pieces, each
written as an intersection of open half planes; they are configuration
data, not derived geometry. A config also lists the boundary primitives
(lines, rays, segments) so samplers can keep a safety margin away from
class boundaries.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import List, Tuple

Point2 = Tuple[float, float]


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def _sub(u, v):
    return (u[0] - v[0], u[1] - v[1])


def _dist(u, v):
    return math.hypot(u[0] - v[0], u[1] - v[1])


def _point_line_distance(p, origin, direction, clamp_lo=None, clamp_hi=None):
    dd = _dot(direction, direction)
    t = _dot(_sub(p, origin), direction) / dd
    if clamp_lo is not None:
        t = max(t, clamp_lo)
    if clamp_hi is not None:
        t = min(t, clamp_hi)
    foot = (origin[0] + t * direction[0], origin[1] + t * direction[1])
    return _dist(p, foot)


@dataclass(frozen=True)
class Boundary:
    kind: str  # "line" | "ray" | "segment"
    origin: Point2
    direction: Point2

    def distance(self, p: Point2) -> float:
        if self.kind == "line":
            return _point_line_distance(p, self.origin, self.direction)
        if self.kind == "ray":
            return _point_line_distance(p, self.origin, self.direction,
                                        clamp_lo=0.0)
        return _point_line_distance(p, self.origin, self.direction,
                                    clamp_lo=0.0, clamp_hi=1.0)


@dataclass(frozen=True)
class ConvexRegion:
    halfplanes: Tuple[Tuple[float, float, float], ...]  # p*x + q*y + r > 0

    def contains(self, pt: Point2) -> bool:
        x, y = float(pt[0]), float(pt[1])
        return all(p * x + q * y + r > 0 for p, q, r in self.halfplanes)


@dataclass(frozen=True)
class RegionConfig:
    triangle: Tuple[Point2, Point2, Point2]
    order_index: int
    alpha: Tuple[ConvexRegion, ...]
    beta: Tuple[ConvexRegion, ...]
    boundaries: Tuple[Boundary, ...]

    def classify(self, pt: Point2) -> str:
        """Conjectured class of a foot point in the upper half plane."""
        if any(r.contains(pt) for r in self.beta):
            return "beta"
        if any(r.contains(pt) for r in self.alpha):
            return "alpha"
        return "gamma"

    def boundary_distance(self, pt: Point2) -> float:
        p = (float(pt[0]), float(pt[1]))
        return min(b.distance(p) for b in self.boundaries)

    @classmethod
    def from_dict(cls, data) -> "RegionConfig":
        def regions(key) -> Tuple[ConvexRegion, ...]:
            return tuple(
                ConvexRegion(tuple(tuple(float(v) for v in hp)
                                   for hp in entry["halfplanes"]))
                for entry in data["classes"].get(key, ()))

        bounds: List[Boundary] = []
        for b in data["boundaries"]:
            if b["type"] == "segment":
                origin = tuple(float(v) for v in b["a"])
                direction = _sub(tuple(float(v) for v in b["b"]), origin)
            else:
                origin = tuple(float(v) for v in b["point"])
                direction = tuple(float(v) for v in b["direction"])
            bounds.append(Boundary(b["type"], origin, direction))
        return cls(
            triangle=tuple(tuple(float(v) for v in p) for p in data["triangle"]),
            order_index=int(data["order_index"]),
            alpha=regions("alpha"),
            beta=regions("beta"),
            boundaries=tuple(bounds),
        )

    @classmethod
    def load(cls, path) -> "RegionConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def load_demo_regions() -> RegionConfig:
    """Bundled region config for the acute demo triangle (0,0)(15,0)(5,10)."""
    text = resources.files("pyramid_billiards").joinpath(
        "data/acute_demo_regions.json").read_text(encoding="utf-8")
    return RegionConfig.from_dict(json.loads(text))
