"""Map of foot-point classes for a fixed acute base triangle.

For each foot point O the apex is raised over O and cycle existence is
scanned over heights: class alpha (exists above a threshold), beta (exists
on one bounded window) or gamma (never). The script scans a coarse grid,
draws the color-coded map with the overlay lines, and samples the
threshold profile a(y) along the central line of the alpha strip.

Writes cycle_map.svg and a_profile.svg next to this script.
"""

from pathlib import Path

from pyramid_billiards import a_profile, build_map, height_scan, overlay
from pyramid_billiards.cycles import CANONICAL_ORDERS
from pyramid_billiards.svg import render_cycle_map, render_profile

BASE = [(0.0, 0.0), (15.0, 0.0), (5.0, 10.0)]
ORDER = CANONICAL_ORDERS[1]  # ABC -> ACD -> ABD -> BCD
OUT = Path(__file__).resolve().parent


def main():
    ov = overlay(BASE)
    print("overlay construction:")
    print("  C' =", ov.c_prime)
    print("  altitude feet F =", ov.f, " G =", ov.g)
    print("  mirrored feet  F' =", ov.f_prime, " G' =", ov.g_prime)
    print("  (the lines FF' and GG' are parallel; they bound the alpha strip)")

    print("\nsingle foot-point scans:")
    for foot in ((7.5, 0.0), (2.5, 2.0), (12.0, 5.0)):
        hc = height_scan(BASE, foot, ORDER)
        if hc.kind == "alpha":
            desc = f"alpha, cycles for h > {hc.a:.3f}"
        elif hc.kind == "beta":
            desc = f"beta, cycles for {hc.a:.3f} < h < {hc.b:.3f}"
        else:
            desc = "gamma, no cycles at any height"
        print(f"  O = {foot}: {desc}")

    print("\nbuilding a coarse 24x20 map (this takes a minute)...")
    grid = build_map(BASE, (-5.0, 0.0, 20.0, 25.0), 24, 20, ORDER,
                     h_max=400.0, tol=0.05)
    counts = {}
    for cell in grid.cells:
        counts[cell.kind] = counts.get(cell.kind, 0) + 1
    print("  cell classes:", counts)
    render_cycle_map(grid, ov).save(OUT / "cycle_map.svg")
    print("  wrote", OUT / "cycle_map.svg")

    print("\nthreshold profile along the strip's central line 3x + y = 22.5:")
    ys = [i * 0.5 for i in range(0, 21)]
    samples = a_profile(BASE, (3.0, 1.0, 22.5), ys, ORDER)
    for s in samples[::4]:
        if s.a is not None:
            print(f"  y = {s.y:4.1f}: class {s.kind}, a = {s.a:.3f}")
        else:
            print(f"  y = {s.y:4.1f}: class {s.kind}")
    render_profile(samples).save(OUT / "a_profile.svg")
    print("  wrote", OUT / "a_profile.svg")


if __name__ == "__main__":
    main()
