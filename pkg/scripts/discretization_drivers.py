"""Successive Hausdorff gaps of the discretized integral hull for a smooth
driver and for fBm drivers over several seeds.

Usage: python scripts/discretization_drivers.py [--seeds 8] [--m 256] [--steps 64 32 16 8]
Prints one row per driver: the gaps between successive meshes, whether they
decrease strictly, and the final gap relative to the hull diameter.
"""

import argparse
import math

import numpy as np

from setyoung.aumann import (
    SetValuedPath,
    aumann_young_integral,
    build_selection_family,
    default_measures,
    interpolate_multifunction,
)
from setyoung.convex_bodies import ConvexBody, hausdorff_distance
from setyoung.paths import SampledPath, sample_fbm, time_augmented
from setyoung.young import YoungConfig

def smooth_F(m):
    P = ConvexBody.regular_polygon(5, 0.5)

    def F(t):
        c, s = math.cos(2 * t), math.sin(2 * t)
        return ConvexBody(P.vertices @ np.array([[c, s], [-s, c]]) * (1 + 0.3 * t) + np.array([math.sin(3 * t), t]))

    return SetValuedPath.from_function(F, 1.0, m, shape=(1, 2))


def gaps(F, w, cfg, r, measures, steps=(64, 32, 16, 8)):
    hulls = []
    for step in steps:
        Fn = interpolate_multifunction(F, np.arange(0, F.m + 1, step))
        fam = build_selection_family(Fn, cfg.alpha, r, measures=measures, anchors=[], check_r_min=False)
        hulls.append(aumann_young_integral(Fn, w, cfg, r, fam).hull)
    g = [hausdorff_distance(a, b) for a, b in zip(hulls, hulls[1:])]
    return g, g[-1] / hulls[-1].diameter


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=8)
    ap.add_argument("--m", type=int, default=256)
    ap.add_argument("--steps", type=int, nargs="+", default=[64, 32, 16, 8])
    a = ap.parse_args()
    cfg, r = YoungConfig(0.6, 0.7), 6.0
    F = smooth_F(a.m)
    ms = default_measures(2, 16, 0)
    drivers = [("smooth", SampledPath.from_function(lambda t: [t, math.sin(2 * math.pi * t)], 1.0, a.m))]
    drivers += [(f"fbm seed {s}", time_augmented(sample_fbm(0.75, 1.0, a.m, seed=s))) for s in range(a.seeds)]
    for name, w in drivers:
        g, rel = gaps(F, w, cfg, r, ms, a.steps)
        mono = all(y < x for x, y in zip(g, g[1:]))
        print(f"{name:12s} gaps {' '.join(f'{x:.5f}' for x in g)}  decreasing {mono!s:5s}  final/diam {rel:.4f}")


if __name__ == "__main__":
    main()
