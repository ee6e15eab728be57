#!/usr/bin/env python3
"""Interpolation refinement study on S^2.

Interpolates a fixed degree-2 spherical harmonic on Fibonacci lattices of
increasing size with the locally supported kernels N_3 and N_5 (support
radius 2s) and prints the maximum error on a dense random test grid.

Usage: python scripts/interp_convergence.py [s]
"""

import math
import sys

import numpy as np

from sphkern.interpolation import evaluate_interpolant, solve_interpolation
from sphkern.kernels import CapConvKernel
from sphkern.spd import generate_points

SIZES = (25, 50, 100, 200, 400)


def harmonic(points):
    x, y, z = points[:, 0], points[:, 1], points[:, 2]
    return x * y + 0.5 * (3 * z**2 - 1.0)


def main():
    s = float(sys.argv[1]) if len(sys.argv) > 1 else math.pi / 3
    grid = generate_points(2, 2000, scheme="random_seeded", seed=123)
    target = harmonic(grid.points)
    kernels = {f"N_{d}(s={s:.3f})": CapConvKernel(d, s).as_kernel() for d in (3, 5)}
    print(f"{'n':>5s}  " + "  ".join(f"{name:>18s}" for name in kernels))
    for n in SIZES:
        pts = generate_points(2, n, scheme="fibonacci_s2")
        values = harmonic(pts.points)
        errs = []
        for kernel in kernels.values():
            itp = solve_interpolation(pts, values, kernel)
            errs.append(np.max(np.abs(evaluate_interpolant(itp, grid.points) - target)))
        print(f"{n:5d}  " + "  ".join(f"{e:18.6e}" for e in errs))


if __name__ == "__main__":
    main()
