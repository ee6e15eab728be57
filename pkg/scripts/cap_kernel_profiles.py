#!/usr/bin/env python3
"""Dump plot-ready profiles and coefficient scans of the cap kernels N_d.

Writes, for each d in {3, 5, 7, 9}, a CSV of (theta, x, N_d(x)) and prints
the first Gegenbauer coefficients at lambda = (d-1)/2 together with the
strictness evidence counts from the coefficient scan.

Usage: python scripts/cap_kernel_profiles.py [s] [outdir]
"""

import math
import pathlib
import sys

import numpy as np

from sphkern.gegenbauer import GegenbauerParams
from sphkern.kernels import CapConvKernel
from sphkern.spd import classify


def main():
    s = float(sys.argv[1]) if len(sys.argv) > 1 else math.pi / 4
    outdir = pathlib.Path(sys.argv[2]) if len(sys.argv) > 2 else pathlib.Path("cap_profiles")
    outdir.mkdir(exist_ok=True)
    theta = np.linspace(0.0, math.pi, 721)
    xs = np.cos(theta)
    for d in (3, 5, 7, 9):
        kernel = CapConvKernel(d, s).as_kernel()
        vals = kernel(xs)
        path = outdir / f"n{d}_s{s:.4f}.csv"
        with open(path, "w") as fh:
            fh.write("theta,x,value\n")
            for t, x, v in zip(theta, xs, vals):
                fh.write(f"{t:.17g},{x:.17g},{v:.17g}\n")
        lam = (d - 1) / 2.0
        report = classify(kernel, GegenbauerParams(lam), 30)
        head = ", ".join(f"{c:.3e}" for c in report.expansion[:6])
        print(
            f"N_{d}: wrote {path}; lambda={lam:g}; first coeffs [{head}]; "
            f"neg={report.neg_count}, pos even/odd={report.pos_even}/{report.pos_odd}"
        )


if __name__ == "__main__":
    main()
