#!/usr/bin/env python3
"""Smoothness ladder experiment for the S^3 truncated-power family.

Tabulates one-sided finite-difference derivatives of f_2, I f_3 and I^2 f_4
across the support knot theta = t and near the pole x = 1.  The table shows
the k-th derivative matching across the knot while the (k+1)-th derivative
grows without bound as x -> 1: the classes C^0, C^1, C^2 on [-1, 1] are
sharp at the pole, not at the knot.

Usage: python scripts/smoothness_ladder.py [t]
"""

import math
import sys

import numpy as np

from sphkern.kernels import TruncatedPower, eval_montee_closed_form, eval_truncated_power

STENCILS = {
    0: ([1.0], 0),
    1: ([-0.5, 0.0, 0.5], 1),
    2: ([1.0, -2.0, 1.0], 1),
    3: ([-0.5, 1.0, 0.0, -1.0, 0.5], 2),
}


def fd(f, x, k, h):
    coeffs, reach = STENCILS[k]
    xs = x + h * np.arange(-reach, reach + 1)
    return float(np.dot(coeffs, f(xs)) / h**k) if k else float(f(np.array([x]))[0])


def main():
    t = float(sys.argv[1]) if len(sys.argv) > 1 else 1.2
    family = [
        ("f_2    (C^0)", lambda x: np.asarray(eval_truncated_power(TruncatedPower(2, t), x)), 0),
        ("I f_3  (C^1)", lambda x: np.asarray(eval_montee_closed_form("If3", t, x)), 1),
        ("I^2f_4 (C^2)", lambda x: np.asarray(eval_montee_closed_form("I2f4", t, x)), 2),
    ]
    knot = math.cos(t)
    h = 1e-4
    print(f"support angle t = {t}, knot x = {knot:.6f}\n")
    print(f"{'kernel':14s} {'k':>2s} {'d^k left':>14s} {'d^k right':>14s} {'|jump|':>10s}")
    for name, f, k in family:
        left = fd(f, knot - 25 * h, k, h)
        right = fd(f, knot + 25 * h, k, h)
        print(f"{name:14s} {k:2d} {left:14.6e} {right:14.6e} {abs(left - right):10.2e}")

    print(f"\n{'kernel':14s} {'k+1':>3s}  |d^(k+1) f| at x = 1 - delta")
    print(f"{'':14s} {'':3s}  " + "  ".join(f"delta={d:g}" for d in (1e-1, 1e-2, 1e-3)))
    for name, f, k in family:
        vals = [abs(fd(f, 1.0 - delta, k + 1, delta / 40)) for delta in (1e-1, 1e-2, 1e-3)]
        print(f"{name:14s} {k + 1:3d}  " + "  ".join(f"{v:12.4e}" for v in vals))
    print("\n(the k-th derivative is continuous at the knot; the (k+1)-th grows ~ delta^(-1/2) at the pole)")


if __name__ == "__main__":
    main()
