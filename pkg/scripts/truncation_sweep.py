#!/usr/bin/env python3
"""Sweep the Hermite truncation level and print the homomorphism residual
of the quantization map on displaced Gaussian symbols.

The residual is projected onto a fixed window of low levels so that the
band-edge leakage of the growing truncation does not mask convergence.
"""

import argparse
import time

import numpy as np

from superstar.coeffs import GaussianPoly
from superstar.params import DeformationParams
from superstar.quantization import TruncatedBasis, omega_map, projected_residual
from superstar.starprod import star_fast
from superstar.superfun import SuperFunction


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--theta", type=float, default=1.3)
    ap.add_argument("--alpha", type=float, default=0.4)
    ap.add_argument("--levels", type=int, nargs="+", default=[16, 32, 48])
    ap.add_argument("--keep", type=int, default=8,
                    help="low-level window for the residual")
    ap.add_argument("--box", type=float, default=9.0)
    ap.add_argument("--grid", type=int, default=96)
    args = ap.parse_args()

    p = DeformationParams(args.theta, args.alpha, 2, 1)

    def gg(a, amp, c):
        g = GaussianPoly.gaussian(2, a, center=c, amp=amp)
        return g.to_grid(args.box, args.grid)

    f1 = SuperFunction(2, 1, {0: gg(0.5, 1.0, (2.5, -2.0)),
                              1: gg(0.5, 0.5, (2.5, -2.0))})
    f2 = SuperFunction(2, 1, {0: gg(0.6, 0.8, (-1.5, 2.2)),
                              1: gg(0.6, -0.3, (-1.5, 2.2))})
    f12 = star_fast(p, f1, f2)

    print(f"# theta={args.theta} alpha={args.alpha} "
          f"window={args.keep} box={args.box} grid={args.grid}")
    print(f"{'levels':>8} {'residual':>12} {'seconds':>9}")
    for lv in args.levels:
        t0 = time.time()
        basis = TruncatedBasis(2, 1, lv, args.theta)
        prod = omega_map(p, basis, f1).compose(omega_map(p, basis, f2))
        diff = prod - omega_map(p, basis, f12)
        scale = max(np.abs(m).max() for m in prod.comps.values())
        res = max(projected_residual(basis, m, args.keep)
                  for m in diff.comps.values()) / scale
        print(f"{lv:>8} {res:>12.4e} {time.time() - t0:>9.2f}")


if __name__ == "__main__":
    main()
