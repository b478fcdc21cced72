"""H, mu0 and Delta(mu) over a grid of (q, r), with the two closed-form cross-checks.

    python3 scripts/asym_profiles.py [--digits 30] [--points 8]
"""

import argparse
from fractions import Fraction
from math import isqrt

import mpmath

from towerlab import asym
from towerlab.pipeline import fmt

QS = (2, 3, 4, 5, 8, 9, 16)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--digits", type=int, default=30)
    ap.add_argument("--points", type=int, default=8, help="mu grid points on (0, 1]")
    args = ap.parse_args(argv)

    print("q,r,beta_r,mu0,H,H_series_gap,continuity_gap,mu,delta")
    for q in QS:
        for r in range(1, 7):
            if isqrt(q**r) ** 2 != q**r:
                continue
            prof = asym.profile(q, r)
            series_gap = abs(asym.h_limit_closed(q, r) - asym.h_limit_series(q, r))
            cont_gap = abs(asym.delta_upper(q, r, prof.mu0) - asym.delta_lower(q, r, prof.mu0))
            for i in range(1, args.points + 1):
                mu = Fraction(i, args.points)
                print(",".join([
                    str(q), str(r), fmt(prof.beta), fmt(prof.mu0), fmt(prof.H, args.digits),
                    mpmath.nstr(series_gap, 3), mpmath.nstr(cont_gap, 3), fmt(mu),
                    fmt(asym.delta(q, r, mu), args.digits),
                ]))


if __name__ == "__main__":
    main()
