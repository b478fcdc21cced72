"""Zeta data, class-number bounds and genus ratios for every level whose genus can be certified.

    python3 scripts/exact_curves.py [--cap 2^24] [--out curves.csv]
"""

import argparse
import csv
import sys
from fractions import Fraction

from towerlab.bounds import ratio_table
from towerlab.pipeline import analyze_level, fmt, genus_ratio_report
from towerlab.tower import LevelId, default_cap, eval_int, t0, t1, t3

CANDIDATES = [
    (t0(2), LevelId(1, 0)), (t0(2), LevelId(2, 0)), (t0(3), LevelId(2, 0)),
    (t1(4), LevelId(1, 1)), (t3(), LevelId(1, 1)), (t3(), LevelId(2, 0)),
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cap", default=None, help="enumeration cap (default $TOWERLAB_CAP or 2^24)")
    ap.add_argument("--out", help="CSV output path (default stdout)")
    args = ap.parse_args(argv)
    cap = default_cap() if args.cap is None else eval_int(args.cap)

    analyses = [analyze_level(spec, level, cap) for spec, level in CANDIDATES]
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["curve", "q", "g", "L", "h", "h_gt_q_pow_g", "h_over_L1", "h_over_L2", "h_over_L3", "trend_L1", "note"])
    reports = {an.label: an for an in analyses if an.g}
    rows = {r.label: r for r in ratio_table([an.bounds() for an in reports.values()])} if reports else {}
    for an in analyses:
        r = rows.get(an.label)
        w.writerow([
            an.label, an.q, fmt(an.g), " ".join(map(str, an.lpoly.coeffs)) if an.lpoly else "NA", fmt(an.h),
            fmt(an.h > an.q**an.g) if an.g else "NA",
            fmt(r.h_over_L1) if r else "NA", fmt(r.h_over_L2) if r else "NA", fmt(r.h_over_L3) if r else "NA",
            r.trend if r else "", an.note,
        ])
    w.writerow([])
    w.writerow(["from", "to", "genus_ratio"])
    for a, b, d in genus_ratio_report(analyses):
        w.writerow([a, b, fmt(Fraction(d))])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
