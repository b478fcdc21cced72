"""Degree-one mass over F_(q^2) against the census lower bound (q^2-1) q^(k-1) p^s, level by level.

    python3 scripts/census_bounds.py --spec T0 --q 2 --k-max 4
    python3 scripts/census_bounds.py --spec T3 --k-max 2
"""

import argparse
import sys

from towerlab.gf import EnumerationCapError
from towerlab.pipeline import fmt
from towerlab.tower import census_mass_check, default_cap, eval_int, genus_bound, resolve_spec


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--spec", default="T0")
    ap.add_argument("--q", type=int)
    ap.add_argument("--k-max", type=int, default=4)
    ap.add_argument("--cap", default=None)
    args = ap.parse_args(argv)
    spec = resolve_spec(args.spec, args.q)
    cap = default_cap() if args.cap is None else eval_int(args.cap)

    print("level,field_order,affine,total,bound,margin,holds,genus_bound")
    for level in spec.levels(args.k_max):
        try:
            chk = census_mass_check(spec, level, cap)
        except EnumerationCapError as exc:
            print(f"{level}: skipped ({exc})", file=sys.stderr)
            continue
        print(f'"{level}",{spec.constant_field_order ** spec.split_degree},{chk.affine},{fmt(chk.total)},'
              f"{chk.bound},{chk.margin},{fmt(chk.holds)},{fmt(genus_bound(spec, level))}")


if __name__ == "__main__":
    main()
