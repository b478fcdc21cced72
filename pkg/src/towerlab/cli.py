"""Command-line front end: ``towerlab {count,census,zeta,bounds,asym,report}``.

Exit codes: 0 success, 1 invalid configuration, 2 refusal by the enumeration cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction
from typing import Sequence

import mpmath

from . import asym
from .bounds import bounds_report, l2_ratio_proof_bound
from .gf import EnumerationCapError
from .pipeline import (
    LevelAnalysis,
    RunConfig,
    analyze_level,
    fmt,
    level_rows,
    profile_rows,
    spec_profile,
)
from .tower import LevelId, TowerSpec, count_chains, default_cap, eval_int, resolve_spec
from .zeta import class_number, effective_divisors, root_moduli_ok

EXIT_OK, EXIT_INVALID, EXIT_CAP = 0, 1, 2
LONG_FIELDS = ["spec", "level", "statistic", "value"]
COUNT_FIELDS = ["spec", "level", "m", "field_order", "n_affine", "infinity_correction", "n_total"]
CENSUS_FIELDS = ["spec", "level", "q", "g", "m", "N_m", "B_m", "provenance"]
DEFAULT_MU = ("1/10", "1/4", "1/2", "1")


class ConfigError(ValueError):
    pass


class CapRefusal(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


# ---------------------------------------------------------------- argument parsing

def parse_degrees(text: str) -> list[int]:
    """``4``, ``1..6``, ``1,2,5`` or a mix such as ``1..3,8``."""
    out: set[int] = set()
    for part in text.split(","):
        part = part.strip()
        m = re.fullmatch(r"(\d+)(?:\.\.(\d+))?", part)
        if not m:
            raise ConfigError(f"bad degree list {text!r}")
        lo = int(m.group(1))
        hi = int(m.group(2)) if m.group(2) else lo
        if lo < 1 or hi < lo:
            raise ConfigError(f"bad degree range {part!r}")
        out.update(range(lo, hi + 1))
    return sorted(out)


def parse_mu(text: str) -> list[Fraction]:
    try:
        mus = [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad mu list {text!r}") from exc
    if not mus or any(mu <= 0 for mu in mus):
        raise ConfigError("mu values must be positive")
    return mus


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--spec", default="T0", help="builtin tower T0..T3 or a JSON spec file")
    common.add_argument("--q", type=int, help="tower parameter q")
    common.add_argument("--level", action="append", default=[], help="level 'k,s' (repeatable)")
    common.add_argument("--m", help="degrees to count: '4', '1..6' or '1,2,5'")
    common.add_argument("--cap", help="largest field order to enumerate (default $TOWERLAB_CAP or 2^24)")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--digits", type=int, default=asym.DIGITS, help="significant digits for reals")
    common.add_argument("--mu", help="comma-separated mu grid, e.g. '1/10,0.5,1'")

    parser = _Parser(prog="towerlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("count", parents=[common], help="point counts per level and degree")
    sub.add_parser("census", parents=[common], help="place census B_m with provenance")
    zeta = sub.add_parser("zeta", parents=[common], help="L-polynomial, class number, A_n")
    zeta.add_argument("--n-max", type=int, help="last A_n to print (default 2g+10)")
    bnd = sub.add_parser("bounds", parents=[common], help="class-number lower bounds")
    bnd.add_argument("--g", type=int, help="genus, for a direct evaluation without counting")
    bnd.add_argument("--b1", type=int, help="number of rational places (direct mode)")
    bnd.add_argument("--h", type=int, help="class number (direct mode)")
    a = sub.add_parser("asym", parents=[common], help="asymptotic profile H, mu0, Delta(mu)")
    a.add_argument("--r", type=int, required=True, help="type degree r")
    sub.add_parser("report", parents=[common], help="census, zeta, bounds and estimates per level")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    if args.digits < 5:
        raise ConfigError("--digits must be at least 5")
    try:
        cap = default_cap() if args.cap is None else eval_int(args.cap)
        levels = [LevelId.parse(t) for t in args.level]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(
        spec=args.spec,
        q=args.q,
        levels=levels,
        m=parse_degrees(args.m) if args.m else None,
        cap=cap,
        fmt=args.format,
        out=args.out,
        digits=args.digits,
        mu=parse_mu(args.mu) if args.mu else [],
        r=getattr(args, "r", None),
    )


def _spec_and_levels(cfg: RunConfig) -> tuple[TowerSpec, list[LevelId]]:
    try:
        spec = resolve_spec(cfg.spec, cfg.q)
    except (ValueError, OSError) as exc:
        raise ConfigError(str(exc)) from exc
    if not cfg.levels:
        raise ConfigError("at least one --level is required")
    for lv in cfg.levels:
        try:
            spec.validate_level(lv)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    return spec, sorted(set(cfg.levels))


def check_cap(spec: TowerSpec, degrees: Sequence[int], cap: int) -> None:
    """Refuse up front when the largest requested field exceeds the cap."""
    m = max(degrees)
    size = spec.constant_field_order**m
    if size > cap:
        raise CapRefusal(
            f"degree {m} needs the field of order {spec.constant_field_order}^{m} = {size}, "
            f"which exceeds the enumeration cap {cap}"
        )


# ---------------------------------------------------------------- commands

def cmd_count(cfg: RunConfig) -> tuple[list[str], list[dict]]:
    spec, levels = _spec_and_levels(cfg)
    degrees = cfg.m or [1]
    check_cap(spec, degrees, cfg.cap)
    rows = []
    for lv in levels:
        for m in degrees:
            rec = count_chains(spec, lv, m, cfg.cap)
            rows.append({
                "spec": spec.name, "level": str(lv), "m": m, "field_order": rec.field_order,
                "n_affine": rec.n_affine, "infinity_correction": rec.infinity_correction,
                "n_total": rec.n_total,
            })
    return COUNT_FIELDS, rows


def _analyses(cfg: RunConfig) -> tuple[TowerSpec, list[LevelAnalysis]]:
    spec, levels = _spec_and_levels(cfg)
    if cfg.m:
        check_cap(spec, cfg.m, cfg.cap)
    return spec, [analyze_level(spec, lv, cfg.cap, cfg.m) for lv in levels]


def cmd_census(cfg: RunConfig) -> tuple[list[str], list[dict]]:
    spec, analyses = _analyses(cfg)
    rows = []
    for an in analyses:
        for row in an.census.rows():
            rows.append({"spec": spec.name, **row, "level": str(an.level)})
    return CENSUS_FIELDS, rows


def _long(spec_name: str, level: str, pairs) -> list[dict]:
    return [{"spec": spec_name, "level": level, "statistic": k, "value": v} for k, v in pairs]


def cmd_zeta(cfg: RunConfig, n_max: int | None = None) -> tuple[list[str], list[dict]]:
    spec, analyses = _analyses(cfg)
    rows = []
    for an in analyses:
        if an.lpoly is None:
            raise ConfigError(f"level ({an.level}) of {spec.name} has no exact zeta function: {an.note}")
        L = an.lpoly
        pairs = [("q", fmt(L.q)), ("g", fmt(L.g))]
        pairs += [(f"a[{i}]", str(c)) for i, c in enumerate(L.coeffs)]
        pairs.append(("h", str(class_number(L))))
        A = effective_divisors(L, 2 * L.g + 10 if n_max is None else n_max)
        pairs += [(f"A[{n}]", str(v)) for n, v in enumerate(A)]
        pairs.append(("root_moduli_sqrt_q", fmt(root_moduli_ok(L))))
        rows += _long(spec.name, str(an.level), pairs)
    return LONG_FIELDS, rows


def cmd_bounds(cfg: RunConfig, g=None, b1=None, h=None) -> tuple[list[str], list[dict]]:
    if g is not None or b1 is not None or h is not None:
        if None in (g, b1, h, cfg.q):
            raise ConfigError("direct bounds need --q, --g, --b1 and --h together")
        try:
            reps = [("direct", bounds_report(cfg.q, g, b1, h))]
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        spec_name = "direct"
    else:
        spec, analyses = _analyses(cfg)
        spec_name = spec.name
        reps = []
        for an in analyses:
            rep = an.bounds()
            if rep is None:
                raise ConfigError(f"level ({an.level}) of {spec.name} has no exact class number of positive genus")
            reps.append((str(an.level), rep))
    rows = []
    d = cfg.digits
    for label, rep in reps:
        b, ratios = rep.bounds, rep.ratios
        pairs = [
            ("q", fmt(rep.q)), ("g", fmt(rep.g)), ("b1", fmt(rep.b1)), ("h", fmt(rep.h)),
            ("L1", fmt(b.L1, d)), ("L2", fmt(b.L2, d)), ("L2_exact", fmt(b.L2_exact)), ("L3", fmt(b.L3, d)),
            ("h_over_L1", fmt(ratios["L1"], d)), ("h_over_L2", fmt(ratios["L2"], d)),
            ("h_over_L3", fmt(ratios["L3"], d)), ("h_gt_q_pow_g", fmt(rep.exceeds_qg)),
            ("h_over_L2_ge_2", fmt(rep.l2_at_least_2)), ("above_all_bounds", fmt(rep.above_all_bounds)),
            ("l2_ratio_proof_bound", fmt(l2_ratio_proof_bound(rep.q, rep.g, d), d)),
        ]
        rows += _long(spec_name, label, pairs)
    return LONG_FIELDS, rows


def cmd_asym(cfg: RunConfig) -> tuple[list[str], list[dict]]:
    if cfg.q is None or cfg.r is None:
        raise ConfigError("asym needs --q and --r")
    try:
        prof = asym.profile(cfg.q, cfg.r, digits=cfg.digits)
        mus = cfg.mu or [prof.mu0 / 2, prof.mu0, Fraction(1, 2), Fraction(1)]
        pairs = profile_rows(prof, mus, cfg.digits)
    except asym.AsymError as exc:
        raise ConfigError(str(exc)) from exc
    return LONG_FIELDS, _long("asym", f"q={cfg.q},r={cfg.r}", pairs)


def cmd_report(cfg: RunConfig) -> tuple[list[str], list[dict]]:
    spec, analyses = _analyses(cfg)
    mus = cfg.mu or [Fraction(t) for t in DEFAULT_MU]
    exact = [an for an in analyses if an.g is not None and an.g >= 1]
    rows = []
    for an in analyses:
        nxt = None
        if an in exact and exact.index(an) + 1 < len(exact):
            nxt = exact[exact.index(an) + 1].g
        rows += _long(spec.name, str(an.level), level_rows(an, mus, nxt, cfg.digits))
    try:
        rows += _long(spec.name, "profile", profile_rows(spec_profile(spec, cfg.digits), mus, cfg.digits))
    except asym.AsymError as exc:
        rows += _long(spec.name, "profile", [("note", str(exc))])
    for a, b in zip(exact, exact[1:]):
        rows += _long(spec.name, f"{a.level}->{b.level}", [("genus_ratio", fmt(Fraction(a.g, b.g)))])
    return LONG_FIELDS, rows


# ---------------------------------------------------------------- output

def render(command: str, spec_name: str | None, fields: list[str], rows: list[dict], fmt_name: str) -> str:
    if fmt_name == "json":
        return json.dumps({"command": command, "spec": spec_name, "rows": rows}, sort_keys=True, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.DictWriter(buf, fields, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: "" if row.get(k) is None else row[k] for k in fields})
    return buf.getvalue()


def render_error(command: str | None, kind: str, message: str, code: int) -> str:
    return json.dumps({"command": command, "error": {"type": kind, "message": message, "exit_code": code}},
                      sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    want_json = "--format=json" in argv or any(
        a == "--format" and b == "json" for a, b in zip(argv, argv[1:]))
    command = next((a for a in argv if not a.startswith("-")), None)
    out = None
    try:
        args = build_parser().parse_args(argv)
        command, out = args.command, args.out
        cfg = make_config(args)
        with mpmath.workdps(max(cfg.digits, asym.DIGITS) + 10):
            if command == "count":
                fields, rows = cmd_count(cfg)
            elif command == "census":
                fields, rows = cmd_census(cfg)
            elif command == "zeta":
                fields, rows = cmd_zeta(cfg, args.n_max)
            elif command == "bounds":
                fields, rows = cmd_bounds(cfg, args.g, args.b1, args.h)
            elif command == "asym":
                fields, rows = cmd_asym(cfg)
            else:
                fields, rows = cmd_report(cfg)
        spec_name = rows[0]["spec"] if rows else None
        _emit(render(command, spec_name, fields, rows, cfg.fmt), out)
        return EXIT_OK
    except (CapRefusal, EnumerationCapError) as exc:
        code, kind, msg = EXIT_CAP, "cap_refusal", str(exc)
    except (ConfigError, ValueError) as exc:
        code, kind, msg = EXIT_INVALID, "invalid_config", str(exc)
    print(f"towerlab: {msg}", file=sys.stderr)
    if want_json:
        _emit(render_error(command, kind, msg, code), out)
    return code


if __name__ == "__main__":
    sys.exit(main())
