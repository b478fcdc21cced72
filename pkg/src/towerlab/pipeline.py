"""Per-level analysis shared by the CLI and the scripts: count, census, zeta, bounds, estimates."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from . import asym
from .bounds import BoundsReport, bounds_report
from .census import LevelCensus
from .tower import (
    LevelId,
    MassCheck,
    PointCountRecord,
    TowerSpec,
    census_lower_bound,
    census_mass_check,
    count_chains,
    default_cap,
    genus_bound,
    infinity_correction,
)
from .zeta import LPolynomial, ZetaError, class_number, effective_divisors, infer_genus, lpoly_from_counts

# progressive counting stops once the genus is confirmed by this many extra degrees
CONFIRM = 2
MAX_AUTO_DEGREE = 48


@dataclass
class RunConfig:
    spec: str = "T0"
    q: int | None = None
    levels: list[LevelId] = field(default_factory=list)
    m: list[int] | None = None
    cap: int = field(default_factory=default_cap)
    fmt: str = "csv"
    out: str | None = None
    digits: int = 50
    mu: list[Fraction] = field(default_factory=list)
    r: int | None = None


@dataclass
class LevelAnalysis:
    spec: TowerSpec
    level: LevelId
    records: list[PointCountRecord]
    census: LevelCensus
    lpoly: LPolynomial | None = None
    mass: MassCheck | None = None
    note: str = ""

    @property
    def g(self) -> int | None:
        return None if self.lpoly is None else self.lpoly.g

    @property
    def q(self) -> int:
        return self.spec.constant_field_order

    @property
    def label(self) -> str:
        return f"{self.spec.name}({self.level})/F_{self.q}"

    @property
    def h(self) -> int | None:
        return None if self.lpoly is None else class_number(self.lpoly)

    @property
    def b1(self) -> int | None:
        return self.census.B.get(1)

    def effective_divisors(self, n_max: int | None = None) -> list[int] | None:
        if self.lpoly is None:
            return None
        return effective_divisors(self.lpoly, 2 * self.lpoly.g + 10 if n_max is None else n_max)

    def bounds(self) -> BoundsReport | None:
        if self.lpoly is None or self.lpoly.g < 1:
            return None
        return bounds_report(self.q, self.lpoly.g, self.b1, self.h, self.label)

    @property
    def genus_bound(self) -> Fraction:
        return genus_bound(self.spec, self.level)

    @property
    def census_bound(self) -> int:
        return census_lower_bound(self.spec, self.level)


def max_degree_within(spec: TowerSpec, cap: int) -> int:
    m = 0
    while spec.constant_field_order ** (m + 1) <= cap and m < MAX_AUTO_DEGREE:
        m += 1
    return m


def analyze_level(spec: TowerSpec, level: LevelId, cap: int | None = None,
                  degrees: Sequence[int] | None = None) -> LevelAnalysis:
    """Count and analyse one level.

    With explicit ``degrees`` exactly those are counted.  Otherwise certified
    levels are counted for m = 1, 2, ... until the inferred genus is confirmed
    by ``CONFIRM`` further degrees or the cap is reached; uncertified levels
    are counted up to the split degree (enough for the census lower bound).
    """
    cap = default_cap() if cap is None else cap
    spec.validate_level(level)
    certified = infinity_correction(spec, level) is not None
    m_cap = max_degree_within(spec, cap)
    records: list[PointCountRecord] = []
    g = None
    if degrees is not None:
        records = [count_chains(spec, level, m, cap) for m in sorted(set(degrees))]
        if certified:
            try:
                g = infer_genus({r.m: r.n_total for r in records}, spec.constant_field_order)
            except ZetaError:
                g = None
    elif certified:
        for m in range(1, m_cap + 1):
            records.append(count_chains(spec, level, m, cap))
            try:
                cand = infer_genus([r.n_total for r in records], spec.constant_field_order)
            except ZetaError:
                continue
            if m >= 2 * cand + 2 + CONFIRM or m == m_cap:
                g = cand
                break
    else:
        records = [count_chains(spec, level, m, cap) for m in range(1, min(spec.split_degree, m_cap) + 1)]

    census = LevelCensus.from_records(records, spec.constant_field_order, f"{spec.name}({level})") if records \
        else LevelCensus(f"{spec.name}({level})", spec.constant_field_order)
    lpoly = None
    note = ""
    if g is not None:
        census.g = g
        lpoly = lpoly_from_counts([r.n_total for r in records], spec.constant_field_order, g)
    elif certified:
        note = "genus not certified within the enumeration cap"
    else:
        note = "points above x_1 = infinity are not certified; lower-bound census only"

    mass = None
    rec = next((r for r in records if r.m == spec.split_degree), None)
    if rec is not None:
        mass = census_mass_check(spec, level, cap, rec)
    elif spec.split_degree <= m_cap:
        mass = census_mass_check(spec, level, cap)
    return LevelAnalysis(spec, level, records, census, lpoly, mass, note)


def genus_ratio_report(analyses: Sequence[LevelAnalysis]) -> list[tuple[str, str, Fraction]]:
    """d_hat = g_a / g_b between consecutive exact curves of positive genus, ordered by genus."""
    exact = sorted((an for an in analyses if an.g), key=lambda an: (an.g, an.label))
    return asym.genus_ratios([(an.label, an.g) for an in exact])


def density_target(spec: TowerSpec) -> Fraction | None:
    if spec.name == "T2":
        return Fraction(1, spec.p)
    if spec.name == "T3":
        return Fraction(1, 2)
    return None


def spec_profile(spec: TowerSpec, digits: int = asym.DIGITS) -> asym.AsymptoticProfile:
    """Profile of the family seen over the constant field: type concentrated in the split degree."""
    return asym.profile(spec.constant_field_order, spec.split_degree, density_target(spec), digits)


# ---------------------------------------------------------------- value formatting

def fmt(value, digits: int = asym.DIGITS) -> str:
    if value is None:
        return "NA"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, mpmath.mpf):
        return mpmath.nstr(value, digits, strip_zeros=False)
    return str(value)


def level_rows(an: LevelAnalysis, mu_grid: Sequence = (), next_genus: int | None = None,
               digits: int = asym.DIGITS) -> list[tuple[str, str]]:
    """(statistic, value) pairs for one analysed level, in a fixed order."""
    rows: list[tuple[str, str]] = []
    add = lambda k, v: rows.append((k, fmt(v, digits)))  # noqa: E731
    add("constant_field_order", an.q)
    add("certified_infinity", infinity_correction(an.spec, an.level) is not None)
    add("genus_bound", an.genus_bound)
    add("census_bound", an.census_bound)
    if an.mass is not None:
        add("mass_affine", an.mass.affine)
        add("mass_total", an.mass.total)
        add("mass_ge_census_bound", an.mass.holds)
    for rec in an.records:
        add(f"n_affine[{rec.m}]", rec.n_affine)
        add(f"n_total[{rec.m}]", rec.n_total)
    for m, b in sorted(an.census.B.items()):
        add(f"B[{m}]", b)
    add("genus", an.g)
    if an.note:
        add("note", an.note)
    if an.lpoly is None:
        return rows
    add("L_coeffs", " ".join(str(c) for c in an.lpoly.coeffs))
    add("h", an.h)
    A = an.effective_divisors()
    add("A[1]", A[1])
    rep = an.bounds()
    if rep is not None:
        b = rep.bounds
        ratios = rep.ratios
        add("h_gt_q_pow_g", rep.exceeds_qg)
        add("L1", b.L1)
        add("L2", b.L2)
        add("L2_exact", b.L2_exact)
        add("L3", b.L3)
        add("h_over_L1", ratios["L1"])
        add("h_over_L2", ratios["L2"])
        add("h_over_L3", ratios["L3"])
        add("h_over_L2_ge_2", rep.l2_at_least_2)
        est = asym.finite_estimates(str(an.level), an.q, an.g, an.census.B, an.h, A,
                                    next_genus, mu_grid, digits=digits)
        for m, bh in est.beta_hat.items():
            add(f"beta_hat[{m}]", bh)
        add("H_hat", est.H_hat)
        for mu, d in est.delta_hat.items():
            add(f"delta_hat[{mu}]", d)
        add("tsfasman_sum", est.tsfasman)
        add("d_hat", est.d_hat)
    return rows


def profile_rows(prof: asym.AsymptoticProfile, mu_grid: Sequence = (), digits: int = asym.DIGITS) -> list[tuple[str, str]]:
    rows = [
        ("q", fmt(prof.q)),
        ("r", fmt(prof.r)),
        (f"beta[{prof.r}]", fmt(prof.beta)),
        ("H", fmt(prof.H, digits)),
        ("log_q", fmt(mpmath.log(prof.q), digits)),
        ("mu0", fmt(prof.mu0)),
        ("density_target", fmt(prof.density_target)),
    ]
    for mu in mu_grid:
        rows.append((f"delta[{fmt(Fraction(mu))}]", fmt(asym.delta(prof.q, prof.r, Fraction(mu), digits), digits)))
    return rows
