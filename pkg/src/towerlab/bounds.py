"""Lachaud-Martin-Deschamps lower bounds on the class number and the comparisons built on them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath

DIGITS = 50


def _sqrt_exact(q: int) -> int | None:
    s = isqrt(q)
    return s if s * s == q else None


@dataclass(frozen=True)
class LMDBounds:
    q: int
    g: int
    b1: int
    L1: Fraction
    L2: Fraction | mpmath.mpf
    L2_exact: bool
    L3: Fraction | None

    @property
    def l3_applicable(self) -> bool:
        return self.L3 is not None


def l3_applicable(q: int, g: int, b1: int) -> bool:
    """g > sqrt(q)/2 and at least one rational place."""
    return 4 * g * g > q and b1 >= 1


def lmd_bounds(q: int, g: int, b1: int, digits: int = DIGITS) -> LMDBounds:
    if g < 1:
        raise ValueError("class-number bounds need genus >= 1")
    if b1 < 0:
        raise ValueError("B_1 must be nonnegative")
    L1 = Fraction(q ** (g - 1) * (q - 1) ** 2, (q + 1) * (g + 1))
    rest = Fraction(q ** (g - 1) - 1, g) * Fraction(b1 + q - 1, q - 1)
    s = _sqrt_exact(q)
    if s is not None:
        L2, exact = (s - 1) ** 2 * rest, True
    else:
        with mpmath.workdps(digits):
            L2 = (mpmath.sqrt(q) - 1) ** 2 * mpmath.mpf(rest.numerator) / rest.denominator
        exact = False
    L3 = Fraction((q**g - 1) * (q - 1), q + g + g * q) if l3_applicable(q, g, b1) else None
    return LMDBounds(q, g, b1, L1, L2, exact, L3)


def corollary_check(h: int, q: int, g: int) -> bool:
    """h > q^g, exact."""
    if g < 1:
        raise ValueError("h > q^g is not meaningful at genus 0")
    return h > q**g


def l2_proof_constant(q: int, digits: int = DIGITS) -> mpmath.mpf:
    """2 (q + 1 - 2 sqrt q) / ((q - 1) sqrt q); stays below 0.4 for every q >= 2."""
    with mpmath.workdps(digits):
        r = mpmath.sqrt(q)
        return 2 * (q + 1 - 2 * r) / ((q - 1) * r)


def l2_ratio_proof_bound(q: int, g: int, digits: int = DIGITS) -> mpmath.mpf:
    """2.5 g / (g + sqrt q), the lower bound on h/L2 derived for type r = 1 families."""
    with mpmath.workdps(digits):
        return mpmath.mpf(5) / 2 * g / (g + mpmath.sqrt(q))


def _ratio(h: int, L):
    if L is None or L == 0:
        return None
    if isinstance(L, Fraction):
        return Fraction(h) / L
    with mpmath.workdps(DIGITS):
        return mpmath.mpf(h) / L


@dataclass(frozen=True)
class BoundsReport:
    label: str
    q: int
    g: int
    b1: int
    h: int
    bounds: LMDBounds

    @property
    def ratios(self) -> dict[str, object]:
        b = self.bounds
        return {"L1": _ratio(self.h, b.L1), "L2": _ratio(self.h, b.L2), "L3": _ratio(self.h, b.L3)}

    @property
    def exceeds_qg(self) -> bool:
        return corollary_check(self.h, self.q, self.g)

    @property
    def l2_at_least_2(self) -> bool | None:
        r = self.ratios["L2"]
        return None if r is None else r >= 2

    @property
    def above_all_bounds(self) -> bool:
        return all(r >= 1 for r in self.ratios.values() if r is not None)


def bounds_report(q: int, g: int, b1: int, h: int, label: str = "") -> BoundsReport:
    return BoundsReport(label, q, g, b1, h, lmd_bounds(q, g, b1))


@dataclass(frozen=True)
class RatioRow:
    label: str
    q: int
    g: int
    h: int
    h_over_L1: object
    h_over_L2: object
    h_over_L3: object
    l2_at_least_2: bool | None
    l2_proof_bound: mpmath.mpf
    trend: str


def ratio_table(reports: list[BoundsReport]) -> list[RatioRow]:
    """Exact ratios h/L_i ordered by genus, each annotated with the trend of h/L1."""
    if not reports:
        raise ValueError("ratio table needs at least one report")
    rows = []
    prev = None
    for rep in sorted(reports, key=lambda r: (r.g, r.q, r.label)):
        ratios = rep.ratios
        r1 = ratios["L1"]
        trend = "" if prev is None else "up" if r1 > prev else "down" if r1 < prev else "flat"
        prev = r1
        rows.append(RatioRow(rep.label, rep.q, rep.g, rep.h, r1, ratios["L2"], ratios["L3"],
                             rep.l2_at_least_2, l2_ratio_proof_bound(rep.q, rep.g), trend))
    return rows
