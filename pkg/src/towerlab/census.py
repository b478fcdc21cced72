"""Place censuses B_m from point counts N_m, and their behaviour under constant field extension."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from math import gcd
from typing import Mapping

from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius

EXACT = "exact"
LOWER = "lower"


class CensusError(ValueError):
    """Counts that cannot come from a curve, or an undetermined output degree."""


def places_from_counts(N: Mapping[int, int], M: int | None = None) -> dict[int, int]:
    """B_m = (1/m) sum_{d | m} mu(m/d) N_d for m = 1..M."""
    M = max(N) if M is None else M
    B = {}
    for m in range(1, M + 1):
        missing = [d for d in divisors(m) if d not in N]
        if missing:
            raise CensusError(f"N_{missing[0]} needed for B_{m}")
        total = sum(int(mobius(m // d)) * N[d] for d in divisors(m))
        if total % m or total < 0:
            raise CensusError(f"B_{m} = {total}/{m} is not a nonnegative integer; counts are not certified totals")
        B[m] = total // m
    return B


def counts_from_places(B: Mapping[int, int], M: int | None = None) -> dict[int, int]:
    """N_m = sum_{d | m} d B_d."""
    M = max(B) if M is None else M
    return {m: sum(d * B[d] for d in divisors(m)) for m in range(1, M + 1)}


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _contributors(n: int, i: int) -> list[int]:
    # degrees r' whose places split into places of degree n over F_{q^i}
    return [r for r in divisors(n * i) if _lcm(r, i) == n * i]


def extension_mask(B: Mapping[int, int], i: int, n_max: int) -> dict[int, bool]:
    """Which output degrees 1..n_max are fully determined by the inputs."""
    return {n: all(r in B for r in _contributors(n, i)) for n in range(1, n_max + 1)}


def extend_census(B: Mapping[int, int], i: int, degrees: list[int] | None = None) -> dict[int, int]:
    """Census over F_{q^i} from the census over F_q.

    A place of degree r' splits into gcd(r', i) places of degree r'/gcd(r', i).
    Without ``degrees`` every determined degree up to max(B) // i is returned;
    explicitly requested degrees that are not determined raise CensusError.
    """
    if i < 1:
        raise CensusError("extension exponent must be >= 1")
    if degrees is None:
        mask = extension_mask(B, i, max(B) // i)
        degrees = [n for n, ok in mask.items() if ok]
    out = {}
    for n in degrees:
        contrib = _contributors(n, i)
        if any(r not in B for r in contrib):
            raise CensusError(f"degree {n} over F_q^{i} needs B_r for r in {contrib}")
        out[n] = sum(gcd(r, i) * B[r] for r in contrib)
    return out


def degree_one_identity_check(B: Mapping[int, int], b1_ext: int, r: int) -> bool:
    """B_1(F/F_{q^r}) == sum_{i | r} i B_i(F/F_q)."""
    return b1_ext == sum(i * B[i] for i in divisors(r))


@dataclass
class LevelCensus:
    level: str
    q: int
    g: int | None = None
    N: dict[int, int] = field(default_factory=dict)
    B: dict[int, int] = field(default_factory=dict)
    provenance: dict[int, str] = field(default_factory=dict)

    @classmethod
    def from_records(cls, records, q: int, level: str | None = None) -> LevelCensus:
        """Certified totals go into N (and B when complete); affine-only counts stay lower bounds."""
        cen = cls(level=level or str(records[0].level), q=q)
        for rec in sorted(records, key=lambda r: r.m):
            if rec.n_total is not None:
                cen.N[rec.m] = rec.n_total
                cen.provenance[rec.m] = EXACT
            else:
                cen.N[rec.m] = rec.n_affine
                cen.provenance[rec.m] = LOWER
        exact = {m: n for m, n in cen.N.items() if cen.provenance[m] == EXACT}
        M = 0
        while M + 1 in exact:
            M += 1
        if M:
            cen.B = places_from_counts(exact, M)
        return cen

    @property
    def exact(self) -> bool:
        return bool(self.N) and all(v == EXACT for v in self.provenance.values())

    def rows(self) -> list[dict]:
        return [
            {
                "level": self.level,
                "q": self.q,
                "g": self.g,
                "m": m,
                "N_m": self.N[m],
                "B_m": self.B.get(m),
                "provenance": self.provenance[m],
            }
            for m in sorted(self.N)
        ]

    def to_json(self) -> str:
        return json.dumps({"level": self.level, "q": self.q, "g": self.g, "rows": self.rows()}, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, ["level", "q", "g", "m", "N_m", "B_m", "provenance"], lineterminator="\n")
        w.writeheader()
        for row in self.rows():
            w.writerow({k: "" if v is None else v for k, v in row.items()})
        return buf.getvalue()
