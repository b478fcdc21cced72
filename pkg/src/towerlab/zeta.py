"""L-polynomials from point counts, class numbers and effective divisor counts.

With power sums S_m = N_m - (q^m + 1) the numerator L(t) = sum a_i t^i of
Z(t) = L(t) / ((1 - t)(1 - q t)) satisfies Newton's identities
``i a_i = sum_{j=1..i} S_j a_{i-j}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import mpmath
import sympy


class ZetaError(ValueError):
    """Counts inconsistent with any curve of the tried genera."""


def _as_counts(N: Mapping[int, int] | Sequence[int]) -> list[int]:
    """Counts N_1..N_M as a list; a mapping must hold a contiguous prefix."""
    if isinstance(N, Mapping):
        out = []
        m = 1
        while m in N:
            out.append(int(N[m]))
            m += 1
        return out
    return [int(v) for v in N]


@dataclass(frozen=True)
class LPolynomial:
    q: int
    g: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        q, g, a = self.q, self.g, self.coeffs
        if len(a) != 2 * g + 1 or a[0] != 1:
            raise ZetaError("L-polynomial needs 2g+1 coefficients with a_0 = 1")
        for i in range(g + 1):
            if a[2 * g - i] != q ** (g - i) * a[i]:
                raise ZetaError(f"functional equation fails at a_{2 * g - i}")

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def power_sums(self, M: int) -> list[int]:
        """S_1..S_M with S_m = N_m - (q^m + 1)."""
        a = list(self.coeffs) + [0] * max(0, M + 1 - len(self.coeffs))
        S: list[int] = []
        for m in range(1, M + 1):
            S.append(m * a[m] - sum(S[j - 1] * a[m - j] for j in range(1, m)))
        return S

    def point_counts(self, M: int) -> list[int]:
        return [self.q**m + 1 + s for m, s in enumerate(self.power_sums(M), start=1)]

    def reciprocal_root_moduli(self, digits: int = 50) -> list:
        """|alpha| for the reciprocal roots, from the squarefree factors of t^(2g) L(1/t)."""
        if self.g == 0:
            return []
        t = sympy.Symbol("t")
        poly = sympy.Poly(list(self.coeffs), t)  # highest power first: reversed L
        moduli = []
        for factor, mult in poly.factor_list()[1]:
            for root in factor.nroots(n=digits, maxsteps=200):
                with mpmath.workdps(digits):
                    moduli.extend([abs(mpmath.mpmathify(root))] * mult)
        return moduli

    def to_dict(self) -> dict:
        return {"q": self.q, "g": self.g, "coeffs": [str(c) for c in self.coeffs]}


def lpoly_from_counts(N: Mapping[int, int] | Sequence[int], q: int, g: int) -> LPolynomial:
    """L-polynomial from N_1..N_{2g} via Newton's identities."""
    counts = _as_counts(N)
    if len(counts) < 2 * g:
        raise ZetaError(f"need N_1..N_{2 * g}, have {len(counts)}")
    S = [n - (q**m + 1) for m, n in enumerate(counts[: 2 * g], start=1)]
    a = [1]
    for i in range(1, 2 * g + 1):
        s = sum(S[j - 1] * a[i - j] for j in range(1, i + 1))
        if s % i:
            raise ZetaError(f"Newton identity gives non-integral a_{i}")
        a.append(s // i)
    return LPolynomial(q, g, tuple(a))


def infer_genus(N: Mapping[int, int] | Sequence[int], q: int) -> int:
    """Smallest g whose L-polynomial from N_1..N_{2g} reproduces every later count.

    At least N_{2g+1} and N_{2g+2} must be available for the accepted g.
    """
    counts = _as_counts(N)
    M = len(counts)
    g = 0
    while 2 * g + 2 <= M:
        try:
            L = lpoly_from_counts(counts, q, g)
        except ZetaError:
            g += 1
            continue
        if L.point_counts(M) == counts:
            return g
        g += 1
    raise ZetaError(f"no genus g <= {(M - 2) // 2} fits N_1..N_{M}; counts uncertified or too few")


def class_number(L: LPolynomial) -> int:
    """h = L(1)."""
    return sum(L.coeffs)


def effective_divisors(L: LPolynomial, n_max: int) -> list[int]:
    """A_0..A_{n_max}: coefficients of L(t) / ((1 - t)(1 - q t))."""
    q = L.q
    geo = [(q ** (k + 1) - 1) // (q - 1) for k in range(n_max + 1)]
    return [sum(L.coeffs[i] * geo[n - i] for i in range(min(n, 2 * L.g) + 1)) for n in range(n_max + 1)]


def tail_count(L: LPolynomial, n: int) -> int:
    """h (q^(n-g+1) - 1) / (q - 1), valid for n > 2g - 2."""
    if n <= 2 * L.g - 2:
        raise ValueError("closed form holds only for n > 2g - 2")
    return class_number(L) * (L.q ** (n - L.g + 1) - 1) // (L.q - 1)


def extend_lpoly(L: LPolynomial, i: int) -> LPolynomial:
    """L-polynomial of the same curve over F_{q^i} (reciprocal roots raised to the i-th power)."""
    S = L.power_sums(2 * L.g * i)
    qi = L.q**i
    counts = [qi**m + 1 + S[i * m - 1] for m in range(1, 2 * L.g + 1)]
    return lpoly_from_counts(counts, qi, L.g)


def root_moduli_ok(L: LPolynomial, tol: float = 1e-9) -> bool:
    target = mpmath.sqrt(L.q)
    return all(abs(r - target) <= tol for r in L.reciprocal_root_moduli())


def zeta_json(L: LPolynomial, A: Sequence[int]) -> str:
    return json.dumps(
        {**L.to_dict(), "h": str(class_number(L)), "A": [str(a) for a in A]},
        sort_keys=True,
    )
