"""Asymptotic invariants of families of type beta_r = (q^(r/2) - 1)/r and their finite-level estimators.

All real values are mpmath numbers at 50 significant digits unless asked
otherwise.  ``s`` below always denotes the integer square root of q^r.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Mapping, Sequence

import mpmath

DIGITS = 50
TOL = mpmath.mpf("1e-12")


class AsymError(ValueError):
    pass


def _sqrt_qr(q: int, r: int) -> int:
    if q < 2 or r < 1:
        raise AsymError("need q >= 2 and r >= 1")
    s = isqrt(q**r)
    if s * s != q**r:
        raise AsymError(
            f"q^r = {q}^{r} is not a perfect square: a family of this type meets the "
            f"Drinfeld-Vladut bound over F_(q^r), which forces q^r to be a square"
        )
    return s


def _mp(x) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def beta_r(q: int, r: int) -> Fraction:
    return Fraction(_sqrt_qr(q, r) - 1, r)


def type_vector(q: int, r: int, M: int) -> list[Fraction]:
    """beta_1..beta_M: zero except beta_r."""
    b = beta_r(q, r)
    return [b if m == r else Fraction(0) for m in range(1, M + 1)]


def extend_type(q: int, r: int, i: int, M: int) -> list[Fraction]:
    """Type of the same family over F_(q^i), i | r: one-hot at r/i with value i beta_r."""
    if i < 1 or r % i:
        raise AsymError(f"extension degree {i} must divide r = {r}")
    b = i * beta_r(q, r)
    return [b if m == r // i else Fraction(0) for m in range(1, M + 1)]


def h_limit_closed(q: int, r: int, digits: int = DIGITS) -> mpmath.mpf:
    """log( q^s / (q^r - 1)^((s - 1)/r) )."""
    s = _sqrt_qr(q, r)
    with mpmath.workdps(digits):
        return mpmath.log(mpmath.mpf(q) ** s / mpmath.power(q**r - 1, mpmath.mpf(s - 1) / r))


def h_limit_series(q: int, r: int, digits: int = DIGITS) -> mpmath.mpf:
    """log q + sum_m beta_m log(q^m / (q^m - 1)) for the one-hot type."""
    beta = type_vector(q, r, r)
    with mpmath.workdps(digits):
        return mpmath.log(q) + mpmath.fsum(
            _mp(b) * mpmath.log(mpmath.mpf(q**m) / (q**m - 1)) for m, b in enumerate(beta, start=1) if b
        )


def h_limit(q: int, r: int, digits: int = DIGITS) -> mpmath.mpf:
    closed = h_limit_closed(q, r, digits)
    series = h_limit_series(q, r, digits)
    with mpmath.workdps(digits):
        gap = abs(closed - series)
    if gap > TOL:
        raise AssertionError(f"H closed form {closed} disagrees with series {series}")
    return closed


def mu0(q: int, r: int) -> Fraction:
    s = _sqrt_qr(q, r)
    return Fraction(s - 1, q**r - 1)


def delta_upper(q: int, r: int, mu, digits: int = DIGITS) -> mpmath.mpf:
    """H - (1 - mu) log q, the branch for mu >= mu0."""
    with mpmath.workdps(digits):
        return (h_limit_closed(q, r, digits) - (1 - _mp(mu)) * mpmath.log(q))


def delta_lower(q: int, r: int, mu, digits: int = DIGITS) -> mpmath.mpf:
    """Branch for 0 < mu <= mu0: log( (mu/(s-1))^((s-1)/r) * u^((mu+s-1)/r) ), u = (s-1)/mu + 1."""
    s = _sqrt_qr(q, r)
    with mpmath.workdps(digits):
        mu = _mp(mu)
        u = (s - 1) / mu + 1
        return ((s - 1) / mpmath.mpf(r) * mpmath.log(mu / (s - 1)) + (mu + s - 1) / r * mpmath.log(u))


def delta_product(q: int, r: int, mu, digits: int = DIGITS) -> mpmath.mpf:
    """log of u^(mu/r) (1 - 1/u)^(-(s-1)/r), the limit of A_(mu g)^(1/g)."""
    s = _sqrt_qr(q, r)
    with mpmath.workdps(digits):
        mu = _mp(mu)
        u = (s - 1) / mu + 1
        return mpmath.log(mpmath.power(u, mu / r) * mpmath.power(1 - 1 / u, -mpmath.mpf(s - 1) / r))


def delta(q: int, r: int, mu, digits: int = DIGITS) -> mpmath.mpf:
    if mu <= 0:
        raise AsymError("mu must be positive")
    if Fraction(mu) >= mu0(q, r):
        return delta_upper(q, r, mu, digits)
    return delta_lower(q, r, mu, digits)


@dataclass(frozen=True)
class AsymptoticProfile:
    q: int
    r: int
    beta: Fraction
    H: mpmath.mpf
    mu0: Fraction
    density_target: Fraction | None = None

    def type_vector(self, M: int) -> list[Fraction]:
        return type_vector(self.q, self.r, M)

    @property
    def log_q(self) -> mpmath.mpf:
        return mpmath.log(self.q)


def profile(q: int, r: int, density_target: Fraction | None = None, digits: int = DIGITS) -> AsymptoticProfile:
    return AsymptoticProfile(q, r, beta_r(q, r), h_limit(q, r, digits), mu0(q, r), density_target)


# ---------------------------------------------------------------- finite-level estimates

def nearest_index(mu, g: int) -> int:
    """Round-half-up of mu * g."""
    x = Fraction(mu) * g
    return int((x + Fraction(1, 2)).__floor__())


def tsfasman_sum(B: Mapping[int, int], q: int, g: int, s: int | None = None, digits: int = DIGITS) -> mpmath.mpf:
    """(1/g) sum_{m <= s} m B_m / (q^(m/2) - 1)."""
    if g < 1:
        raise AsymError("estimates need genus >= 1")
    s = max(B) if s is None else s
    with mpmath.workdps(digits):
        return mpmath.fsum(m * B[m] / (mpmath.sqrt(mpmath.mpf(q) ** m) - 1) for m in range(1, s + 1)) / g


@dataclass
class FiniteLevelEstimate:
    level: str
    g: int
    beta_hat: dict[int, Fraction] = field(default_factory=dict)
    H_hat: mpmath.mpf | None = None
    delta_hat: dict[str, mpmath.mpf] = field(default_factory=dict)
    d_hat: Fraction | None = None
    tsfasman: mpmath.mpf | None = None


def finite_estimates(level: str, q: int, g: int, B: Mapping[int, int] | None = None,
                     h: int | None = None, A: Sequence[int] | None = None,
                     next_genus: int | None = None, mu_grid: Sequence = (),
                     s: int | None = None, digits: int = DIGITS) -> FiniteLevelEstimate:
    """Estimators at one level; those lacking inputs are left empty."""
    if g < 1:
        raise AsymError("estimates need genus >= 1")
    est = FiniteLevelEstimate(level, g)
    with mpmath.workdps(digits):
        if B:
            est.beta_hat = {m: Fraction(b, g) for m, b in sorted(B.items())}
            est.tsfasman = tsfasman_sum(B, q, g, s, digits)
        if h is not None:
            est.H_hat = mpmath.log(h) / g
        if A is not None:
            for mu in mu_grid:
                i = nearest_index(mu, g)
                if i < len(A):
                    est.delta_hat[str(mu)] = mpmath.log(A[i]) / g
        if next_genus:
            est.d_hat = Fraction(g, next_genus)
    return est


def genus_ratios(genera: Sequence[tuple[str, int]]) -> list[tuple[str, str, Fraction]]:
    """g_k / g_(k+1) for consecutive entries with positive next genus."""
    return [(a, b, Fraction(ga, gb)) for (a, ga), (b, gb) in zip(genera, genera[1:]) if gb > 0]
