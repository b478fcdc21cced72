from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from curves import POSITIVE_GENUS, curve
from towerlab.bounds import (
    bounds_report,
    corollary_check,
    l2_proof_constant,
    l2_ratio_proof_bound,
    l3_applicable,
    lmd_bounds,
    ratio_table,
)


# ---------------------------------------------------------------- examples

def test_hermitian_bounds():
    b = lmd_bounds(4, 1, 9)
    assert b.L1 == Fraction(9, 10)
    assert b.L2 == 0 and b.L2_exact
    assert b.L3 is None and not b.l3_applicable


def test_genus2_over_f16_bounds():
    b = lmd_bounds(16, 2, 33)
    assert b.L1 == Fraction(3600, 51)
    assert b.L2 == 216
    assert b.L3 is None


def test_l3_example():
    assert lmd_bounds(4, 3, 1).L3 == Fraction(189, 19)


def test_l3_needs_a_rational_place():
    assert not l3_applicable(4, 3, 0)
    assert lmd_bounds(4, 3, 0).L3 is None


def test_non_square_q_gives_inexact_l2():
    b = lmd_bounds(2, 3, 3)
    assert not b.L2_exact
    expected = (mpmath.sqrt(2) - 1) ** 2 * mpmath.mpf(3) / 3 * 4
    assert abs(b.L2 - expected) < mpmath.mpf("1e-45")


def test_genus_zero_refused():
    with pytest.raises(ValueError):
        lmd_bounds(4, 0, 5)
    with pytest.raises(ValueError):
        corollary_check(1, 2, 0)


def test_corollary_examples():
    assert corollary_check(625, 16, 2)
    assert corollary_check(9, 4, 1)
    assert not corollary_check(256, 16, 2)


def test_ratio_table_examples():
    rows = ratio_table([bounds_report(16, 2, 33, 625, "genus2/F16"), bounds_report(4, 1, 9, 9, "hermitian/F4")])
    assert [r.label for r in rows] == ["hermitian/F4", "genus2/F16"]
    herm, g2 = rows
    assert herm.h_over_L1 == 10
    assert herm.h_over_L2 is None and herm.l2_at_least_2 is None
    assert g2.h_over_L2 == Fraction(625, 216) and g2.l2_at_least_2
    assert g2.trend in ("up", "down", "flat") and herm.trend == ""
    with pytest.raises(ValueError):
        ratio_table([])


# ---------------------------------------------------------------- properties

@pytest.mark.parametrize("name", POSITIVE_GENUS)
def test_class_number_above_bounds_on_computed_curves(name):
    an = curve(name)
    rep = an.bounds()
    assert an.h >= rep.bounds.L1
    if rep.bounds.L3 is not None:
        assert an.h >= rep.bounds.L3
    assert rep.above_all_bounds


@pytest.mark.parametrize("name", POSITIVE_GENUS)
def test_l2_ratio_where_the_proof_bound_exceeds_two(name):
    an = curve(name)
    rep = an.bounds()
    if 16 * an.g**2 >= 16 * an.q:  # g >= 4 sqrt(q)
        assert rep.l2_at_least_2
    assert l2_ratio_proof_bound(an.q, an.g) > 0


def test_proof_constant_below_four_tenths():
    worst = max(l2_proof_constant(q, 30) for q in range(2, 10**4 + 1))
    assert worst < mpmath.mpf("0.4")


@given(st.integers(2, 500), st.integers(1, 40))
def test_l1_below_q_pow_g_over_g_plus_one(q, g):
    assert lmd_bounds(q, g, 0).L1 < Fraction(q**g, g + 1)


@given(st.integers(2, 64), st.integers(1, 12), st.integers(0, 200))
def test_bounds_are_exact_rationals_when_q_square(q, g, b1):
    b = lmd_bounds(q * q, g, b1)
    assert isinstance(b.L1, Fraction) and isinstance(b.L2, Fraction) and b.L2_exact
    assert (b.L3 is not None) == (4 * g * g > q * q and b1 >= 1)
