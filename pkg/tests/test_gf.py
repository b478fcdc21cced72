import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from towerlab.gf import (
    EnumerationCapError,
    FieldError,
    additive_map,
    arith,
    build_field,
    embedding,
    frobenius,
    irreducible_polys,
    is_irreducible,
    multiplicative_order,
    primitive_element,
    solve_additive,
    trace_to_subfield,
    vector_field,
)

# (p, n) pairs covered by the property suites
SMALL_FIELDS = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 2), (7, 1), (2, 6), (2, 8)]


def _brute_irreducible(f, p):
    # no monic factor of degree 1..n/2, by exhaustive division
    n = len(f) - 1
    for d in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            g = list(low) + [1]
            r = list(f)
            for i in range(n - d, -1, -1):
                c = r[i + d]
                for j in range(d + 1):
                    r[i + j] = (r[i + j] - c * g[j]) % p
            if not any(r[:d]):
                return False
    return True


# ---------------------------------------------------------------- construction

def test_prime_field_modulus_is_x():
    assert build_field(2, 1).modulus == (0, 1)


def test_quadratic_modulus_over_f2():
    assert build_field(2, 2).modulus == (1, 1, 1)


def test_quartic_modulus_over_f2():
    assert build_field(2, 4).modulus == (1, 1, 0, 0, 1)


def test_smallest_quartic_agrees_with_brute_force():
    quartics = [c + (1,) for c in (tuple((i >> k) & 1 for k in range(4)) for i in range(16))]
    irreducible = [f for f in quartics if _brute_irreducible(f, 2)]
    assert len(irreducible) == 3
    by_index = min(irreducible, key=lambda f: sum(c << i for i, c in enumerate(f)))
    assert build_field(2, 4).modulus == by_index


@pytest.mark.parametrize("p,n", [(2, 5), (3, 3), (5, 2), (2, 6)])
def test_rabin_test_matches_trial_division(p, n):
    for low in itertools.product(range(p), repeat=n):
        f = tuple(low) + (1,)
        assert is_irreducible(f, p) == _brute_irreducible(f, p), f


def test_build_field_is_deterministic():
    assert build_field(3, 4).modulus == build_field(3, 4).modulus


@pytest.mark.parametrize("p,n", [(4, 1), (1, 2), (2, 0), (2, 65)])
def test_build_field_rejects_bad_parameters(p, n):
    with pytest.raises(FieldError):
        build_field(p, n)


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        build_field(2, 2, (1, 0, 1))


def test_element_repr_is_coefficient_tuple():
    F = build_field(2, 4)
    assert repr(F.gen) == "(0,1,0,0)"
    assert repr(F) == "GF(2^4)[x^4+x+1]"


def test_irreducible_polys_yield_distinct_moduli():
    mods = list(itertools.islice(irreducible_polys(2, 4), 3))
    assert len(set(mods)) == 3


# ---------------------------------------------------------------- arithmetic examples

def test_omega_times_omega_plus_one():
    F4 = build_field(2, 2)
    w = F4.gen
    assert w * (w + 1) == F4.one


def test_x_times_x_cubed_in_f16():
    F16 = build_field(2, 4)
    x = F16.gen
    assert x * x**3 == x + 1


def test_arith_dispatch_and_errors():
    F = build_field(3, 2)
    a, b = F.from_index(4), F.from_index(7)
    assert arith(a, b, "add") == a + b
    assert arith(a, b, "sub") == a - b
    assert arith(a, b, "mul") == a * b
    assert arith(a, b, "div") * b == a
    with pytest.raises(ZeroDivisionError):
        arith(a, F.zero, "div")
    with pytest.raises(FieldError):
        arith(a, build_field(3, 1).one, "add")


def test_frobenius_examples():
    F2, F4 = build_field(2, 1), build_field(2, 2)
    assert frobenius(F2.one, 1) == F2.one
    w = F4.gen
    assert frobenius(w, 1) == w + 1 == w * w


def test_trace_examples():
    F4, F16 = build_field(2, 2), build_field(2, 4)
    emb = embedding(build_field(2, 1), F4)
    assert trace_to_subfield(F4.one, emb).is_zero()
    assert trace_to_subfield(F4.gen, emb) == build_field(2, 1).one
    e42 = embedding(build_field(2, 2), F16)
    e162 = embedding(build_field(2, 1), F16)
    for a in F4.elements():
        assert trace_to_subfield(e42(a), e162).is_zero()


def test_solve_additive_examples():
    F2, F4 = build_field(2, 1), build_field(2, 2)
    assert solve_additive(F2.one, 2) == frozenset()
    w = F4.gen
    assert solve_additive(F4.one, 2) == {w, w + 1}
    assert solve_additive(F4.zero, 2) == {F4.zero, F4.one}


def test_multiplicative_group_order():
    for p, n in SMALL_FIELDS:
        F = build_field(p, n)
        assert multiplicative_order(primitive_element(F)) == F.order - 1


def test_enumeration_refuses_huge_fields():
    with pytest.raises(EnumerationCapError):
        next(build_field(2, 41).elements())


# ---------------------------------------------------------------- properties

field_and_triples = st.sampled_from(SMALL_FIELDS).flatmap(
    lambda pn: st.tuples(
        st.just(pn),
        st.lists(st.integers(0, pn[0] ** pn[1] - 1), min_size=3, max_size=3),
    )
)


@settings(max_examples=1500)
@given(field_and_triples)
def test_field_axioms(data):
    (p, n), idx = data
    F = build_field(p, n)
    a, b, c = (F.from_index(i) for i in idx)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a + F.zero == a and a * F.one == a
    assert a - a == F.zero
    if a:
        assert a * a.inverse() == F.one
        assert (b / a) * a == b


@pytest.mark.parametrize("p,n", [(2, 8), (3, 4), (2, 12), (5, 3), (2, 16)])
def test_frobenius_full_cycle_on_all_elements(p, n):
    F = build_field(p, n)
    if F.order <= 2**12:
        for a in F.elements():
            assert frobenius(a, n) == a
    # vectorised exhaustive check a^(p^n) = a for the larger fields
    vf = vector_field(F)
    xs = np.arange(F.order, dtype=np.int64)
    assert np.array_equal(vf.power(xs, F.order), xs)


@pytest.mark.parametrize("p,m,n", [(2, 2, 4), (2, 2, 8), (2, 3, 12), (2, 4, 12), (3, 2, 4), (5, 1, 2)])
def test_trace_transitivity(p, m, n):
    Fp, Fm, Fn = build_field(p, 1), build_field(p, m), build_field(p, n)
    e_mn, e_pm, e_pn = embedding(Fm, Fn), embedding(Fp, Fm), embedding(Fp, Fn)
    for a in Fn.elements():
        assert trace_to_subfield(trace_to_subfield(a, e_mn), e_pm) == trace_to_subfield(a, e_pn)


@pytest.mark.parametrize("p,n,Q", [(2, 4, 2), (2, 4, 4), (2, 6, 2), (2, 6, 4), (3, 2, 3), (3, 4, 9), (2, 12, 4), (5, 2, 5)])
def test_solve_additive_matches_brute_force(p, n, Q):
    F = build_field(p, n)
    image = {}
    for z in F.elements():
        image.setdefault((z**Q + z).index, set()).add(z)
    amap = additive_map(F, Q)
    step = max(1, F.order // 512)
    for i in range(0, F.order, step):
        c = F.from_index(i)
        got = solve_additive(c, Q)
        assert got == image.get(i, set())
        assert len(got) in (0, len(amap.kernel))


@pytest.mark.parametrize("p,n,Q", [(2, 8, 2), (2, 8, 4), (3, 4, 3)])
def test_vectorised_solver_agrees_with_scalar(p, n, Q):
    F = build_field(p, n)
    vf = vector_field(F)
    amap = additive_map(F, Q)
    cs = np.arange(F.order, dtype=np.int64)
    ok, z0 = vf.solve_additive(amap, cs)
    for i in range(F.order):
        sols = amap.solve(F.from_index(i))
        assert bool(ok[i]) == bool(sols)
        if sols:
            assert F.from_index(int(z0[i])) in sols


@pytest.mark.parametrize("p,m,n", [(2, 1, 4), (2, 2, 4), (2, 2, 6), (2, 3, 6), (3, 2, 4), (2, 4, 8)])
def test_embedding_roundtrip_and_homomorphism(p, m, n):
    Fm, Fn = build_field(p, m), build_field(p, n)
    emb = embedding(Fm, Fn)
    # the image of the generator is a root of the source modulus
    acc = Fn.zero
    for c in reversed(Fm.modulus):
        acc = acc * emb.image + c
    assert acc.is_zero()
    for a in Fm.elements():
        b = emb(a)
        assert emb.contains(b)
        assert emb.preimage(b) == a
        # image elements are fixed by the p^m Frobenius
        assert frobenius(b, m) == b
    assert emb(Fm.one) == Fn.one and emb(Fm.zero) == Fn.zero


@given(st.integers(0, 255), st.integers(0, 255))
def test_embedding_preserves_operations(i, j):
    Fm, Fn = build_field(2, 8), build_field(2, 16)
    emb = embedding(Fm, Fn)
    a, b = Fm.from_index(i), Fm.from_index(j)
    assert emb(a + b) == emb(a) + emb(b)
    assert emb(a * b) == emb(a) * emb(b)


@given(st.lists(st.integers(0, 2**10 - 1), min_size=2, max_size=50))
def test_vector_field_matches_scalar_arithmetic(idx):
    F = build_field(2, 10)
    vf = vector_field(F)
    a = np.array(idx, dtype=np.int64)
    b = a[::-1].copy()
    prod = vf.mul(a, b)
    summ = vf.add(a, b)
    for x, y, pr, sm in zip(a, b, prod, summ):
        ex, ey = F.from_index(int(x)), F.from_index(int(y))
        assert (ex * ey).index == pr
        assert (ex + ey).index == sm
