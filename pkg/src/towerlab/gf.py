"""Explicit finite fields F_{p^n} = F_p[x]/(f).

Elements are coefficient tuples ``(c0, c1, ..., c_{n-1})`` in the power basis of
the modulus.  The modulus chosen by :func:`build_field` is the smallest monic
irreducible polynomial of degree n when coefficient tuples are read as base-p
integers ``c0 + c1 p + ... + c_{n-1} p^{n-1}``; the same integer (the element
*index*) fixes the enumeration order of field elements.

Besides scalar arithmetic the module offers :class:`VectorField`, a log/exp
table view of a field used for vectorised enumeration, and
:class:`AdditiveMap`, the F_p-linear map z -> z^Q + z with its solver.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np
from sympy import factorint, isprime

from . import _modp

MAX_DEGREE = 64
# enumeration-based operations refuse fields larger than this
ENUMERATION_LIMIT = 2**40
# log/exp tables are int64 arrays of this many entries at most
TABLE_LIMIT = 2**27


class FieldError(ValueError):
    """Invalid field construction or mixed-field arithmetic."""


class EnumerationCapError(FieldError):
    """A field required for enumeration is larger than the allowed cap."""

    def __init__(self, required: int, cap: int, what: str = "field"):
        self.required = required
        self.cap = cap
        super().__init__(f"{what} of size {required} exceeds enumeration cap {cap}")


# ---------------------------------------------------------------- polynomials
# Polynomials over F_p are lists of ints, lowest degree first, no trailing zeros.

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([c % p for c in out])


def _pmod(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    a = [c % p for c in a]
    df = len(f) - 1
    inv = pow(f[-1], -1, p)
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] * inv % p
        if c:
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    return _trim(a[:df] if len(a) > df else a)


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _ppowmod(a: Sequence[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        e >>= 1
        if e:
            base = _pmod(_pmul(base, base, p), f, p)
    return result


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial given low-to-high."""
    f = _trim([c % p for c in modulus])
    n = len(f) - 1
    if n < 1 or f[-1] != 1:
        return False
    if n == 1:
        return True
    x = [0, 1]

    def frob_iter(k: int) -> list[int]:
        h = x
        for _ in range(k):
            h = _ppowmod(h, p, f, p)
        return h

    if _psub(frob_iter(n), x, p):
        return False
    for ell in factorint(n):
        g = _pgcd(f, _psub(frob_iter(n // ell), x, p), p)
        if len(g) > 1:
            return False
    return True


def _index_to_digits(i: int, p: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        i, r = divmod(i, p)
        out.append(r)
    return tuple(out)


def irreducible_polys(p: int, n: int) -> Iterator[tuple[int, ...]]:
    """Monic irreducibles of degree n over F_p in increasing index order."""
    for i in range(p**n):
        cand = _index_to_digits(i, p, n) + (1,)
        if is_irreducible(cand, p):
            yield cand


def poly_str(coeffs: Sequence[int], var: str = "x") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else var if i == 1 else f"{var}^{i}"
        if not mono:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(terms) or "0"


# ---------------------------------------------------------------- fields

@dataclass(frozen=True)
class FieldDescriptor:
    p: int
    n: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not isprime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if len(self.modulus) != self.n + 1 or self.modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree n")
        if not is_irreducible(self.modulus, self.p):
            raise FieldError(f"modulus {poly_str(self.modulus)} is reducible over F_{self.p}")

    @property
    def order(self) -> int:
        return self.p**self.n

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.n})[{poly_str(self.modulus)}]"

    def element(self, coeffs: Iterable[int]) -> FieldElement:
        c = [int(v) % self.p for v in coeffs]
        if len(c) > self.n:
            c = _pmod(c, self.modulus, self.p)
        return FieldElement(self, tuple(c + [0] * (self.n - len(c))))

    def from_index(self, i: int) -> FieldElement:
        if not 0 <= i < self.order:
            raise FieldError(f"index {i} outside field of order {self.order}")
        return FieldElement(self, _index_to_digits(i, self.p, self.n))

    def scalar(self, c: int) -> FieldElement:
        return self.element([c])

    @property
    def zero(self) -> FieldElement:
        return self.element([])

    @property
    def one(self) -> FieldElement:
        return self.element([1])

    @property
    def gen(self) -> FieldElement:
        """The class of x modulo the modulus."""
        return self.element([0, 1])

    def elements(self) -> Iterator[FieldElement]:
        if self.order > ENUMERATION_LIMIT:
            raise EnumerationCapError(self.order, ENUMERATION_LIMIT)
        for i in range(self.order):
            yield self.from_index(i)

    # coefficient-level helpers shared by FieldElement and the linear algebra
    def _mul(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        c = _pmod(_pmul(_trim(list(a)), _trim(list(b)), self.p), self.modulus, self.p)
        return tuple(c + [0] * (self.n - len(c)))


@functools.lru_cache(maxsize=None)
def build_field(p: int, n: int, modulus: tuple[int, ...] | None = None,
                max_degree: int = MAX_DEGREE) -> FieldDescriptor:
    """The field F_{p^n}; deterministic modulus unless one is given."""
    if not isinstance(p, int) or not isprime(p):
        raise FieldError(f"{p} is not prime")
    if not 1 <= n <= max_degree:
        raise FieldError(f"extension degree {n} outside 1..{max_degree}")
    if modulus is None:
        modulus = next(irreducible_polys(p, n))
    return FieldDescriptor(p, n, tuple(int(c) for c in modulus))


@dataclass(frozen=True)
class FieldElement:
    owner: FieldDescriptor
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.owner.n:
            raise FieldError("coefficient vector has wrong length")

    def __repr__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coeffs) + ")"

    __str__ = __repr__

    @property
    def index(self) -> int:
        p = self.owner.p
        i = 0
        for c in reversed(self.coeffs):
            i = i * p + c
        return i

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _other(self, other) -> FieldElement:
        if isinstance(other, int):
            return self.owner.scalar(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.owner != self.owner:
            raise FieldError(f"cannot combine elements of {self.owner!r} and {other.owner!r}")
        return other

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        p = self.owner.p
        return FieldElement(self.owner, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.owner.p
        return FieldElement(self.owner, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.owner, self.owner._mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        if self.is_zero():
            return self.owner.one if e == 0 else self
        e %= self.owner.order - 1
        result = self.owner.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self ** (self.owner.order - 2)

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other


def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Dispatch ``op`` in {add, sub, mul, div}; owners must match."""
    if a.owner != b.owner:
        raise FieldError("mixed owners")
    ops = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}
    if op not in ops:
        raise FieldError(f"unknown operation {op!r}")
    return ops[op](b)


def frobenius(a: FieldElement, e: int = 1) -> FieldElement:
    """a -> a^(p^e)."""
    k = a.owner
    return a ** (k.p ** (e % k.n))


def multiplicative_order(a: FieldElement) -> int:
    if a.is_zero():
        raise FieldError("zero has no multiplicative order")
    order = a.owner.order - 1
    for ell, mult in factorint(order).items():
        for _ in range(mult):
            if (a ** (order // ell)) == a.owner.one:
                order //= ell
            else:
                break
    return order


@functools.lru_cache(maxsize=None)
def primitive_element(field: FieldDescriptor) -> FieldElement:
    """Smallest-index generator of the multiplicative group."""
    N = field.order - 1
    primes = list(factorint(N)) if N > 1 else []
    for i in range(1, field.order):
        a = field.from_index(i)
        if all(a ** (N // ell) != field.one for ell in primes):
            return a
    raise FieldError("no primitive element found")  # pragma: no cover


# ---------------------------------------------------------------- linear maps

def coords(a: FieldElement) -> list[int]:
    return list(a.coeffs)


def linear_matrix(field: FieldDescriptor, fn) -> list[list[int]]:
    """Matrix (rows = output coordinates) of an F_p-linear map on ``field``."""
    cols = [coords(fn(field.element([0] * j + [1]))) for j in range(field.n)]
    return [[cols[j][i] for j in range(field.n)] for i in range(field.n)]


def mul_matrix(c: FieldElement) -> list[list[int]]:
    return linear_matrix(c.owner, lambda b: c * b)


class AdditiveMap:
    """The F_p-linear map z -> z^Q + z on a field, solved by Gaussian elimination."""

    def __init__(self, field: FieldDescriptor, Q: int):
        e = _p_exponent(Q, field.p)
        self.field = field
        self.Q = Q
        self.matrix = linear_matrix(field, lambda z: frobenius(z, e) + z)
        R, E, pivots = _modp.rref(self.matrix, field.p)
        self._E = E
        self._pivots = pivots
        self.rank = len(pivots)
        self.kernel_basis = [field.element(v) for v in _modp.nullspace(R, pivots, field.n, field.p)]

    @functools.cached_property
    def kernel(self) -> tuple[FieldElement, ...]:
        """All kernel elements in index order."""
        elems = [self.field.zero]
        for b in self.kernel_basis:
            elems = [v + b * t for v in elems for t in range(self.field.p)]
        return tuple(sorted(elems, key=lambda a: a.index))

    def __call__(self, z: FieldElement) -> FieldElement:
        return frobenius(z, _p_exponent(self.Q, self.field.p)) + z

    def particular(self, c: FieldElement) -> FieldElement | None:
        p = self.field.p
        d = _modp.matvec(self._E, coords(c), p)
        if any(d[self.rank:]):
            return None
        z = [0] * self.field.n
        for i, col in enumerate(self._pivots):
            z[col] = d[i]
        return self.field.element(z)

    def solve(self, c: FieldElement) -> frozenset[FieldElement]:
        if c.owner != self.field:
            raise FieldError("right-hand side lives in a different field")
        z0 = self.particular(c)
        if z0 is None:
            return frozenset()
        return frozenset(z0 + k for k in self.kernel)

    def solver_matrix(self) -> np.ndarray:
        """Stacked matrix [P; Y]: P c is a preimage whenever Y c == 0."""
        n, p = self.field.n, self.field.p
        P = np.zeros((n, n), dtype=np.int64)
        for i, col in enumerate(self._pivots):
            P[col] = self._E[i]
        Y = np.array(self._E[self.rank:], dtype=np.int64).reshape(-1, n)
        return np.vstack([P, Y]) % p


def _p_exponent(Q: int, p: int) -> int:
    e, r = 0, Q
    while r > 1 and r % p == 0:
        r //= p
        e += 1
    if r != 1 or e < 1:
        raise FieldError(f"Q = {Q} is not a positive power of p = {p}")
    return e


@functools.lru_cache(maxsize=256)
def additive_map(field: FieldDescriptor, Q: int) -> AdditiveMap:
    return AdditiveMap(field, Q)


def solve_additive(c: FieldElement, Q: int) -> frozenset[FieldElement]:
    """All z in the field of ``c`` with z^Q + z = c."""
    return additive_map(c.owner, Q).solve(c)


# ---------------------------------------------------------------- subfields

@dataclass(frozen=True)
class SubfieldEmbedding:
    source: FieldDescriptor
    target: FieldDescriptor
    image: FieldElement

    def __call__(self, a: FieldElement) -> FieldElement:
        if a.owner != self.source:
            raise FieldError("element is not in the embedding's source field")
        acc = self.target.zero
        for c in reversed(a.coeffs):
            acc = acc * self.image + c
        return acc

    @functools.cached_property
    def _basis_rows(self) -> list[list[int]]:
        powers = [self.target.one]
        for _ in range(1, self.source.n):
            powers.append(powers[-1] * self.image)
        return [[powers[j].coeffs[i] for j in range(self.source.n)] for i in range(self.target.n)]

    def preimage(self, b: FieldElement) -> FieldElement:
        if b.owner != self.target:
            raise FieldError("element is not in the embedding's target field")
        sol = _modp.solve(self._basis_rows, coords(b), self.target.p)
        if sol is None:
            raise FieldError(f"{b} is not in the image of {self.source!r}")
        return self.source.element(sol)

    def contains(self, b: FieldElement) -> bool:
        return _modp.solve(self._basis_rows, coords(b), self.target.p) is not None


def _eval_poly(coeffs: Sequence[int], a: FieldElement) -> FieldElement:
    acc = a.owner.zero
    for c in reversed(coeffs):
        acc = acc * a + c
    return acc


@functools.lru_cache(maxsize=None)
def embedding(source: FieldDescriptor, target: FieldDescriptor) -> SubfieldEmbedding:
    """Embed F_{p^m} into F_{p^n} by sending x to the smallest-index root of its modulus."""
    if source.p != target.p or target.n % source.n:
        raise FieldError(f"{source!r} does not embed into {target!r}")
    if target.order <= 2**12 or target.order > TABLE_LIMIT:
        if target.order > ENUMERATION_LIMIT:
            raise EnumerationCapError(target.order, ENUMERATION_LIMIT)
        for i in range(target.order):
            a = target.from_index(i)
            if _eval_poly(source.modulus, a).is_zero():
                return SubfieldEmbedding(source, target, a)
    else:
        vf = vector_field(target)
        xs = np.arange(target.order, dtype=np.int64)
        acc = np.zeros_like(xs)
        for c in reversed(source.modulus):
            acc = vf.add_scalar(vf.mul(acc, xs), c)
        roots = np.flatnonzero(acc == 0)
        if len(roots):
            return SubfieldEmbedding(source, target, target.from_index(int(roots[0])))
    raise FieldError("subfield modulus has no root")  # pragma: no cover


def trace_to_subfield(a: FieldElement, sub: SubfieldEmbedding) -> FieldElement:
    """Relative trace Tr_{target/source}(a), returned as an element of the source field."""
    if a.owner != sub.target:
        raise FieldError("element does not live in the embedding's target")
    m, n = sub.source.n, sub.target.n
    t = a.owner.zero
    for j in range(n // m):
        t = t + frobenius(a, m * j)
    return sub.preimage(t)


# ---------------------------------------------------------------- vectorised view

class VectorField:
    """Log/exp tables for a field, operating on numpy arrays of element indices."""

    CHUNK = 2**18

    def __init__(self, field: FieldDescriptor):
        if field.order > TABLE_LIMIT:
            raise EnumerationCapError(field.order, TABLE_LIMIT, "table field")
        self.field = field
        self.p, self.n, self.order = field.p, field.n, field.order
        self._powers = np.array([self.p**i for i in range(self.n)], dtype=np.int64)
        self._shifts = np.arange(self.n, dtype=np.int64)
        g = primitive_element(field)
        exp = np.array([1], dtype=np.int64)
        N1 = self.order - 1
        while len(exp) < N1:
            take = min(len(exp), N1 - len(exp))
            shifted = self.apply_linear(np.array(mul_matrix(g ** len(exp))), exp[:take])
            exp = np.concatenate([exp, shifted])
        self.exp = exp
        log = np.full(self.order, -1, dtype=np.int64)
        log[exp] = np.arange(N1, dtype=np.int64)
        self.log = log

    def digits(self, vals: np.ndarray) -> np.ndarray:
        vals = np.asarray(vals, dtype=np.int64)
        if self.p == 2:
            return (vals[:, None] >> self._shifts) & 1
        return (vals[:, None] // self._powers) % self.p

    def encode(self, digits: np.ndarray) -> np.ndarray:
        return digits.astype(np.int64) @ self._powers

    def apply_linear(self, M: np.ndarray, vals: np.ndarray) -> np.ndarray:
        """Apply a square F_p matrix (rows = output coordinates) to each element."""
        if self.p == 2:
            return self._apply_binary(M, vals)
        return self.encode(self.apply_rows(M, vals))

    def _apply_binary(self, M: np.ndarray, vals: np.ndarray) -> np.ndarray:
        # XOR of per-byte lookup tables; columns of M are images of basis bits
        M = np.asarray(M, dtype=np.int64) % 2
        col_images = M.T @ (np.int64(1) << np.arange(M.shape[0], dtype=np.int64))
        vals = np.asarray(vals, dtype=np.int64)
        out = np.zeros_like(vals)
        byte = np.arange(256, dtype=np.int64)
        for b0 in range(0, self.n, 8):
            table = np.zeros(256, dtype=np.int64)
            for bit in range(min(8, self.n - b0)):
                table ^= np.where((byte >> bit) & 1, col_images[b0 + bit], 0)
            out ^= table[(vals >> b0) & 255]
        return out

    def apply_rows(self, M: np.ndarray, vals: np.ndarray) -> np.ndarray:
        """Coordinates of ``M @ coords(v)`` mod p for each v; one row per element."""
        Mt = np.asarray(M, dtype=np.float64).T
        out = np.empty((len(vals), Mt.shape[1]), dtype=np.int64)
        for start in range(0, len(vals), self.CHUNK):
            block = self.digits(vals[start:start + self.CHUNK]).astype(np.float64) @ Mt
            out[start:start + self.CHUNK] = np.rint(block).astype(np.int64) % self.p
        return out

    def solve_additive(self, amap: AdditiveMap, c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorised z^Q + z = c: returns (solvable mask, one preimage per entry)."""
        S = amap.solver_matrix()
        n = self.n
        if self.p == 2:
            z0 = self._apply_binary(S[:n], c)
            Y = np.zeros((n, n), dtype=np.int64)
            Y[: S.shape[0] - n] = S[n:]
            return self._apply_binary(Y, c) == 0, z0
        rows = self.apply_rows(S, c)
        return ~np.any(rows[:, n:], axis=1), self.encode(rows[:, :n])

    def add(self, a: np.ndarray, b: np.ndarray | int) -> np.ndarray:
        if self.p == 2:
            return np.bitwise_xor(a, b)
        b = np.broadcast_to(np.asarray(b, dtype=np.int64), np.shape(a))
        return self.encode((self.digits(a) + self.digits(np.ravel(b))) % self.p)

    def add_scalar(self, a: np.ndarray, c: int) -> np.ndarray:
        return self.add(a, self.field.scalar(c).index)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp[(self.log[a] + self.log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def div(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if np.any(b == 0):
            raise ZeroDivisionError("division by zero in vectorised field")
        out = self.exp[(self.log[a] - self.log[b]) % (self.order - 1)]
        return np.where(a == 0, 0, out)

    def power(self, a: np.ndarray, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        out = self.exp[(self.log[a] * (e % (self.order - 1))) % (self.order - 1)]
        return np.where(a == 0, 0, out)


@functools.lru_cache(maxsize=4)
def vector_field(field: FieldDescriptor) -> VectorField:
    return VectorField(field)
