"""Recursive Artin-Schreier towers and exact enumeration of their solution chains.

A tower is generated by one main step ``z^Q + z = x^e`` followed by the ratio
rule ``x_new = z / x_old``, plus optional intermediate (sublevel) equations
solved in terms of the current ratio variable.  Level ``(k, s)`` is reached by
``k - 1`` main steps from the rational field ``F(x_1)`` and then, when
``s >= 1``, the ``s``-th sublevel equation in ``x_k``.
"""

from __future__ import annotations

import json
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator

import numpy as np

from .gf import (
    EnumerationCapError,
    FieldDescriptor,
    FieldElement,
    additive_map,
    build_field,
    solve_additive,
    vector_field,
)

DEFAULT_CAP = 2**24
CAP_ENV = "TOWERLAB_CAP"
BLOCK = 2**18


def default_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(eval_int(raw))
    except ValueError as exc:
        raise ValueError(f"{CAP_ENV}={raw!r} is not an integer") from exc


def eval_int(text: str) -> int:
    """Parse ``12345``, ``2**24`` or ``2^24``."""
    text = text.strip().replace("^", "**")
    m = re.fullmatch(r"(\d+)(?:\*\*(\d+))?", text)
    if not m:
        raise ValueError(f"not an integer: {text!r}")
    base, exp = int(m.group(1)), m.group(2)
    return base ** int(exp) if exp else base


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            r = 0
            while q % p == 0:
                q //= p
                r += 1
            if q != 1:
                raise ValueError("q must be a prime power")
            return p, r
    raise ValueError("q must be a prime power")


@dataclass(frozen=True)
class StepDef:
    """One Artin-Schreier equation ``z^Q + z = x^rhs_exponent``."""

    Q: int
    rhs_exponent: int
    ratio_rule: bool

    @property
    def rhs(self) -> str:
        return f"x^{self.rhs_exponent}"

    def to_dict(self) -> dict:
        return {"Q": self.Q, "rhs": self.rhs, "ratio_rule": self.ratio_rule}


@dataclass(frozen=True, order=True)
class LevelId:
    k: int
    s: int = 0

    def __str__(self) -> str:
        return f"{self.k},{self.s}"

    @classmethod
    def parse(cls, text: str) -> LevelId:
        parts = [t.strip() for t in str(text).split(",")]
        if len(parts) == 1:
            parts.append("0")
        if len(parts) != 2 or not all(re.fullmatch(r"-?\d+", t) for t in parts):
            raise ValueError(f"level must look like 'k,s', got {text!r}")
        return cls(int(parts[0]), int(parts[1]))


@dataclass(frozen=True)
class TowerSpec:
    name: str
    p: int
    q: int
    constant_field_degree: int
    steps: tuple[StepDef, ...]
    densification: int = 0

    def __post_init__(self):
        p, r = _prime_power(self.q)
        if p != self.p:
            raise ValueError(f"q = {self.q} is not a power of p = {self.p}")
        if (2 * r) % self.constant_field_degree:
            raise ValueError("constant field must be a subfield of F_{q^2}")
        if len(self.steps) != 1 + self.densification:
            raise ValueError("need one main step plus one equation per sublevel")
        if not self.steps[0].ratio_rule or any(st.ratio_rule for st in self.steps[1:]):
            raise ValueError("only the main step carries the ratio rule")
        for st in self.steps:
            _prime_power_of(st.Q, self.p)
            if st.rhs_exponent < 1:
                raise ValueError("rhs exponent must be positive")

    @property
    def r(self) -> int:
        return _prime_power(self.q)[1]

    @property
    def constant_field_order(self) -> int:
        return self.p**self.constant_field_degree

    @property
    def split_degree(self) -> int:
        """Degree of F_{q^2} over the constant field."""
        return 2 * self.r // self.constant_field_degree

    def validate_level(self, level: LevelId) -> None:
        if level.k < 1 or not 0 <= level.s <= self.densification:
            raise ValueError(f"level ({level}) invalid for {self.name}: need k >= 1, 0 <= s <= {self.densification}")

    def levels(self, k_max: int) -> list[LevelId]:
        return [LevelId(k, s) for k in range(1, k_max + 1) for s in range(self.densification + 1)]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "p": self.p,
            "q": self.q,
            "constant_field_degree": self.constant_field_degree,
            "steps": [st.to_dict() for st in self.steps],
            "densification": self.densification,
        }

    def with_constant_field(self, degree: int, name: str) -> TowerSpec:
        return TowerSpec(name, self.p, self.q, degree, self.steps, self.densification)


def _prime_power_of(Q: int, p: int) -> None:
    r = Q
    while r > 1 and r % p == 0:
        r //= p
    if Q < p or r != 1:
        raise ValueError(f"Q = {Q} is not a power of p = {p}")


_RHS = re.compile(r"x\^\(?\s*(q\s*\+\s*1|\d+)\s*\)?")


def spec_from_dict(data: dict) -> TowerSpec:
    q = int(data["q"])
    steps = []
    for st in data["steps"]:
        m = _RHS.fullmatch(str(st["rhs"]).replace(" ", ""))
        if not m:
            raise ValueError(f"unsupported rhs {st['rhs']!r}; expected x^N or x^(q+1)")
        e = q + 1 if m.group(1).startswith("q") else int(m.group(1))
        Q = st["Q"]
        Q = q if Q == "q" else int(Q)
        steps.append(StepDef(Q, e, bool(st["ratio_rule"])))
    return TowerSpec(
        name=str(data["name"]),
        p=int(data["p"]),
        q=q,
        constant_field_degree=int(data["constant_field_degree"]),
        steps=tuple(steps),
        densification=int(data.get("densification", 0)),
    )


def load_spec(path: str | Path) -> TowerSpec:
    return spec_from_dict(json.loads(Path(path).read_text()))


def dump_spec(spec: TowerSpec, path: str | Path) -> None:
    Path(path).write_text(json.dumps(spec.to_dict(), indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------- builtin towers

def _main_step(q: int) -> StepDef:
    return StepDef(q, q + 1, True)


def t0(q: int) -> TowerSpec:
    """Garcia-Stichtenoth tower over F_{q^2}, no intermediate steps."""
    p, r = _prime_power(q)
    return TowerSpec("T0", p, q, 2 * r, (_main_step(q),), 0)


def _densified_steps(q: int) -> tuple[tuple[StepDef, ...], int]:
    p, r = _prime_power(q)
    if r == 1:
        return (_main_step(q),), 0
    if q == 4:
        # t = z^2 + z satisfies t^2 + t = z^4 + z = x^5
        return (_main_step(4), StepDef(2, 5, False)), 1
    raise ValueError(f"no explicit intermediate equations known for q = {q}; use T0 or q in {{p, 4}}")


def t1(q: int) -> TowerSpec:
    p, r = _prime_power(q)
    steps, dens = _densified_steps(q)
    return TowerSpec("T1", p, q, 2 * r, steps, dens)


def t2(q: int) -> TowerSpec:
    """T1 with constant field F_q."""
    p, r = _prime_power(q)
    return t1(q).with_constant_field(r, "T2")


def t3(q: int = 4) -> TowerSpec:
    """T1(4) descended to F_2."""
    if q != 4:
        raise ValueError("T3 exists only for p = 2, q = 4")
    return t1(4).with_constant_field(1, "T3")


BUILTINS = {"T0": t0, "T1": t1, "T2": t2, "T3": t3}


def builtin_specs(q: int) -> dict[str, TowerSpec]:
    out = {"T0": t0(q), "T1": t1(q), "T2": t2(q)}
    out["T3"] = t3()
    return out


def resolve_spec(name: str, q: int | None = None) -> TowerSpec:
    """A builtin name (T0..T3) or the path of a JSON spec file."""
    key = name.upper()
    if key in BUILTINS:
        if key == "T3":
            return t3(4 if q is None else q)
        if q is None:
            raise ValueError(f"{key} needs --q")
        return BUILTINS[key](q)
    path = Path(name)
    if not path.exists():
        raise ValueError(f"unknown tower {name!r} (not a builtin and no such file)")
    return load_spec(path)


# ---------------------------------------------------------------- counting

@dataclass(frozen=True)
class PointCountRecord:
    level: LevelId
    m: int
    n_affine: int
    infinity_correction: int | None = None
    field_order: int = 0

    @property
    def n_total(self) -> int | None:
        if self.infinity_correction is None:
            return None
        return self.n_affine + self.infinity_correction

    def to_dict(self) -> dict:
        return {
            "level": str(self.level),
            "m": self.m,
            "field_order": self.field_order,
            "n_affine": self.n_affine,
            "infinity_correction": self.infinity_correction,
            "n_total": self.n_total,
        }


def _plan(spec: TowerSpec, level: LevelId) -> list[tuple[StepDef, bool]]:
    """Equations to solve in order, each flagged with whether a ratio follows it."""
    spec.validate_level(level)
    k, s = level.k, level.s
    plan = [(spec.steps[0], i < k - 1 or s >= 1) for i in range(1, k)]
    if s:
        plan.append((spec.steps[s], False))
    return plan


def infinity_correction(spec: TowerSpec, level: LevelId) -> int | None:
    """Points above x_1 = infinity, when certified.

    Certified for the rational level and for levels given by a single equation
    z^Q + z = x_1^e with p not dividing e: one totally ramified rational place.
    """
    plan = _plan(spec, level)
    if not plan:
        return 1
    if len(plan) == 1 and plan[0][0].rhs_exponent % spec.p:
        return 1
    return None


def level_field(spec: TowerSpec, m: int, cap: int | None = None,
                modulus: tuple[int, ...] | None = None) -> FieldDescriptor:
    if m < 1:
        raise ValueError("extension degree m must be >= 1")
    cap = default_cap() if cap is None else cap
    order = spec.constant_field_order**m
    if order > cap:
        raise EnumerationCapError(order, cap, f"F_{spec.constant_field_order}^{m}")
    return build_field(spec.p, spec.constant_field_degree * m, modulus)


def iter_chains(spec: TowerSpec, level: LevelId, fld: FieldDescriptor) -> Iterator[tuple[FieldElement, ...]]:
    """Depth-first enumeration of solution chains (x_1, z_2, ..., [t]) in index order."""
    plan = _plan(spec, level)

    def extend(x: FieldElement, idx: int, chain: tuple) -> Iterator[tuple]:
        step, ratio = plan[idx]
        for z in sorted(solve_additive(x ** step.rhs_exponent, step.Q), key=lambda a: a.index):
            if not ratio:
                yield chain + (z,)
            elif not x.is_zero():
                yield from extend(z / x, idx + 1, chain + (z,))

    for x1 in fld.elements():
        if plan:
            yield from extend(x1, 0, (x1,))
        else:
            yield (x1,)


def _count_vector(spec: TowerSpec, level: LevelId, fld: FieldDescriptor, workers: int = 1) -> int:
    plan = _plan(spec, level)
    N = fld.order
    if not plan:
        return N
    vf = vector_field(fld)
    states = np.arange(N, dtype=np.int64)
    weights = np.ones(N, dtype=np.int64)

    for step, ratio in plan:
        amap = additive_map(fld, step.Q)
        kernel = [k.index for k in amap.kernel]

        def block(lo: int, hi: int, step=step, ratio=ratio, amap=amap, kernel=kernel):
            x, w = states[lo:hi], weights[lo:hi]
            solvable, z0 = vf.solve_additive(amap, vf.power(x, step.rhs_exponent))
            if not ratio:
                return int(w[solvable].sum()) * len(kernel)
            keep = solvable & (x != 0)
            x, w, z0 = x[keep], w[keep], z0[keep]
            hist = np.zeros(N, dtype=np.float64)
            for kap in kernel:
                nxt = vf.div(vf.add(z0, kap), x)
                hist += np.bincount(nxt, weights=w, minlength=N)
            return hist

        bounds = [(lo, min(lo + BLOCK, len(states))) for lo in range(0, len(states), BLOCK)]
        if workers > 1 and len(bounds) > 1:
            with ThreadPoolExecutor(workers) as pool:
                parts = list(pool.map(lambda b: block(*b), bounds))
        else:
            parts = [block(*b) for b in bounds]
        if not ratio:
            return sum(parts)
        hist = np.sum(parts, axis=0) if parts else np.zeros(N)
        if hist.max(initial=0) >= 2**53:
            raise OverflowError("chain multiplicities exceed exact float range")
        states = np.flatnonzero(hist)
        weights = hist[states].astype(np.int64)
    raise AssertionError("plan always ends with a terminal step")  # pragma: no cover


def count_chains(spec: TowerSpec, level: LevelId, m: int, cap: int | None = None,
                 method: str = "vector", modulus: tuple[int, ...] | None = None,
                 workers: int = 1) -> PointCountRecord:
    """Exact number of affine solution chains of ``level`` over F_{Q0^m}.

    Chains whose ratio variables would need a division by zero are excluded;
    ``x_1 = 0`` chains count whenever no such division occurs.
    """
    fld = level_field(spec, m, cap, modulus)
    if method == "vector":
        n = _count_vector(spec, level, fld, workers)
    elif method == "reference":
        n = sum(1 for _ in iter_chains(spec, level, fld))
    else:
        raise ValueError(f"unknown counting method {method!r}")
    return PointCountRecord(level, m, n, infinity_correction(spec, level), fld.order)


# ---------------------------------------------------------------- closed-form bounds

def census_lower_bound(spec: TowerSpec, level: LevelId) -> int:
    """(q^2 - 1) q^(k-1) p^s: lower bound on the degree-one mass over F_{q^2}."""
    spec.validate_level(level)
    q, p = spec.q, spec.p
    return (q * q - 1) * q ** (level.k - 1) * p**level.s


def genus_bound(spec: TowerSpec, level: LevelId) -> Fraction:
    """(q^(k+1) + q^k) / p^(r-s) + 1."""
    spec.validate_level(level)
    q, k = spec.q, level.k
    return Fraction(q ** (k + 1) + q**k, spec.p ** (spec.r - level.s)) + 1


@dataclass(frozen=True)
class MassCheck:
    """Affine (and, when certified, total) count over F_{q^2} against the census bound."""

    level: LevelId
    bound: int
    affine: int
    total: int | None

    @property
    def holds(self) -> bool:
        return self.affine >= self.bound

    @property
    def margin(self) -> int:
        return self.affine - self.bound


def census_mass_check(spec: TowerSpec, level: LevelId, cap: int | None = None,
                      record: PointCountRecord | None = None) -> MassCheck:
    """Compare the point count over F_{q^2} with :func:`census_lower_bound`.

    The count over F_{q^2} equals sum_{d | m*} d B_d over the constant field
    (m* = split degree), and the affine count never exceeds it.
    """
    m = spec.split_degree
    if record is None or record.m != m or record.level != level:
        record = count_chains(spec, level, m, cap)
    return MassCheck(level, census_lower_bound(spec, level), record.n_affine, record.n_total)
