"""Dense linear algebra over the prime field F_p (small matrices, Python ints)."""

from __future__ import annotations


def rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Row-reduce ``rows`` mod p.

    Returns ``(R, E, pivots)`` with ``R = E @ A`` in reduced row echelon form,
    ``E`` invertible and ``pivots`` the pivot column of each nonzero row of R.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    R = [[v % p for v in row] for row in rows]
    E = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if R[i][c]), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        E[r], E[piv] = E[piv], E[r]
        inv = pow(R[r][c], -1, p)
        R[r] = [v * inv % p for v in R[r]]
        E[r] = [v * inv % p for v in E[r]]
        for i in range(nrows):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [(a - f * b) % p for a, b in zip(R[i], R[r])]
                E[i] = [(a - f * b) % p for a, b in zip(E[i], E[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return R, E, pivots


def nullspace(R: list[list[int]], pivots: list[int], ncols: int, p: int) -> list[list[int]]:
    """Basis of ``{v : A v = 0}`` read off an RREF matrix."""
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = -R[i][f] % p
        basis.append(v)
    return basis


def matvec(M: list[list[int]], v: list[int], p: int) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) % p for row in M]


def solve(rows: list[list[int]], b: list[int], p: int) -> list[int] | None:
    """One solution of ``A x = b`` mod p, or None when the system is inconsistent."""
    R, E, pivots = rref(rows, p)
    d = matvec(E, b, p)
    rank = len(pivots)
    if any(d[rank:]):
        return None
    ncols = len(rows[0])
    x = [0] * ncols
    for i, c in enumerate(pivots):
        x[c] = d[i]
    return x
