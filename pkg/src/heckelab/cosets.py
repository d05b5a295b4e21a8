"""Ground-truth coset computations for double-coset operators.

Left cosets of the double coset of diag(p^{a_1}, ..., p^{a_n}) are
represented by integer matrices in Hermite form: upper triangular, positive
diagonal, and each above-diagonal entry reduced modulo the diagonal entry
of its column.  Enumerating all Hermite forms with determinant p^{|a|} and
filtering by Smith normal form gives a complete, duplicate-free list, and
brute-force multiplication of two coset lists yields the structure
constants of the operator product by tallying Hermite forms of the pairwise
products.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from .partitions import Partition

Matrix = tuple[tuple[int, ...], ...]

DEFAULT_BUDGET = int(os.environ.get("HECKELAB_BUDGET", 10**6))


class CosetBudgetError(RuntimeError):
    """Raised when an enumeration would exceed the configured size budget."""


# -- integer normal forms ----------------------------------------------------


def matrix_det(m: Matrix) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = tuple(row[:j] + row[j + 1 :] for row in m[1:])
            total += (-1) ** j * m[0][j] * matrix_det(minor)
    return total


def hermite_normal_form(m: Matrix) -> Matrix:
    """Row-style Hermite form of a nonsingular integer matrix.

    Upper triangular with positive diagonal; entry (i, j) for i < j reduced
    into [0, h_jj).  Obtained by left multiplication with unimodular
    matrices only.
    """
    n = len(m)
    a = [list(row) for row in m]
    for col in range(n):
        for r in range(col + 1, n):
            # Euclidean steps: gcd of the column lands in the pivot slot
            while a[r][col]:
                q = a[col][col] // a[r][col]
                a[col] = [x - q * y for x, y in zip(a[col], a[r])]
                a[col], a[r] = a[r], a[col]
        if a[col][col] == 0:
            raise ValueError("singular matrix")
        if a[col][col] < 0:
            a[col] = [-x for x in a[col]]
    _reduce_above(a)
    return tuple(tuple(row) for row in a)


def _reduce_above(a: list[list[int]]) -> None:
    n = len(a)
    for j in range(n):
        d = a[j][j]
        for i in range(j):
            q = a[i][j] // d
            if q:
                for k in range(j, n):
                    a[i][k] -= q * a[j][k]


def hermite_reduce_upper(m: Matrix) -> Matrix:
    """Hermite form of an already upper-triangular matrix with positive diagonal."""
    a = [list(row) for row in m]
    _reduce_above(a)
    return tuple(tuple(row) for row in a)


def elementary_divisors(m: Matrix) -> tuple[int, ...]:
    """Diagonal of the Smith normal form, each entry dividing the next."""
    a = [list(row) for row in m]
    n = len(a)
    divisors = []
    for top in range(n):
        while True:
            # move the smallest nonzero entry of the submatrix to the pivot slot
            best = None
            for r in range(top, n):
                for c in range(top, n):
                    if a[r][c] and (
                        best is None or abs(a[r][c]) < abs(a[best[0]][best[1]])
                    ):
                        best = (r, c)
            if best is None:
                raise ValueError("singular matrix")
            bi, bj = best
            a[top], a[bi] = a[bi], a[top]
            for row in a:
                row[top], row[bj] = row[bj], row[top]
            d = a[top][top]
            dirty = False
            for r in range(top + 1, n):
                q = a[r][top] // d
                if q:
                    a[r] = [x - q * y for x, y in zip(a[r], a[top])]
                if a[r][top]:
                    dirty = True
            for c in range(top + 1, n):
                q = a[top][c] // d
                if q:
                    for row in a:
                        row[c] -= q * row[top]
                if a[top][c]:
                    dirty = True
            if dirty:
                continue
            # pivot must divide every remaining entry; if not, mix that row in
            bad_row = None
            for r in range(top + 1, n):
                if any(x % d for x in a[r][top + 1 :]):
                    bad_row = r
                    break
            if bad_row is None:
                break
            a[top] = [x + y for x, y in zip(a[top], a[bad_row])]
        divisors.append(abs(a[top][top]))
    return tuple(divisors)


def determinantal_divisors(m: Matrix) -> tuple[int, ...]:
    """Greatest common divisors of the j-by-j minors, via the Smith form."""
    divs = elementary_divisors(m)
    out = []
    acc = 1
    for d in divs:
        acc *= d
        out.append(acc)
    return tuple(out)


def determinantal_divisors_bruteforce(m: Matrix) -> tuple[int, ...]:
    """Direct gcd over all j-by-j minors; cross-check for small n."""
    from math import gcd

    n = len(m)
    out = []
    for size in range(1, n + 1):
        g = 0
        for rows in combinations(range(n), size):
            for cols in combinations(range(n), size):
                sub = tuple(tuple(m[r][c] for c in cols) for r in rows)
                g = gcd(g, matrix_det(sub))
        if g == 0:
            raise ValueError("singular matrix")
        out.append(g)
    return tuple(out)


# -- coset enumeration ---------------------------------------------------------


@dataclass(frozen=True)
class CosetList:
    a: Partition
    p: int
    reps: tuple[Matrix, ...]

    @property
    def degree(self) -> int:
        return len(self.reps)


def _diagonal_types(n: int, weight: int):
    """All exponent vectors b with sum(b) = weight for the Hermite diagonals."""

    def rec(prefix, remaining, slots):
        if slots == 1:
            yield prefix + (remaining,)
            return
        for x in range(remaining + 1):
            yield from rec(prefix + (x,), remaining - x, slots - 1)

    yield from rec((), weight, n)


def _candidate_count(n: int, weight: int, p: int) -> int:
    total = 0
    for b in _diagonal_types(n, weight):
        c = 1
        for j, e in enumerate(b):
            c *= p ** (e * j)
        total += c
    return total


@lru_cache(maxsize=None)
def _decompose_weight(n: int, weight: int, p: int, budget: int):
    """Group all Hermite forms of determinant p^weight by elementary divisors."""
    predicted = _candidate_count(n, weight, p)
    if predicted > budget:
        raise CosetBudgetError(
            f"coset enumeration needs {predicted} candidates (budget {budget})"
        )
    groups: dict[tuple[int, ...], list[Matrix]] = {}
    for b in _diagonal_types(n, weight):
        diag = [p**e for e in b]
        ranges = []
        for j in range(n):
            for _ in range(j):
                ranges.append(range(diag[j]))
        for offs in product(*ranges):
            mat = [[0] * n for _ in range(n)]
            idx = 0
            for j in range(n):
                mat[j][j] = diag[j]
                for i in range(j):
                    mat[i][j] = offs[idx]
                    idx += 1
            mt = tuple(tuple(row) for row in mat)
            groups.setdefault(elementary_divisors(mt), []).append(mt)
    return {k: tuple(v) for k, v in groups.items()}


def _divisors_for(a: Partition, p: int) -> tuple[int, ...]:
    return tuple(p**e for e in sorted(a))


def coset_decomposition(a: Partition, p: int, budget: int | None = None) -> CosetList:
    """Complete list of Hermite-form left-coset representatives for a at p."""
    a = Partition(a)
    budget = DEFAULT_BUDGET if budget is None else budget
    groups = _decompose_weight(a.n, a.weight, p, budget)
    reps = groups.get(_divisors_for(a, p), ())
    return CosetList(a=a, p=p, reps=reps)


# -- brute-force multiplication ------------------------------------------------


def _mul_upper(x: Matrix, y: Matrix, n: int) -> Matrix:
    """Product of two upper-triangular matrices (result upper triangular)."""
    return tuple(
        tuple(
            sum(x[i][k] * y[k][j] for k in range(i, j + 1)) if j >= i else 0
            for j in range(n)
        )
        for i in range(n)
    )


def oracle_multiply(
    a: Partition, b: Partition, p: int, budget: int | None = None
) -> dict[Partition, int]:
    """Structure constants of the product of two double-coset operators.

    Every pairwise product of left-coset representatives is put into Hermite
    form and tallied; grouping the tallies by Smith form gives one class per
    double coset, and the tally — checked to be constant across the left
    cosets of each class — is the multiplicity of that double coset.
    """
    a, b = Partition(a), Partition(b)
    assert a.n == b.n
    n = a.n
    budget = DEFAULT_BUDGET if budget is None else budget
    ca = coset_decomposition(a, p, budget)
    cb = coset_decomposition(b, p, budget)
    if ca.degree * cb.degree > budget:
        raise CosetBudgetError(
            f"{ca.degree * cb.degree} pairwise products exceed budget {budget}"
        )
    tally: dict[Matrix, int] = {}
    for x in ca.reps:
        for y in cb.reps:
            h = hermite_reduce_upper(_mul_upper(x, y, n))
            tally[h] = tally.get(h, 0) + 1
    by_class: dict[tuple[int, ...], list[int]] = {}
    for h, count in tally.items():
        by_class.setdefault(elementary_divisors(h), []).append(count)
    out: dict[Partition, int] = {}
    for divs, counts in by_class.items():
        assert len(set(counts)) == 1, f"tally not constant on class {divs}: {counts}"
        exps = []
        for d in divs:
            e = 0
            while d % p == 0:
                d //= p
                e += 1
            assert d == 1
            exps.append(e)
        out[Partition(exps)] = counts[0]
    return out
