"""Partitions with a fixed number of parts, Kostka numbers, and contingency-table counts.

A partition here is a non-increasing tuple of n non-negative integers
(trailing zeros allowed, so the rank n is part of the data).  The module
also builds the two matrices attached to the set of weight-n partitions:
the contingency-count matrix D, whose (a', a) entry counts non-negative
integer matrices with row sums a' and column sums a, and the Kostka
matrix A with D = A^T A.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache


class Partition(tuple):
    """Non-increasing tuple of non-negative integers.

    Inputs are sorted into canonical non-increasing order on construction;
    negative parts are rejected.
    """

    def __new__(cls, parts):
        parts = tuple(sorted((int(x) for x in parts), reverse=True))
        if parts and parts[-1] < 0:
            raise ValueError(f"negative part in {parts}")
        return super().__new__(cls, parts)

    @property
    def n(self) -> int:
        return len(self)

    @property
    def weight(self) -> int:
        return sum(self)

    def v_weight(self) -> int:
        """Position-weighted sum a_1 + 2*a_2 + ... + n*a_n."""
        return sum(j * a for j, a in enumerate(self, start=1))

    def __repr__(self):
        return f"Partition{tuple(self)}"


def enumerate_partitions(n: int, total: int) -> list[Partition]:
    """All non-increasing n-tuples of non-negative integers summing to total.

    Returned in ascending lexicographic order (compare first differing
    coordinate).
    """
    if n < 1:
        raise ValueError("rank must be >= 1")
    if total < 0:
        raise ValueError("total must be >= 0")
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], remaining: int, cap: int, slots: int):
        if slots == 0:
            if remaining == 0:
                out.append(prefix)
            return
        # first part is at least ceil(remaining/slots), at most min(cap, remaining)
        lo = -(-remaining // slots)
        for first in range(lo, min(cap, remaining) + 1):
            rec(prefix + (first,), remaining - first, first, slots - 1)

    rec((), total, total, n)
    return [Partition(p) for p in sorted(out)]


def count_partitions(total: int, max_parts: int) -> int:
    """Number of partitions of total into at most max_parts parts (direct recursion)."""

    @lru_cache(maxsize=None)
    def rec(t: int, largest: int, slots: int) -> int:
        if t == 0:
            return 1
        if slots == 0:
            return 0
        return sum(rec(t - k, k, slots - 1) for k in range(1, min(largest, t) + 1))

    return rec(total, total, max_parts)


def dominance_leq(a, b) -> bool:
    """True iff a is dominated by b: equal weights and all partial sums of a <= those of b.

    Both arguments are taken in non-increasing order.
    """
    if sum(a) != sum(b):
        return False
    sa = sb = 0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa > sb:
            return False
    return True


@lru_cache(maxsize=None)
def kostka_number(shape: Partition, content: Partition) -> int:
    """Number of semistandard Young tableaux of the given shape and content.

    Zero when the content is not dominated by the shape.  Raises on a
    weight mismatch.  Computed by peeling the cells holding the largest
    entry, which form a horizontal strip, and recursing.
    """
    shape = Partition(shape)
    content = Partition(content)
    if shape.weight != content.weight:
        raise ValueError("shape and content must have equal weight")
    return _kostka(tuple(x for x in shape if x), tuple(x for x in content if x))


@lru_cache(maxsize=None)
def _kostka(shape: tuple[int, ...], content: tuple[int, ...]) -> int:
    if not content:
        return 1 if not shape else 0
    if not dominance_leq(_pad(content, len(shape)), _pad(shape, len(content))):
        return 0
    last = content[-1]
    rest = content[:-1]
    total = 0
    for smaller in _horizontal_strips(shape, last):
        total += _kostka(smaller, rest)
    return total


def _pad(t: tuple[int, ...], n: int) -> tuple[int, ...]:
    return t + (0,) * (n - len(t)) if len(t) < n else t


def _horizontal_strips(shape: tuple[int, ...], size: int):
    """Shapes obtained from shape by removing a horizontal strip of the given size."""
    rows = len(shape)

    def rec(i: int, remaining: int, prefix: tuple[int, ...]):
        if i == rows:
            if remaining == 0:
                yield tuple(x for x in prefix if x)
            return
        below = shape[i + 1] if i + 1 < rows else 0
        # new row length must stay >= next original row (strip condition)
        hi = min(shape[i], (prefix[-1] if prefix else shape[i]))
        lo = below
        for new_len in range(hi, lo - 1, -1):
            removed = shape[i] - new_len
            if removed <= remaining:
                yield from rec(i + 1, remaining - removed, prefix + (new_len,))

    yield from rec(0, size, ())


@lru_cache(maxsize=None)
def contingency_count(rows: Partition, cols: Partition) -> int:
    """Number of non-negative integer matrices with the given row and column sums."""
    rows = Partition(rows)
    cols = Partition(cols)
    if rows.weight != cols.weight:
        raise ValueError("row and column sums must have equal weight")
    return _contingency(tuple(rows), tuple(cols))


@lru_cache(maxsize=None)
def _contingency(rows: tuple[int, ...], cols: tuple[int, ...]) -> int:
    if not rows:
        return 1 if all(c == 0 for c in cols) else 0
    r = rows[0]
    total = 0
    for row in _bounded_compositions(r, cols):
        reduced = tuple(sorted((c - x for c, x in zip(cols, row)), reverse=True))
        total += _contingency(rows[1:], reduced)
    return total


def _bounded_compositions(total: int, bounds: tuple[int, ...]):
    """Compositions of total into len(bounds) parts with part i <= bounds[i]."""

    def rec(i: int, remaining: int, prefix: tuple[int, ...]):
        if i == len(bounds):
            if remaining == 0:
                yield prefix
            return
        if remaining > sum(bounds[i:]):
            return
        for x in range(min(bounds[i], remaining) + 1):
            yield from rec(i + 1, remaining - x, prefix + (x,))

    yield from rec(0, total, ())


def weight_partitions(n: int) -> list[Partition]:
    """The weight-n partitions with n parts, ascending lex (index set of D and A)."""
    return enumerate_partitions(n, n)


def contingency_matrix(n: int) -> list[list[int]]:
    """Matrix D over the weight-n partitions in ascending lex order."""
    pi = weight_partitions(n)
    return [[contingency_count(a, b) for b in pi] for a in pi]


def kostka_matrix(n: int) -> list[list[int]]:
    """Kostka matrix A over the weight-n partitions, rows = shapes, cols = contents."""
    pi = weight_partitions(n)
    return [[kostka_number(a, b) for b in pi] for a in pi]


def det_integer_matrix(m: list[list[int]]) -> int:
    """Exact determinant via fraction-free elimination."""
    a = [[Fraction(x) for x in row] for row in m]
    size = len(a)
    det = Fraction(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if a[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, size):
            f = a[r][col] * inv
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    assert det.denominator == 1
    return det.numerator


@dataclass
class CholeskyReport:
    """Outcome of checking D = A^T A over the weight-n partitions."""

    n: int
    size: int
    product_matches: bool
    det_is_one: bool
    diagonal_ones: bool
    support_in_dominance: bool
    lex_triangular_descending: bool
    success: bool = field(init=False)

    def __post_init__(self):
        self.success = (
            self.product_matches
            and self.det_is_one
            and self.diagonal_ones
            and self.support_in_dominance
        )


def verify_cholesky(n: int) -> CholeskyReport:
    """Check that D = A^T A exactly, det D = 1, and A is uni-triangular.

    Triangularity of A is certified order-free: K(a, b) != 0 only when b is
    dominated by a, with K(a, a) = 1.  Listing partitions in descending lex
    order then exhibits A as an upper uni-triangular matrix, which is also
    recorded.
    """
    pi = weight_partitions(n)
    d = contingency_matrix(n)
    a = kostka_matrix(n)
    size = len(pi)
    prod_ok = all(
        d[i][j] == sum(a[k][i] * a[k][j] for k in range(size))
        for i in range(size)
        for j in range(size)
    )
    diag_ok = all(a[i][i] == 1 for i in range(size))
    dom_ok = all(
        a[i][j] == 0
        for i in range(size)
        for j in range(size)
        if not dominance_leq(pi[j], pi[i])
    )
    # in descending lex order, nonzero entries sit on or above the diagonal
    lex_ok = all(
        a[i][j] == 0 for i in range(size) for j in range(size) if pi[j] > pi[i]
    )
    return CholeskyReport(
        n=n,
        size=size,
        product_matches=prod_ok,
        det_is_one=det_integer_matrix(d) == 1,
        diagonal_ones=diag_ok,
        support_in_dominance=dom_ok,
        lex_triangular_descending=lex_ok,
    )
