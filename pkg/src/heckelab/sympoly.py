"""Exact symmetric Laurent polynomials in n variables.

A SymPoly stores one coefficient per S_n-orbit of exponent vectors, keyed
by the orbit's non-increasing representative; coefficients are Fractions.
The module supplies the monomial symmetric and Schur bases, exact
multiplication, and the alternating-sum symmetrizer

    sum over sigma of  sigma( x^a * prod_{i<j} (x_i - t x_j) / (x_i - x_j) ),

evaluated as an exact polynomial identity: the numerator is expanded as an
alternating polynomial and divided by the Vandermonde factor by factor with
a zero-remainder assertion at every step.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

from .partitions import Partition, enumerate_partitions, kostka_number


@lru_cache(maxsize=None)
def _orbit(key: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Distinct permutations of an exponent vector."""
    return tuple(sorted(set(permutations(key))))


def _perm_sign(perm: tuple[int, ...]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class SymPoly:
    """Symmetric Laurent polynomial with exact rational coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[tuple[int, ...], Fraction] | None = None):
        self.n = n
        self.terms: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for key, coeff in terms.items():
                if coeff:
                    canon = tuple(sorted(key, reverse=True))
                    assert canon == tuple(key), f"non-canonical orbit key {key}"
                    self.terms[canon] = Fraction(coeff)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "SymPoly":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "SymPoly":
        return cls(n, {(0,) * n: Fraction(1)})

    @classmethod
    def from_expanded(cls, n: int, dense: dict[tuple[int, ...], Fraction]) -> "SymPoly":
        """Collapse a dense (monomial -> coeff) dict of a symmetric polynomial.

        Reads the coefficient at each orbit's sorted representative and
        asserts constancy across the orbit.
        """
        out: dict[tuple[int, ...], Fraction] = {}
        for key, coeff in dense.items():
            canon = tuple(sorted(key, reverse=True))
            if canon in out:
                if out[canon] != coeff:
                    raise ArithmeticError("dense dict is not symmetric")
            elif coeff:
                out[canon] = Fraction(coeff)
        poly = cls(n)
        poly.terms = out
        return poly

    # -- ring operations ---------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, SymPoly) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "SymPoly") -> "SymPoly":
        assert self.n == other.n
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            acc = out.get(key, Fraction(0)) + coeff
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        p = SymPoly(self.n)
        p.terms = out
        return p

    def __neg__(self) -> "SymPoly":
        p = SymPoly(self.n)
        p.terms = {k: -c for k, c in self.terms.items()}
        return p

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + (-other)

    def scale(self, c) -> "SymPoly":
        c = Fraction(c)
        p = SymPoly(self.n)
        if c:
            p.terms = {k: coeff * c for k, coeff in self.terms.items()}
        return p

    def __mul__(self, other: "SymPoly") -> "SymPoly":
        assert self.n == other.n
        dense: dict[tuple[int, ...], Fraction] = {}
        right = [(key, coeff) for key, coeff in other.terms.items()]
        for key_a, ca in self.terms.items():
            for mono_a in _orbit(key_a):
                for key_b, cb in right:
                    c = ca * cb
                    for mono_b in _orbit(key_b):
                        e = tuple(x + y for x, y in zip(mono_a, mono_b))
                        if e == tuple(sorted(e, reverse=True)):
                            dense[e] = dense.get(e, Fraction(0)) + c
        out = {k: c for k, c in dense.items() if c}
        p = SymPoly(self.n)
        p.terms = out
        return p

    # -- views -------------------------------------------------------------

    def coefficient(self, exponents) -> Fraction:
        """Coefficient of the monomial with the given exponent vector."""
        return self.terms.get(tuple(sorted(exponents, reverse=True)), Fraction(0))

    def expanded(self) -> dict[tuple[int, ...], Fraction]:
        """Dense monomial -> coefficient dict over every orbit element."""
        dense = {}
        for key, coeff in self.terms.items():
            for mono in _orbit(key):
                dense[mono] = coeff
        return dense

    def homogeneous_degree(self) -> int | None:
        degs = {sum(k) for k in self.terms}
        if not self.terms:
            return 0
        return degs.pop() if len(degs) == 1 else None

    def evaluate(self, point):
        """Evaluate at a point (exact for int/Fraction inputs, numeric otherwise)."""
        assert len(point) == self.n
        point = [Fraction(x) if isinstance(x, int) else x for x in point]
        exact = all(isinstance(x, Fraction) for x in point)
        total = Fraction(0) if exact else 0
        for key, coeff in self.terms.items():
            for mono in _orbit(key):
                term = coeff if exact else complex(coeff)
                for x, e in zip(point, mono):
                    term = term * x**e
                total += term
        return total

    def support_partitions(self) -> list[tuple[int, ...]]:
        return sorted(self.terms)

    def __repr__(self):
        if not self.terms:
            return "SymPoly(0)"
        bits = [f"{c}*m{k}" for k, c in sorted(self.terms.items(), reverse=True)]
        return "SymPoly(" + " + ".join(bits) + ")"


def monomial_symmetric(a: Partition) -> SymPoly:
    """Sum of x^b over the distinct permutations b of a."""
    a = Partition(a)
    return SymPoly(a.n, {tuple(a): Fraction(1)})


# -- dense (non-symmetric) helpers used by the alternant machinery ----------


def _dense_mul_monomial(dense, mono, coeff):
    out = {}
    for key, c in dense.items():
        e = tuple(x + y for x, y in zip(key, mono))
        out[e] = c * coeff
    return out


def _dense_add_into(acc, dense):
    for key, c in dense.items():
        s = acc.get(key, Fraction(0)) + c
        if s:
            acc[key] = s
        else:
            acc.pop(key, None)


def _product_factors(n: int, t: Fraction) -> dict[tuple[int, ...], Fraction]:
    """Expansion of prod_{i<j} (x_i - t*x_j) as a dense dict."""
    pairs = list(combinations(range(n), 2))
    acc = {(0,) * n: Fraction(1)}
    for i, j in pairs:
        out: dict[tuple[int, ...], Fraction] = {}
        for key, c in acc.items():
            ei = list(key)
            ei[i] += 1
            _dense_add_into(out, {tuple(ei): c})
            ej = list(key)
            ej[j] += 1
            _dense_add_into(out, {tuple(ej): -t * c})
        acc = out
    return acc


def _divide_linear(dense, i: int, j: int):
    """Exact division of a dense polynomial by (x_i - x_j).

    Treats the polynomial as univariate in x_i with coefficients in the
    remaining variables.  Raises ArithmeticError on a nonzero remainder.
    """
    # group by x_i degree
    by_deg: dict[int, dict[tuple[int, ...], Fraction]] = {}
    for key, c in dense.items():
        d = key[i]
        stripped = key[:i] + (0,) + key[i + 1 :]
        by_deg.setdefault(d, {})[stripped] = c
    if not by_deg:
        return {}
    top = max(by_deg)
    quotient_levels: dict[int, dict[tuple[int, ...], Fraction]] = {}
    carry: dict[tuple[int, ...], Fraction] = {}
    # synthetic division: q_{k-1} = c_k + x_j * q_k, descending k
    for k in range(top, 0, -1):
        level = dict(by_deg.get(k, {}))
        _dense_add_into(level, carry)
        quotient_levels[k - 1] = level
        shift = [0] * len(next(iter(dense)))
        shift[j] = 1
        carry = _dense_mul_monomial(level, tuple(shift), Fraction(1))
    # matching the x_i-free terms: c_0 = -x_j q_0 + r, so r = c_0 + x_j q_0
    remainder = dict(by_deg.get(0, {}))
    _dense_add_into(remainder, carry)
    if any(remainder.values()):
        raise ArithmeticError("nonzero remainder dividing by Vandermonde factor")
    out: dict[tuple[int, ...], Fraction] = {}
    for k, level in quotient_levels.items():
        for key, c in level.items():
            e = key[:i] + (k,) + key[i + 1 :]
            if c:
                out[e] = c
    return out


def symmetrize_alternant(a: Partition, t) -> SymPoly:
    """The S_n sum of sigma(x^a * prod_{i<j} (x_i - t x_j)/(x_i - x_j)).

    Computed exactly: the alternating numerator
    sum_sigma sgn(sigma) sigma(x^a prod (x_i - t x_j)) is expanded and then
    divided by prod_{i<j} (x_i - x_j) one factor at a time.
    """
    a = Partition(a)
    n = a.n
    t = Fraction(t)
    base = _product_factors(n, t)
    numerator: dict[tuple[int, ...], Fraction] = {}
    for perm in permutations(range(n)):
        sign = _perm_sign(perm)
        # apply sigma to x^a * prod: permute variable indices of every monomial
        shift = [0] * n
        for pos, var in enumerate(perm):
            shift[var] += a[pos]
        for key, c in base.items():
            e = list(shift)
            for pos, var in enumerate(perm):
                e[var] += key[pos]
            _dense_add_into(numerator, {tuple(e): sign * c})
    quotient = numerator
    for i, j in combinations(range(n), 2):
        quotient = _divide_linear(quotient, i, j)
    return SymPoly.from_expanded(n, quotient)


@lru_cache(maxsize=None)
def schur(a: Partition) -> SymPoly:
    """Schur polynomial via the bialternant formula.

    The numerator det(x_i^{a_j + n - j}) is the alternating sum over
    permutations of x^{a + delta}; dividing by the Vandermonde gives s_a.
    """
    a = Partition(a)
    n = a.n
    staircase = tuple(a[k] + (n - 1 - k) for k in range(n))
    numerator: dict[tuple[int, ...], Fraction] = {}
    for perm in permutations(range(n)):
        sign = _perm_sign(perm)
        e = [0] * n
        for pos, var in enumerate(perm):
            e[var] = staircase[pos]
        _dense_add_into(numerator, {tuple(e): Fraction(sign)})
    quotient = numerator
    for i, j in combinations(range(n), 2):
        quotient = _divide_linear(quotient, i, j)
    return SymPoly.from_expanded(n, quotient)


def schur_via_tableaux(a: Partition) -> SymPoly:
    """Schur polynomial as sum of Kostka numbers times monomial symmetric functions."""
    a = Partition(a)
    terms: dict[tuple[int, ...], Fraction] = {}
    for b in enumerate_partitions(a.n, a.weight):
        k = kostka_number(a, b)
        if k:
            terms[tuple(b)] = Fraction(k)
    return SymPoly(a.n, terms)


def denominators_are_powers_of(poly: SymPoly, p: int) -> bool:
    """True iff every coefficient lies in Z[1/p]."""
    for coeff in poly.terms.values():
        den = coeff.denominator
        while den % p == 0:
            den //= p
        if den != 1:
            return False
    return True
