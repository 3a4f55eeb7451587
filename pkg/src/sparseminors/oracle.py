"""Brute-force verifiers kept independent of the main computation paths:
Groebner-basis certification by S-polynomial reduction, square-free
membership counting, a fraction-free determinant, and the principally
regular matrix check.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InvalidArgument, ResourceLimit
from .ideals import SquarefreeMonomialIdeal
from .polycore import Monomial, MonomialOrder, Polynomial, Rational, _norm, parse_rational

DEFAULT_PAIR_CAP = 10_000


def normal_form(p: Polynomial, gens: Sequence[Polynomial], order: MonomialOrder) -> Polynomial:
    """Fully reduced remainder of p modulo gens, always dividing by the first applicable generator."""
    if any(g.is_zero() for g in gens):
        raise InvalidArgument("generators must be nonzero")
    leads = [order.leading_term(g) for g in gens]
    rem: dict[Monomial, Rational] = {}
    work = dict(p.terms)
    while work:
        m = max(work, key=order.key)
        c = work[m]
        for g, (lm, lc) in zip(gens, leads):
            if lm.divides(m):
                q = m // lm
                f = _norm(Fraction(c) / lc)
                for gm, gc in g.terms.items():
                    key = gm * q
                    s = _norm(work.get(key, 0) - f * gc)
                    if s:
                        work[key] = s
                    else:
                        work.pop(key, None)
                break
        else:
            rem[m] = c
            del work[m]
    return Polynomial(rem)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    lf, cf = order.leading_term(f)
    lg, cg = order.leading_term(g)
    l = lf.lcm(lg)
    return f.mul_term(l // lf, Fraction(1) / cf) - g.mul_term(l // lg, Fraction(1) / cg)


@dataclass(frozen=True)
class SPairWitness:
    i: int
    j: int
    remainder: Polynomial

    def to_json(self) -> dict:
        return {"pair": [self.i, self.j], "remainder": str(self.remainder)}


def failing_s_pair(gens: Sequence[Polynomial], order: MonomialOrder,
                   pair_cap: int = DEFAULT_PAIR_CAP) -> SPairWitness | None:
    """First S-pair (in index order) whose S-polynomial does not reduce to zero."""
    gens = list(gens)
    npairs = len(gens) * (len(gens) - 1) // 2
    if npairs > pair_cap:
        raise ResourceLimit(f"{npairs} S-pairs exceed the cap of {pair_cap}")
    leads = [order.leading_term(g)[0] for g in gens]
    for i, j in itertools.combinations(range(len(gens)), 2):
        if leads[i].is_coprime(leads[j]):
            continue
        r = normal_form(s_polynomial(gens[i], gens[j], order), gens, order)
        if r:
            return SPairWitness(i, j, r)
    return None


def buchberger_check(gens: Sequence[Polynomial], order: MonomialOrder,
                     pair_cap: int = DEFAULT_PAIR_CAP) -> bool:
    """True iff gens is a Groebner basis of the ideal it generates under order."""
    return failing_s_pair(gens, order, pair_cap) is None


def sqfree_count(ideal: SquarefreeMonomialIdeal, d: int, num_vars: int) -> int:
    """Count square-free degree-d monomials in the ideal by listing them all."""
    support = sorted(ideal.support())
    if len(support) > num_vars:
        raise InvalidArgument("ideal has more variables than the universe")
    if d > num_vars:
        raise InvalidArgument(f"degree {d} exceeds the number of variables {num_vars}")
    universe = support + [None] * (num_vars - len(support))
    gens = ideal.generators
    count = 0
    for combo in itertools.combinations(range(num_vars), d):
        s = {universe[i] for i in combo}
        if any(g <= s for g in gens):
            count += 1
    return count


# -- exact linear algebra -------------------------------------------------------------


def bareiss_det(a: Sequence[Sequence[Rational]]) -> Rational:
    """Fraction-free Gaussian elimination; exact over the integers, also valid over Q."""
    m = [list(r) for r in a]
    n = len(m)
    if any(len(r) != n for r in m):
        raise InvalidArgument("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                # Exact for integer input; rational input can leave a remainder.
                if isinstance(num, int) and isinstance(prev, int) and num % prev == 0:
                    m[i][j] = num // prev
                else:
                    m[i][j] = _norm(Fraction(num) / prev)
            m[i][k] = 0
        prev = m[k][k]
    return _norm(sign * m[n - 1][n - 1])


@dataclass(frozen=True)
class RationalMatrix:
    entries: tuple[tuple[Rational, ...], ...]
    symmetric: bool = True

    def __post_init__(self):
        n = len(self.entries)
        if any(len(r) != n for r in self.entries):
            raise InvalidArgument("matrix must be square")
        object.__setattr__(self, "entries", tuple(tuple(_norm(Fraction(v)) for v in r) for r in self.entries))
        if self.symmetric and any(self.entries[i][j] != self.entries[j][i]
                                  for i in range(n) for j in range(i)):
            raise InvalidArgument("matrix flagged symmetric is not symmetric")

    @property
    def n(self) -> int:
        return len(self.entries)

    def principal(self, idx: Sequence[int]) -> list[list[Rational]]:
        return [[self.entries[r][c] for c in idx] for r in idx]

    def det(self) -> Rational:
        return bareiss_det(self.entries)

    def inverse(self) -> list[list[Rational]] | None:
        """Adjugate over determinant, every minor by fraction-free elimination; None if singular."""
        d = self.det()
        if d == 0:
            return None
        n = self.n
        inv = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = [[self.entries[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
                cof = bareiss_det(minor)
                inv[i][j] = _norm(Fraction((-1) ** (i + j) * cof) / d)
        return inv

    @classmethod
    def from_json(cls, text: str) -> "RationalMatrix":
        data = json.loads(text)
        n = data["n"]
        rows = tuple(tuple(parse_rational(str(v)) for v in r) for r in data["entries"])
        if len(rows) != n:
            raise InvalidArgument(f"expected {n} rows, got {len(rows)}")
        return cls(rows)

    def to_json(self) -> dict:
        return {"n": self.n, "entries": [[str(v) for v in r] for r in self.entries]}


@dataclass(frozen=True)
class PrincipalRegularityReport:
    principally_regular: bool
    condition_holds: bool | None  # None: the matrix is singular
    diagonal: bool

    @property
    def implication_holds(self) -> bool:
        """Principally regular together with the vanishing condition forces a diagonal matrix."""
        return not (self.principally_regular and self.condition_holds) or self.diagonal


def principally_regular_check(a: RationalMatrix) -> PrincipalRegularityReport:
    n = a.n
    pr = all(
        bareiss_det(a.principal(idx)) != 0
        for size in range(1, n + 1)
        for idx in itertools.combinations(range(n), size)
    )
    inv = a.inverse()
    if inv is None:
        cond = None
    else:
        cond = all(a.entries[i][j] * inv[i][j] == 0 for i, j in itertools.combinations(range(n), 2))
    diagonal = all(a.entries[i][j] == 0 for i in range(n) for j in range(n) if i != j)
    return PrincipalRegularityReport(pr, cond, diagonal)
