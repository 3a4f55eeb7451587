"""Exact sparse polynomials in the entries x_ij (i <= j) of a symmetric matrix.

Coefficients are Python ints or ``fractions.Fraction``; a Fraction with
denominator 1 is always stored as an int. Variables are ordered
x11, x22, ..., xnn, x12, ..., x1n, x23, ..., x(n-1)n and then t, for every n
at once, so polynomials built for different n mix freely.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence, Union

from .errors import InvalidArgument, RetryWithNewPrime

Rational = Union[int, Fraction]

DEFAULT_PRIME = 2**31 - 1


class Var(NamedTuple):
    """kind 0: diagonal x_ii, kind 1: off-diagonal x_ij (i < j), kind 2: t."""

    kind: int
    i: int
    j: int

    def __str__(self) -> str:
        if self.kind == 2:
            return "t"
        if self.i < 10 and self.j < 10:
            return f"x{self.i}{self.j}"
        return f"x{self.i}_{self.j}"

    @property
    def is_diagonal(self) -> bool:
        return self.kind == 0

    def key(self) -> str:
        """Serialization name: ``x_i_j`` or ``t``."""
        return "t" if self.kind == 2 else f"x_{self.i}_{self.j}"


def x(i: int, j: int) -> Var:
    if i > j:
        i, j = j, i
    if i < 1:
        raise InvalidArgument(f"variable indices are 1-based, got x({i},{j})")
    return Var(0 if i == j else 1, i, j)


T = Var(2, 0, 0)


def variables(n: int, with_t: bool = False) -> list[Var]:
    """All variables of the ring in the fixed order."""
    out = [x(i, i) for i in range(1, n + 1)]
    out += [x(i, j) for i, j in itertools.combinations(range(1, n + 1), 2)]
    if with_t:
        out.append(T)
    return out


def var_index(v: Var, n: int) -> int:
    """Dense index of v in ``variables(n, with_t=True)``."""
    if v.kind == 0:
        return v.i - 1
    if v.kind == 2:
        return n * (n + 1) // 2
    i, j = v.i, v.j
    return n + (i - 1) * n - (i - 1) * i // 2 + (j - i - 1)


def parse_var(name: str) -> Var:
    if name == "t":
        return T
    parts = name.split("_")
    if len(parts) != 3 or parts[0] != "x":
        raise InvalidArgument(f"bad variable name {name!r}")
    return x(int(parts[1]), int(parts[2]))


def _norm(c: Rational) -> Rational:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def parse_rational(s: str) -> Rational:
    return _norm(Fraction(s))


def format_rational(c: Rational) -> str:
    return str(c)


class Monomial:
    """Product of variables; stored as a sorted tuple of (Var, exponent) pairs."""

    __slots__ = ("items", "_hash")

    def __init__(self, items: Mapping[Var, int] | Iterable[tuple[Var, int]] = ()):
        pairs = items.items() if isinstance(items, Mapping) else items
        acc: dict[Var, int] = {}
        for v, e in pairs:
            if e < 0:
                raise InvalidArgument("monomial exponents must be non-negative")
            if e:
                acc[v] = acc.get(v, 0) + e
        self.items = tuple(sorted(acc.items()))
        self._hash = hash(self.items)

    @classmethod
    def _raw(cls, items: tuple[tuple[Var, int], ...]) -> "Monomial":
        m = object.__new__(cls)
        m.items = items
        m._hash = hash(items)
        return m

    @classmethod
    def of(cls, *vs: Var) -> "Monomial":
        return cls((v, 1) for v in vs)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self.items == other.items

    def __repr__(self) -> str:
        return f"Monomial({self})"

    def __str__(self) -> str:
        if not self.items:
            return "1"
        return "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in self.items)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.items)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.items)

    def exponent(self, v: Var) -> int:
        for w, e in self.items:
            if w == v:
                return e
        return 0

    def support(self) -> frozenset[Var]:
        return frozenset(v for v, _ in self.items)

    def as_dict(self) -> dict[Var, int]:
        return dict(self.items)

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not other.items:
            return self
        if not self.items:
            return other
        acc = dict(self.items)
        for v, e in other.items:
            acc[v] = acc.get(v, 0) + e
        return Monomial._raw(tuple(sorted(acc.items())))

    def divides(self, other: "Monomial") -> bool:
        od = dict(other.items)
        return all(od.get(v, 0) >= e for v, e in self.items)

    def __floordiv__(self, other: "Monomial") -> "Monomial":
        acc = dict(self.items)
        for v, e in other.items:
            r = acc.get(v, 0) - e
            if r < 0:
                raise InvalidArgument(f"{other} does not divide {self}")
            if r:
                acc[v] = r
            else:
                del acc[v]
        return Monomial._raw(tuple(sorted(acc.items())))

    def lcm(self, other: "Monomial") -> "Monomial":
        acc = dict(self.items)
        for v, e in other.items:
            if e > acc.get(v, 0):
                acc[v] = e
        return Monomial._raw(tuple(sorted(acc.items())))

    def is_coprime(self, other: "Monomial") -> bool:
        return not (self.support() & other.support())

    def to_json(self) -> dict[str, int]:
        return {v.key(): e for v, e in self.items}

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> "Monomial":
        return cls((parse_var(k), int(e)) for k, e in data.items())


ONE_MONO = Monomial()


class Polynomial:
    """Immutable sparse polynomial: a map from Monomial to nonzero rational."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Rational] | None = None):
        self.terms: dict[Monomial, Rational] = {}
        if terms:
            for m, c in terms.items():
                c = _norm(c)
                if c:
                    self.terms[m] = c

    @classmethod
    def _raw(cls, terms: dict[Monomial, Rational]) -> "Polynomial":
        p = object.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def constant(cls, c: Rational) -> "Polynomial":
        return cls({ONE_MONO: c})

    @classmethod
    def var(cls, v: Var) -> "Polynomial":
        return cls._raw({Monomial._raw(((v, 1),)): 1})

    @classmethod
    def monomial(cls, m: Monomial, c: Rational = 1) -> "Polynomial":
        return cls({m: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Rational]]:
        return iter(self.terms.items())

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = _norm(out.get(m, 0) + c)
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def scale(self, c: Rational) -> "Polynomial":
        c = _norm(c)
        if not c:
            return ZERO
        return Polynomial._raw({m: _norm(a * c) for m, a in self.terms.items()})

    def mul_term(self, m: Monomial, c: Rational) -> "Polynomial":
        return Polynomial._raw({k * m: _norm(a * c) for k, a in self.terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if len(other.terms) < len(self.terms):
            a, b = other, self
        else:
            a, b = self, other
        out: dict[Monomial, Rational] = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                m = m1 * m2
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw({m: _norm(c) for m, c in out.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    # -- inspection -------------------------------------------------------

    def variables(self) -> frozenset[Var]:
        return frozenset(v for m in self.terms for v, _ in m.items)

    def total_degree(self) -> int:
        if not self.terms:
            raise InvalidArgument("zero polynomial has no degree")
        return max(m.degree for m in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def single_term(self) -> tuple[Monomial, Rational]:
        if len(self.terms) != 1:
            raise InvalidArgument(f"{self} is not a single term")
        return next(iter(self.terms.items()))

    def is_divisible_by_var(self, v: Var) -> bool:
        return bool(self.terms) and all(m.exponent(v) > 0 for m in self.terms)

    # -- substitution / evaluation ---------------------------------------

    def subs_zero(self, vs: Iterable[Var]) -> "Polynomial":
        """Set every variable of vs to zero."""
        kill = frozenset(vs)
        if not kill:
            return self
        return Polynomial._raw(
            {m: c for m, c in self.terms.items() if not any(v in kill for v, _ in m.items)}
        )

    def subs_const(self, v: Var, value: Rational) -> "Polynomial":
        """Substitute the constant value for v (e.g. t := 1)."""
        out: dict[Monomial, Rational] = {}
        for m, c in self.terms.items():
            e = m.exponent(v)
            if e == 0:
                key, coeff = m, c
            else:
                if value == 0:
                    continue
                key = Monomial._raw(tuple(p for p in m.items if p[0] != v))
                coeff = c * value**e
            s = _norm(out.get(key, 0) + coeff)
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return Polynomial._raw(out)

    def evaluate_mod_p(self, assignment: Mapping[Var, int], prime: int = DEFAULT_PRIME) -> int:
        return evaluate_mod_p(self, assignment, prime)

    # -- display / serialization -----------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Rational]]:
        return sorted(self.terms.items(), key=lambda mc: (-mc[0].degree, mc[0].items))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            if m.items:
                body = str(m) if abs(c) == 1 else f"{abs(c)}*{m}"
            else:
                body = str(abs(c))
            parts.append(("-" if c < 0 else "+") + " " + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def to_json(self) -> list[dict]:
        return [
            {"coeff": format_rational(c), "monomial": m.to_json()} for m, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data: Sequence[Mapping]) -> "Polynomial":
        out = ZERO
        for term in data:
            out = out + cls.monomial(Monomial.from_json(term["monomial"]), parse_rational(term["coeff"]))
        return out


ZERO = Polynomial()
ONE = Polynomial.constant(1)


def var(i: int, j: int) -> Polynomial:
    return Polynomial.var(x(i, j))


def evaluate_mod_p(p: Polynomial, assignment: Mapping[Var, int], prime: int = DEFAULT_PRIME) -> int:
    if prime < 2:
        raise InvalidArgument(f"{prime} is not a prime")
    total = 0
    for m, c in p.terms.items():
        if type(c) is Fraction:
            den = c.denominator % prime
            if den == 0:
                raise RetryWithNewPrime(f"denominator {c.denominator} vanishes mod {prime}")
            coeff = c.numerator * pow(den, -1, prime)
        else:
            coeff = c
        val = coeff % prime
        for v, e in m.items:
            try:
                val = val * pow(assignment[v], e, prime) % prime
            except KeyError:
                raise InvalidArgument(f"no value assigned to {v}") from None
        total = (total + val) % prime
    return total


# -- weights and orders -----------------------------------------------------


@dataclass(frozen=True)
class WeightVector:
    """Integer weight per variable; unlisted variables get ``default``, t gets 1."""

    weights: Mapping[Var, int]
    default: int = 1
    name: str = ""

    def __call__(self, v: Var) -> int:
        w = self.weights.get(v)
        if w is not None:
            return w
        return 1 if v.kind == 2 else self.default

    @classmethod
    def for_graph(cls, n: int, edges: Iterable[tuple[int, int]], name: str = "w_G") -> "WeightVector":
        """Weight 2 on diagonal variables and edges, 1 on the remaining off-diagonal variables."""
        es = set(edges)
        weights = {x(i, i): 2 for i in range(1, n + 1)}
        for i, j in itertools.combinations(range(1, n + 1), 2):
            weights[x(i, j)] = 2 if (i, j) in es else 1
        return cls(weights, 1, name)

    @classmethod
    def diagonal(cls, n: int) -> "WeightVector":
        return cls.for_graph(n, (), "w_diag")


def weight_of(m: Monomial, w: WeightVector) -> int:
    return sum(e * w(v) for v, e in m.items)


def _lex_key(m: Monomial) -> tuple:
    # Larger tuple <=> larger in lex with x11 > x22 > ... > x12 > ... > t.
    return tuple((-v.kind, -v.i, -v.j, e) for v, e in m.items)


class MonomialOrder:
    """Total order given by ``key``: larger key means larger monomial."""

    def key(self, m: Monomial):
        raise NotImplementedError

    def leading_term(self, p: Polynomial) -> tuple[Monomial, Rational]:
        if not p.terms:
            raise InvalidArgument("zero polynomial has no leading term")
        m = max(p.terms, key=self.key)
        return m, p.terms[m]


class LexOrder(MonomialOrder):
    def key(self, m: Monomial):
        return _lex_key(m)


class GradedLexOrder(MonomialOrder):
    def key(self, m: Monomial):
        return (m.degree, _lex_key(m))


@dataclass(frozen=True)
class CompositeWeightOrder(MonomialOrder):
    """Weight vectors compared in sequence, then graded lex as tie-break."""

    weights: tuple[WeightVector, ...]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def weight_key(self, m: Monomial) -> tuple[int, ...]:
        return tuple(weight_of(m, w) for w in self.weights)

    def key(self, m: Monomial):
        k = self._cache.get(m)
        if k is None:
            k = (self.weight_key(m), m.degree, _lex_key(m))
            self._cache[m] = k
        return k

    @classmethod
    def for_forest(cls, n: int, graph_edges, forest_edges) -> "CompositeWeightOrder":
        """The order <_{T,G}: w_G first, then w_T, then w_diag."""
        return cls(
            (
                WeightVector.for_graph(n, graph_edges, "w_G"),
                WeightVector.for_graph(n, forest_edges, "w_T"),
                WeightVector.diagonal(n),
            )
        )


def initial_form(p: Polynomial, order: CompositeWeightOrder, use_tiebreak: bool = True) -> Polynomial:
    """Leading term (with tie-break) or the weight-initial form (without)."""
    if p.is_zero():
        raise InvalidArgument("initial form of the zero polynomial")
    if use_tiebreak:
        m, c = order.leading_term(p)
        return Polynomial._raw({m: c})
    keys = {m: order.weight_key(m) for m in p.terms}
    top = max(keys.values())
    return Polynomial._raw({m: c for m, c in p.terms.items() if keys[m] == top})


# -- matrices ----------------------------------------------------------------


@dataclass(frozen=True)
class PolyMatrix:
    entries: tuple[tuple[Polynomial, ...], ...]
    nrows: int
    ncols: int
    row_twists: tuple[int, ...] = ()
    col_twists: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.entries) != self.nrows or any(len(r) != self.ncols for r in self.entries):
            raise InvalidArgument("matrix entries do not match the declared shape")
        if not self.row_twists:
            object.__setattr__(self, "row_twists", (0,) * self.nrows)
        if not self.col_twists:
            object.__setattr__(self, "col_twists", (0,) * self.ncols)
        if len(self.row_twists) != self.nrows or len(self.col_twists) != self.ncols:
            raise InvalidArgument("twist data does not match the matrix shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Polynomial]], ncols: int | None = None,
                  row_twists: Sequence[int] = (), col_twists: Sequence[int] = ()) -> "PolyMatrix":
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else len(col_twists)
        return cls(rows, len(rows), ncols, tuple(row_twists), tuple(col_twists))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, rc: tuple[int, int]) -> Polynomial:
        r, c = rc
        return self.entries[r][c]

    def column(self, c: int) -> list[Polynomial]:
        return [row[c] for row in self.entries]

    def map(self, fn: Callable[[Polynomial], Polynomial]) -> "PolyMatrix":
        return PolyMatrix(
            tuple(tuple(fn(p) for p in row) for row in self.entries),
            self.nrows, self.ncols, self.row_twists, self.col_twists,
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(
            tuple(tuple(self.entries[r][c] for c in cols) for r in rows),
            len(rows), len(cols),
            tuple(self.row_twists[r] for r in rows),
            tuple(self.col_twists[c] for c in cols),
        )

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.entries for p in row)

    def zero_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if all(row[c].is_zero() for row in self.entries)]

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        return matmul(self, other)

    def evaluate_mod_p(self, assignment: Mapping[Var, int], prime: int = DEFAULT_PRIME) -> list[list[int]]:
        return [[evaluate_mod_p(p, assignment, prime) for p in row] for row in self.entries]

    def to_json(self) -> list[list[list[dict]]]:
        return [[p.to_json() for p in row] for row in self.entries]


def matmul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    if a.ncols != b.nrows:
        raise InvalidArgument(f"cannot multiply {a.shape} by {b.shape}")
    rows = []
    for r in range(a.nrows):
        arow = a.entries[r]
        nz = [(k, arow[k]) for k in range(a.ncols) if arow[k]]
        out_row = []
        for c in range(b.ncols):
            acc = ZERO
            for k, p in nz:
                q = b.entries[k][c]
                if q:
                    acc = acc + p * q
            out_row.append(acc)
        rows.append(tuple(out_row))
    return PolyMatrix(tuple(rows), a.nrows, b.ncols, a.row_twists, b.col_twists)


def _as_grid(m) -> list[list[Polynomial]]:
    if isinstance(m, PolyMatrix):
        return [list(r) for r in m.entries]
    return [[Polynomial._coerce(p) for p in r] for r in m]


def _subset_dp(grid: list[list[Polynomial]], rows: Sequence[int], ncols: int) -> dict[int, Polynomial]:
    """Laplace expansion over the given rows; maps each used-column mask to its signed sum."""
    dp: dict[int, Polynomial] = {0: ONE}
    for r in rows:
        row = grid[r]
        nz = [(c, row[c]) for c in range(ncols) if row[c]]
        nxt: dict[int, Polynomial] = {}
        for mask, val in dp.items():
            for c, entry in nz:
                bit = 1 << c
                if mask & bit:
                    continue
                term = val * entry
                if bin(mask >> (c + 1)).count("1") & 1:
                    term = -term
                key = mask | bit
                prev = nxt.get(key)
                nxt[key] = term if prev is None else prev + term
        dp = {k: v for k, v in nxt.items() if v}
        if not dp:
            break
    return dp


def determinant(m) -> Polynomial:
    grid = _as_grid(m)
    size = len(grid)
    if any(len(r) != size for r in grid):
        raise InvalidArgument("determinant of a non-square matrix")
    if size == 0:
        return ONE
    return _subset_dp(grid, range(size), size).get((1 << size) - 1, ZERO)


def signed_cofactor(m, k: int, l: int) -> Polynomial:
    """(-1)^(k+l) det of m with row k and column l removed (1-based)."""
    grid = _as_grid(m)
    size = len(grid)
    if any(len(r) != size for r in grid):
        raise InvalidArgument("cofactor of a non-square matrix")
    if not (1 <= k <= size and 1 <= l <= size):
        raise InvalidArgument(f"cofactor index ({k},{l}) out of range for size {size}")
    sub = [[grid[r][c] for c in range(size) if c != l - 1] for r in range(size) if r != k - 1]
    d = determinant(sub)
    return -d if (k + l) % 2 else d


def all_cofactors(m) -> dict[tuple[int, int], Polynomial]:
    """Every signed cofactor, sharing one subset DP per deleted row."""
    grid = _as_grid(m)
    size = len(grid)
    if any(len(r) != size for r in grid):
        raise InvalidArgument("cofactors of a non-square matrix")
    full = (1 << size) - 1
    out = {}
    for k in range(1, size + 1):
        dp = _subset_dp(grid, [r for r in range(size) if r != k - 1], size)
        for l in range(1, size + 1):
            d = dp.get(full ^ (1 << (l - 1)), ZERO)
            out[(k, l)] = -d if (k + l) % 2 else d
    return out
