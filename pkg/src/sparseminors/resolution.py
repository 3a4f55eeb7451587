"""Józefiak's resolution L(X) of the submaximal minors of the generic symmetric
matrix, its w_G-homogenization, Boocher-style pruning, and the numerical
invariants read off the resulting resolution.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import ContractViolation, InvalidArgument
from .graphcore import Graph
from .ideals import build_matrix, generic_minors, hf_polynomial_ring
from .polycore import (
    DEFAULT_PRIME,
    ZERO,
    T,
    Monomial,
    PolyMatrix,
    Polynomial,
    Var,
    WeightVector,
    matmul,
    var,
    weight_of,
)


def _pairs(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(1, n + 1), 2))


def _e(i: int, j: int) -> str:
    return f"E({i},{j})"


@dataclass(frozen=True)
class GradedComplex:
    """Maps d1: F1 -> F0, d2: F2 -> F1, d3: F3 -> F2 as matrices acting on columns.

    ``labels[i]`` names the basis of F_{i+1}; ``weight_twists`` (F0..F3) is
    only set on w_G-homogenized complexes and their specializations.
    """

    maps: tuple[PolyMatrix, PolyMatrix, PolyMatrix]
    labels: tuple[tuple[str, ...], ...]
    n: int
    weight_twists: tuple[tuple[int, ...], ...] | None = None

    @property
    def sizes(self) -> tuple[int, int, int]:
        return tuple(m.ncols for m in self.maps)

    @property
    def twists(self) -> tuple[tuple[int, ...], ...]:
        return tuple(m.col_twists for m in self.maps)

    def compositions(self) -> list[PolyMatrix]:
        return [matmul(self.maps[0], self.maps[1]), matmul(self.maps[1], self.maps[2])]

    def first_nonzero_composition(self) -> tuple[int, int, int] | None:
        """(i, row, col) of a nonzero entry of d_i d_{i+1}, or None if this is a complex."""
        for i, prod in enumerate(self.compositions(), start=1):
            for r in range(prod.nrows):
                for c in range(prod.ncols):
                    if prod[r, c]:
                        return i, r, c
        return None

    def is_complex(self) -> bool:
        return self.first_nonzero_composition() is None

    def map_entries(self, fn) -> "GradedComplex":
        return GradedComplex(tuple(m.map(fn) for m in self.maps), self.labels, self.n, self.weight_twists)

    def to_json(self) -> dict:
        return {
            "matrices": [m.to_json() for m in self.maps],
            "twists": [list(t) for t in self.twists],
            "basis_labels": [list(l) for l in self.labels],
        }


def _f1_index(n: int) -> dict[tuple[int, int], int]:
    order = [(k, k) for k in range(1, n + 1)] + _pairs(n)
    return {kl: i for i, kl in enumerate(order)}


def _f2_index(n: int) -> tuple[dict[int, int], dict[tuple[int, int], int]]:
    """Column positions of E_ii - E_11 (by i) and of E_ab for ordered pairs a != b."""
    diag = {i: i - 2 for i in range(2, n + 1)}
    off = {}
    base = n - 1
    for p, (i, j) in enumerate(_pairs(n)):
        off[(i, j)] = base + 2 * p
        off[(j, i)] = base + 2 * p + 1
    return diag, off


def _upper(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a <= b else (b, a)


@lru_cache(maxsize=None)
def jozefiak_complex(n: int) -> GradedComplex:
    """L(X) with the ordered bases E_ii, E_ij | E_ii - E_11, E_ij, E_ji | E_ij - E_ji."""
    if n < 2:
        raise InvalidArgument("need n >= 2")
    pairs = _pairs(n)
    f1 = _f1_index(n)
    f2_diag, f2_off = _f2_index(n)
    r1, r2, r3 = comb(n + 1, 2), n * n - 1, comb(n, 2)

    d1_row = [None] * r1
    for k, l, p in generic_minors(n):
        d1_row[f1[(k, l)]] = p

    d2 = [[ZERO] * r2 for _ in range(r1)]

    def add2(row_kl, col, poly):
        r = f1[_upper(*row_kl)]
        d2[r][col] = d2[r][col] + poly

    for i in range(2, n + 1):
        col = f2_diag[i]
        for k in range(1, n + 1):
            if k != i:
                add2((1, k), col, -var(1, k))
        for k in range(2, i + 1):
            add2((k, i), col, var(k, i))
        for k in range(i + 1, n + 1):
            add2((i, k), col, var(i, k))
    for (a, b), col in f2_off.items():
        i, j = a, b
        for k in range(1, j + 1):
            add2((k, j), col, var(k, i))
        for k in range(j + 1, n + 1):
            add2((j, k), col, var(k, i))

    d3 = [[ZERO] * r3 for _ in range(r2)]

    def add3(row, col, poly):
        d3[row][col] = d3[row][col] + poly

    for col, (i, j) in enumerate(pairs):
        if i >= 2:
            add3(f2_diag[i], col, var(i, j))
        add3(f2_diag[j], col, -var(i, j))
        add3(f2_off[(i, j)], col, var(j, j))
        add3(f2_off[(j, i)], col, -var(i, i))
        for k in range(1, n + 1):
            if k in (i, j):
                continue
            add3(f2_off[(i, k)], col, var(j, k))
            add3(f2_off[(j, k)], col, -var(i, k))

    labels1 = tuple(_e(k, l) for k, l in sorted(f1, key=f1.get))
    labels2 = tuple(f"{_e(i, i)}-{_e(1, 1)}" for i in range(2, n + 1)) + tuple(
        _e(a, b) for (a, b) in sorted(f2_off, key=f2_off.get)
    )
    labels3 = tuple(f"{_e(i, j)}-{_e(j, i)}" for i, j in pairs)

    maps = (
        PolyMatrix.from_rows([d1_row], r1, (0,), (n - 1,) * r1),
        PolyMatrix.from_rows(d2, r2, (n - 1,) * r1, (n,) * r2),
        PolyMatrix.from_rows(d3, r3, (n,) * r2, (n + 1,) * r3),
    )
    c = GradedComplex(maps, (labels1, labels2, labels3), n)
    bad = c.first_nonzero_composition()
    if bad is not None:
        raise ContractViolation(f"d{bad[0]} d{bad[0] + 1} is nonzero at {bad[1:]}")
    return c


# -- homogenization -------------------------------------------------------------


def _max_weight(p: Polynomial, w: WeightVector) -> int:
    return max(weight_of(m, w) for m in p.terms)


def _homogenize_entry(p: Polynomial, w: WeightVector, target: int) -> Polynomial:
    out = {}
    for m, c in p.terms.items():
        gap = target - weight_of(m, w)
        if gap < 0:
            raise ContractViolation(f"term {m} exceeds the target weight {target}")
        out[m * Monomial(((T, gap),)) if gap else m] = c
    return Polynomial(out)


def _homogenize_map(mat: PolyMatrix, w: WeightVector, row_wt: Sequence[int]) -> tuple[PolyMatrix, tuple[int, ...]]:
    cols_wt = []
    new_cols = []
    for c in range(mat.ncols):
        col = mat.column(c)
        cands = [_max_weight(p, w) + row_wt[r] for r, p in enumerate(col) if p]
        if not cands:
            raise ContractViolation(f"column {c} is zero before homogenization")
        d = max(cands)
        cols_wt.append(d)
        new_cols.append([_homogenize_entry(p, w, d - row_wt[r]) if p else ZERO for r, p in enumerate(col)])
    rows = [[new_cols[c][r] for c in range(mat.ncols)] for r in range(mat.nrows)]
    return PolyMatrix.from_rows(rows, mat.ncols, mat.row_twists, mat.col_twists), tuple(cols_wt)


def homogenize(c: GradedComplex, g: Graph) -> GradedComplex:
    """Homogenize every map with respect to w_G using a new variable t of weight 1."""
    if g.n != c.n:
        raise InvalidArgument("graph and complex have different n")
    w = WeightVector.for_graph(g.n, g.edges)
    wt = [(0,)]
    maps = []
    for mat in c.maps:
        hm, cols = _homogenize_map(mat, w, wt[-1])
        maps.append(hm)
        wt.append(cols)
    h = GradedComplex(tuple(maps), c.labels, c.n, tuple(wt))
    bad = h.first_nonzero_composition()
    if bad is not None:
        raise ContractViolation(f"homogenized d{bad[0]} d{bad[0] + 1} is nonzero at {bad[1:]}")
    return h


def specialize(c: GradedComplex, *, t: int | None = None,
               zero: Graph | Iterable[Var] | None = None) -> GradedComplex:
    """Substitute t := value and/or set a set of variables (or a graph's Z) to zero."""
    out = c
    if zero is not None:
        z = build_matrix(zero).zero_vars if isinstance(zero, Graph) else frozenset(zero)
        if z:
            out = out.map_entries(lambda p: p.subs_zero(z))
    if t is not None:
        if t not in (0, 1):
            raise InvalidArgument("t may only be specialized to 0 or 1")
        out = out.map_entries(lambda p: p.subs_const(T, t))
    return out


def prune(c: GradedComplex) -> GradedComplex:
    """Erase zero columns of d1 with the matching rows of d2, then of d2 with rows of d3, then of d3."""
    maps = list(c.maps)
    labels = list(c.labels)
    wt = [list(x) for x in c.weight_twists] if c.weight_twists is not None else None
    for i in range(3):
        m = maps[i]
        zero = set(m.zero_columns())
        keep = [j for j in range(m.ncols) if j not in zero]
        maps[i] = m.submatrix(range(m.nrows), keep)
        labels[i] = tuple(labels[i][j] for j in keep)
        if wt is not None:
            wt[i + 1] = [wt[i + 1][j] for j in keep]
        if i < 2:
            nxt = maps[i + 1]
            maps[i + 1] = nxt.submatrix(keep, range(nxt.ncols))
    return GradedComplex(
        tuple(maps), tuple(labels), c.n,
        tuple(tuple(x) for x in wt) if wt is not None else None,
    )


def pruned_resolution(g: Graph) -> GradedComplex:
    return prune(specialize(jozefiak_complex(g.n), zero=g))


# -- block decomposition -----------------------------------------------------------


@dataclass(frozen=True)
class BlockStructure:
    """Index split of F_i into summands below the top w_G-twist (``low``) and at it (``top``)."""

    n: int
    weight_twists: tuple[tuple[int, ...], ...]
    low: tuple[tuple[int, ...], ...]
    top: tuple[tuple[int, ...], ...]

    def top_twist(self, i: int) -> int:
        return 2 * (self.n - 1) + 2 * (i - 1)

    def blocks(self, c: GradedComplex, i: int) -> dict[str, PolyMatrix]:
        """A_i, B_i, C_i, D_i of the i-th map (only C_1, D_1 for i = 1)."""
        m = c.maps[i - 1]
        cols_low, cols_top = self.low[i], self.top[i]
        if i == 1:
            return {"C": m.submatrix([0], cols_low), "D": m.submatrix([0], cols_top)}
        rows_low, rows_top = self.low[i - 1], self.top[i - 1]
        return {
            "A": m.submatrix(rows_low, cols_low),
            "B": m.submatrix(rows_low, cols_top),
            "C": m.submatrix(rows_top, cols_low),
            "D": m.submatrix(rows_top, cols_top),
        }


def block_structure(c: GradedComplex, g: Graph) -> BlockStructure:
    wt = c.weight_twists if c.weight_twists is not None else homogenize(c, g).weight_twists
    n = c.n
    low = [()]
    top = [(0,)]
    for i in range(1, 4):
        bound = 2 * (n - 1) + 2 * (i - 1)
        if any(w > bound for w in wt[i]):
            raise ContractViolation(f"F{i} has a summand of w_G-twist above {bound}")
        low.append(tuple(j for j, w in enumerate(wt[i]) if w < bound))
        top.append(tuple(j for j, w in enumerate(wt[i]) if w == bound))
    return BlockStructure(n, wt, tuple(low), tuple(top))


def gamma_delta(c: GradedComplex) -> dict[str, PolyMatrix]:
    """Gamma_2, Delta_2 (off-diagonal columns of d2, split by diagonal/off-diagonal rows) and Gamma_3, Delta_3."""
    n = c.n
    d2, d3 = c.maps[1], c.maps[2]
    off_cols = range(n - 1, d2.ncols)
    return {
        "Gamma2": d2.submatrix(range(n), off_cols),
        "Delta2": d2.submatrix(range(n, d2.nrows), off_cols),
        "Gamma3": d3.submatrix(range(n - 1), range(d3.ncols)),
        "Delta3": d3.submatrix(range(n - 1, d3.nrows), range(d3.ncols)),
    }


# -- Betti numbers and friends ------------------------------------------------------


@dataclass(frozen=True)
class BettiTable:
    """Nonzero graded Betti numbers beta_{i,j} of R/I, including beta_{0,0} = 1."""

    entries: tuple[tuple[tuple[int, int], int], ...]

    @classmethod
    def from_dict(cls, d: Mapping[tuple[int, int], int]) -> "BettiTable":
        if d.get((0, 0), 0) != 1:
            raise InvalidArgument("beta_{0,0} must be 1")
        if any(v < 0 for v in d.values()):
            raise InvalidArgument("Betti numbers are non-negative")
        return cls(tuple(sorted((k, v) for k, v in d.items() if v)))

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.entries)

    def get(self, i: int, j: int) -> int:
        return self.as_dict().get((i, j), 0)

    def total(self, i: int) -> int:
        return sum(v for (a, _), v in self.entries if a == i)

    def totals(self) -> tuple[int, int, int]:
        return self.total(1), self.total(2), self.total(3)

    @property
    def pdim(self) -> int:
        return max(i for (i, _), _ in self.entries)

    def to_json(self) -> dict:
        return {"betti": {f"{i},{j}": v for (i, j), v in self.entries}}

    def to_tsv(self) -> str:
        """Table with rows indexed by j - i and columns by i."""
        d = self.as_dict()
        cols = range(0, max(i for i, _ in d) + 1)
        rows = sorted({j - i for i, j in d})
        lines = ["\t".join(["j-i"] + [str(i) for i in cols])]
        for r in rows:
            lines.append("\t".join([str(r)] + [str(d.get((i, i + r), 0)) for i in cols]))
        return "\n".join(lines) + "\n"


def betti_table(c: GradedComplex) -> BettiTable:
    d: dict[tuple[int, int], int] = {(0, 0): 1}
    for i, m in enumerate(c.maps, start=1):
        for tw in m.col_twists:
            d[(i, tw)] = d.get((i, tw), 0) + 1
    return BettiTable.from_dict(d)


@dataclass(frozen=True)
class FormulaReport:
    betti: BettiTable
    regularity: int
    pdim: int
    reduced: bool
    cohen_macaulay: bool
    height: int
    perfect: bool

    def to_json(self) -> dict:
        out = self.betti.to_json()
        out.update(regularity=self.regularity, pdim=self.pdim, reduced=self.reduced,
                   cohen_macaulay=self.cohen_macaulay, height=self.height, perfect=self.perfect)
        return out


def betti_formula(n: int, d: int) -> FormulaReport:
    """Closed-form invariants of R/I_{n-1}(X_G) in terms of n and D_G."""
    if n < 2:
        raise InvalidArgument("need n >= 2")
    if not 0 <= d <= comb(n, 2):
        raise InvalidArgument(f"D_G = {d} outside 0..{comb(n, 2)}")
    b1, b2, b3 = comb(n + 1, 2) - d, n * n - 1 - 2 * d, comb(n, 2) - d
    table = BettiTable.from_dict({(0, 0): 1, (1, n - 1): b1, (2, n): b2, (3, n + 1): b3})
    cm = d == 0 or d == comb(n, 2)
    return FormulaReport(
        betti=table,
        regularity=n - 1,
        pdim=3 if b3 else 2,
        reduced=True,
        cohen_macaulay=cm,
        height=3 if d == 0 else 2,
        perfect=cm,
    )


@dataclass(frozen=True)
class HilbertSeriesData:
    numerator: tuple[int, ...]
    denominator_exponent: int
    reduced_numerator: tuple[int, ...]
    codim: int
    degree: int

    def to_json(self) -> dict:
        return {
            "numerator": list(self.numerator),
            "denominator_exponent": self.denominator_exponent,
            "reduced_numerator": list(self.reduced_numerator),
            "codim": self.codim,
            "degree": self.degree,
        }


def hilbert_series(b: BettiTable, n_g: int, expected_codim: int | None = None) -> HilbertSeriesData:
    """HS = numerator / (1 - t)^{n_g}; cancel every factor (1 - t) of the numerator."""
    top = max(j for (_, j), _ in b.entries)
    num = [0] * (top + 1)
    for (i, j), v in b.entries:
        num[j] += (-1) ** i * v
    red = list(num)
    codim = 0
    while sum(red) == 0 and any(red):
        q, acc = [], 0
        for a in red[:-1]:
            acc += a
            q.append(acc)
        if acc + red[-1] != 0:
            raise ContractViolation("synthetic division by (1 - t) left a remainder")
        red = q
        codim += 1
    while len(red) > 1 and red[-1] == 0:
        red.pop()
    if expected_codim is not None and codim != expected_codim:
        raise ContractViolation(f"numerator vanishes to order {codim} at t = 1, expected {expected_codim}")
    if codim > n_g:
        raise ContractViolation(f"codimension {codim} exceeds the number of variables {n_g}")
    return HilbertSeriesData(tuple(num), n_g, tuple(red), codim, sum(red))


def hf_from_betti(b: BettiTable, num_vars: int, d: int) -> int:
    """HF(R/I)(d) from graded Betti numbers over a polynomial ring in num_vars variables."""
    return sum((-1) ** i * v * hf_polynomial_ring(num_vars, d - j) for (i, j), v in b.entries)


def characteristic_numbers(n: int, d: int, connected: bool) -> tuple[int, int | None]:
    """Smooth G-sparse quadrics tangent to 2 (resp. 3, connected G only) general hyperplanes."""
    if n < 3:
        raise InvalidArgument("characteristic numbers need n >= 3")
    first = (n - 1) ** 2 - d
    second = (n - 1) ** 3 - comb(n + 1, 3) if connected else None
    return first, second


# -- exactness probe -------------------------------------------------------------------


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        y = pow(a, d, p)
        if y in (1, p - 1):
            continue
        for _ in range(s - 1):
            y = y * y % p
            if y == p - 1:
                break
        else:
            return False
    return True


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    a = [[v % p for v in r] for r in rows]
    if not a or not a[0]:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    for c in range(ncols):
        piv = next((r for r in range(rank, nrows) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        prow = [v * inv % p for v in a[rank]]
        a[rank] = prow
        for r in range(nrows):
            if r != rank and a[r][c]:
                f = a[r][c]
                a[r] = [(v - f * w) % p for v, w in zip(a[r], prow)]
        rank += 1
        if rank == nrows:
            break
    return rank


@dataclass(frozen=True)
class ProbeResult:
    verdict: str
    sizes: tuple[int, int, int]
    ranks: tuple[int, int, int] | None
    trials: int

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "sizes": list(self.sizes),
                "ranks": list(self.ranks) if self.ranks else None, "trials": self.trials}


def exactness_probe(c: GradedComplex, prime: int = DEFAULT_PRIME, trials: int = 10,
                    seed: int = 0) -> ProbeResult:
    """Look for a point mod prime where the ranks of d1, d2, d3 are those of an exact complex.

    ``pass`` means such a point was found; ``fail`` means the sizes alone rule
    exactness out; ``inconclusive`` means no trial reached the target ranks.
    """
    if not is_prime(prime):
        raise InvalidArgument(f"{prime} is not prime")
    bad = c.first_nonzero_composition()
    if bad is not None:
        raise ContractViolation(f"d{bad[0]} d{bad[0] + 1} is nonzero at {bad[1:]}; not a complex")
    s1, s2, s3 = c.sizes
    target = (1, s1 - 1, s2 - (s1 - 1))
    if target[1] < 0 or target[1] > min(s1, s2) or target[2] != s3:
        return ProbeResult("fail", (s1, s2, s3), None, 0)
    vs = sorted({v for m in c.maps for row in m.entries for p in row for v in p.variables()})
    rng = random.Random(seed)
    last = None
    for trial in range(1, trials + 1):
        point = {v: rng.randrange(prime) for v in vs}
        ranks = tuple(rank_mod_p(m.evaluate_mod_p(point, prime), prime) for m in c.maps)
        last = ranks
        if ranks == target:
            return ProbeResult("pass", (s1, s2, s3), ranks, trial)
    return ProbeResult("inconclusive", (s1, s2, s3), last, trials)
