"""The matrices X and X_G, their submaximal minors and the square-free monomial
ideals I, I_T that arise as their initial ideals.

Square-free monomials are handled as frozensets of variables; ``Monomial``
is used at the boundaries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ContractViolation, InvalidArgument, ResourceLimit
from .graphcore import Forest, Graph, spanning_forest, tree_path
from .polycore import (
    ONE,
    ZERO,
    CompositeWeightOrder,
    Monomial,
    PolyMatrix,
    Polynomial,
    Var,
    all_cofactors,
    determinant,
    initial_form,
    var,
    variables,
    x,
)

DEFAULT_PATH_CAP = 100_000
ENUMERATION_LIMIT = 24
INCLUSION_EXCLUSION_CAP = 2_000_000


def binom(a: int, b: int) -> int:
    """Binomial coefficient, zero outside 0 <= b <= a."""
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


def hf_polynomial_ring(num_vars: int, d: int) -> int:
    """Number of monomials of degree d in num_vars variables."""
    if d < 0:
        return 0
    if num_vars == 0:
        return 1 if d == 0 else 0
    return comb(num_vars - 1 + d, num_vars - 1)


@dataclass(frozen=True)
class SparseSymmetricMatrix:
    graph: Graph
    matrix: PolyMatrix
    zero_vars: frozenset[Var]

    @property
    def n(self) -> int:
        return self.graph.n


def build_matrix(g: Graph) -> SparseSymmetricMatrix:
    n = g.n
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            row.append(var(i, j) if i == j or g.has_edge(i, j) else ZERO)
        rows.append(row)
    zero_vars = frozenset(x(i, j) for i, j in g.non_edges())
    return SparseSymmetricMatrix(g, PolyMatrix.from_rows(rows), zero_vars)


def build_generic(n: int) -> SparseSymmetricMatrix:
    return build_matrix(Graph.complete(n))


def minor_index_order(n: int) -> list[tuple[int, int]]:
    """(k, l) with k <= l: the principal ones first, then the rest lexicographically."""
    return [(k, k) for k in range(1, n + 1)] + list(itertools.combinations(range(1, n + 1), 2))


def minor_generators(m: SparseSymmetricMatrix) -> list[tuple[int, int, Polynomial]]:
    if m.n < 2:
        raise InvalidArgument("need n >= 2 for submaximal minors")
    cof = all_cofactors(m.matrix)
    return [(k, l, cof[(k, l)]) for k, l in minor_index_order(m.n)]


@lru_cache(maxsize=None)
def generic_minors(n: int) -> tuple[tuple[int, int, Polynomial], ...]:
    return tuple(minor_generators(build_generic(n)))


# -- square-free monomial ideals --------------------------------------------


def _minimalize(gens: Iterable[frozenset]) -> frozenset[frozenset]:
    ordered = sorted(set(gens), key=len)
    kept: list[frozenset] = []
    for g in ordered:
        if not any(h <= g for h in kept):
            kept.append(g)
    return frozenset(kept)


def _sort_key(s: frozenset) -> tuple:
    return tuple(sorted(s))


@dataclass(frozen=True)
class SquarefreeMonomialIdeal:
    """Minimal generating set of square-free monomials, each a set of variables."""

    generators: frozenset[frozenset[Var]]

    def __post_init__(self):
        object.__setattr__(self, "generators", _minimalize(frozenset(g) for g in self.generators))

    @classmethod
    def from_monomials(cls, monos: Iterable[Monomial]) -> "SquarefreeMonomialIdeal":
        gens = []
        for m in monos:
            if not m.is_squarefree():
                raise InvalidArgument(f"{m} is not square-free")
            gens.append(m.support())
        return cls(frozenset(gens))

    def __len__(self) -> int:
        return len(self.generators)

    def is_zero(self) -> bool:
        return not self.generators

    def sorted_generators(self) -> list[frozenset[Var]]:
        return sorted(self.generators, key=lambda s: (len(s), _sort_key(s)))

    def monomials(self) -> list[Monomial]:
        return [Monomial.of(*sorted(g)) for g in self.sorted_generators()]

    def support(self) -> frozenset[Var]:
        return frozenset().union(*self.generators) if self.generators else frozenset()

    def contains(self, m: Monomial | Iterable[Var]) -> bool:
        s = m.support() if isinstance(m, Monomial) else frozenset(m)
        return any(g <= s for g in self.generators)

    def to_json(self) -> list[dict]:
        return [m.to_json() for m in self.monomials()]


def it_generators(g: Graph, t: Forest | None = None) -> SquarefreeMonomialIdeal:
    """The three generator families of I_T."""
    if t is None:
        t = spanning_forest(g)
    elif t.graph != g:
        raise InvalidArgument("forest does not belong to this graph")
    n = g.n
    diag = frozenset(x(i, i) for i in range(1, n + 1))
    gens: list[frozenset[Var]] = [diag - {x(i, i)} for i in range(1, n + 1)]
    for k, l in itertools.combinations(range(1, n + 1), 2):
        path = tree_path(t, k, l)
        if path is None:
            gens.append(diag - {x(k, k), x(l, l)} | {x(k, l)})
        else:
            on_path = set(path)
            edges = {x(a, b) for a, b in zip(path, path[1:])}
            gens.append(frozenset(x(i, i) for i in range(1, n + 1) if i not in on_path) | edges)
    ideal = SquarefreeMonomialIdeal(frozenset(gens))
    if len(ideal) != len(gens):
        raise ContractViolation("generators of I_T are not pairwise non-redundant")
    return ideal


def substitute_ideal(ideal: SquarefreeMonomialIdeal, z: Iterable[Var]) -> SquarefreeMonomialIdeal:
    """Set the variables of z to zero: drop every generator meeting z."""
    kill = frozenset(z)
    return SquarefreeMonomialIdeal(frozenset(gen for gen in ideal.generators if not gen & kill))


# -- path expansion of the cofactors ----------------------------------------


def simple_paths(g: Graph, k: int, l: int, cap: int = DEFAULT_PATH_CAP) -> Iterator[list[int]]:
    """All simple paths from k to l by DFS with increasing neighbors."""
    count = 0
    path = [k]
    on_path = {k}

    def rec(u: int):
        nonlocal count
        for v in g.neighbors(u):
            if v in on_path:
                continue
            if v == l:
                count += 1
                if count > cap:
                    raise ResourceLimit(f"more than {cap} paths between {k} and {l}")
                yield path + [l]
                continue
            path.append(v)
            on_path.add(v)
            yield from rec(v)
            path.pop()
            on_path.discard(v)

    yield from rec(k)


def principal_minor(m: SparseSymmetricMatrix, keep: Sequence[int]) -> Polynomial:
    idx = [i - 1 for i in keep]
    grid = m.matrix.entries
    return determinant([[grid[r][c] for c in idx] for r in idx])


def path_determinant_rhs(g: Graph, k: int, l: int, path_cap: int = DEFAULT_PATH_CAP,
                         _cache: dict | None = None) -> Polynomial:
    """Sum over paths p from k to l of (-1)^(|V(p)|-1) det(X_G on [n] minus V(p)) x_p."""
    if not k < l:
        raise InvalidArgument(f"need k < l, got ({k}, {l})")
    m = build_matrix(g)
    cache = {} if _cache is None else _cache
    total = ZERO
    for p in simple_paths(g, k, l, path_cap):
        rest = tuple(i for i in g.vertices if i not in p)
        minor = cache.get(rest)
        if minor is None:
            minor = cache[rest] = principal_minor(m, rest) if rest else ONE
        xp = ONE
        for a, b in zip(p, p[1:]):
            xp = xp * var(a, b)
        term = minor * xp
        total = total + (term if len(p) % 2 == 1 else -term)
    return total


# -- face vectors and Hilbert functions -------------------------------------


def _bitmasks(ideal: SquarefreeMonomialIdeal, num_vars: int) -> list[int]:
    support = sorted(ideal.support())
    if len(support) > num_vars:
        raise InvalidArgument(f"ideal uses {len(support)} variables, universe has {num_vars}")
    pos = {v: i for i, v in enumerate(support)}
    return [sum(1 << pos[v] for v in gen) for gen in ideal.generators]


_POPCOUNT_CACHE: dict[int, np.ndarray] = {}


def popcount_table(num_vars: int) -> np.ndarray:
    pc = _POPCOUNT_CACHE.get(num_vars)
    if pc is None:
        pc = np.zeros(1, dtype=np.int8)
        for _ in range(num_vars):
            pc = np.concatenate([pc, pc + 1])
        _POPCOUNT_CACHE[num_vars] = pc
    return pc


def _nonface_counts_enumerate(masks: list[int], num_vars: int) -> list[int]:
    size = 1 << num_vars
    idx = np.arange(size, dtype=np.int64)
    inside = np.zeros(size, dtype=bool)
    for g in masks:
        inside |= (idx & g) == g
    counts = np.bincount(popcount_table(num_vars)[inside], minlength=num_vars + 1)
    return [int(c) for c in counts]


def _nonface_counts_incl_excl(masks: list[int], num_vars: int,
                              cap: int = INCLUSION_EXCLUSION_CAP) -> list[int]:
    # Signed multiplicities of lcm supports over nonempty generator subsets.
    acc: dict[int, int] = {}
    for g in masks:
        new = dict(acc)
        for u, c in acc.items():
            w = u | g
            new[w] = new.get(w, 0) - c
        new[g] = new.get(g, 0) + 1
        acc = {u: c for u, c in new.items() if c}
        if len(acc) > cap:
            raise ResourceLimit(f"inclusion-exclusion exceeded {cap} terms")
    counts = [0] * (num_vars + 1)
    for u, c in acc.items():
        s = bin(u).count("1")
        for d in range(s, num_vars + 1):
            counts[d] += c * comb(num_vars - s, d - s)
    return counts


def squarefree_nonface_counts(ideal: SquarefreeMonomialIdeal, num_vars: int,
                              method: str = "auto") -> list[int]:
    """Entry d: number of square-free degree-d monomials lying in the ideal."""
    masks = _bitmasks(ideal, num_vars)
    if method == "auto":
        method = "enumerate" if num_vars <= ENUMERATION_LIMIT else "inclusion-exclusion"
    if method == "enumerate":
        return _nonface_counts_enumerate(masks, num_vars)
    if method == "inclusion-exclusion":
        return _nonface_counts_incl_excl(masks, num_vars)
    raise InvalidArgument(f"unknown counting method {method!r}")


def face_vector(ideal: SquarefreeMonomialIdeal, num_vars: int, method: str = "auto") -> tuple[int, ...]:
    """(f_{-1}, f_0, ...) of the Stanley-Reisner complex, trailing zeros dropped."""
    inside = squarefree_nonface_counts(ideal, num_vars, method)
    f = [comb(num_vars, d) - inside[d] for d in range(num_vars + 1)]
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return tuple(f)


def hilbert_from_faces(f: Sequence[int], d: int) -> int:
    """HF of the Stanley-Reisner ring in degree d from its face vector."""
    if d < 0:
        return 0
    if d == 0:
        return 1
    return sum(f[i] * binom(d - 1, i - 1) for i in range(1, len(f)))


def hf_closed_form(n: int, d: int) -> int:
    """HF(I_{n-1}(X))(d) via the three-binomial closed form."""
    if n < 2:
        raise InvalidArgument("need n >= 2")
    c2, c1 = comb(n, 2), comb(n + 1, 2)
    return (binom(c2 + d, c1 - 1)
            + (n - 1) * binom(c2 - 1 + d, c1 - 2)
            + c2 * binom(c2 - 2 + d, c1 - 3))


def monomial_colon(ideal_gens: Sequence[frozenset], g: frozenset) -> list[frozenset]:
    """Generators of (ideal : g) for square-free monomials."""
    return list(_minimalize(h - g for h in ideal_gens))


def hf_recursion(n: int, d: int) -> int:
    """HF(I)(d) for the ideal I = init_{w_diag}(I_{n-1}(X)), by peeling generators.

    Each step removes one generator g from the remaining list L and uses
    0 -> R/(L : g)(-deg g) -> R/L' -> R/L -> 0. Off-diagonal generators go
    first in lexicographic order of (k, l), then the diagonal products in
    index order. Every colon ideal is required to be generated by variables.
    """
    if n < 2:
        raise InvalidArgument("need n >= 2")
    N = comb(n + 1, 2)
    ideal = it_generators(Graph.edgeless(n))
    diag = frozenset(x(i, i) for i in range(1, n + 1))
    off = [diag - {x(k, k), x(l, l)} | {x(k, l)} for k, l in itertools.combinations(range(1, n + 1), 2)]
    dia = [diag - {x(i, i)} for i in range(1, n + 1)]
    if set(off) | set(dia) != set(ideal.generators):
        raise ContractViolation("peeling order does not cover the generators of I")
    order = off + dia
    # HF(R/I)(d) = HF(R)(d) - sum over steps of HF(R/(colon))(d - deg g).
    quotient = hf_polynomial_ring(N, d)
    for step, g in enumerate(order):
        rest = order[step + 1:]
        colon = monomial_colon(rest, g) if rest else []
        if any(len(c) != 1 for c in colon):
            raise ContractViolation(f"colon ideal at step {step} is not generated by variables")
        quotient -= hf_polynomial_ring(N - len(colon), d - len(g))
    return hf_polynomial_ring(N, d) - quotient


def ideal_hf(ideal: SquarefreeMonomialIdeal, num_vars: int, d: int) -> int:
    """HF of the ideal itself in degree d, inside a ring with num_vars variables."""
    f = face_vector(ideal, num_vars)
    return hf_polynomial_ring(num_vars, d) - hilbert_from_faces(f, d)


# -- the bijection f_d -------------------------------------------------------


class FdTable:
    """f_d for a fixed forest T, acting on square-free monomials encoded as bitmasks.

    Bit positions follow ``variables(n)``. For each pair k < l joined by a
    path of T the table stores the image skeleton prod_{i not on p} x_ii * x_p
    together with the edge -> diagonal rewrites used for the factor m2.
    """

    def __init__(self, g: Graph, t: Forest):
        if t.graph != g:
            raise InvalidArgument("forest does not belong to this graph")
        n = g.n
        self.n = n
        self.universe = variables(n)
        self.bit = {v: 1 << i for i, v in enumerate(self.universe)}
        bit = self.bit
        self.diag_mask = sum(bit[x(i, i)] for i in range(1, n + 1))
        self.pairs: dict[int, tuple | None] = {}
        for k, l in itertools.combinations(range(1, n + 1), 2):
            missing = bit[x(k, k)] | bit[x(l, l)]
            xkl = bit[x(k, l)]
            path = tree_path(t, k, l)
            if path is None:
                self.pairs[missing] = (xkl, None)
                continue
            edges = [bit[x(a, b)] for a, b in zip(path, path[1:])]
            on_path = set(path)
            base = sum(bit[x(i, i)] for i in range(1, n + 1) if i not in on_path) | sum(edges)
            rewrites = tuple((edges[j - 1], bit[x(path[j], path[j])]) for j in range(1, len(path) - 1))
            self.pairs[missing] = (xkl, (base, sum(edges), rewrites, edges[-1]))

    def to_mask(self, s: Iterable[Var]) -> int:
        return sum(self.bit[v] for v in s)

    def to_vars(self, mask: int) -> list[Var]:
        return [v for v in self.universe if mask & self.bit[v]]

    def __call__(self, mask: int) -> int:
        missing = self.diag_mask & ~mask
        c = bin(missing).count("1")
        if c <= 1:
            return mask
        entry = self.pairs.get(missing)
        if entry is None or not mask & entry[0]:
            raise InvalidArgument(f"{Monomial.of(*self.to_vars(mask))} is not in I")
        xkl, data = entry
        if data is None:
            return mask
        base, path_mask, rewrites, last = data
        rest = mask & ~self.diag_mask & ~xkl
        image = base | (rest & ~path_mask)
        for edge, diag in rewrites:
            if rest & edge:
                image |= diag
        if rest & last:
            image |= xkl
        return image


@lru_cache(maxsize=256)
def fd_table(g: Graph, t: Forest) -> FdTable:
    return FdTable(g, t)


def bijection_fd(g: Graph, t: Forest, m: Monomial | Iterable[Var]) -> Monomial:
    """Map a square-free monomial of I to a square-free monomial of I_T of the same degree."""
    if isinstance(m, Monomial):
        if not m.is_squarefree():
            raise InvalidArgument(f"{m} is not square-free")
        s = m.support()
    else:
        s = frozenset(m)
    table = fd_table(g, t)
    if not s <= table.bit.keys():
        raise InvalidArgument("monomial uses variables outside x_ij, 1 <= i <= j <= n")
    return Monomial.of(*table.to_vars(table(table.to_mask(s))))


# -- height -------------------------------------------------------------------


def ideal_height(ideal: SquarefreeMonomialIdeal) -> int:
    """Minimum vertex cover of the generator hypergraph, by branch and bound."""
    if ideal.is_zero():
        raise InvalidArgument("height of the zero ideal")
    support = sorted(ideal.support())
    pos = {v: i for i, v in enumerate(support)}
    edges = sorted({sum(1 << pos[v] for v in gen) for gen in ideal.generators},
                   key=lambda e: bin(e).count("1"))
    best = len(support)

    def rec(cover: int, size: int):
        nonlocal best
        if size >= best:
            return
        open_edges = [e for e in edges if not e & cover]
        if not open_edges:
            best = size
            return
        # Disjoint uncovered edges each need their own vertex.
        lb, used = 0, 0
        for e in open_edges:
            if not e & used:
                lb += 1
                used |= e
        if size + lb >= best:
            return
        e = open_edges[0]
        bits = e
        while bits:
            b = bits & -bits
            rec(cover | b, size + 1)
            bits ^= b

    rec(0, 0)
    return best


# -- initial ideals of the minors ----------------------------------------------


def initial_ideal_of_minors(g: Graph, t: Forest | None = None, *, generic: bool = False
                            ) -> SquarefreeMonomialIdeal:
    """Leading monomials of the nonzero minors of X_G (or of X when ``generic``) under <_{T,G}.

    Raises ContractViolation if some weight-initial form has more than one
    term, or if the result differs from I_T (resp. I_T with Z set to zero).
    """
    if t is None:
        t = spanning_forest(g)
    order = CompositeWeightOrder.for_forest(g.n, g.edges, t.edges)
    mat = build_generic(g.n) if generic else build_matrix(g)
    minors = generic_minors(g.n) if generic else minor_generators(mat)
    leads = []
    for k, l, p in minors:
        if p.is_zero():
            continue
        w_init = initial_form(p, order, use_tiebreak=False)
        if not w_init.is_monomial():
            raise ContractViolation(f"weight-initial form of minor ({k},{l}) has {len(w_init)} terms: {w_init}")
        leads.append(w_init.single_term()[0])
    result = SquarefreeMonomialIdeal.from_monomials(leads)
    expected = it_generators(g, t)
    if not generic:
        expected = substitute_ideal(expected, build_matrix(g).zero_vars)
    if result != expected:
        raise ContractViolation("leading monomials of the minors do not generate the expected ideal")
    return result


def squarefree_monomials(universe: Sequence[Var], d: int) -> Iterator[frozenset[Var]]:
    for c in itertools.combinations(universe, d):
        yield frozenset(c)


def ring_variables(g: Graph) -> list[Var]:
    """Variables of R_G = R/(Z), in the fixed order."""
    z = build_matrix(g).zero_vars
    return [v for v in variables(g.n) if v not in z]
