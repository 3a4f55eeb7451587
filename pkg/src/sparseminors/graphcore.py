"""Simple graphs on [n], spanning forests, tree paths and the invariant D_G.

Vertices are 1-based throughout. Edges are stored as ordered pairs (i, j)
with i < j.
"""

from __future__ import annotations

import enum
import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import GraphFormatError, InvalidArgument

Edge = tuple[int, int]


def _norm_edge(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[Edge]
    _adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgument(f"vertex count must be positive, got {self.n}")
        for e in self.edges:
            i, j = e
            if i == j:
                raise InvalidArgument(f"loop at vertex {i}")
            if not (1 <= i < j <= self.n):
                raise InvalidArgument(f"edge {e} is not a pair 1 <= i < j <= {self.n}")
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        seen: set[Edge] = set()
        for e in edges:
            if len(e) != 2:
                raise InvalidArgument(f"edge {tuple(e)} does not have two endpoints")
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise InvalidArgument(f"loop at vertex {i}")
            ne = _norm_edge(i, j)
            if ne in seen:
                raise InvalidArgument(f"duplicate edge {ne}")
            seen.add(ne)
        return cls(n, frozenset(seen))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, frozenset(itertools.combinations(range(1, n + 1), 2)))

    @classmethod
    def edgeless(cls, n: int) -> "Graph":
        return cls(n, frozenset())

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, frozenset((i, i + 1) for i in range(1, n)))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def num_variables(self) -> int:
        """N_G: the number of variables surviving in X_G."""
        return len(self.edges) + self.n

    def has_edge(self, i: int, j: int) -> bool:
        return _norm_edge(i, j) in self.edges

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def non_edges(self) -> list[Edge]:
        return [e for e in itertools.combinations(self.vertices, 2) if e not in self.edges]

    def is_connected(self) -> bool:
        return len(connected_components(self).blocks) == 1

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}


@dataclass(frozen=True)
class Partition:
    blocks: tuple[tuple[int, ...], ...]

    def block_of(self, v: int) -> int:
        for idx, b in enumerate(self.blocks):
            if v in b:
                return idx
        raise InvalidArgument(f"vertex {v} not covered")

    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]


@dataclass(frozen=True)
class Forest:
    """A spanning forest T of a parent graph."""

    graph: Graph
    edges: frozenset[Edge]

    def __post_init__(self):
        g = self.graph
        for e in self.edges:
            if e not in g.edges:
                raise InvalidArgument(f"forest edge {e} is not an edge of the graph")
        as_graph = Graph(g.n, self.edges)
        if len(self.edges) != g.n - len(connected_components(g).blocks):
            raise InvalidArgument("edge set is not a spanning forest of the graph")
        if connected_components(as_graph) != connected_components(g):
            raise InvalidArgument("edge set is not a spanning forest of the graph")

    @classmethod
    def from_edges(cls, graph: Graph, edges: Iterable[Sequence[int]]) -> "Forest":
        return cls(graph, Graph.from_edges(graph.n, edges).edges)

    def as_graph(self) -> Graph:
        return Graph(self.graph.n, self.edges)


def connected_components(g: Graph) -> Partition:
    seen = [False] * (g.n + 1)
    blocks = []
    for s in g.vertices:
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in g.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        blocks.append(tuple(sorted(comp)))
    return Partition(tuple(blocks))


def spanning_forest(g: Graph) -> Forest:
    """BFS forest: roots are the smallest vertex of each component, neighbors visited in increasing order."""
    seen = [False] * (g.n + 1)
    chosen: set[Edge] = set()
    for s in g.vertices:
        if seen[s]:
            continue
        seen[s] = True
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in g.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    chosen.add(_norm_edge(u, v))
                    queue.append(v)
    return Forest(g, frozenset(chosen))


def tree_path(t: Forest | Graph, k: int, l: int) -> list[int] | None:
    """Unique path k, ..., l in the forest, or None if k and l lie in different trees."""
    forest = t.as_graph() if isinstance(t, Forest) else t
    if k == l:
        raise InvalidArgument("tree_path needs two distinct vertices")
    for v in (k, l):
        if not 1 <= v <= forest.n:
            raise InvalidArgument(f"vertex {v} out of range")
    parent = {k: 0}
    queue = deque([k])
    while queue:
        u = queue.popleft()
        if u == l:
            break
        for v in forest.neighbors(u):
            if v not in parent:
                parent[v] = u
                queue.append(v)
    if l not in parent:
        return None
    path = [l]
    while path[-1] != k:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def d_invariant(g: Graph) -> int:
    sizes = connected_components(g).sizes()
    return sum(a * b for a, b in itertools.combinations(sizes, 2))


def _induced_connected(g: Graph, subset: Sequence[int]) -> bool:
    members = set(subset)
    start = subset[0]
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in g.neighbors(u):
            if v in members and v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(members)


def is_m_connected(g: Graph, m: int) -> bool:
    """True iff the induced subgraph on every m-subset of [n] is connected."""
    if not 1 <= m <= g.n:
        raise InvalidArgument(f"subset size {m} outside 1..{g.n}")
    return all(_induced_connected(g, s) for s in itertools.combinations(g.vertices, m))


class Primality(str, enum.Enum):
    PRIME = "prime"
    NOT_PRIME = "not_prime"
    UNKNOWN = "unknown"


def primality_verdict(g: Graph, k: int, characteristic: int = 0) -> Primality:
    """What is known about primality of the ideal of k-minors of X_G.

    Only the cases k = 1, k = n and (in characteristic zero) k = 2, 3 are
    decided; otherwise a failure of the necessary connectivity condition
    still certifies non-primality.
    """
    if not 1 <= k <= g.n:
        raise InvalidArgument(f"minor size {k} outside 1..{g.n}")
    if k == 1:
        return Primality.PRIME
    if k == g.n:
        return Primality.PRIME if g.is_connected() else Primality.NOT_PRIME
    condition = is_m_connected(g, k)
    if k in (2, 3) and characteristic == 0:
        return Primality.PRIME if condition else Primality.NOT_PRIME
    return Primality.UNKNOWN if condition else Primality.NOT_PRIME


# -- file formats -----------------------------------------------------------


def _parse_int(tok: str, line: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(f"expected an integer, got {tok!r}", line, col) from None


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        toks = []
        col = 0
        for tok in body.split():
            col = body.index(tok, col)
            toks.append((tok, col + 1))
            col += len(tok)
        yield lineno, toks


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(exc.msg, exc.lineno, exc.colno) from None


def _edges_from_json(raw, n: int | None) -> list[Edge]:
    if not isinstance(raw, list):
        raise GraphFormatError("'edges' must be a list of [i, j] pairs", 1, 1)
    out = []
    for idx, e in enumerate(raw):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(v, int) for v in e)):
            raise GraphFormatError(f"edge #{idx} is not a pair of integers: {e!r}", 1, 1)
        out.append((e[0], e[1]))
    return out


def _check_edge(i: int, j: int, n: int, seen: set, line: int, col: int) -> Edge:
    if not (1 <= i < j <= n):
        raise GraphFormatError(f"edge '{i} {j}' must satisfy 1 <= i < j <= {n}", line, col)
    if (i, j) in seen:
        raise GraphFormatError(f"duplicate edge '{i} {j}'", line, col)
    seen.add((i, j))
    return (i, j)


def parse_graph(text: str) -> Graph:
    """Parse the plain edge-list format ("n" then "i j" lines) or the JSON form."""
    if text.lstrip().startswith("{"):
        data = _load_json(text)
        if not isinstance(data, dict) or not isinstance(data.get("n"), int):
            raise GraphFormatError("JSON graph needs an integer field 'n'", 1, 1)
        n = data["n"]
        if n < 2:
            raise GraphFormatError(f"vertex count must be at least 2, got {n}", 1, 1)
        seen: set[Edge] = set()
        for i, j in _edges_from_json(data.get("edges", []), n):
            _check_edge(i, j, n, seen, 1, 1)
        return Graph(n, frozenset(seen))

    lines = list(_tokens(text))
    if not lines:
        raise GraphFormatError("empty graph file", 1, 1)
    lineno, toks = lines[0]
    if len(toks) != 1:
        raise GraphFormatError("first line must hold the vertex count alone", lineno, toks[-1][1])
    n = _parse_int(toks[0][0], lineno, toks[0][1])
    if n < 2:
        raise GraphFormatError(f"vertex count must be at least 2, got {n}", lineno, toks[0][1])
    seen = set()
    for lineno, toks in lines[1:]:
        if len(toks) != 2:
            raise GraphFormatError("edge lines must read 'i j'", lineno, toks[0][1])
        i = _parse_int(toks[0][0], lineno, toks[0][1])
        j = _parse_int(toks[1][0], lineno, toks[1][1])
        _check_edge(i, j, n, seen, lineno, toks[0][1])
    return Graph(n, frozenset(seen))


def parse_forest(text: str, graph: Graph) -> Forest:
    """Parse an explicit forest override: JSON list, JSON {"edges": ...}, or "i j" lines."""
    stripped = text.lstrip()
    if stripped.startswith("[") or stripped.startswith("{"):
        data = _load_json(text)
        if isinstance(data, dict):
            if "n" in data and data["n"] != graph.n:
                raise GraphFormatError(f"forest is on {data['n']} vertices, graph on {graph.n}", 1, 1)
            data = data.get("edges", [])
        raw_edges = _edges_from_json(data, graph.n)
        seen: set[Edge] = set()
        for i, j in raw_edges:
            _check_edge(*_norm_edge(i, j), graph.n, seen, 1, 1)
    else:
        seen = set()
        for lineno, toks in _tokens(text):
            if len(toks) == 1 and not seen:
                continue  # optional leading vertex count
            if len(toks) != 2:
                raise GraphFormatError("edge lines must read 'i j'", lineno, toks[0][1])
            i = _parse_int(toks[0][0], lineno, toks[0][1])
            j = _parse_int(toks[1][0], lineno, toks[1][1])
            _check_edge(*_norm_edge(i, j), graph.n, seen, lineno, toks[0][1])
    try:
        return Forest(graph, frozenset(seen))
    except InvalidArgument as exc:
        raise GraphFormatError(str(exc), 1, 1) from None
