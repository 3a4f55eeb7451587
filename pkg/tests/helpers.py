"""Graph and forest generators shared by the test modules."""

import itertools
import random

from sparseminors.graphcore import Forest, Graph


def all_pairs(n):
    return list(itertools.combinations(range(1, n + 1), 2))


def all_graphs(n):
    """Every labeled graph on [n], in bitmask order."""
    pairs = all_pairs(n)
    for mask in range(1 << len(pairs)):
        yield Graph.from_edges(n, [p for b, p in enumerate(pairs) if mask >> b & 1])


def random_graphs(n, count, seed, p=0.5):
    rng = random.Random(seed)
    pairs = all_pairs(n)
    return [Graph.from_edges(n, [e for e in pairs if rng.random() < p]) for _ in range(count)]


def _acyclic(n, edges):
    parent = list(range(n + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


def all_forests(n):
    """Every forest on [n], each as the spanning forest of itself."""
    for g in all_graphs(n):
        if _acyclic(n, g.sorted_edges()):
            yield Forest(g, g.edges)


def spanning_forests(g):
    """Every spanning forest of g: acyclic edge sets with as many edges as n minus the component count."""
    from sparseminors.graphcore import connected_components

    size = g.n - len(connected_components(g).blocks)
    for sub in itertools.combinations(g.sorted_edges(), size):
        if _acyclic(g.n, sub):
            yield Forest.from_edges(g, sub)


def isomorphism_classes(n):
    """One labeled graph per isomorphism class: the smallest bitmask in each orbit."""
    pairs = all_pairs(n)
    index = {p: b for b, p in enumerate(pairs)}
    actions = []
    for perm in itertools.permutations(range(1, n + 1)):
        img = []
        for i, j in pairs:
            a, b = perm[i - 1], perm[j - 1]
            img.append(index[(a, b) if a < b else (b, a)])
        actions.append(img)
    seen = bytearray(1 << len(pairs))
    reps = []
    for mask in range(1 << len(pairs)):
        if seen[mask]:
            continue
        reps.append(Graph.from_edges(n, [p for b, p in enumerate(pairs) if mask >> b & 1]))
        bits = [b for b in range(len(pairs)) if mask >> b & 1]
        for img in actions:
            seen[sum(1 << img[b] for b in bits)] = 1
    return reps


def d_by_union_find(g):
    """Sum over pairs of components of the product of their sizes, computed independently of graphcore."""
    parent = list(range(g.n + 1))

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for i, j in g.edges:
        parent[find(i)] = find(j)
    sizes = {}
    for v in range(1, g.n + 1):
        r = find(v)
        sizes[r] = sizes.get(r, 0) + 1
    s = list(sizes.values())
    return sum(a * b for a, b in itertools.combinations(s, 2))


def leibniz(grid):
    """Determinant as the signed sum over permutations."""
    n = len(grid)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        for a, b in itertools.combinations(range(n), 2):
            if perm[a] > perm[b]:
                sign = -sign
        term = sign
        for r, c in enumerate(perm):
            term = term * grid[r][c]
        total = total + term
    return total
