"""Per-graph verification routines behind ``sparseminors verify``.

Each check returns a CheckResult; on failure ``witness`` holds the smallest
offending object found (a pair (k, l), a degree, an S-pair, ...).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import ContractViolation, ResourceLimit
from .graphcore import Forest, Graph, connected_components, d_invariant, spanning_forest
from .ideals import (
    DEFAULT_PATH_CAP,
    ENUMERATION_LIMIT,
    build_matrix,
    face_vector,
    fd_table,
    FdTable,
    generic_minors,
    hf_closed_form,
    hf_polynomial_ring,
    hf_recursion,
    hilbert_from_faces,
    initial_ideal_of_minors,
    it_generators,
    minor_generators,
    path_determinant_rhs,
    popcount_table,
    SquarefreeMonomialIdeal,
    substitute_ideal,
)
from .oracle import DEFAULT_PAIR_CAP, failing_s_pair, sqfree_count
from .polycore import DEFAULT_PRIME, CompositeWeightOrder, Monomial
from .resolution import betti_formula, betti_table, exactness_probe, hf_from_betti, pruned_resolution


@dataclass
class CheckResult:
    name: str
    ok: bool
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"name": self.name, "ok": self.ok}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        return out


def check_gb(g: Graph, t: Forest | None = None, pair_cap: int = DEFAULT_PAIR_CAP) -> CheckResult:
    """Minors of X and of X_G are Groebner bases under <_{T,G}, with the predicted initial ideals."""
    t = t or spanning_forest(g)
    order = CompositeWeightOrder.for_forest(g.n, g.edges, t.edges)
    for label, minors in (("X", generic_minors(g.n)), ("X_G", minor_generators(build_matrix(g)))):
        nonzero = [(k, l, p) for k, l, p in minors if p]
        w = failing_s_pair([p for _, _, p in nonzero], order, pair_cap)
        if w is not None:
            a, b = nonzero[w.i], nonzero[w.j]
            return CheckResult("gb", False, {"matrix": label, "s_pair": [[a[0], a[1]], [b[0], b[1]]],
                                             "remainder": str(w.remainder)})
    try:
        initial_ideal_of_minors(g, t, generic=True)
        initial_ideal_of_minors(g, t)
    except ContractViolation as exc:
        return CheckResult("gb", False, {"initial_ideal": str(exc)})
    return CheckResult("gb", True)


def check_exactness(g: Graph, prime: int = DEFAULT_PRIME, trials: int = 10, seed: int = 0) -> CheckResult:
    c = pruned_resolution(g)
    bad = c.first_nonzero_composition()
    if bad is not None:
        return CheckResult("exactness", False, {"composition": list(bad)})
    expected = betti_formula(g.n, d_invariant(g)).betti
    got = betti_table(c)
    if got != expected:
        return CheckResult("exactness", False, {"betti_pruned": got.to_json()["betti"],
                                                "betti_formula": expected.to_json()["betti"]})
    probe = exactness_probe(c, prime, trials, seed)
    return CheckResult("exactness", probe.verdict == "pass",
                       None if probe.verdict == "pass" else probe.to_json(), probe.to_json())


def _member_masks(ideal: SquarefreeMonomialIdeal, table: FdTable) -> np.ndarray:
    """Bitmasks of every square-free monomial in the ideal, in increasing order."""
    masks = np.arange(1 << len(table.universe), dtype=np.int64)
    inside = np.zeros(masks.shape, dtype=bool)
    for gen in ideal.generators:
        gm = table.to_mask(gen)
        inside |= (masks & gm) == gm
    return masks[inside]


def check_bijection(g: Graph, t: Forest | None = None, subset_cap: int = ENUMERATION_LIMIT) -> CheckResult:
    """f_d maps the square-free part of I bijectively onto that of I_T, degree by degree."""
    t = t or spanning_forest(g)
    table = fd_table(g, t)
    if len(table.universe) > subset_cap:
        raise ResourceLimit(f"{len(table.universe)} variables exceed the subset enumeration cap {subset_cap}")
    source = _member_masks(it_generators(Graph.edgeless(g.n)), table)
    target = _member_masks(it_generators(g, t), table)
    target_set = set(target.tolist())
    show = lambda m: str(Monomial.of(*table.to_vars(m)))
    images: dict[int, int] = {}
    for s in source.tolist():
        img = table(s)
        if bin(img).count("1") != bin(s).count("1") or img not in target_set:
            return CheckResult("bijection", False, {"degree": bin(s).count("1"), "input": show(s), "image": show(img),
                                                    "reason": "image not a degree-d member of I_T"})
        if img in images:
            return CheckResult("bijection", False, {"degree": bin(s).count("1"), "input": show(s),
                                                    "reason": "not injective"})
        images[img] = s
    if len(images) != len(target_set):
        missing = min(target_set - images.keys(), key=lambda m: (bin(m).count("1"), m))
        return CheckResult("bijection", False, {"degree": bin(missing).count("1"), "missed": show(missing),
                                                "reason": "not surjective"})
    counts = np.bincount(popcount_table(len(table.universe))[source], minlength=len(table.universe) + 1)
    return CheckResult("bijection", True, details={"counts": counts.tolist()})


def check_hilbert(g: Graph, t: Forest | None = None, dmax: int | None = None) -> CheckResult:
    """Closed form, peeling recursion and face vectors agree; the pruned resolution gives HF(R_G/I_{n-1}(X_G))."""
    t = t or spanning_forest(g)
    n = g.n
    dmax = 2 * n if dmax is None else dmax
    N = comb(n + 1, 2)
    ideal_i = it_generators(Graph.edgeless(n))
    ideal_t = it_generators(g, t)
    f_i, f_t = face_vector(ideal_i, N), face_vector(ideal_t, N)
    if f_i != f_t:
        return CheckResult("hilbert", False, {"face_vector_I": list(f_i), "face_vector_I_T": list(f_t)})
    for d in range(N + 1):
        if sqfree_count(ideal_t, d, N) != comb(N, d) - (f_t[d] if d < len(f_t) else 0):
            return CheckResult("hilbert", False, {"degree": d, "reason": "square-free count disagrees with face vector"})
    for d in range(dmax + 1):
        a, b = hf_closed_form(n, d), hf_recursion(n, d)
        c = hf_polynomial_ring(N, d) - hilbert_from_faces(f_i, d)
        if not a == b == c:
            return CheckResult("hilbert", False, {"degree": d, "closed_form": a, "recursion": b, "faces": c})
    # Sparse case: HF over R_G from the initial ideal vs. from the pruned resolution.
    n_g = g.num_variables
    sparse_init = substitute_ideal(ideal_t, build_matrix(g).zero_vars)
    f_g = face_vector(sparse_init, n_g)
    betti = betti_table(pruned_resolution(g))
    for d in range(dmax + 1):
        from_faces = hilbert_from_faces(f_g, d)
        from_res = hf_from_betti(betti, n_g, d)
        if from_faces != from_res:
            return CheckResult("hilbert", False, {"degree": d, "quotient_hf_faces": from_faces,
                                                  "quotient_hf_resolution": from_res})
    return CheckResult("hilbert", True, details={"face_vector": list(f_t)})


def check_pathdet(g: Graph, path_cap: int = DEFAULT_PATH_CAP) -> CheckResult:
    """Every off-diagonal cofactor of X_G equals its path expansion; it vanishes iff no path exists."""
    cof = {(k, l): p for k, l, p in minor_generators(build_matrix(g))}
    comps = connected_components(g)
    cache: dict = {}
    for k, l in itertools.combinations(g.vertices, 2):
        rhs = path_determinant_rhs(g, k, l, path_cap, _cache=cache)
        if cof[(k, l)] != rhs:
            return CheckResult("pathdet", False, {"pair": [k, l], "lhs": str(cof[(k, l)]), "rhs": str(rhs)})
        connected = comps.block_of(k) == comps.block_of(l)
        if cof[(k, l)].is_zero() == connected:
            return CheckResult("pathdet", False, {"pair": [k, l], "reason": "vanishing does not match connectivity"})
    return CheckResult("pathdet", True)


def run_all(g: Graph, t: Forest | None = None, *, prime: int = DEFAULT_PRIME, trials: int = 10, seed: int = 0,
            dmax: int | None = None, pair_cap: int = DEFAULT_PAIR_CAP, path_cap: int = DEFAULT_PATH_CAP,
            subset_cap: int = ENUMERATION_LIMIT) -> list[CheckResult]:
    return [
        check_gb(g, t, pair_cap),
        check_exactness(g, prime, trials, seed),
        check_bijection(g, t, subset_cap),
        check_hilbert(g, t, dmax),
        check_pathdet(g, path_cap),
    ]
