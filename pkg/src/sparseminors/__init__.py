"""Submaximal minors of sparse generic symmetric matrices.

Exact computation and cross-verification of the minors of X_G, their
initial ideals under the orders <_{T,G}, the pruned Józefiak resolution,
and the Betti numbers, Hilbert series, height and degree it yields.
"""

from .errors import ContractViolation, GraphFormatError, InvalidArgument, ResourceLimit, RetryWithNewPrime
from .graphcore import Forest, Graph, connected_components, d_invariant, spanning_forest, tree_path
from .resolution import betti_formula, betti_table, jozefiak_complex, prune, pruned_resolution, specialize

__all__ = [
    "ContractViolation", "GraphFormatError", "InvalidArgument", "ResourceLimit", "RetryWithNewPrime",
    "Forest", "Graph", "connected_components", "d_invariant", "spanning_forest", "tree_path",
    "betti_formula", "betti_table", "jozefiak_complex", "prune", "pruned_resolution", "specialize",
]
