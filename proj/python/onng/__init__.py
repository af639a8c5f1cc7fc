"""Graph-based approximate nearest neighbor search.

The heavy lifting lives in the compiled module; this package re-exports it
and adds a small convenience wrapper for the common build-then-query flow.
"""

import numpy as np

from ._onng import (
    Dataset,
    FormatError,
    Graph,
    InvariantError,
    Metric,
    UnreachableError,
    VpTree,
    adjust_graph,
    adjust_path,
    brute_force_knn,
    construct_adjusted_graph,
    construct_adjusted_graph_with_constraint,
    construct_anng,
    derive_aknng,
    effective_edge_limit,
    graph_stats,
    hash_size,
    load_index,
    optimize_degrees,
    save_index,
    search,
    search_from_seeds,
    transpose,
)

__all__ = [
    "Dataset",
    "FormatError",
    "Graph",
    "Index",
    "InvariantError",
    "Metric",
    "UnreachableError",
    "VpTree",
    "adjust_graph",
    "adjust_path",
    "brute_force_knn",
    "construct_adjusted_graph",
    "construct_adjusted_graph_with_constraint",
    "construct_anng",
    "derive_aknng",
    "effective_edge_limit",
    "graph_stats",
    "hash_size",
    "load_index",
    "optimize_degrees",
    "save_index",
    "search",
    "search_from_seeds",
    "transpose",
]


class Index:
    """Build once, query many times.

    Wraps the construction pipeline: incremental graph, edge truncation,
    degree adjustment, path adjustment, and a vantage point tree for seeds.
    """

    def __init__(self, vectors, metric=Metric.euclidean, kc=50, epsilon_c=0.1,
                 eo=10, ei=40, constrained=False, seed=0):
        vectors = np.ascontiguousarray(vectors, dtype=np.float32)
        self.data = Dataset(vectors, metric)
        anng = construct_anng(self.data, kc, epsilon_c, seed)
        aknng = derive_aknng(anng, kc)
        self.graph = adjust_graph(aknng, eo, ei, constrained)
        self.tree = VpTree.build(self.data, seed)

    def query(self, q, k=20, epsilon=0.1, dynamic=None):
        q = np.ascontiguousarray(q, dtype=np.float32)
        ids, dists, _ = search(self.graph, self.data, self.tree, q, k, epsilon, dynamic)
        return ids, dists

    def save(self, path):
        save_index(path, self.data, self.graph, self.tree)

    @classmethod
    def load(cls, path):
        index = cls.__new__(cls)
        index.data, index.graph, index.tree = load_index(path)
        if index.tree is None:
            raise InvariantError("index has no seed tree")
        return index
