"""Small directed-graph helpers on integer vertex sets."""

from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


def scc_labels(n: int, src, dst) -> np.ndarray:
    """Strongly connected component label of each vertex ``0..n-1``."""
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    src = np.asarray(src, dtype=np.int64).ravel()
    dst = np.asarray(dst, dtype=np.int64).ravel()
    g = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n)).tocsr()
    _, labels = connected_components(g, directed=True, connection="strong")
    return labels.astype(np.int64)


def transitive_closure(adj: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure of a boolean adjacency matrix."""
    reach = adj.astype(bool) | np.eye(len(adj), dtype=bool)
    for m in range(len(adj)):
        reach |= reach[:, m:m + 1] & reach[m:m + 1, :]
    return reach


def condensation(n: int, src, dst):
    """SCC labels plus the reachability matrix between components.

    ``reach[i, j]`` is true when component ``j`` is reachable from ``i``.
    """
    labels = scc_labels(n, src, dst)
    k = int(labels.max()) + 1 if n else 0
    adj = np.zeros((k, k), dtype=bool)
    if n:
        adj[labels[np.asarray(src, dtype=np.int64)], labels[np.asarray(dst, dtype=np.int64)]] = True
    return labels, transitive_closure(adj)


def relabel_by_first_occurrence(labels: np.ndarray) -> np.ndarray:
    """Renumber class labels so classes appear in order of their least member."""
    mapping: dict[int, int] = {}
    out = np.empty_like(labels)
    for i, lab in enumerate(labels.tolist()):
        if lab not in mapping:
            mapping[lab] = len(mapping)
        out[i] = mapping[lab]
    return out
