"""Input coercion shared by the estimator and the command-line tools."""
from __future__ import annotations

import os

import numpy as np

from .graphs import Graph, load_graph


def as_graph(obj):
    """Coerce the accepted graph descriptions into a `Graph`.

    Accepts a `Graph`, a mapping with ``"n"`` and ``"edges"`` keys, a square
    0/1 adjacency matrix, or a path to a JSON graph file.
    """
    if isinstance(obj, Graph):
        return obj
    if isinstance(obj, (str, os.PathLike)):
        return load_graph(obj)
    if isinstance(obj, dict):
        if "n" not in obj or "edges" not in obj:
            raise ValueError("graph mapping needs 'n' and 'edges' keys, got "
                             f"{sorted(obj)}")
        return Graph(int(obj["n"]), [tuple(e) for e in obj["edges"]])
    arr = np.asarray(obj)
    if arr.ndim == 2 and arr.shape[0] == arr.shape[1]:
        return _from_adjacency(arr)
    raise TypeError("cannot interpret object of type "
                    f"{type(obj).__name__} as a graph")


def _from_adjacency(arr):
    if arr.shape[0] == 0:
        raise ValueError("adjacency matrix must be nonempty")
    values = np.unique(arr)
    if not np.all(np.isin(values, (0, 1))):
        raise ValueError("adjacency matrix entries must be 0 or 1")
    if np.any(arr != arr.T):
        raise ValueError("adjacency matrix must be symmetric")
    if np.any(np.diag(arr) != 0):
        raise ValueError("adjacency matrix must have a zero diagonal")
    n = int(arr.shape[0])
    rows, cols = np.nonzero(np.triu(arr, k=1))
    return Graph(n, list(zip(rows.tolist(), cols.tolist())))
