"""Graph container, random instance families, and an exact dominating-set solver.

Vertices are integers ``0..n-1``.  A vertex subset is written as a bitstring
``x`` where character ``i`` (equivalently bit ``i``) says whether vertex ``i``
is selected.  The exact solver enumerates all subsets and is the ground truth
that every approximate method in this package is scored against.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
import json

import numpy as np

MAX_VERTICES = 24

THREE_REGULAR = "3reg"
ERDOS_RENYI = "er"
FAMILIES = (THREE_REGULAR, ERDOS_RENYI)

_FAMILY_ALIASES = {
    "3reg": THREE_REGULAR,
    "3-regular": THREE_REGULAR,
    "threeregular": THREE_REGULAR,
    "regular": THREE_REGULAR,
    "er": ERDOS_RENYI,
    "erdos-renyi": ERDOS_RENYI,
    "erdosrenyi": ERDOS_RENYI,
}

# Stable integer codes used when deriving RNG streams for instance generation.
FAMILY_CODES = {THREE_REGULAR: 1, ERDOS_RENYI: 2}

_PAIRING_ATTEMPTS = 10_000


def canonical_family(name):
    """Map a family name or alias to its canonical identifier."""
    key = str(name).strip().lower()
    if key not in _FAMILY_ALIASES:
        raise ValueError(f"unknown graph family {name!r}; expected one of {FAMILIES}")
    return _FAMILY_ALIASES[key]


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph held as a canonical edge tuple.

    Edges are normalised to ``(min, max)`` pairs, deduplicated, and sorted,
    so two graphs with the same edge set compare equal.
    """

    n: int
    edges: tuple = ()

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
            raise TypeError(f"vertex count must be an int, got {type(self.n).__name__}")
        if not 1 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count must be in [1, {MAX_VERTICES}], got {self.n}")
        seen = set()
        canon = []
        for e in self.edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            canon.append(key)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @cached_property
    def neighbors(self):
        """Tuple of sorted neighbor tuples, indexed by vertex."""
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def degrees(self):
        return tuple(len(a) for a in self.neighbors)

    def closed_neighborhood(self, v):
        """``{v} ∪ N(v)`` as a sorted tuple."""
        return tuple(sorted((v,) + self.neighbors[v]))

    @property
    def m(self):
        return len(self.edges)

    def to_dict(self):
        return {"n": self.n, "edges": [list(e) for e in self.edges]}


@dataclass(frozen=True)
class InstanceSpec:
    """Recipe for one random graph: family, size, seed, and family options."""

    family: str
    n: int
    seed: int
    edge_prob: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "family", canonical_family(self.family))
        n = int(self.n)
        if not 1 <= n <= MAX_VERTICES:
            raise ValueError(f"vertex count must be in [1, {MAX_VERTICES}], got {n}")
        if self.family == THREE_REGULAR:
            if n < 4 or n % 2:
                raise ValueError(f"3-regular graphs need even n >= 4, got {n}")
        if not 0.0 <= self.edge_prob <= 1.0:
            raise ValueError(f"edge probability must lie in [0, 1], got {self.edge_prob}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "seed", int(self.seed))


def generate(spec):
    """Draw the graph described by `spec`.  Same spec, same graph."""
    rng = np.random.default_rng(spec.seed)
    if spec.family == ERDOS_RENYI:
        return _erdos_renyi(spec.n, spec.edge_prob, rng)
    return _three_regular(spec.n, rng)


def _erdos_renyi(n, p, rng):
    """G(n, p): each of the n(n-1)/2 pairs is an edge independently with prob p."""
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v))
    return Graph(n, tuple(edges))


def _three_regular(n, rng):
    """Uniform-ish 3-regular graph via the pairing model with rejection.

    Each vertex gets three stubs; a random perfect matching on the stubs is
    kept only if it produces no self-loops or parallel edges.
    """
    stubs = np.repeat(np.arange(n), 3)
    for _ in range(_PAIRING_ATTEMPTS):
        perm = rng.permutation(stubs)
        pairs = perm.reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        edges = {(min(int(u), int(v)), max(int(u), int(v))) for u, v in pairs}
        if len(edges) == pairs.shape[0]:
            return Graph(n, tuple(sorted(edges)))
    raise RuntimeError(f"no simple 3-regular pairing found for n={n} "
                       f"after {_PAIRING_ATTEMPTS} attempts")


def as_bits(x, n=None):
    """Coerce a bitstring like ``"0101"`` or a 0/1 sequence to a uint8 array.

    Character/position ``i`` is vertex ``i``.  Raises ``ValueError`` on
    non-binary content or (when `n` is given) wrong length.
    """
    if isinstance(x, str):
        if not set(x) <= {"0", "1"}:
            raise ValueError(f"bitstring may only contain 0/1, got {x!r}")
        arr = np.frombuffer(x.encode(), dtype=np.uint8) - ord("0")
    else:
        arr = np.asarray(x)
        if arr.ndim != 1:
            raise ValueError(f"expected a flat bit sequence, got shape {arr.shape}")
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError("bit sequence may only contain 0/1")
        arr = arr.astype(np.uint8)
    if n is not None and arr.size != n:
        raise ValueError(f"expected {n} bits, got {arr.size}")
    return arr


def bits_to_index(x):
    """Bitstring -> integer basis-state index (bit i of the index is vertex i)."""
    arr = as_bits(x)
    return int(np.dot(arr.astype(np.int64), 1 << np.arange(arr.size, dtype=np.int64)))


def index_to_bits(idx, n):
    """Integer basis-state index -> bitstring of length n (position i = vertex i)."""
    idx = int(idx)
    if not 0 <= idx < (1 << n):
        raise ValueError(f"index {idx} out of range for {n} bits")
    return "".join("1" if (idx >> i) & 1 else "0" for i in range(n))


def is_dominating(graph, x):
    """True iff every vertex is selected or adjacent to a selected vertex."""
    bits = as_bits(x, graph.n)
    for v in range(graph.n):
        if bits[v]:
            continue
        if not any(bits[u] for u in graph.neighbors[v]):
            return False
    return True


def _selection_columns(graph, chunk_ids):
    """Bit columns of shape (len(chunk_ids), n): column v is x_v per subset."""
    shifts = np.arange(graph.n, dtype=np.uint32)
    return ((chunk_ids[:, None] >> shifts) & 1).astype(np.uint8)


def domination_counts(graph, chunk=1 << 20):
    """For every subset index, the number of vertices it dominates.

    Returned as a uint8 array of length 2**n.  Used by the exact solver and
    as an independent cross-check for the cost encodings.
    """
    n = graph.n
    total = 1 << n
    out = np.empty(total, dtype=np.uint8)
    closed_masks = np.array(
        [sum(1 << u for u in graph.closed_neighborhood(v)) for v in range(n)],
        dtype=np.uint32,
    )
    for start in range(0, total, chunk):
        ids = np.arange(start, min(start + chunk, total), dtype=np.uint32)
        dominated = np.zeros(ids.size, dtype=np.uint8)
        for v in range(n):
            dominated += (ids & closed_masks[v]) != 0
        out[start:start + ids.size] = dominated
    return out


def brute_force_mds(graph, chunk=1 << 20):
    """Exact minimum dominating set by exhaustive search.

    Returns ``(size, optima)`` where `optima` is the frozenset of *all*
    bitstrings achieving the minimum.  Cost is O(2^n * n) but vectorised
    over subsets, so n <= 24 stays workable.
    """
    n = graph.n
    total = 1 << n
    dominated = domination_counts(graph, chunk=chunk)
    ids = np.arange(total, dtype=np.uint32)
    sizes = np.bitwise_count(ids)
    feasible = dominated == n
    if not feasible.any():  # pragma: no cover - full vertex set always dominates
        raise RuntimeError("no dominating set found")
    best = int(sizes[feasible].min())
    opt_ids = ids[feasible & (sizes == best)]
    return best, frozenset(index_to_bits(i, n) for i in opt_ids)


def load_graph(path):
    """Read a graph from a JSON file of the form {"n": int, "edges": [[u, v], ...]}."""
    with open(path) as fh:
        data = json.load(fh)
    try:
        n = data["n"]
        edges = data["edges"]
    except (TypeError, KeyError) as exc:
        raise ValueError(f"{path}: expected an object with 'n' and 'edges'") from exc
    return Graph(int(n), tuple((int(u), int(v)) for u, v in edges))


def save_graph(graph, path):
    """Write a graph as JSON (see `load_graph` for the shape)."""
    with open(path, "w") as fh:
        json.dump(graph.to_dict(), fh, indent=2)
        fh.write("\n")
