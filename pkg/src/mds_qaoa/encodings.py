"""Classical cost formulations for dominating sets on binary registers.

Four encodings are provided, all scored over bit assignments:

- ``ours``      penalised objective on n bits, no surplus variables
- ``dinneen``   quadratic penalty form with binary surplus variables per vertex
- ``pan``       quadratic penalty form with a tighter surplus layout
- ``guerrero``  per-vertex score (domination + non-membership), bounded register

``ours``/``dinneen``/``pan`` are minimised; the ``guerrero`` score is
maximised, so its table/Hamiltonian use the negated score to keep a single
lower-is-better convention across methods.

Registers put the n vertex bits first; surplus bits follow, grouped by vertex
in ascending vertex order, then by slot.  Bit i of a basis-state index is
register bit i.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .graphs import as_bits, domination_counts

METHODS = ("ours", "dinneen", "pan", "guerrero")

DEFAULT_LAM = 2.0
DEFAULT_PENALTY = 2.0


def or_identity(bits):
    """Logical OR written in complement-product form: ``1 - prod(1 - b)``.

    Agrees with ``any(bits)`` on 0/1 inputs; the product form is what the
    cost functions below expand, so it is kept as a named building block.
    An empty input has no defined disjunction and is rejected.
    """
    bits = list(bits)
    if not bits:
        raise ValueError("or_identity needs at least one bit")
    prod = 1
    for b in bits:
        prod *= 1 - int(b)
    return 1 - prod


def check_penalty(value, name="penalty"):
    """Penalty weights must exceed 1 for optima to coincide with true optima."""
    value = float(value)
    if not value > 1.0:
        raise ValueError(f"{name} must be > 1, got {value}")
    return value


def cost_ours(graph, x, lam=DEFAULT_LAM):
    """Surplus-free cost, lower is better.

    cost(x) = -sum_i (1 - x_i) - lam * sum_i [vertex i dominated]

    where the domination indicator is the complement-product OR over the
    closed neighborhood.  For lam > 1 the minimisers are exactly the minimum
    dominating sets.
    """
    lam = check_penalty(lam, "lam")
    bits = as_bits(x, graph.n)
    value = 0.0
    for i in range(graph.n):
        value -= 1 - int(bits[i])
        covered = or_identity([bits[j] for j in graph.closed_neighborhood(i)])
        value -= lam * covered
    return value


def cost_guerrero(graph, x):
    """Per-vertex score, higher is better.

    score(x) = sum_k (T_k + D_k) with T_k = 1 iff vertex k is dominated and
    D_k = 1 - x_k.  The score never exceeds 2n and equals 2n - |mds| at any
    minimum dominating set.
    """
    bits = as_bits(x, graph.n)
    score = 0
    for k in range(graph.n):
        t_k = or_identity([bits[j] for j in graph.closed_neighborhood(k)])
        score += t_k + (1 - int(bits[k]))
    return float(score)


@dataclass(frozen=True)
class SurplusLayout:
    """Placement of surplus bits for a quadratic penalty encoding.

    `terms` holds, per vertex, the surplus expression S_i as a tuple of
    ``(coefficient, support)`` pairs, where `support` is a tuple of register
    bit indices whose product the coefficient multiplies.  Slack for vertex i
    is ``S_i = sum c * prod_{q in support} z_q``.
    """

    n: int
    total: int
    terms: tuple

    @property
    def n_qubits(self):
        return self.n + self.total


def dinneen_layout(graph):
    """Surplus layout with ceil(log2(d+1)) power-of-two slots per vertex.

    A vertex of degree d >= 1 receives floor(log2 d) + 1 surplus bits with
    coefficients 1, 2, 4, ...; isolated vertices receive none.
    """
    terms = []
    nxt = graph.n
    for v in range(graph.n):
        d = graph.degrees[v]
        if d == 0:
            terms.append(())
            continue
        k_max = int(math.log2(d))
        slots = []
        for k in range(k_max + 1):
            slots.append((1 << k, (nxt,)))
            nxt += 1
        terms.append(tuple(slots))
    return SurplusLayout(graph.n, nxt - graph.n, tuple(terms))


def pan_layout(graph):
    """Surplus layout whose slack range is clipped to the vertex degree.

    Degree 0 and 1 vertices get no surplus bits (degree 1 uses the product
    of the two vertex bits as its slack).  For d >= 2 the bits carry weights
    1, 2, ..., 2^(K-1), d + 1 - 2^K with K = floor(log2 d), so the maximum
    slack is exactly d.
    """
    terms = []
    nxt = graph.n
    for v in range(graph.n):
        d = graph.degrees[v]
        if d == 0:
            terms.append(())
        elif d == 1:
            j = graph.neighbors[v][0]
            pair = (min(v, j), max(v, j))
            terms.append(((1, pair),))
        else:
            k_big = int(math.log2(d))
            slots = [(1 << k, (nxt + k,)) for k in range(k_big)]
            slots.append((d + 1 - (1 << k_big), (nxt + k_big,)))
            nxt += k_big + 1
            terms.append(tuple(slots))
    return SurplusLayout(graph.n, nxt - graph.n, tuple(terms))


def _layout_for(graph, method, layout):
    if layout is not None:
        return layout
    if method == "dinneen":
        return dinneen_layout(graph)
    return pan_layout(graph)


def _penalty_value(graph, bits, layout):
    """sum_i (1 - t_i + S_i)^2 evaluated bit-for-bit from the definition."""
    total = 0.0
    for v in range(graph.n):
        t = int(bits[v]) + sum(int(bits[j]) for j in graph.neighbors[v])
        slack = 0
        for coeff, support in layout.terms[v]:
            prod = 1
            for q in support:
                prod *= int(bits[q])
            slack += coeff * prod
        total += (1 - t + slack) ** 2
    return total


def cost_dinneen(graph, z, big_p=DEFAULT_PENALTY, layout=None):
    """Quadratic penalty cost on the extended register, lower is better.

    cost(z) = sum_i x_i + P * sum_i (1 - t_i + S_i)^2 where t_i counts
    selections in the closed neighborhood of i and S_i is the surplus slack.
    Minimum value over z equals the domination number when P > 1.
    """
    big_p = check_penalty(big_p, "big_p")
    layout = _layout_for(graph, "dinneen", layout)
    bits = as_bits(z, layout.n_qubits)
    return float(np.sum(bits[:graph.n])) + big_p * _penalty_value(graph, bits, layout)


def cost_pan(graph, z, big_p=DEFAULT_PENALTY, layout=None):
    """Same shape as `cost_dinneen` but with the degree-clipped surplus layout."""
    big_p = check_penalty(big_p, "big_p")
    layout = _layout_for(graph, "pan", layout)
    bits = as_bits(z, layout.n_qubits)
    return float(np.sum(bits[:graph.n])) + big_p * _penalty_value(graph, bits, layout)


def _poly_mul(p, q):
    out = {}
    for sup_a, ca in p.items():
        for sup_b, cb in q.items():
            key = tuple(sorted(set(sup_a) | set(sup_b)))
            out[key] = out.get(key, 0.0) + ca * cb
    return out


def quadratic_form(graph, method, big_p=DEFAULT_PENALTY, layout=None):
    """Expand a penalty cost into monomial form over register bits.

    Returns a dict mapping supports ``()``, ``(i,)`` or ``(i, j)`` (i < j) to
    coefficients; bits are idempotent, so squares collapse and the result is
    at most quadratic.  Zero coefficients are dropped.
    """
    if method not in ("dinneen", "pan"):
        raise ValueError(f"quadratic form is defined for dinneen/pan, got {method!r}")
    big_p = check_penalty(big_p, "big_p")
    layout = _layout_for(graph, method, layout)
    form = {}

    def add(sup, c):
        form[sup] = form.get(sup, 0.0) + c

    for v in range(graph.n):
        add((v,), 1.0)
    for v in range(graph.n):
        affine = {(): 1.0, (v,): -1.0}
        for j in graph.neighbors[v]:
            affine[(j,)] = affine.get((j,), 0.0) - 1.0
        for coeff, support in layout.terms[v]:
            key = tuple(sorted(support))
            affine[key] = affine.get(key, 0.0) + float(coeff)
        for sup, c in _poly_mul(affine, affine).items():
            add(sup, big_p * c)
    return {sup: c for sup, c in sorted(form.items(), key=lambda kv: (len(kv[0]), kv[0]))
            if abs(c) > 1e-12}


@dataclass(frozen=True)
class QubitCounts:
    """Register widths the four encodings need on a given graph.

    `guerrero_bound` is the published 2n requirement of the score-counter
    construction; its score itself only needs the n vertex bits, which is
    what the simulator uses.
    """

    ours: int
    dinneen: int
    pan: int
    guerrero_bound: int


def qubit_counts(graph):
    return QubitCounts(
        ours=graph.n,
        dinneen=dinneen_layout(graph).n_qubits,
        pan=pan_layout(graph).n_qubits,
        guerrero_bound=2 * graph.n,
    )


def method_qubits(graph, method):
    """Width of the register actually simulated for `method`."""
    if method == "ours" or method == "guerrero":
        return graph.n
    if method == "dinneen":
        return dinneen_layout(graph).n_qubits
    if method == "pan":
        return pan_layout(graph).n_qubits
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def _surplus_columns(ids, layout):
    """Slack value S_i per assignment for every vertex: shape (len(ids), n)."""
    out = np.zeros((ids.size, layout.n), dtype=np.float64)
    for v, slots in enumerate(layout.terms):
        for coeff, support in slots:
            col = np.ones(ids.size, dtype=np.float64)
            for q in support:
                col *= (ids >> np.uint64(q)) & np.uint64(1)
            out[:, v] += coeff * col
    return out


def cost_table(graph, method, lam=DEFAULT_LAM, big_p=DEFAULT_PENALTY,
               layout=None, chunk=1 << 20):
    """Vector of cost values over every register assignment, lower is better.

    Entry b holds the cost of the assignment whose register bit i is bit i of
    b.  For ``guerrero`` the table holds the *negated* score.  Built directly
    from the cost definitions (not from any operator expansion), so it doubles
    as an independent oracle for the Hamiltonian builders.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if method in ("ours", "guerrero"):
        dom = domination_counts(graph, chunk=chunk).astype(np.float64)
        ids = np.arange(1 << graph.n, dtype=np.uint32)
        size = np.bitwise_count(ids).astype(np.float64)
        weight = check_penalty(lam, "lam") if method == "ours" else 1.0
        return -(graph.n - size) - weight * dom

    big_p = check_penalty(big_p, "big_p")
    layout = _layout_for(graph, method, layout)
    nq = layout.n_qubits
    total = 1 << nq
    closed = [np.array(graph.closed_neighborhood(v), dtype=np.uint64) for v in range(graph.n)]
    out = np.empty(total, dtype=np.float64)
    for start in range(0, total, chunk):
        ids = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        x_count = np.bitwise_count(ids & np.uint64((1 << graph.n) - 1)).astype(np.float64)
        slack = _surplus_columns(ids, layout)
        pen = np.zeros(ids.size, dtype=np.float64)
        for v in range(graph.n):
            t = np.zeros(ids.size, dtype=np.float64)
            for q in closed[v]:
                t += (ids >> q) & np.uint64(1)
            pen += (1.0 - t + slack[:, v]) ** 2
        out[start:start + ids.size] = x_count + big_p * pen
    return out


def argmin_indices(table):
    """All indices attaining the minimum of a cost table."""
    table = np.asarray(table)
    return np.flatnonzero(table == table.min())
