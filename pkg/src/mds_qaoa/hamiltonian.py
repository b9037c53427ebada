"""Diagonal Hamiltonians as sums of Pauli-Z products.

A term ``c * Z_{q1} Z_{q2} ...`` acts on basis state b as ``c * (-1)^parity``
where the parity is over the term's support bits of b.  Under the mapping
``x_q = (1 - Z_q) / 2`` every classical cost in :mod:`mds_qaoa.encodings`
becomes such a sum; the builders here perform that expansion and the dense
diagonal is the bridge back for cross-checking.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import encodings

COEFF_EPS = 1e-12


@dataclass(frozen=True)
class ZTerm:
    """One product of Z operators with a real coefficient.

    `support` is the sorted tuple of qubit indices; the empty tuple is the
    identity (constant) term.
    """

    coeff: float
    support: tuple = ()

    def __post_init__(self):
        sup = tuple(int(q) for q in self.support)
        if any(q < 0 for q in sup):
            raise ValueError(f"negative qubit index in {sup}")
        if len(set(sup)) != len(sup):
            raise ValueError(f"repeated qubit index in {sup}")
        object.__setattr__(self, "coeff", float(self.coeff))
        object.__setattr__(self, "support", tuple(sorted(sup)))


class ZSum:
    """Canonical sum of `ZTerm`s.

    Terms are merged by support, coefficients below ``COEFF_EPS`` in
    magnitude are dropped, and the order is fixed (by support size, then
    lexicographic), so equal operators have equal term lists.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        merged = {}
        for t in terms:
            if not isinstance(t, ZTerm):
                t = ZTerm(t[0], t[1])
            merged[t.support] = merged.get(t.support, 0.0) + t.coeff
        self.terms = tuple(
            ZTerm(c, sup)
            for sup, c in sorted(merged.items(), key=lambda kv: (len(kv[0]), kv[0]))
            if abs(c) > COEFF_EPS
        )

    @classmethod
    def from_dict(cls, mapping):
        return cls((c, sup) for sup, c in mapping.items())

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __eq__(self, other):
        return isinstance(other, ZSum) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"ZSum({len(self.terms)} terms)"

    @property
    def constant(self):
        for t in self.terms:
            if not t.support:
                return t.coeff
        return 0.0

    def without_constant(self):
        """The same operator minus its identity term (a global phase in a circuit)."""
        return ZSum(t for t in self.terms if t.support)

    def max_qubit(self):
        """Largest qubit index touched, or -1 for a pure constant."""
        best = -1
        for t in self.terms:
            if t.support:
                best = max(best, t.support[-1])
        return best


def _domination_expansion(graph, weight):
    """Z expansion of ``-sum_i (1 - x_i) - weight * sum_i [i dominated]``.

    Each subset S of a closed neighborhood of size c contributes
    ``weight / 2**c`` on Z_S; term count therefore grows as ``2**(d+1)``
    per vertex of degree d.
    """
    acc = {(): -graph.n / 2.0 - weight * graph.n}
    for v in range(graph.n):
        acc[(v,)] = acc.get((v,), 0.0) - 0.5
    for v in range(graph.n):
        closed = graph.closed_neighborhood(v)
        c = len(closed)
        w = weight / (1 << c)
        for mask in range(1 << c):
            sup = tuple(closed[k] for k in range(c) if (mask >> k) & 1)
            acc[sup] = acc.get(sup, 0.0) + w
    return ZSum.from_dict(acc)


def build_ours(graph, lam=2.0):
    """Hamiltonian whose diagonal equals `encodings.cost_ours` on n qubits."""
    lam = float(lam)
    if not lam > 1.0:
        raise ValueError(f"lam must be > 1, got {lam}")
    return _domination_expansion(graph, lam)


def build_guerrero(graph):
    """Hamiltonian whose diagonal equals the negated per-vertex score.

    The negated score coincides with the surplus-free cost at unit weight,
    so the expansion is shared.
    """
    return _domination_expansion(graph, 1.0)


def build_qubo(form, n_qubits=None):
    """Z expansion of a monomial form over bits (see `encodings.quadratic_form`).

    Only supports of size <= 2 are accepted; anything higher is not a QUBO
    and is rejected.  `n_qubits` (when given) bounds the allowed indices.
    """
    acc = {}

    def add(sup, c):
        acc[sup] = acc.get(sup, 0.0) + c

    for sup, c in form.items():
        sup = tuple(sorted(int(q) for q in sup))
        c = float(c)
        if n_qubits is not None and any(q >= n_qubits for q in sup):
            raise ValueError(f"support {sup} exceeds register of {n_qubits} qubits")
        if len(sup) == 0:
            add((), c)
        elif len(sup) == 1:
            add((), c / 2.0)
            add(sup, -c / 2.0)
        elif len(sup) == 2:
            i, j = sup
            add((), c / 4.0)
            add((i,), -c / 4.0)
            add((j,), -c / 4.0)
            add((i, j), c / 4.0)
        else:
            raise ValueError(f"monomial on {len(sup)} bits is not quadratic: {sup}")
    return ZSum.from_dict(acc)


def build_dinneen(graph, big_p=2.0):
    """Hamiltonian on the extended register matching `encodings.cost_dinneen`."""
    layout = encodings.dinneen_layout(graph)
    form = encodings.quadratic_form(graph, "dinneen", big_p, layout=layout)
    return build_qubo(form, n_qubits=layout.n_qubits)


def build_pan(graph, big_p=2.0):
    """Hamiltonian on the extended register matching `encodings.cost_pan`."""
    layout = encodings.pan_layout(graph)
    form = encodings.quadratic_form(graph, "pan", big_p, layout=layout)
    return build_qubo(form, n_qubits=layout.n_qubits)


def build_method(graph, method, lam=2.0, big_p=2.0):
    """Dispatch to the builder for one of the four encodings."""
    if method == "ours":
        return build_ours(graph, lam)
    if method == "dinneen":
        return build_dinneen(graph, big_p)
    if method == "pan":
        return build_pan(graph, big_p)
    if method == "guerrero":
        return build_guerrero(graph)
    raise ValueError(f"unknown method {method!r}; expected one of {encodings.METHODS}")


def to_dense(h, n):
    """Diagonal of `h` over the 2**n basis states as a float64 vector."""
    n = int(n)
    if n < 1:
        raise ValueError(f"need at least one qubit, got {n}")
    if h.max_qubit() >= n:
        raise ValueError(f"operator touches qubit {h.max_qubit()} but register has {n}")
    ids = np.arange(1 << n, dtype=np.uint64)
    diag = np.zeros(ids.size, dtype=np.float64)
    for t in h.terms:
        if not t.support:
            diag += t.coeff
            continue
        mask = np.uint64(sum(1 << q for q in t.support))
        parity = (np.bitwise_count(ids & mask) & 1).astype(np.float64)
        diag += t.coeff * (1.0 - 2.0 * parity)
    return diag


@dataclass(frozen=True)
class GateEstimate:
    """Two-qubit/rotation budget for one phase layer of a circuit.

    Each non-identity term of support size l compiles to a single Z rotation
    sandwiched by 2(l - 1) CNOTs; identity terms are a global phase and cost
    nothing.
    """

    rz: int
    cnot: int


def gate_estimate(h):
    rz = 0
    cnot = 0
    for t in h.terms:
        if not t.support:
            continue
        rz += 1
        cnot += 2 * (len(t.support) - 1)
    return GateEstimate(rz=rz, cnot=cnot)


def zsum_to_text(h):
    """Serialise as one term per line: coefficient then support indices."""
    lines = []
    for t in h.terms:
        parts = [repr(t.coeff)] + [str(q) for q in t.support]
        lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


def zsum_from_text(text):
    """Inverse of `zsum_to_text`; blank lines and '#' comments are skipped."""
    terms = []
    for ln, raw in enumerate(str(text).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            coeff = float(parts[0])
            support = tuple(int(p) for p in parts[1:])
        except ValueError as exc:
            raise ValueError(f"line {ln}: cannot parse {raw!r}") from exc
        terms.append((coeff, support))
    return ZSum(terms)
