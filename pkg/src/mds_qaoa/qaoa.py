"""Variational loop: ansatz assembly, bounded Nelder-Mead search, run records.

A circuit for one (graph, method) pair alternates a diagonal phase layer with
a transverse mixer, starting from the uniform superposition.  In ``standard``
mode each layer carries one gamma in [0, 2*pi] and one beta in [0, pi]; in
``multiangle`` mode every non-identity Hamiltonian term gets its own gamma
and every qubit its own beta, with the same bounds.  Tying the multiangle
parameters reproduces the standard circuit exactly, which is both a test
hook and a good initializer.

The phase layer drops the Hamiltonian's identity term (a global phase, as a
compiled circuit would); expectations always use the full diagonal.
"""
from __future__ import annotations

from dataclasses import dataclass, asdict, replace
from functools import lru_cache
import time

import numpy as np
import scipy.optimize

from . import encodings, hamiltonian
from .graphs import Graph, bits_to_index, brute_force_mds
from . import simulator
from .simulator import StateVector, _apply_mixer_array

MODES = ("standard", "multiangle")
GAMMA_MAX = 2.0 * np.pi
BETA_MAX = np.pi

ALGORITHMS = ("nelder-mead", "grid+nelder-mead")

# Per-term parity signs are precomputed as a dense (2^n, terms) matrix when it
# fits; past this element count the multiangle phase falls back to per-term
# index updates (relevant only for wide surplus registers).
_SIGN_MATRIX_MAX_ELEMS = 1 << 22

_GRID_GAMMAS = 12
_GRID_BETAS = 8


@dataclass(frozen=True)
class AnsatzConfig:
    """Which circuit to build: encoding, depth, parameterization, penalties."""

    method: str = "ours"
    layers: int = 1
    mode: str = "standard"
    lam: float = 2.0
    big_p: float = 2.0

    def __post_init__(self):
        if self.method not in encodings.METHODS:
            raise ValueError(f"unknown method {self.method!r}; "
                             f"expected one of {encodings.METHODS}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        layers = int(self.layers)
        if layers < 1:
            raise ValueError(f"layer count must be >= 1, got {self.layers}")
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "lam", encodings.check_penalty(self.lam, "lam"))
        object.__setattr__(self, "big_p", encodings.check_penalty(self.big_p, "big_p"))


@dataclass(frozen=True)
class OptimizerConfig:
    """Restarted, bounded, derivative-free search settings."""

    algorithm: str = "nelder-mead"
    restarts: int = 10
    max_iters: int = 1000
    ftol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; "
                             f"expected one of {ALGORITHMS}")
        if int(self.restarts) < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if int(self.max_iters) < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not float(self.ftol) > 0:
            raise ValueError(f"ftol must be positive, got {self.ftol}")
        if int(self.seed) < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        object.__setattr__(self, "restarts", int(self.restarts))
        object.__setattr__(self, "max_iters", int(self.max_iters))
        object.__setattr__(self, "ftol", float(self.ftol))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass
class ParameterSet:
    """Angles for every layer.

    Standard mode: `gammas` and `betas` are 1-D of length p.  Multiangle
    mode: `gammas` has one row per layer with one column per non-identity
    Hamiltonian term (canonical term order) and `betas` one column per qubit.
    """

    gammas: np.ndarray
    betas: np.ndarray

    def __post_init__(self):
        self.gammas = np.asarray(self.gammas, dtype=np.float64)
        self.betas = np.asarray(self.betas, dtype=np.float64)
        if self.gammas.ndim != self.betas.ndim or self.gammas.ndim not in (1, 2):
            raise ValueError(f"gamma/beta arrays must both be 1-D or both 2-D, "
                             f"got shapes {self.gammas.shape} and {self.betas.shape}")
        if self.gammas.shape[0] != self.betas.shape[0]:
            raise ValueError(f"layer counts differ: {self.gammas.shape[0]} gammas "
                             f"vs {self.betas.shape[0]} betas")

    @property
    def mode(self):
        return "standard" if self.gammas.ndim == 1 else "multiangle"

    @property
    def layers(self):
        return self.gammas.shape[0]

    def flat(self):
        return np.concatenate([self.gammas.ravel(), self.betas.ravel()])

    def to_json_dict(self):
        return {"gammas": self.gammas.tolist(), "betas": self.betas.tolist()}

    @classmethod
    def from_json_dict(cls, d):
        return cls(np.asarray(d["gammas"]), np.asarray(d["betas"]))


@lru_cache(maxsize=64)
def _operator_bundle(graph, method, lam, big_p):
    """Heavy per-(graph, method) pieces, shared across layer counts and modes."""
    h = hamiltonian.build_method(graph, method, lam=lam, big_p=big_p)
    nq = encodings.method_qubits(graph, method)
    diag = hamiltonian.to_dense(h, nq)
    circuit = h.without_constant()
    phase_diag = hamiltonian.to_dense(circuit, nq)
    coeffs = np.array([t.coeff for t in circuit.terms], dtype=np.float64)
    for arr in (diag, phase_diag, coeffs):
        arr.flags.writeable = False
    return h, nq, diag, circuit, phase_diag, coeffs


@lru_cache(maxsize=4)
def _parity_structure(graph, method, lam, big_p):
    """Per-term parity data for multiangle phase layers."""
    _, nq, _, circuit, _, _ = _operator_bundle(graph, method, lam, big_p)
    ids = np.arange(1 << nq, dtype=np.uint64)
    n_elems = ids.size * max(len(circuit), 1)
    if n_elems <= _SIGN_MATRIX_MAX_ELEMS:
        signs = np.empty((ids.size, len(circuit)), dtype=np.float64)
        for col, t in enumerate(circuit.terms):
            mask = np.uint64(sum(1 << q for q in t.support))
            parity = (np.bitwise_count(ids & mask) & 1).astype(np.float64)
            signs[:, col] = 1.0 - 2.0 * parity
        signs.flags.writeable = False
        return "matrix", signs
    flags = []
    for t in circuit.terms:
        mask = np.uint64(sum(1 << q for q in t.support))
        odd = (np.bitwise_count(ids & mask) & 1).astype(bool)
        odd.flags.writeable = False
        flags.append(odd)
    return "index", tuple(flags)


class Ansatz:
    """A (graph, config) pair bound to its operators and fast evaluators."""

    def __init__(self, graph, config):
        self.graph = graph
        self.config = config
        bundle = _operator_bundle(graph, config.method, config.lam, config.big_p)
        self.h, self.n_qubits, self.diag, self.circuit, self.phase_diag, self._coeffs = bundle
        self.n_terms = len(self.circuit)
        self._plus_amp = simulator.plus_amplitude(self.n_qubits)
        self._parity_kind = None
        self._parity = None
        if config.mode == "multiangle":
            self._parity_kind, self._parity = _parity_structure(
                graph, config.method, config.lam, config.big_p)

    # ---- parameter bookkeeping -------------------------------------------

    @property
    def layers(self):
        return self.config.layers

    def _widths(self):
        if self.config.mode == "standard":
            return 1, 1
        return self.n_terms, self.n_qubits

    def n_params(self):
        gw, bw = self._widths()
        return self.layers * (gw + bw)

    def check_params(self, params):
        gw, bw = self._widths()
        p = self.layers
        gshape = (p,) if self.config.mode == "standard" else (p, gw)
        bshape = (p,) if self.config.mode == "standard" else (p, bw)
        if params.gammas.shape != gshape or params.betas.shape != bshape:
            raise ValueError(
                f"parameter shapes {params.gammas.shape}/{params.betas.shape} do not "
                f"match {self.config.mode} mode with p={p}, {self.n_terms} terms, "
                f"{self.n_qubits} qubits")
        return params

    def parameter_set(self, flat):
        flat = np.asarray(flat, dtype=np.float64)
        gw, bw = self._widths()
        p = self.layers
        if flat.shape != (p * (gw + bw),):
            raise ValueError(f"expected {p * (gw + bw)} packed parameters, "
                             f"got shape {flat.shape}")
        if self.config.mode == "standard":
            return ParameterSet(flat[:p].copy(), flat[p:].copy())
        split = p * gw
        return ParameterSet(flat[:split].reshape(p, gw).copy(),
                            flat[split:].reshape(p, bw).copy())

    def bounds(self):
        gw, bw = self._widths()
        p = self.layers
        lo = np.zeros(p * (gw + bw))
        hi = np.concatenate([np.full(p * gw, GAMMA_MAX), np.full(p * bw, BETA_MAX)])
        return scipy.optimize.Bounds(lo, hi)

    def random_parameters(self, rng):
        gw, bw = self._widths()
        p = self.layers
        gshape = (p,) if self.config.mode == "standard" else (p, gw)
        bshape = (p,) if self.config.mode == "standard" else (p, bw)
        return ParameterSet(rng.uniform(0.0, GAMMA_MAX, size=gshape),
                            rng.uniform(0.0, BETA_MAX, size=bshape))

    def zero_parameters(self):
        gw, bw = self._widths()
        p = self.layers
        if self.config.mode == "standard":
            return ParameterSet(np.zeros(p), np.zeros(p))
        return ParameterSet(np.zeros((p, gw)), np.zeros((p, bw)))

    def pad_parameters(self, params, extra_layers=None):
        """Append identity layers (all-zero angles) to reach this ansatz's depth."""
        need = self.layers - params.layers
        if need < 0:
            raise ValueError(f"cannot pad {params.layers} layers down to {self.layers}")
        if params.mode != self.config.mode:
            raise ValueError(f"cannot pad {params.mode} parameters into "
                             f"{self.config.mode} mode")
        if need == 0:
            return self.check_params(params)
        if params.mode == "standard":
            return ParameterSet(np.concatenate([params.gammas, np.zeros(need)]),
                                np.concatenate([params.betas, np.zeros(need)]))
        gw, bw = self._widths()
        return self.check_params(ParameterSet(
            np.vstack([params.gammas, np.zeros((need, gw))]),
            np.vstack([params.betas, np.zeros((need, bw))])))

    def tie_parameters(self, standard_params):
        """Lift a standard-mode solution into multiangle space (exact equivalent)."""
        if self.config.mode != "multiangle":
            raise ValueError("tying is only meaningful for multiangle ansatzes")
        if standard_params.mode != "standard":
            raise ValueError("tie_parameters expects standard-mode input")
        gw, bw = self._widths()
        return self.check_params(ParameterSet(
            np.outer(standard_params.gammas, np.ones(gw)),
            np.outer(standard_params.betas, np.ones(bw))))

    # ---- evaluation -------------------------------------------------------

    def _phase_vector(self, gamma_k):
        if self.config.mode == "standard":
            return float(gamma_k) * self.phase_diag
        weights = np.asarray(gamma_k, dtype=np.float64) * self._coeffs
        if self._parity_kind == "matrix":
            return self._parity @ weights
        phi = np.full(1 << self.n_qubits, weights.sum())
        for w, odd in zip(weights, self._parity):
            phi[odd] -= 2.0 * w
        return phi

    def state_array(self, params):
        """Final amplitudes for a ParameterSet (bare array, hot path)."""
        amps = np.full(1 << self.n_qubits, self._plus_amp, dtype=np.complex128)
        std = self.config.mode == "standard"
        for k in range(self.layers):
            phi = self._phase_vector(params.gammas[k])
            amps = amps * np.exp(-1j * phi)
            beta_k = float(params.betas[k]) if std else params.betas[k]
            amps = _apply_mixer_array(amps, self.n_qubits, beta_k)
        return amps

    def expectation_of(self, amps):
        probs = amps.real ** 2 + amps.imag ** 2
        return float(np.sum(probs * self.diag))

    def expectation_flat(self, flat):
        return self.expectation_of(self.state_array(self.parameter_set(flat)))

    def evaluate(self, params):
        """(F_p, final StateVector) for explicit parameters."""
        self.check_params(params)
        amps = self.state_array(params)
        return self.expectation_of(amps), StateVector(self.n_qubits, amps)


def evaluate(graph, config, params):
    """Expectation value and final state of the configured circuit."""
    return Ansatz(graph, config).evaluate(params)


# ---- success targets ------------------------------------------------------


@dataclass(frozen=True)
class TargetInfo:
    """Which basis states count as success for one (graph, method) pair.

    For the n-qubit encodings the targets are the minimum dominating sets
    themselves.  For the surplus-register encodings they are the exact ground
    states of the extended cost (optimal vertex bits with slack balancing the
    penalty to zero); `marginal_indices` additionally lists every register
    state whose vertex projection is optimal, regardless of surplus bits.
    `ground_ties` counts ground states that are not counted as success
    (nonzero only for the score encoding, whose maximum can be tied by
    infeasible assignments).
    """

    method: str
    mds_size: int
    optima: tuple
    indices: tuple
    marginal_indices: tuple = None
    ground_ties: int = 0


@lru_cache(maxsize=32)
def success_targets(graph, method, lam=2.0, big_p=2.0):
    size, optima = brute_force_mds(graph)
    optima = tuple(sorted(optima))
    opt_idx = np.array(sorted(bits_to_index(o) for o in optima), dtype=np.int64)
    if method == "ours":
        return TargetInfo(method, size, optima, tuple(int(i) for i in opt_idx))
    if method == "guerrero":
        table = encodings.cost_table(graph, "guerrero")
        ground = encodings.argmin_indices(table)
        ties = int(len(ground) - len(opt_idx))
        return TargetInfo(method, size, optima, tuple(int(i) for i in opt_idx),
                          ground_ties=ties)
    if method in ("dinneen", "pan"):
        table = encodings.cost_table(graph, method, big_p=big_p)
        ground = encodings.argmin_indices(table)
        mask = (1 << graph.n) - 1
        exact = ground[np.isin(ground & mask, opt_idx)]
        ids = np.arange(table.size, dtype=np.int64)
        marginal = ids[np.isin(ids & mask, opt_idx)]
        ties = int(len(ground) - len(exact))
        return TargetInfo(method, size, optima, tuple(int(i) for i in exact),
                          marginal_indices=tuple(int(i) for i in marginal),
                          ground_ties=ties)
    raise ValueError(f"unknown method {method!r}")


# ---- run records and optimization ----------------------------------------


@dataclass
class RunRecord:
    """Everything needed to audit or reproduce one optimized circuit."""

    graph: Graph
    config: AnsatzConfig
    optimizer: OptimizerConfig
    params: ParameterSet
    expectation: float
    success_probability: float
    marginal_success: float
    mds_size: int
    optima_count: int
    target_count: int
    ground_ties: int
    n_qubits: int
    n_terms: int
    rz_per_layer: int
    cnot_per_layer: int
    evaluations: int
    restarts_run: int
    trace: tuple
    wall_time: float
    instance: dict = None

    def to_json_dict(self):
        return {
            "graph": self.graph.to_dict(),
            "instance": self.instance,
            "config": asdict(self.config),
            "optimizer": asdict(self.optimizer),
            "params": self.params.to_json_dict(),
            "expectation": self.expectation,
            "success_probability": self.success_probability,
            "marginal_success": self.marginal_success,
            "mds_size": self.mds_size,
            "optima_count": self.optima_count,
            "target_count": self.target_count,
            "ground_ties": self.ground_ties,
            "n_qubits": self.n_qubits,
            "n_terms": self.n_terms,
            "rz_per_layer": self.rz_per_layer,
            "cnot_per_layer": self.cnot_per_layer,
            "evaluations": self.evaluations,
            "restarts_run": self.restarts_run,
            "trace": list(self.trace) if self.trace is not None else None,
            "wall_time": self.wall_time,
        }

    @classmethod
    def from_json_dict(cls, d):
        return cls(
            graph=Graph(d["graph"]["n"], tuple(tuple(e) for e in d["graph"]["edges"])),
            config=AnsatzConfig(**d["config"]),
            optimizer=OptimizerConfig(**d["optimizer"]),
            params=ParameterSet.from_json_dict(d["params"]),
            expectation=d["expectation"],
            success_probability=d["success_probability"],
            marginal_success=d["marginal_success"],
            mds_size=d["mds_size"],
            optima_count=d["optima_count"],
            target_count=d["target_count"],
            ground_ties=d["ground_ties"],
            n_qubits=d["n_qubits"],
            n_terms=d["n_terms"],
            rz_per_layer=d["rz_per_layer"],
            cnot_per_layer=d["cnot_per_layer"],
            evaluations=d["evaluations"],
            restarts_run=d["restarts_run"],
            trace=tuple(d["trace"]) if d.get("trace") is not None else None,
            wall_time=d["wall_time"],
            instance=d.get("instance"),
        )


def success_probability(record):
    """Recompute P_suc for a record from its stored parameters."""
    ansatz = Ansatz(record.graph, record.config)
    amps = ansatz.state_array(ansatz.check_params(record.params))
    targets = success_targets(record.graph, record.config.method,
                              record.config.lam, record.config.big_p)
    probs = amps.real ** 2 + amps.imag ** 2
    return float(np.sum(probs[np.asarray(targets.indices, dtype=np.int64)]))


def _grid_start(ansatz):
    """Coarse first-layer scan (tied angles, later layers zero) as a start point."""
    best_f = np.inf
    best = None
    for g in np.linspace(0.0, GAMMA_MAX, _GRID_GAMMAS, endpoint=False):
        for b in np.linspace(0.0, BETA_MAX, _GRID_BETAS, endpoint=False):
            params = ansatz.zero_parameters()
            if ansatz.config.mode == "standard":
                params.gammas[0] = g
                params.betas[0] = b
            else:
                params.gammas[0, :] = g
                params.betas[0, :] = b
            f = ansatz.expectation_of(ansatz.state_array(params))
            if f < best_f:
                best_f, best = f, params
    return best


def optimize(graph, config, opt=None, *, warm_start=None, tied_start=None,
             keep_trace=True, instance=None, targets=None):
    """Best-of-restarts bounded Nelder-Mead minimisation of F_p.

    Starting points: `restarts` uniform draws within the angle bounds (seeded
    from `opt.seed`, the layer count, and the restart index), plus the padded
    p-1 solution when `warm_start` is given, plus the tied lift of a
    standard-mode solution when `tied_start` is given (multiangle only), plus
    a coarse grid scan when the algorithm asks for one.  The winner is the
    restart with the lowest F; restarts within `ftol` of that value count as
    ties and the tie goes to the highest success probability.  Deterministic
    for fixed inputs; wall time is the only field that varies between repeats.
    """
    opt = opt if opt is not None else OptimizerConfig()
    t_start = time.perf_counter()
    ansatz = Ansatz(graph, config)
    if targets is None:
        targets = success_targets(graph, config.method, config.lam, config.big_p)

    starts = []
    for k in range(opt.restarts):
        rng = np.random.default_rng(
            np.random.SeedSequence([opt.seed, config.layers, k]))
        starts.append(ansatz.random_parameters(rng))
    if opt.algorithm == "grid+nelder-mead":
        starts.insert(0, _grid_start(ansatz))
    if warm_start is not None:
        starts.append(ansatz.pad_parameters(warm_start))
    if tied_start is not None:
        starts.append(ansatz.tie_parameters(tied_start))

    bounds = ansatz.bounds()
    endpoints = []
    total_evals = 0
    for params0 in starts:
        run_best = [np.inf]
        trace = [] if keep_trace else None

        def fun(x):
            f = ansatz.expectation_flat(x)
            if f < run_best[0]:
                run_best[0] = f
            return f

        def on_iteration(_xk):
            if trace is not None:
                trace.append(run_best[0])

        res = scipy.optimize.minimize(
            fun, params0.flat(), method="Nelder-Mead", bounds=bounds,
            callback=on_iteration,
            options={"maxiter": opt.max_iters, "fatol": opt.ftol,
                     "xatol": 1e-4, "adaptive": True})
        total_evals += int(res.nfev)
        endpoints.append((float(res.fun), np.array(res.x),
                          tuple(trace) if keep_trace else None))
    best_f = min(e[0] for e in endpoints)
    if not np.isfinite(best_f):
        raise RuntimeError(f"optimization produced no finite value "
                           f"(best={best_f!r}); check the Hamiltonian inputs")

    # Restarts landing within ftol of the best value are equally good as far
    # as the optimizer can tell; among those, keep the one whose state puts
    # the most probability on the success targets.
    target_idx = np.asarray(targets.indices, dtype=np.int64)
    chosen = None
    chosen_p = -1.0
    for f_val, x, tr in endpoints:
        if f_val <= best_f + opt.ftol:
            amps = ansatz.state_array(ansatz.parameter_set(x))
            p_val = float(np.sum((amps.real ** 2 + amps.imag ** 2)[target_idx]))
            if p_val > chosen_p:
                chosen = (x, tr, amps)
                chosen_p = p_val
    best_x, best_trace, amps = chosen

    params = ansatz.parameter_set(best_x)
    expectation_value = ansatz.expectation_of(amps)
    probs = amps.real ** 2 + amps.imag ** 2
    p_suc = chosen_p
    marginal = None
    if targets.marginal_indices is not None:
        marginal = float(np.sum(probs[np.asarray(targets.marginal_indices,
                                                 dtype=np.int64)]))
    gates = hamiltonian.gate_estimate(ansatz.circuit)
    return RunRecord(
        graph=graph,
        config=config,
        optimizer=opt,
        params=params,
        expectation=expectation_value,
        success_probability=p_suc,
        marginal_success=marginal,
        mds_size=targets.mds_size,
        optima_count=len(targets.optima),
        target_count=len(targets.indices),
        ground_ties=targets.ground_ties,
        n_qubits=ansatz.n_qubits,
        n_terms=ansatz.n_terms,
        rz_per_layer=gates.rz,
        cnot_per_layer=gates.cnot,
        evaluations=total_evals,
        restarts_run=len(starts),
        trace=best_trace,
        wall_time=time.perf_counter() - t_start,
        instance=instance,
    )


def optimize_ladder(graph, config, opt=None, *, layers=None, tied_records=None,
                    keep_trace=True, instance=None):
    """Optimize at increasing depth, warm-starting each p from the p-1 winner.

    `layers` defaults to 1..config.layers.  For multiangle runs,
    `tied_records` may map each depth to a standard-mode RunRecord whose
    solution is lifted (tied) into the start pool, guaranteeing the
    multiangle result is never worse than the standard one.
    """
    opt = opt if opt is not None else OptimizerConfig()
    depths = list(layers) if layers is not None else list(range(1, config.layers + 1))
    if any(int(p) < 1 for p in depths) or sorted(depths) != depths:
        raise ValueError(f"layer schedule must be ascending positive ints, got {depths}")
    targets = success_targets(graph, config.method, config.lam, config.big_p)
    records = []
    prev = None
    for p in depths:
        cfg = replace(config, layers=int(p))
        tied = None
        if tied_records is not None and int(p) in tied_records:
            tied = tied_records[int(p)].params
        rec = optimize(graph, cfg, opt,
                       warm_start=prev.params if prev is not None else None,
                       tied_start=tied, keep_trace=keep_trace,
                       instance=instance, targets=targets)
        records.append(rec)
        prev = rec
    return records


def solve_instance(graph, config, opt=None, *, keep_trace=True, instance=None,
                   standard_opt=None):
    """Ladder up to config.layers; multiangle runs get a standard pre-pass.

    Returns the ladder of records in the requested mode.  The standard
    pre-pass (multiangle only) supplies tied starting points, so multiangle
    results are bounded above by the standard ones at every depth.
    """
    if config.mode == "multiangle":
        pre_cfg = replace(config, mode="standard")
        pre_opt = standard_opt if standard_opt is not None else opt
        std = optimize_ladder(graph, pre_cfg, pre_opt, keep_trace=False,
                              instance=instance)
        tied = {r.config.layers: r for r in std}
        return optimize_ladder(graph, config, opt, tied_records=tied,
                               keep_trace=keep_trace, instance=instance)
    return optimize_ladder(graph, config, opt, keep_trace=keep_trace,
                           instance=instance)
