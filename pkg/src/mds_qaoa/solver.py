"""High-level estimator interface to the variational dominating-set solver.

`DominatingSetQAOA` follows the familiar fit/predict pattern: `fit` optimizes
circuit angles for a graph, `predict` samples the optimized state and returns
the best measured vertex subset, and `score` reports the probability of
landing on a true minimum dominating set.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from . import qaoa, simulator
from .encodings import method_qubits
from .qaoa import AnsatzConfig, OptimizerConfig
from .graphs import is_dominating
from .validation import as_graph

_SAMPLE_STREAM = 0x5A17


class DominatingSetQAOA(BaseEstimator):
    """Approximate minimum dominating sets with a variational circuit.

    Parameters
    ----------
    method : str, default="ours"
        Cost encoding: "ours", "dinneen", "pan", or "guerrero".
    layers : int, default=3
        Circuit depth p.
    mode : str, default="standard"
        "standard" shares one angle pair per layer; "multiangle" gives every
        operator term and mixer qubit its own angle.
    lam : float, default=2.0
        Domination penalty weight for the "ours" cost (must exceed 1).
    penalty : float, default=2.0
        Constraint weight P for the two quadratic encodings.
    algorithm : str, default="nelder-mead"
        "nelder-mead" or "grid+nelder-mead" (adds a coarse first-layer
        grid scan to the restart pool).
    restarts : int, default=10
        Random restarts per depth.
    max_iters : int, default=1000
        Simplex iteration budget per restart.
    ftol : float, default=1e-6
        Convergence tolerance on the cost expectation.
    seed : int, default=0
        Seed for restart draws and for `predict` sampling.
    shots : int, default=1024
        Measurement shots drawn by `predict`.

    Attributes
    ----------
    graph_ : Graph
        The graph the estimator was fitted on.
    records_ : list of RunRecord
        One optimization record per depth 1..layers (warm-started ladder).
    record_ : RunRecord
        The record at the requested depth.
    params_ : ParameterSet
        Optimized angles at the requested depth.
    expectation_ : float
        Optimized cost expectation.
    success_probability_ : float
        Probability that a measurement yields a minimum dominating set.
    mds_size_ : int
        Exact domination number of the fitted graph.
    n_qubits_ : int
        Qubits used by the chosen encoding.
    """

    def __init__(self, method="ours", layers=3, mode="standard", lam=2.0,
                 penalty=2.0, algorithm="nelder-mead", restarts=10,
                 max_iters=1000, ftol=1e-6, seed=0, shots=1024):
        self.method = method
        self.layers = layers
        self.mode = mode
        self.lam = lam
        self.penalty = penalty
        self.algorithm = algorithm
        self.restarts = restarts
        self.max_iters = max_iters
        self.ftol = ftol
        self.seed = seed
        self.shots = shots

    def _configs(self):
        config = AnsatzConfig(method=self.method, layers=int(self.layers),
                              mode=self.mode, lam=float(self.lam),
                              big_p=float(self.penalty))
        opt = OptimizerConfig(algorithm=self.algorithm,
                              restarts=int(self.restarts),
                              max_iters=int(self.max_iters),
                              ftol=float(self.ftol), seed=int(self.seed))
        return config, opt

    def fit(self, X, y=None):
        """Optimize circuit angles for the graph `X`.

        `X` may be a Graph, a {"n", "edges"} mapping, an adjacency matrix,
        or a path to a JSON graph file.  `y` is ignored.
        """
        graph = as_graph(X)
        config, opt = self._configs()
        records = qaoa.solve_instance(graph, config, opt, keep_trace=False)
        record = records[-1]
        self.graph_ = graph
        self.records_ = records
        self.record_ = record
        self.params_ = record.params
        self.expectation_ = record.expectation
        self.success_probability_ = record.success_probability
        self.mds_size_ = record.mds_size
        self.n_qubits_ = record.n_qubits
        return self

    def _check_fitted(self):
        if not hasattr(self, "record_"):
            raise RuntimeError("this estimator is not fitted yet; call fit first")

    def state(self):
        """Recompute the optimized state vector at the fitted angles."""
        self._check_fitted()
        config, _ = self._configs()
        _, vec = qaoa.evaluate(self.graph_, config, self.params_)
        return vec

    def sample(self, shots=None, seed=None):
        """Draw measurement outcomes from the optimized state.

        Returns a dict mapping register bitstrings to observed counts.
        """
        self._check_fitted()
        if shots is None:
            shots = self.shots
        if seed is None:
            seed = np.random.SeedSequence([int(self.seed), _SAMPLE_STREAM])
        rng = np.random.default_rng(seed)
        return simulator.sample(self.state(), int(shots), rng)

    def predict(self, X=None):
        """Return the best measured vertex subset as a 0/1 array of length n.

        Samples `shots` outcomes from the optimized state, keeps the vertex
        bits of each outcome, and picks the best candidate: dominating sets
        beat non-dominating ones, smaller sets beat larger ones, and exact
        ties go to the lexicographically smallest bitstring.
        """
        self._check_fitted()
        if X is not None and as_graph(X) != self.graph_:
            raise ValueError("predict got a different graph than fit; "
                             "refit on the new graph first")
        graph = self.graph_
        counts = self.sample()
        best = None
        for bits in counts:
            vertex_bits = bits[:graph.n]
            key = (not is_dominating(graph, vertex_bits),
                   vertex_bits.count("1"), vertex_bits)
            if best is None or key < best:
                best = key
        return np.array([int(b) for b in best[2]], dtype=np.int64)

    def fit_predict(self, X, y=None):
        return self.fit(X).predict()

    def score(self, X=None, y=None):
        """Probability that one measurement yields a minimum dominating set."""
        self._check_fitted()
        if X is not None and as_graph(X) != self.graph_:
            raise ValueError("score got a different graph than fit")
        return float(self.success_probability_)

    def resource_estimate(self, X=None):
        """Qubit count for the configured method on the given (or fitted) graph."""
        if X is not None:
            graph = as_graph(X)
        else:
            self._check_fitted()
            graph = self.graph_
        return method_qubits(graph, self.method)

    def optima(self):
        """All minimum dominating sets of the fitted graph as bitstrings."""
        self._check_fitted()
        config, _ = self._configs()
        targets = qaoa.success_targets(self.graph_, config.method, config.lam,
                                       config.big_p)
        return sorted(targets.optima)
