"""Auxiliary-qubit-free variational solver for minimum dominating set.

The package compares four ways of encoding the dominating-set objective as a
diagonal operator — a penalty-free logical formulation on n qubits, two
quadratic surplus-variable encodings, and a maximization form — inside a
layered phase/mixer circuit simulated on a dense state vector.
"""

from .graphs import (Graph, InstanceSpec, generate, brute_force_mds,
                     is_dominating, domination_counts, as_bits, bits_to_index,
                     index_to_bits, load_graph, save_graph)
from .encodings import (or_identity, cost_ours, cost_dinneen, cost_pan,
                        cost_guerrero, cost_table, argmin_indices,
                        dinneen_layout, pan_layout, quadratic_form,
                        QubitCounts, qubit_counts, method_qubits, METHODS)
from .hamiltonian import (ZTerm, ZSum, build_ours, build_guerrero,
                          build_dinneen, build_pan, build_method, build_qubo,
                          to_dense, GateEstimate, gate_estimate)
from .simulator import (StateVector, plus_state, apply_phase_diagonal,
                        apply_phase_terms, apply_mixer, expectation,
                        overlap_probability, sample, save_state, load_state)
from .qaoa import (AnsatzConfig, OptimizerConfig, ParameterSet, Ansatz,
                   RunRecord, TargetInfo, evaluate, optimize, optimize_ladder,
                   solve_instance, success_targets, success_probability, MODES)
from .experiments import (SweepSpec, SweepResult, AggregateRow, run_sweep,
                          aggregate, emit, instance_seed, load_records)
from .solver import DominatingSetQAOA
from .validation import as_graph

__version__ = "0.1.0"

__all__ = [
    "Graph", "InstanceSpec", "generate", "brute_force_mds", "is_dominating",
    "domination_counts", "as_bits", "bits_to_index", "index_to_bits",
    "load_graph", "save_graph",
    "or_identity", "cost_ours", "cost_dinneen", "cost_pan", "cost_guerrero",
    "cost_table", "argmin_indices", "dinneen_layout", "pan_layout",
    "quadratic_form", "QubitCounts", "qubit_counts", "method_qubits",
    "METHODS",
    "ZTerm", "ZSum", "build_ours", "build_guerrero", "build_dinneen",
    "build_pan", "build_method", "build_qubo", "to_dense", "GateEstimate",
    "gate_estimate",
    "StateVector", "plus_state", "apply_phase_diagonal", "apply_phase_terms",
    "apply_mixer", "expectation", "overlap_probability", "sample",
    "save_state", "load_state",
    "AnsatzConfig", "OptimizerConfig", "ParameterSet", "Ansatz", "RunRecord",
    "TargetInfo", "evaluate", "optimize", "optimize_ladder", "solve_instance",
    "success_targets", "success_probability", "MODES",
    "SweepSpec", "SweepResult", "AggregateRow", "run_sweep", "aggregate",
    "emit", "instance_seed", "load_records",
    "DominatingSetQAOA", "as_graph",
    "__version__",
]
