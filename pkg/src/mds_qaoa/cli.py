"""Command-line entry points: sweep, solve, and resources subcommands."""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import encodings, experiments, hamiltonian, qaoa, simulator
from .qaoa import AnsatzConfig, OptimizerConfig
from .validation import as_graph


def _csv_list(text):
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _int_list(text):
    return tuple(int(part) for part in _csv_list(text))


def _layer_schedule(text):
    """Parse "1..7", "1,3,5,7", or "3" into an ascending tuple of depths."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise argparse.ArgumentTypeError(f"empty layer range {text!r}")
        return tuple(range(lo, hi + 1))
    return _int_list(text)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="mds-qaoa",
        description="Variational circuit experiments for minimum dominating set.")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser(
        "sweep", help="run a batched experiment grid and write result files")
    sweep.add_argument("--families", type=_csv_list, default=("3reg", "er"),
                       help="comma list of graph families (3reg, er)")
    sweep.add_argument("--sizes", type=_int_list, default=(4, 6, 8),
                       help="comma list of vertex counts")
    sweep.add_argument("--methods", type=_csv_list, default=("ours",),
                       help="comma list of cost encodings "
                            "(ours, dinneen, pan, guerrero)")
    sweep.add_argument("--modes", type=_csv_list, default=("standard",),
                       help="comma list of parameter modes "
                            "(standard, multiangle)")
    sweep.add_argument("--layers", type=_layer_schedule,
                       default=experiments.DEFAULT_LAYERS,
                       help='depth schedule, e.g. "1..7" or "1,3,5"')
    sweep.add_argument("--instances", type=int, default=None,
                       help="graphs per cell (default: 10 for er n=4, else 20)")
    sweep.add_argument("--edge-prob", type=float, default=0.5,
                       help="edge probability for the er family")
    sweep.add_argument("--lambda", dest="lam", type=float, default=2.0,
                       help="domination penalty weight (> 1)")
    sweep.add_argument("--penalty", type=float, default=2.0,
                       help="constraint weight for the quadratic encodings")
    sweep.add_argument("--algorithm", default="nelder-mead",
                       choices=("nelder-mead", "grid+nelder-mead"))
    sweep.add_argument("--restarts", type=int, default=10,
                       help="random restarts per depth (standard mode)")
    sweep.add_argument("--ma-restarts", type=int, default=4,
                       help="random restarts per depth in multiangle mode")
    sweep.add_argument("--max-iters", type=int, default=1000)
    sweep.add_argument("--ftol", type=float, default=1e-6)
    sweep.add_argument("--seed", type=int, default=7, help="master seed")
    sweep.add_argument("--out", required=True, help="output directory")
    sweep.add_argument("--qubit-cap", type=int, default=20,
                       help="skip cells whose encoding needs more qubits")
    sweep.add_argument("--workers", type=int, default=1,
                       help="parallel worker processes")
    sweep.add_argument("--formats", type=_csv_list,
                       default=experiments.FORMATS,
                       help="comma subset of csv,json,svg-lines,svg-box")
    sweep.add_argument("--traces", action="store_true",
                       help="keep per-iteration best-value traces")

    solve = sub.add_parser(
        "solve", help="optimize a circuit for one graph and report the result")
    solve.add_argument("graph", help="JSON graph file with 'n' and 'edges'")
    solve.add_argument("--method", default="ours",
                       choices=encodings.METHODS)
    solve.add_argument("-p", "--layers", type=int, default=3)
    solve.add_argument("--mode", default="standard", choices=qaoa.MODES)
    solve.add_argument("--lambda", dest="lam", type=float, default=2.0)
    solve.add_argument("--penalty", type=float, default=2.0)
    solve.add_argument("--algorithm", default="nelder-mead",
                       choices=("nelder-mead", "grid+nelder-mead"))
    solve.add_argument("--restarts", type=int, default=10)
    solve.add_argument("--max-iters", type=int, default=1000)
    solve.add_argument("--ftol", type=float, default=1e-6)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--shots", type=int, default=1024,
                       help="measurement shots for the reported sample")
    solve.add_argument("--out", default=None,
                       help="write the final-depth run record as JSON here")
    solve.add_argument("--state-out", default=None,
                       help="write the final state vector as a binary dump")

    res = sub.add_parser(
        "resources", help="print qubit and gate requirements for one graph")
    res.add_argument("graph", help="JSON graph file with 'n' and 'edges'")
    res.add_argument("--lambda", dest="lam", type=float, default=2.0)
    res.add_argument("--penalty", type=float, default=2.0)
    return parser


def _cmd_sweep(args):
    spec = experiments.SweepSpec(
        families=args.families, sizes=args.sizes, methods=args.methods,
        modes=args.modes, layers=args.layers, instances=args.instances,
        edge_prob=args.edge_prob, lam=args.lam, big_p=args.penalty,
        optimizer=OptimizerConfig(algorithm=args.algorithm,
                                  restarts=args.restarts,
                                  max_iters=args.max_iters,
                                  ftol=args.ftol, seed=args.seed),
        multiangle_restarts=args.ma_restarts, master_seed=args.seed,
        qubit_cap=args.qubit_cap, workers=args.workers,
        keep_traces=args.traces)
    t0 = time.perf_counter()
    result = experiments.run_sweep(spec)
    paths = experiments.emit(result, args.out, formats=args.formats)
    dt = time.perf_counter() - t0
    print(f"{len(result.records)} runs, {len(result.skips)} skipped cells "
          f"in {dt:.1f}s")
    for path in paths:
        print(f"wrote {path}")
    return 0


def _cmd_solve(args):
    graph = as_graph(args.graph)
    config = AnsatzConfig(method=args.method, layers=args.layers,
                          mode=args.mode, lam=args.lam, big_p=args.penalty)
    opt = OptimizerConfig(algorithm=args.algorithm, restarts=args.restarts,
                          max_iters=args.max_iters, ftol=args.ftol,
                          seed=args.seed)
    records = qaoa.solve_instance(graph, config, opt, keep_trace=False)
    final = records[-1]
    targets = qaoa.success_targets(graph, args.method, args.lam, args.penalty)
    print(f"graph: n={graph.n}, {len(graph.edges)} edges; "
          f"domination number {final.mds_size} "
          f"({len(targets.optima)} optimal sets)")
    print(f"method={args.method} mode={args.mode} qubits={final.n_qubits}")
    for rec in records:
        print(f"  p={rec.config.layers}: F={rec.expectation:.6f} "
              f"P_success={rec.success_probability:.6f}")
    _, vec = qaoa.evaluate(graph, config, final.params)
    counts = simulator.sample(
        vec, args.shots, np.random.SeedSequence([args.seed, 0x5A17]))
    best = max(counts.items(), key=lambda kv: kv[1])
    marked = [i for i, b in enumerate(best[0][:graph.n]) if b == "1"]
    print(f"most frequent outcome over {args.shots} shots: {best[0]} "
          f"({best[1]} shots) -> vertices {marked}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(final.to_json_dict(), fh, indent=1)
            fh.write("\n")
        print(f"wrote {args.out}")
    if args.state_out:
        simulator.save_state(vec, args.state_out)
        print(f"wrote {args.state_out}")
    return 0


def _cmd_resources(args):
    graph = as_graph(args.graph)
    counts = encodings.qubit_counts(graph)
    print(f"graph: n={graph.n}, {len(graph.edges)} edges, "
          f"max degree {max(graph.degrees) if graph.n else 0}")
    print(f"{'method':<16}{'qubits':>8}{'terms':>8}{'rz/layer':>10}"
          f"{'cnot/layer':>12}")
    rows = [("ours", counts.ours, hamiltonian.build_ours(graph, args.lam)),
            ("dinneen", counts.dinneen,
             hamiltonian.build_method(graph, "dinneen", big_p=args.penalty)),
            ("pan", counts.pan,
             hamiltonian.build_method(graph, "pan", big_p=args.penalty)),
            ("guerrero", counts.guerrero_bound,
             hamiltonian.build_guerrero(graph))]
    for name, nq, op in rows:
        est = hamiltonian.gate_estimate(op)
        note = " (qubit count is a 2n bound)" if name == "guerrero" else ""
        print(f"{name:<16}{nq:>8}{len(op.terms):>8}{est.rz:>10}"
              f"{est.cnot:>12}{note}")
    return 0


def main(argv=None):
    args = _build_parser().parse_args(argv)
    if args.command == "sweep":
        return _cmd_sweep(args)
    if args.command == "solve":
        return _cmd_solve(args)
    return _cmd_resources(args)


if __name__ == "__main__":
    sys.exit(main())
