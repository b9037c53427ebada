"""Batched experiment sweeps with deterministic seeding and file emission.

A sweep crosses graph families and sizes with methods, parameter modes, and
layer depths.  Instance graphs are seeded from the master seed and the cell
coordinates only, so adding or removing methods never changes which graphs
are drawn.  Multiangle cells reuse the standard-mode ladder of the same
instance as a tied starting point, which keeps the richer parameterization
from ever losing to the standard one at equal depth.

Emission formats: `csv` (aggregates + per-instance qubit counts, plus traces
when kept), `json` (per-run records and skipped cells), `svg-lines` (mean
success probability vs depth), `svg-box` (per-depth distribution over
instances).  CSV output is byte-stable for a fixed spec.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from concurrent.futures import ProcessPoolExecutor
import json
import os

import numpy as np

from . import encodings, qaoa
from .graphs import (FAMILY_CODES, InstanceSpec, canonical_family, generate)
from .qaoa import AnsatzConfig, OptimizerConfig, RunRecord

METHOD_CODES = {"ours": 1, "dinneen": 2, "pan": 3, "guerrero": 4}
MODE_CODES = {"standard": 1, "multiangle": 2}

CSV_HEADER = "family,n,method,mode,p,mean_psuc,median_psuc,q1,q3,count,seed"
QUBIT_CSV_HEADER = "family,n,instance,seed,ours,dinneen,pan,guerrero_bound"
FORMATS = ("csv", "json", "svg-lines", "svg-box")

DEFAULT_LAYERS = (1, 2, 3, 4, 5, 6, 7)


def protocol_instances(family, n):
    """Per-cell instance counts used when the spec does not fix one."""
    return 10 if (canonical_family(family) == "er" and int(n) == 4) else 20


def instance_seed(master_seed, family, n, index):
    """Graph seed for one instance; depends only on the cell coordinates."""
    ss = np.random.SeedSequence([int(master_seed),
                                 FAMILY_CODES[canonical_family(family)],
                                 int(n), int(index)])
    return int(ss.generate_state(1, np.uint64)[0])


def optimizer_seed(master_seed, family, n, index, method, mode):
    """Optimizer stream for one (instance, method, mode) cell."""
    ss = np.random.SeedSequence([int(master_seed),
                                 FAMILY_CODES[canonical_family(family)],
                                 int(n), int(index),
                                 METHOD_CODES[method], MODE_CODES[mode]])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class SweepSpec:
    """Full description of one sweep; every output is a function of this."""

    families: tuple = ("3reg", "er")
    sizes: tuple = (4, 6, 8)
    methods: tuple = ("ours",)
    modes: tuple = ("standard",)
    layers: tuple = DEFAULT_LAYERS
    instances: int = None
    edge_prob: float = 0.5
    lam: float = 2.0
    big_p: float = 2.0
    optimizer: OptimizerConfig = OptimizerConfig()
    multiangle_restarts: int = 4
    master_seed: int = 7
    qubit_cap: int = 20
    workers: int = 1
    keep_traces: bool = False

    def __post_init__(self):
        families = tuple(canonical_family(f) for f in self.families)
        sizes = tuple(int(n) for n in self.sizes)
        if not sizes or any(n < 1 for n in sizes):
            raise ValueError(f"sizes must be positive, got {sizes}")
        if "3reg" in families and any(n % 2 or n < 4 for n in sizes):
            raise ValueError(f"3-regular cells need even sizes >= 4, got {sizes}")
        methods = tuple(self.methods)
        for m in methods:
            if m not in encodings.METHODS:
                raise ValueError(f"unknown method {m!r}")
        modes = tuple(self.modes)
        for m in modes:
            if m not in qaoa.MODES:
                raise ValueError(f"unknown mode {m!r}")
        layers = tuple(int(p) for p in self.layers)
        if not layers or any(p < 1 for p in layers) or sorted(layers) != list(layers):
            raise ValueError(f"layers must be an ascending positive schedule, got {layers}")
        if self.instances is not None and int(self.instances) < 1:
            raise ValueError(f"instances must be >= 1, got {self.instances}")
        if int(self.qubit_cap) < 1:
            raise ValueError(f"qubit cap must be >= 1, got {self.qubit_cap}")
        if int(self.multiangle_restarts) < 1:
            raise ValueError(f"multiangle restarts must be >= 1, got "
                             f"{self.multiangle_restarts}")
        if int(self.workers) < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        object.__setattr__(self, "families", families)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "methods", methods)
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "instances",
                           None if self.instances is None else int(self.instances))
        object.__setattr__(self, "master_seed", int(self.master_seed))
        object.__setattr__(self, "qubit_cap", int(self.qubit_cap))
        object.__setattr__(self, "workers", int(self.workers))
        object.__setattr__(self, "multiangle_restarts", int(self.multiangle_restarts))

    def cell_instances(self, family, n):
        return self.instances if self.instances is not None \
            else protocol_instances(family, n)


@dataclass(frozen=True)
class AggregateRow:
    """Summary statistics of success probability over one instance group."""

    family: str
    n: int
    method: str
    mode: str
    p: int
    mean_psuc: float
    median_psuc: float
    q1: float
    q3: float
    count: int


@dataclass
class SweepResult:
    spec: SweepSpec
    records: list
    skips: list
    aggregates: list


def _run_instance(spec, family, n, index):
    """All records and skips for one graph across the requested methods/modes."""
    seed = instance_seed(spec.master_seed, family, n, index)
    try:
        graph = generate(InstanceSpec(family, n, seed, spec.edge_prob))
    except RuntimeError as exc:
        return [], [{"family": family, "n": n, "instance": index, "method": m,
                     "mode": mo, "reason": "generation-failed", "detail": str(exc)}
                    for m in spec.methods for mo in spec.modes]
    meta = {
        "family": family,
        "n": n,
        "index": index,
        "seed": seed,
        "edge_prob": spec.edge_prob if family == "er" else None,
        "isolated_vertices": int(sum(1 for d in graph.degrees if d == 0)),
    }
    records = []
    skips = []
    for method in spec.methods:
        nq = encodings.method_qubits(graph, method)
        if nq > spec.qubit_cap:
            for mode in spec.modes:
                skips.append({"family": family, "n": n, "instance": index,
                              "method": method, "mode": mode,
                              "reason": "qubit-cap-exceeded",
                              "n_qubits": nq, "cap": spec.qubit_cap})
            continue
        base = AnsatzConfig(method=method, layers=max(spec.layers),
                            mode="standard", lam=spec.lam, big_p=spec.big_p)
        std_opt = replace(spec.optimizer,
                          seed=optimizer_seed(spec.master_seed, family, n, index,
                                              method, "standard"))
        std_records = qaoa.optimize_ladder(
            graph, base, std_opt, layers=spec.layers,
            keep_trace=spec.keep_traces, instance=meta)
        if "standard" in spec.modes:
            records.extend(std_records)
        if "multiangle" in spec.modes:
            ma_opt = replace(spec.optimizer,
                             restarts=spec.multiangle_restarts,
                             seed=optimizer_seed(spec.master_seed, family, n, index,
                                                 method, "multiangle"))
            tied = {r.config.layers: r for r in std_records}
            records.extend(qaoa.optimize_ladder(
                graph, replace(base, mode="multiangle"), ma_opt,
                layers=spec.layers, tied_records=tied,
                keep_trace=spec.keep_traces, instance=meta))
    return records, skips


def _record_sort_key(rec):
    i = rec.instance
    return (i["family"], i["n"], i["index"], rec.config.method,
            rec.config.mode, rec.config.layers)


def _skip_sort_key(skip):
    return (skip["family"], skip["n"], skip["instance"], skip["method"], skip["mode"])


def aggregate(records):
    """Group success probabilities per (family, n, method, mode, p) cell."""
    groups = {}
    for rec in records:
        if rec.instance is None:
            continue
        key = (rec.instance["family"], rec.instance["n"],
               rec.config.method, rec.config.mode, rec.config.layers)
        groups.setdefault(key, []).append(rec.success_probability)
    rows = []
    for key in sorted(groups):
        vals = np.array(groups[key], dtype=np.float64)
        rows.append(AggregateRow(
            family=key[0], n=key[1], method=key[2], mode=key[3], p=key[4],
            mean_psuc=float(np.mean(vals)),
            median_psuc=float(np.median(vals)),
            q1=float(np.percentile(vals, 25)),
            q3=float(np.percentile(vals, 75)),
            count=int(vals.size)))
    return rows


def run_sweep(spec):
    """Execute every cell of the spec; deterministic apart from wall times."""
    tasks = []
    for family in spec.families:
        for n in spec.sizes:
            for index in range(spec.cell_instances(family, n)):
                tasks.append((family, n, index))
    records = []
    skips = []
    if spec.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            for recs, sks in pool.map(_run_instance,
                                      [spec] * len(tasks),
                                      [t[0] for t in tasks],
                                      [t[1] for t in tasks],
                                      [t[2] for t in tasks]):
                records.extend(recs)
                skips.extend(sks)
    else:
        for family, n, index in tasks:
            recs, sks = _run_instance(spec, family, n, index)
            records.extend(recs)
            skips.extend(sks)
    records.sort(key=_record_sort_key)
    skips.sort(key=_skip_sort_key)
    return SweepResult(spec=spec, records=records, skips=skips,
                       aggregates=aggregate(records))


def _fmt(x):
    return repr(float(x))


def _write_text(path, text):
    with open(path, "w") as fh:
        fh.write(text)
    return path


def _emit_csv(result, out_dir):
    paths = []
    lines = [CSV_HEADER]
    seed = result.spec.master_seed
    for row in result.aggregates:
        lines.append(",".join([
            row.family, str(row.n), row.method, row.mode, str(row.p),
            _fmt(row.mean_psuc), _fmt(row.median_psuc), _fmt(row.q1),
            _fmt(row.q3), str(row.count), str(seed)]))
    paths.append(_write_text(os.path.join(out_dir, "aggregates.csv"),
                             "\n".join(lines) + "\n"))

    seen = {}
    for rec in result.records:
        if rec.instance is not None:
            key = (rec.instance["family"], rec.instance["n"], rec.instance["index"])
            seen[key] = rec.instance["seed"]
    for skip in result.skips:
        key = (skip["family"], skip["n"], skip["instance"])
        seen.setdefault(key, instance_seed(seed, key[0], key[1], key[2]))
    qlines = [QUBIT_CSV_HEADER]
    for (family, n, index) in sorted(seen):
        gseed = seen[(family, n, index)]
        graph = generate(InstanceSpec(family, n, gseed, result.spec.edge_prob))
        counts = encodings.qubit_counts(graph)
        qlines.append(",".join([family, str(n), str(index), str(gseed),
                                str(counts.ours), str(counts.dinneen),
                                str(counts.pan), str(counts.guerrero_bound)]))
    paths.append(_write_text(os.path.join(out_dir, "qubit_counts.csv"),
                             "\n".join(qlines) + "\n"))

    if result.spec.keep_traces:
        tlines = ["family,n,instance,method,mode,p,iteration,best_f"]
        for rec in result.records:
            if rec.trace is None or rec.instance is None:
                continue
            i = rec.instance
            for it, f in enumerate(rec.trace):
                tlines.append(",".join([
                    i["family"], str(i["n"]), str(i["index"]), rec.config.method,
                    rec.config.mode, str(rec.config.layers), str(it), _fmt(f)]))
        paths.append(_write_text(os.path.join(out_dir, "traces.csv"),
                                 "\n".join(tlines) + "\n"))
    return paths


def _emit_json(result, out_dir):
    runs = [rec.to_json_dict() for rec in result.records]
    p1 = _write_text(os.path.join(out_dir, "runs.json"),
                     json.dumps(runs, indent=1) + "\n")
    p2 = _write_text(os.path.join(out_dir, "skips.json"),
                     json.dumps(result.skips, indent=1) + "\n")
    return [p1, p2]


def _series_label(method, mode):
    return method if mode == "standard" else f"{method} ({mode})"


def _emit_svg_lines(result, out_dir):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    matplotlib.rcParams["svg.hashsalt"] = str(result.spec.master_seed)
    paths = []
    cells = sorted({(r.family, r.n) for r in result.aggregates})
    for family, n in cells:
        rows = [r for r in result.aggregates if r.family == family and r.n == n]
        series = sorted({(r.method, r.mode) for r in rows})
        fig, ax = plt.subplots(figsize=(5.0, 3.4))
        for method, mode in series:
            pts = sorted((r.p, r.mean_psuc) for r in rows
                         if r.method == method and r.mode == mode)
            ax.plot([p for p, _ in pts], [v for _, v in pts],
                    marker="o", label=_series_label(method, mode))
        ax.set_xlabel("layers p")
        ax.set_ylabel("mean success probability")
        ax.set_title(f"{family}, n={n}")
        ax.set_ylim(0.0, 1.0)
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = os.path.join(out_dir, f"lines_{family}_n{n}.svg")
        fig.savefig(path, metadata={"Date": None})
        plt.close(fig)
        paths.append(path)
    return paths


def _emit_svg_box(result, out_dir):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    matplotlib.rcParams["svg.hashsalt"] = str(result.spec.master_seed)
    paths = []
    data = {}
    for rec in result.records:
        if rec.instance is None:
            continue
        key = (rec.instance["family"], rec.config.layers)
        inner = data.setdefault(key, {})
        series = (rec.config.method, rec.config.mode)
        inner.setdefault(series, {}).setdefault(rec.instance["n"], []).append(
            rec.success_probability)
    for (family, p) in sorted(data):
        inner = data[(family, p)]
        series = sorted(inner)
        sizes = sorted({n for by_n in inner.values() for n in by_n})
        fig, ax = plt.subplots(figsize=(5.6, 3.4))
        width = 0.8 / max(len(series), 1)
        for si, key in enumerate(series):
            positions = []
            values = []
            for ni, n in enumerate(sizes):
                if n in inner[key]:
                    positions.append(ni + si * width - 0.4 + width / 2)
                    values.append(inner[key][n])
            if not values:
                continue
            box = ax.boxplot(values, positions=positions, widths=width * 0.9,
                             showfliers=False, patch_artist=True)
            color = f"C{si}"
            for artist in box["boxes"]:
                artist.set_facecolor(color)
                artist.set_alpha(0.5)
            ax.plot([], [], color=color, label=_series_label(*key))
        ax.set_xticks(range(len(sizes)))
        ax.set_xticklabels([str(n) for n in sizes])
        ax.set_xlabel("graph size n")
        ax.set_ylabel("success probability")
        ax.set_title(f"{family}, p={p}")
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = os.path.join(out_dir, f"box_{family}_p{p}.svg")
        fig.savefig(path, metadata={"Date": None})
        plt.close(fig)
        paths.append(path)
    return paths


def emit(result, out_dir, formats=FORMATS):
    """Write the requested artifact files under `out_dir`; returns the paths."""
    for fmt in formats:
        if fmt not in FORMATS:
            raise ValueError(f"unknown format {fmt!r}; expected a subset of {FORMATS}")
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    if "csv" in formats:
        paths += _emit_csv(result, out_dir)
    if "json" in formats:
        paths += _emit_json(result, out_dir)
    if "svg-lines" in formats:
        if not result.aggregates:
            raise ValueError("svg-lines needs a nonempty sweep result")
        paths += _emit_svg_lines(result, out_dir)
    if "svg-box" in formats:
        if not result.records:
            raise ValueError("svg-box needs a nonempty sweep result")
        paths += _emit_svg_box(result, out_dir)
    return paths


def load_records(path):
    """Read back the per-run records from an emitted runs.json."""
    with open(path) as fh:
        data = json.load(fh)
    return [RunRecord.from_json_dict(d) for d in data]
