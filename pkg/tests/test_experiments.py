"""Sweep orchestration, aggregation, and artifact emission."""
import json

import numpy as np
import pytest

from mds_qaoa import (SweepSpec, OptimizerConfig, run_sweep, aggregate, emit,
                      load_records, instance_seed)
from mds_qaoa.experiments import protocol_instances, optimizer_seed, CSV_HEADER


def _tiny_spec(**overrides):
    base = dict(families=("er",), sizes=(4,), methods=("ours",),
                modes=("standard",), layers=(1, 2), instances=2,
                optimizer=OptimizerConfig(restarts=2, max_iters=80, seed=0),
                master_seed=5, qubit_cap=12)
    base.update(overrides)
    return SweepSpec(**base)


@pytest.fixture(scope="module")
def tiny_result():
    return run_sweep(_tiny_spec())


def test_instance_seed_depends_only_on_cell():
    a = instance_seed(5, "3reg", 6, 0)
    assert a == instance_seed(5, "3reg", 6, 0)
    assert a != instance_seed(5, "3reg", 6, 1)
    assert a != instance_seed(5, "er", 6, 0)
    assert a != instance_seed(6, "3reg", 6, 0)
    assert optimizer_seed(5, "er", 4, 0, "ours", "standard") \
        != optimizer_seed(5, "er", 4, 0, "ours", "multiangle")


def test_protocol_instance_counts():
    assert protocol_instances("er", 4) == 10
    assert protocol_instances("er", 6) == 20
    assert protocol_instances("3reg", 4) == 20


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        _tiny_spec(methods=("qubo",))
    with pytest.raises(ValueError):
        _tiny_spec(modes=("tied",))
    with pytest.raises(ValueError):
        _tiny_spec(layers=(2, 1))
    with pytest.raises(ValueError):
        _tiny_spec(families=("3reg",), sizes=(5,))
    with pytest.raises(ValueError):
        _tiny_spec(instances=0)
    with pytest.raises(ValueError):
        _tiny_spec(workers=0)


def test_run_sweep_structure(tiny_result):
    assert len(tiny_result.records) == 2 * 2  # instances x layers
    assert tiny_result.skips == []
    keys = [(r.instance["index"], r.config.layers) for r in tiny_result.records]
    assert keys == sorted(keys)
    for rec in tiny_result.records:
        assert rec.instance["family"] == "er" and rec.instance["n"] == 4
        assert rec.instance["seed"] == instance_seed(5, "er", 4, rec.instance["index"])
        assert 0.0 <= rec.success_probability <= 1.0
    assert len(tiny_result.aggregates) == 2
    for row in tiny_result.aggregates:
        assert row.count == 2
        assert row.q1 <= row.median_psuc <= row.q3


def test_qubit_cap_skips_have_reasons():
    res = run_sweep(_tiny_spec(families=("3reg",), methods=("ours", "dinneen"),
                               qubit_cap=6))
    assert all(r.config.method == "ours" for r in res.records)
    assert len(res.skips) == 2
    for skip in res.skips:
        assert skip["reason"] == "qubit-cap-exceeded"
        assert skip["n_qubits"] == 12 and skip["cap"] == 6


def test_aggregate_quartiles_match_numpy(tiny_result):
    rows = aggregate(tiny_result.records)
    assert rows == tiny_result.aggregates
    by_key = {}
    for rec in tiny_result.records:
        by_key.setdefault(rec.config.layers, []).append(rec.success_probability)
    for row in rows:
        vals = np.array(by_key[row.p])
        assert row.mean_psuc == float(np.mean(vals))
        assert row.q1 == float(np.percentile(vals, 25))
        assert row.q3 == float(np.percentile(vals, 75))


def test_emit_csv_json_and_round_trip(tiny_result, tmp_path):
    out = tmp_path / "artifacts"
    paths = emit(tiny_result, out, formats=("csv", "json"))
    names = {p.split("/")[-1] for p in paths}
    assert names == {"aggregates.csv", "qubit_counts.csv", "runs.json", "skips.json"}
    lines = (out / "aggregates.csv").read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + len(tiny_result.aggregates)
    assert all(len(line.split(",")) == 11 for line in lines[1:])
    qlines = (out / "qubit_counts.csv").read_text().splitlines()
    assert qlines[0] == "family,n,instance,seed,ours,dinneen,pan,guerrero_bound"
    assert len(qlines) == 3  # two instances
    back = load_records(out / "runs.json")
    assert aggregate(back) == tiny_result.aggregates
    assert json.loads((out / "skips.json").read_text()) == []


def test_emit_svg_charts(tiny_result, tmp_path):
    paths = emit(tiny_result, tmp_path / "svg", formats=("svg-lines", "svg-box"))
    assert any("lines_er_n4.svg" in p for p in paths)
    assert any("box_er_p1.svg" in p for p in paths)
    assert any("box_er_p2.svg" in p for p in paths)
    for p in paths:
        body = open(p).read()
        assert "<svg" in body


def test_emit_rejects_unknown_format(tiny_result, tmp_path):
    with pytest.raises(ValueError):
        emit(tiny_result, tmp_path, formats=("pdf",))


def test_traces_csv_when_kept(tmp_path):
    res = run_sweep(_tiny_spec(instances=1, layers=(1,), keep_traces=True))
    emit(res, tmp_path, formats=("csv",))
    tlines = (tmp_path / "traces.csv").read_text().splitlines()
    assert tlines[0].startswith("family,n,instance,method,mode,p,iteration")
    assert len(tlines) > 1


def test_multiangle_cells_use_tied_standard_start():
    spec = _tiny_spec(modes=("standard", "multiangle"), instances=1,
                      multiangle_restarts=1)
    res = run_sweep(spec)
    std = {r.config.layers: r for r in res.records if r.config.mode == "standard"}
    ma = {r.config.layers: r for r in res.records if r.config.mode == "multiangle"}
    assert set(std) == set(ma) == {1, 2}
    for p in std:
        assert ma[p].expectation <= std[p].expectation + 1e-6


def test_csv_is_byte_identical_across_reruns(tmp_path):
    spec = _tiny_spec()
    emit(run_sweep(spec), tmp_path / "a", formats=("csv",))
    emit(run_sweep(spec), tmp_path / "b", formats=("csv",))
    assert (tmp_path / "a/aggregates.csv").read_bytes() \
        == (tmp_path / "b/aggregates.csv").read_bytes()
    assert (tmp_path / "a/qubit_counts.csv").read_bytes() \
        == (tmp_path / "b/qubit_counts.csv").read_bytes()
