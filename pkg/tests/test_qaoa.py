"""Ansatz plumbing, target bookkeeping, and the variational loop."""
import numpy as np
import pytest

from mds_qaoa import (AnsatzConfig, OptimizerConfig, ParameterSet, Ansatz,
                      evaluate, optimize, optimize_ladder, solve_instance,
                      success_targets, success_probability, brute_force_mds,
                      bits_to_index, cost_table, method_qubits)


def test_config_validation():
    with pytest.raises(ValueError):
        AnsatzConfig(method="qubo")
    with pytest.raises(ValueError):
        AnsatzConfig(mode="tied")
    with pytest.raises(ValueError):
        AnsatzConfig(layers=0)
    with pytest.raises(ValueError):
        AnsatzConfig(lam=1.0)
    with pytest.raises(ValueError):
        OptimizerConfig(algorithm="bfgs")
    with pytest.raises(ValueError):
        OptimizerConfig(restarts=0)
    with pytest.raises(ValueError):
        OptimizerConfig(ftol=0.0)


def test_parameter_set_shapes_and_json():
    std = ParameterSet(np.array([0.1, 0.2]), np.array([0.3, 0.4]))
    assert std.mode == "standard" and std.layers == 2
    ma = ParameterSet(np.zeros((2, 5)), np.zeros((2, 3)))
    assert ma.mode == "multiangle" and ma.layers == 2
    with pytest.raises(ValueError):
        ParameterSet(np.zeros(2), np.zeros(3))
    with pytest.raises(ValueError):
        ParameterSet(np.zeros(2), np.zeros((2, 3)))
    back = ParameterSet.from_json_dict(std.to_json_dict())
    assert np.array_equal(back.gammas, std.gammas)
    assert np.array_equal(back.betas, std.betas)


def test_ansatz_parameter_plumbing(k4):
    std = Ansatz(k4, AnsatzConfig(layers=3))
    assert std.n_params() == 6
    flat = np.arange(6.0)
    ps = std.parameter_set(flat)
    assert np.array_equal(ps.flat(), flat)
    ma = Ansatz(k4, AnsatzConfig(layers=2, mode="multiangle"))
    assert ma.n_params() == 2 * (ma.n_terms + 4)
    rng = np.random.default_rng(0)
    draw = ma.random_parameters(rng)
    assert draw.gammas.shape == (2, ma.n_terms) and draw.betas.shape == (2, 4)
    assert draw.gammas.max() < 2 * np.pi and draw.betas.max() < np.pi
    assert np.array_equal(ma.parameter_set(draw.flat()).gammas, draw.gammas)
    with pytest.raises(ValueError):
        std.check_params(draw)
    with pytest.raises(ValueError):
        std.parameter_set(np.zeros(5))


def test_pad_parameters_is_exact_identity(k4):
    shallow = Ansatz(k4, AnsatzConfig(layers=2))
    deep = Ansatz(k4, AnsatzConfig(layers=5))
    rng = np.random.default_rng(1)
    params = shallow.random_parameters(rng)
    padded = deep.pad_parameters(params)
    assert padded.layers == 5
    assert np.array_equal(shallow.state_array(params), deep.state_array(padded))
    with pytest.raises(ValueError):
        shallow.pad_parameters(deep.zero_parameters())


def test_tied_multiangle_matches_standard(cubic6):
    std = Ansatz(cubic6, AnsatzConfig(layers=2))
    ma = Ansatz(cubic6, AnsatzConfig(layers=2, mode="multiangle"))
    params = std.random_parameters(np.random.default_rng(7))
    tied = ma.tie_parameters(params)
    a = std.state_array(params)
    b = ma.state_array(tied)
    assert np.abs(a - b).max() < 1e-13
    with pytest.raises(ValueError):
        std.tie_parameters(params)
    with pytest.raises(ValueError):
        ma.tie_parameters(tied)


def test_zero_parameters_give_plus_state_statistics(k4, path4, lonely4):
    from mds_qaoa import Graph
    graphs = {"ours": k4, "guerrero": path4, "dinneen": lonely4,
              "pan": Graph(3, [(0, 1), (1, 2)])}
    for method, g in graphs.items():
        cfg = AnsatzConfig(method=method, layers=2)
        ans = Ansatz(g, cfg)
        F, vec = evaluate(g, cfg, ans.zero_parameters())
        nq = method_qubits(g, method)
        assert F == float(np.sum(ans.diag)) * 2.0 ** (-nq)
        tgt = success_targets(g, method)
        probs = vec.amps.real ** 2 + vec.amps.imag ** 2
        psuc = float(np.sum(probs[np.array(tgt.indices)]))
        assert psuc == len(tgt.indices) / 2.0 ** nq


def test_success_targets_ours_and_guerrero(path4):
    size, optima = brute_force_mds(path4)
    ours = success_targets(path4, "ours")
    assert ours.mds_size == size == 2
    assert set(ours.optima) == optima
    assert set(ours.indices) == {bits_to_index(o) for o in optima}
    guer = success_targets(path4, "guerrero")
    assert set(guer.optima) == optima and set(guer.indices) == set(ours.indices)
    # the score maximum is also reached by two infeasible singletons
    assert guer.ground_ties == 2


def test_success_targets_surplus_registers(path4):
    _, optima = brute_force_mds(path4)
    opt_idx = {bits_to_index(o) for o in optima}
    for method in ("dinneen", "pan"):
        info = success_targets(path4, method)
        table = cost_table(path4, method)
        lowest = table.min()
        mask = (1 << path4.n) - 1
        assert len(info.indices) >= 1
        for idx in info.indices:
            assert table[idx] == lowest
            assert (idx & mask) in opt_idx
        assert set(info.indices) <= set(info.marginal_indices)
        for idx in info.marginal_indices:
            assert (idx & mask) in opt_idx


def test_optimize_improves_and_keeps_audit_fields(k4):
    cfg = AnsatzConfig(layers=1)
    opt = OptimizerConfig(restarts=3, max_iters=200, seed=2)
    rec = optimize(k4, cfg, opt, keep_trace=True)
    ans = Ansatz(k4, cfg)
    zero_f = ans.expectation_of(ans.state_array(ans.zero_parameters()))
    assert rec.expectation < zero_f
    assert rec.trace is not None and len(rec.trace) > 0
    diffs = np.diff(np.array(rec.trace))
    assert np.all(diffs <= 1e-12)  # best-so-far trace never worsens
    assert rec.restarts_run == 3 and rec.evaluations > 0
    assert rec.n_qubits == 4 and rec.rz_per_layer == rec.n_terms
    assert abs(success_probability(rec) - rec.success_probability) < 1e-15
    f_check, _ = evaluate(k4, cfg, rec.params)
    assert abs(f_check - rec.expectation) < 1e-12
    rec2 = optimize(k4, cfg, OptimizerConfig(restarts=3, max_iters=200, seed=2),
                    keep_trace=False)
    assert rec2.trace is None
    assert rec2.expectation == rec.expectation  # same seed, same answer


def test_optimize_grid_algorithm_runs(k4):
    opt = OptimizerConfig(algorithm="grid+nelder-mead", restarts=1,
                          max_iters=150, seed=0)
    rec = optimize(k4, AnsatzConfig(layers=1), opt)
    assert rec.success_probability > 0.25  # beats the unoptimized baseline


def test_ladder_is_monotone_and_respects_schedule(cubic6):
    opt = OptimizerConfig(restarts=2, max_iters=200, seed=3)
    recs = optimize_ladder(cubic6, AnsatzConfig(layers=4), opt, layers=(1, 2, 4))
    assert [r.config.layers for r in recs] == [1, 2, 4]
    fs = [r.expectation for r in recs]
    assert all(fs[i + 1] <= fs[i] + 1e-6 for i in range(len(fs) - 1))


def test_solve_instance_multiangle_never_loses(k4):
    std = solve_instance(k4, AnsatzConfig(layers=2), OptimizerConfig(
        restarts=3, max_iters=200, seed=4))
    ma = solve_instance(k4, AnsatzConfig(layers=2, mode="multiangle"),
                        OptimizerConfig(restarts=2, max_iters=200, seed=4),
                        standard_opt=OptimizerConfig(restarts=3, max_iters=200, seed=4))
    for s, m in zip(std, ma):
        assert m.expectation <= s.expectation + 1e-6


def test_run_record_json_round_trip(k4):
    rec = optimize(k4, AnsatzConfig(layers=2), OptimizerConfig(
        restarts=2, max_iters=100, seed=5), keep_trace=True,
        instance={"family": "3reg", "n": 4, "index": 0, "seed": 1})
    from mds_qaoa import RunRecord
    back = RunRecord.from_json_dict(rec.to_json_dict())
    assert back.to_json_dict() == rec.to_json_dict()
    assert abs(success_probability(back) - rec.success_probability) < 1e-15
