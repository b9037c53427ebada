"""Operator expansion, dense diagonals, gate counts, serialization."""
import numpy as np
import pytest

from mds_qaoa import (ZTerm, ZSum, build_ours, build_guerrero, build_dinneen,
                      build_pan, build_method, build_qubo, to_dense,
                      gate_estimate, cost_table, method_qubits, Graph)
from mds_qaoa.hamiltonian import zsum_to_text, zsum_from_text


def test_zterm_canonicalization():
    t = ZTerm(0.5, (3, 1))
    assert t.support == (1, 3)
    with pytest.raises(ValueError):
        ZTerm(1.0, (2, 2))
    with pytest.raises(ValueError):
        ZTerm(1.0, (-1,))


def test_zsum_merges_and_orders():
    h = ZSum([(1.0, (2,)), (0.5, ()), (2.0, (0, 1)), (-1.0, (2,)), (1e-15, (5,))])
    assert [(t.coeff, t.support) for t in h.terms] == [(0.5, ()), (2.0, (0, 1))]
    assert h.constant == 0.5
    assert h.without_constant().terms == (ZTerm(2.0, (0, 1)),)
    assert h.max_qubit() == 1
    assert ZSum([(0.5, ()), (2.0, (1, 0))]) == h
    assert len(h) == 2


def test_zsum_text_round_trip():
    h = ZSum([(0.125, (0, 2)), (-1.5, (1,)), (3.0, ())])
    text = zsum_to_text(h)
    assert zsum_from_text(text) == h
    assert zsum_from_text("# comment\n\n0.5 0\n") == ZSum([(0.5, (0,))])
    with pytest.raises(ValueError):
        zsum_from_text("abc 0")


def test_builders_match_cost_tables(path4, star5, k4, cubic6, lonely4):
    for g in (path4, star5, k4, cubic6, lonely4):
        for method in ("ours", "guerrero", "dinneen", "pan"):
            nq = method_qubits(g, method)
            if nq > 12:
                continue
            diag = to_dense(build_method(g, method), nq)
            table = cost_table(g, method)
            scale = max(1.0, np.abs(table).max())
            assert np.abs(diag - table).max() / scale <= 1e-12


def test_build_ours_validates_weight(path4):
    with pytest.raises(ValueError):
        build_ours(path4, lam=1.0)


def test_guerrero_relates_to_ours_by_penalty_weight(k4, path4):
    # cost_ours(lam) - (-score) = -(lam - 1) * (#dominated vertices)
    from mds_qaoa import domination_counts
    for g in (k4, path4):
        diff = to_dense(build_ours(g, lam=2.0), g.n) - to_dense(build_guerrero(g), g.n)
        assert np.allclose(diff, -domination_counts(g).astype(float), atol=1e-12)


def test_build_qubo_basics():
    h = build_qubo({(0,): 1.0})
    assert np.array_equal(to_dense(h, 1), [0.0, 1.0])
    h2 = build_qubo({(): 1.0, (0, 1): 4.0})
    assert np.array_equal(to_dense(h2, 2), [1.0, 1.0, 1.0, 5.0])
    with pytest.raises(ValueError):
        build_qubo({(0, 1, 2): 1.0})
    with pytest.raises(ValueError):
        build_qubo({(3,): 1.0}, n_qubits=2)


def test_pan_isolated_vertex_diagonal():
    g = Graph(1, [])
    diag = to_dense(build_pan(g), 1)
    assert np.array_equal(diag, [2.0, 1.0])


def test_to_dense_register_too_small(k4):
    with pytest.raises(ValueError):
        to_dense(build_ours(k4), 3)


def test_gate_estimate_counts():
    est = gate_estimate(ZSum([(1.0, (0, 1, 2))]))
    assert (est.rz, est.cnot) == (1, 4)
    assert gate_estimate(ZSum([(2.0, ())])) == gate_estimate(ZSum([]))
    mixed = gate_estimate(ZSum([(1.0, ()), (1.0, (0,)), (1.0, (1, 2))]))
    assert (mixed.rz, mixed.cnot) == (2, 2)


def test_build_method_dispatch(path4):
    assert build_method(path4, "ours") == build_ours(path4)
    assert build_method(path4, "dinneen", big_p=3.0) == build_dinneen(path4, 3.0)
    with pytest.raises(ValueError):
        build_method(path4, "mystery")
