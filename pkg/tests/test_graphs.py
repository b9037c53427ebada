"""Graph container, generators, bit helpers, and the exact solver."""
import itertools
import json

import numpy as np
import pytest

from mds_qaoa import (Graph, InstanceSpec, generate, brute_force_mds,
                      is_dominating, domination_counts, as_bits, bits_to_index,
                      index_to_bits, load_graph, save_graph)


def test_edges_are_canonicalized():
    g = Graph(4, [(3, 1), (0, 2)])
    assert g.edges == ((0, 2), (1, 3))


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph(3, [(0, 0)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph(0, [])
    with pytest.raises(ValueError):
        Graph(25, [])


def test_neighbors_and_degrees(path4):
    assert path4.neighbors[1] == (0, 2)
    assert path4.degrees == (1, 2, 2, 1)
    assert path4.closed_neighborhood(0) == (0, 1)
    assert path4.closed_neighborhood(2) == (1, 2, 3)


def test_as_bits_forms():
    assert list(as_bits("0110", 4)) == [0, 1, 1, 0]
    assert list(as_bits([1, 0, 1], 3)) == [1, 0, 1]
    assert list(as_bits(np.array([0, 1]), 2)) == [0, 1]
    with pytest.raises(ValueError):
        as_bits("01", 3)
    with pytest.raises(ValueError):
        as_bits("021", 3)


def test_bit_index_round_trip():
    assert bits_to_index("1000") == 1
    assert bits_to_index("0100") == 2
    assert index_to_bits(1, 4) == "1000"
    for idx in range(32):
        assert bits_to_index(index_to_bits(idx, 5)) == idx


def test_is_dominating_hand_cases(path4, star5, lonely4):
    assert is_dominating(path4, "0110")
    assert is_dominating(path4, "1010")
    assert not is_dominating(path4, "1000")
    assert is_dominating(star5, "10000")
    assert not is_dominating(star5, "01000")
    assert is_dominating(lonely4, "0101")
    assert not is_dominating(lonely4, "0100")  # isolated vertex uncovered
    assert not is_dominating(Graph(1, []), "0")
    assert is_dominating(Graph(1, []), "1")


def test_domination_counts_matches_direct_loop():
    rng = np.random.default_rng(5)
    for _ in range(6):
        n = int(rng.integers(2, 9))
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < 0.4]
        g = Graph(n, edges)
        counts = domination_counts(g)
        for idx in range(1 << n):
            bits = as_bits(index_to_bits(idx, n), n)
            expect = sum(1 for i in range(n)
                         if any(bits[j] for j in g.closed_neighborhood(i)))
            assert counts[idx] == expect


def _oracle(g):
    for size in range(g.n + 1):
        hits = set()
        for combo in itertools.combinations(range(g.n), size):
            bits = ["0"] * g.n
            for v in combo:
                bits[v] = "1"
            s = "".join(bits)
            if is_dominating(g, s):
                hits.add(s)
        if hits:
            return size, frozenset(hits)
    raise AssertionError("unreachable")


def test_brute_force_mds_hand_cases(star5, lonely4, k4):
    assert brute_force_mds(star5) == (1, frozenset({"10000"}))
    assert brute_force_mds(lonely4) == (2, frozenset({"0101"}))
    size, optima = brute_force_mds(k4)
    assert size == 1 and optima == frozenset({"1000", "0100", "0010", "0001"})


def test_brute_force_mds_matches_combinations_oracle():
    rng = np.random.default_rng(11)
    for _ in range(10):
        n = int(rng.integers(2, 8))
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < 0.45]
        g = Graph(n, edges)
        assert brute_force_mds(g) == _oracle(g)


def test_generate_three_regular_properties():
    g1 = generate(InstanceSpec("3reg", 8, 42))
    g2 = generate(InstanceSpec("3reg", 8, 42))
    g3 = generate(InstanceSpec("3reg", 8, 43))
    assert g1 == g2
    assert all(d == 3 for d in g1.degrees)
    assert all(d == 3 for d in g3.degrees)
    with pytest.raises(ValueError):
        InstanceSpec("3reg", 5, 0)
    with pytest.raises(ValueError):
        InstanceSpec("ring", 6, 0)


def test_generate_erdos_renyi_properties():
    g1 = generate(InstanceSpec("er", 7, 9, edge_prob=0.5))
    g2 = generate(InstanceSpec("er", 7, 9, edge_prob=0.5))
    assert g1 == g2
    dense = generate(InstanceSpec("er", 7, 9, edge_prob=1.0))
    assert len(dense.edges) == 21
    empty = generate(InstanceSpec("er", 7, 9, edge_prob=0.0))
    assert empty.edges == ()


def test_save_load_round_trip(tmp_path, cubic6):
    path = tmp_path / "g.json"
    save_graph(cubic6, path)
    assert load_graph(path) == cubic6
    payload = json.loads(path.read_text())
    assert payload["n"] == 6 and len(payload["edges"]) == 9
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2}))
    with pytest.raises(ValueError):
        load_graph(bad)
