import io
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pushpull.errors import EmptyGraphError, ParameterError, ParseError
from pushpull.graph import (Graph, degree_statistics, erdos_renyi, generate, load_edge_list,
                            parse_generator_spec, resolve_average_degree, write_edge_list)

from conftest import star


def load(text, directed=False):
    return load_edge_list(io.StringIO(text), directed=directed)


def test_path_graph_degrees():
    g, rep = load("0 1\n1 2\n")
    assert g.n == 3
    assert g.degree.tolist() == [1, 2, 1]
    assert rep.edges == 2


def test_duplicates_and_self_loops_dropped():
    g, rep = load("0 1\n0 1\n1 1\n")
    assert (g.n, g.num_edges) == (2, 1)
    assert rep.duplicates_dropped == 1
    assert rep.self_loops_dropped == 1
    assert json.loads(rep.to_json()) == {"nodes": 2, "edges": 1, "duplicates_dropped": 1,
                                         "self_loops_dropped": 1}


def test_remap_preserves_first_appearance():
    g, _ = load("# comment\n100 7\n\n7 42\n")
    # 100 -> 0, 7 -> 1, 42 -> 2
    assert sorted(g.edges()) == [(0, 1), (1, 2)]


def test_undirected_reverse_is_duplicate():
    g, rep = load("0 1\n1 0\n")
    assert g.num_edges == 1 and rep.duplicates_dropped == 1


def test_directed_keeps_both_arcs_and_uses_in_degree():
    g, rep = load("0 1\n1 0\n0 2\n", directed=True)
    assert g.num_edges == 3 and rep.duplicates_dropped == 0
    assert g.in_degree.tolist() == [1, 1, 1]
    assert g.out_degree.tolist() == [2, 1, 0]
    # row v of the adjacency lists the nodes that point at v
    assert g.in_neighbors(2).tolist() == [0]


@pytest.mark.parametrize("text,lineno", [("0 1\n1 x\n", 2), ("0 1 2\n", 1), ("5\n", 1), ("0 -1\n", 1)])
def test_parse_errors_carry_line_number(text, lineno):
    with pytest.raises(ParseError) as exc:
        load(text)
    assert exc.value.lineno == lineno
    assert f"line {lineno}" in str(exc.value)


def test_empty_input():
    with pytest.raises(EmptyGraphError):
        load("# only a comment\n\n")


def test_round_trip_edge_list(er2000):
    buf = io.StringIO()
    write_edge_list(er2000, buf)
    buf.seek(0)
    g, rep = load_edge_list(buf)
    # isolated nodes do not appear in an edge list
    assert g.num_edges == er2000.num_edges
    assert rep.duplicates_dropped == 0


def test_regular_generator(reg2000):
    assert reg2000.num_edges == 6000
    assert set(reg2000.degree.tolist()) == {6}


def test_erdos_renyi_exact_count(er2000):
    assert er2000.num_edges == 6001
    u, v = zip(*er2000.edges())
    assert all(a < b for a, b in zip(u, v))


def test_erdos_renyi_probability_input():
    g = erdos_renyi(100, 0.1, 3)
    assert g.num_edges == round(0.1 * 100 * 99 / 2)


def test_erdos_renyi_complete():
    g = erdos_renyi(30, 435, 1)
    assert set(g.degree.tolist()) == {29}


def test_preferential_attachment_edge_count(pa2000):
    assert abs(pa2000.num_edges - 5997) <= 0.01 * 5997
    assert pa2000.degree.min() >= 3


@pytest.mark.parametrize("model,n,target", [("regular", 7, 3), ("regular", 5, 5),
                                            ("erdos_renyi", 10, 46), ("preferential_attachment", 3, 3)])
def test_infeasible_generator_parameters(model, n, target):
    with pytest.raises(ParameterError):
        generate(model, n, target, 0)


@pytest.mark.parametrize("model,target", [("regular", 4), ("erdos_renyi", 150), ("preferential_attachment", 2)])
def test_generators_reproducible(model, target):
    a = generate(model, 100, target, 99)
    b = generate(model, 100, target, 99)
    c = generate(model, 100, target, 100)
    assert sorted(a.edges()) == sorted(b.edges())
    assert sorted(a.edges()) != sorted(c.edges())


def test_generator_spec_parsing():
    assert parse_generator_spec("regular:2000:6") == ("regular", 2000, 6)
    assert parse_generator_spec("er:100:0.05") == ("erdos_renyi", 100, 0.05)
    with pytest.raises(ParameterError):
        parse_generator_spec("regular:2000")


def test_regular_degree_stats(reg2000):
    s = degree_statistics(reg2000)
    assert s.avg_degree == 6.0 and s.max_degree == 6
    assert np.all(s.second_order == 30)
    assert s.k_hat == 6 and s.class_size_at_avg == 2000


def test_star_degree_stats():
    s = degree_statistics(star())
    assert s.degree.tolist() == [4, 1, 1, 1, 1]
    assert s.avg_degree == pytest.approx(1.6)
    # leaf: 4 - 1 = 3; centre: 4 * 1 - 4 = 0
    assert s.second_order.tolist() == [0, 3, 3, 3, 3]
    assert s.k_rounded == 2 and s.k_hat == 1
    assert s.mean_2deg_at_avg == 3.0
    assert s.k_prime.tolist() == pytest.approx([0, 3 / 1.6, 3 / 1.6, 3 / 1.6, 3 / 1.6])


def test_directed_second_order():
    # arcs 0->1, 1->0, 2->1 : node 1 has in-neighbours {0, 2}, one reciprocated
    g = Graph.from_arcs(3, [0, 1, 2], [1, 0, 1], directed=True)
    s = degree_statistics(g)
    assert s.degree.tolist() == [1, 2, 0]
    assert s.second_order.tolist() == [2 - 1, (1 + 0) - 1, 0]


@pytest.mark.parametrize("avg,present,expected", [
    (6.7059, [5, 6, 7, 8], (7, 7)),
    (6.5, [6, 7], (7, 7)),
    (1.6, [1, 4], (2, 1)),
    (5.0, [4, 6], (5, 4)),   # equidistant: smaller wins
    (20.0404, [19, 21], (20, 19)),
])
def test_average_degree_resolution(avg, present, expected):
    assert resolve_average_degree(avg, present) == expected


edge_lists = st.lists(st.tuples(st.integers(0, 15), st.integers(0, 15)), min_size=1, max_size=60)


@given(edge_lists, st.booleans())
@settings(max_examples=100, deadline=None)
def test_ingestion_invariants(pairs, directed):
    text = "\n".join(f"{a} {b}" for a, b in pairs)
    g, rep = load(text, directed=directed)
    dense = g.dense()
    assert np.all(np.diag(dense) == 0)
    assert set(np.unique(dense)) <= {0.0, 1.0}
    if not directed:
        assert np.array_equal(dense, dense.T)
        assert g.degree.sum() % 2 == 0
    assert rep.edges + rep.duplicates_dropped + rep.self_loops_dropped == len(pairs)
    ids = {x for p in pairs for x in p}
    assert g.n == len(ids)
    s = degree_statistics(g)
    assert (np.arange(s.histogram.size) * s.histogram).sum() == g.degree.sum()
    assert s.avg_degree == pytest.approx(g.degree.sum() / g.n)
    if not directed:
        expect = dense @ g.degree - g.degree
        assert np.array_equal(s.second_order, expect)
        assert np.all(s.second_order >= 0)
