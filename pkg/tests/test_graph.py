"""Graph container, edge deltas, and stream parsing."""

import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynleiden.graph import (
    DeletionExceedsWeight,
    EdgeDelta,
    Graph,
    NegativeWeight,
    ParseError,
    apply_delta,
    load_edge_stream,
    make_delta,
)


def test_delta_normalizes_endpoints():
    d = make_delta(5, 2, 1.0)
    assert (d.u, d.v) == (2, 5)
    with pytest.raises(ValueError):
        make_delta(1, 2, 0.0)


def test_from_edges_accumulates_duplicates():
    g = Graph.from_edges([(1, 2, 1.0), (2, 1, 2.0)])
    assert g.weight(1, 2) == 3.0
    assert g.weight(2, 1) == 3.0
    assert g.m == 3.0
    with pytest.raises(NegativeWeight):
        Graph.from_edges([(1, 2, -1.0)])


def test_selfloop_conventions():
    # self-loop weight c: degree 2c, total weight c
    g = Graph.from_edges([(1, 1, 2.0), (1, 2, 1.0)])
    assert g.selfloop(1) == 2.0
    assert g.degree(1) == 5.0
    assert g.degree(2) == 1.0
    assert g.m == 3.0
    assert g.num_edges() == 2


def test_weight_to_set_matches_degree_on_full_set():
    g = Graph.from_edges([(1, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0)])
    vs = set(g.vertices())
    for v in vs:
        assert g.weight_to_set(v, vs) == pytest.approx(g.degree(v))
    assert g.weight_to_set(1, {2}) == 2.0
    assert g.weight_to_set(1, {1}) == 2.0  # only the doubled self-loop


def test_apply_one_deletion_clamps_dust_and_rejects_overdelete():
    g = Graph.from_edges([(1, 2, 1.0)])
    g.apply_one(make_delta(1, 2, -1.0 + 1e-15))  # dust-level residue removes the edge
    assert g.weight(1, 2) == 0.0
    assert g.m == pytest.approx(0.0, abs=1e-12)
    g2 = Graph.from_edges([(1, 2, 1.0)])
    with pytest.raises(DeletionExceedsWeight):
        g2.apply_one(make_delta(1, 2, -2.0))


def test_apply_delta_is_pure():
    g = Graph.from_edges([(1, 2, 1.0)])
    h = apply_delta(g, [make_delta(2, 3, 1.0)])
    assert g.weight(2, 3) == 0.0
    assert h.weight(2, 3) == 1.0
    assert h.has_vertex(3) and not g.has_vertex(3)


def test_copy_is_independent():
    g = Graph.from_edges([(1, 2, 1.0)])
    h = g.copy()
    h.apply_one(make_delta(1, 2, 1.0))
    assert g.weight(1, 2) == 1.0
    assert h.weight(1, 2) == 2.0


def test_load_edge_stream_text_and_comments():
    text = "# header\n1 2\n2 3 2.5\n\n4 5 1.0 100.0\n"
    edges, stats = load_edge_stream(text)
    assert edges == [(1, 2, 1.0, None), (2, 3, 2.5, None), (4, 5, 1.0, 100.0)]
    assert stats.comments == 1
    assert stats.edges == 3
    assert stats.vertices == 5
    assert not stats.has_timestamps  # not all rows carry one


def test_load_edge_stream_timestamps_and_file_object():
    fh = io.StringIO("1 2 1.0 3.0\n2 3 1.0 1.0\n")
    edges, stats = load_edge_stream(fh)
    assert stats.has_timestamps
    assert [e[3] for e in edges] == [3.0, 1.0]  # parse order, sorting is the caller's


def test_load_edge_stream_remaps_string_ids():
    edges, stats = load_edge_stream("a b\nb c\n")
    assert stats.id_map == {"a": 0, "b": 1, "c": 2}
    assert edges == [(0, 1, 1.0, None), (1, 2, 1.0, None)]


def test_load_edge_stream_rejects_garbage():
    with pytest.raises(ParseError):
        load_edge_stream("1\n")
    with pytest.raises(ParseError):
        load_edge_stream("1 2 x\n")
    with pytest.raises(NegativeWeight):
        load_edge_stream("1 2 0\n")


edge_lists = st.lists(
    st.tuples(st.integers(0, 12), st.integers(0, 12), st.floats(0.1, 5.0)),
    min_size=1,
    max_size=40,
)


@given(edge_lists)
@settings(max_examples=200, deadline=None)
def test_degree_sum_is_twice_total_weight(edges):
    g = Graph.from_edges(edges)
    assert sum(g.deg.values()) == pytest.approx(2.0 * g.m)
    # edges() yields each pair once with u <= v
    seen = set()
    for u, v, w in g.edges():
        assert u <= v and w > 0
        assert (u, v) not in seen
        seen.add((u, v))


@given(edge_lists)
@settings(max_examples=200, deadline=None)
def test_insert_then_delete_round_trips(edges):
    g = Graph.from_edges(edges)
    before = {(u, v): w for u, v, w in g.edges()}
    m0 = g.m
    batch = [make_delta(3, 14, 2.5), make_delta(3, 14, -2.5)]
    g.apply_batch_inplace(batch)
    assert {(u, v): w for u, v, w in g.edges()} == pytest.approx(before)
    assert g.m == pytest.approx(m0)
