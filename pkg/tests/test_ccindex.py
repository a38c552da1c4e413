"""Dynamic connectivity index: unions, two-sided splits, bookkeeping."""

import random
from collections import deque

import pytest

from dynleiden.ccindex import CCIndex, EdgeNotInIndex, build_cc_index, cc_update_edge
from dynleiden.graph import Graph

from _support import canon_graph


def _index_for_canon():
    g = canon_graph()
    s = {1: 2, 2: 2, 3: 3, 4: 3, 5: 6, 6: 6, 7: 7, 8: 7}
    return build_cc_index(g, s)


def test_build_indexes_only_intra_sub_edges():
    idx = _index_for_canon()
    assert idx.has_edge(1, 2) and idx.has_edge(3, 4)
    assert idx.has_edge(5, 6) and idx.has_edge(7, 8)
    # (5,7), (6,7), (6,8) cross the {5,6}/{7,8} sub boundary
    assert not idx.has_edge(5, 7) and not idx.has_edge(6, 7) and not idx.has_edge(6, 8)
    for sub in (2, 3, 6, 7):
        comps = idx.components_of(sub)
        assert len(comps) == 1 and comps[0] == idx.members(sub)


def test_selfloops_are_never_indexed():
    g = Graph.from_edges([(1, 1, 2.0), (1, 2, 1.0)])
    idx = build_cc_index(g, {1: 0, 2: 0})
    assert not idx.has_edge(1, 1)
    with pytest.raises(EdgeNotInIndex):
        idx.delete_edge(1, 1)


def test_insert_unions_and_never_splits():
    g = Graph.from_edges([(1, 2, 1.0), (3, 4, 1.0)])
    idx = build_cc_index(g, {v: 0 for v in (1, 2, 3, 4)})
    assert len(idx.components_of(0)) == 2
    assert idx.insert_edge(2, 3) is False
    assert idx.components_of(0) == [{1, 2, 3, 4}]
    # duplicate insert is a no-op
    assert idx.insert_edge(2, 3) is False


def test_delete_detects_splits_and_bridges():
    # path 1-2-3-4 plus chord 1-3: deleting (2,3) keeps it connected,
    # deleting (3,4) afterwards strands vertex 4
    g = Graph.from_edges([(1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (1, 3, 1.0)])
    idx = build_cc_index(g, {v: 0 for v in (1, 2, 3, 4)})
    assert idx.delete_edge(2, 3) is False
    assert idx.components_of(0) == [{1, 2, 3, 4}]
    assert idx.delete_edge(3, 4) is True
    comps = sorted(idx.components_of(0), key=len)
    assert comps == [{4}, {1, 2, 3}]


def test_delete_unindexed_edge_raises():
    idx = _index_for_canon()
    with pytest.raises(EdgeNotInIndex):
        idx.delete_edge(5, 7)  # cross-sub, never indexed
    with pytest.raises(EdgeNotInIndex):
        idx.delete_edge(1, 4)  # not an edge at all


def test_split_components_keeper_rule():
    g = Graph.from_edges([(1, 2, 1.0), (2, 3, 1.0), (4, 5, 1.0), (6, 7, 1.0)])
    s = {v: 0 for v in range(1, 8)}
    idx = build_cc_index(g, s)
    flagged = idx.split_components(0)
    keepers = [keep for _, keep in flagged]
    assert keepers == [True, False, False]
    # largest component first; among the size-2 ties, {4,5} precedes {6,7}
    assert [c for c, _ in flagged] == [{1, 2, 3}, {4, 5}, {6, 7}]


def test_add_vertex_and_duplicate_rejection():
    idx = _index_for_canon()
    idx.add_vertex(99, 6)
    assert 99 in idx.members(6)
    assert {99} in idx.components_of(6)
    with pytest.raises(ValueError):
        idx.add_vertex(99, 2)


def test_reassign_moves_membership_only():
    idx = _index_for_canon()
    idx.reassign([7, 8], 6)
    assert idx.members(6) == {5, 6, 7, 8}
    assert idx.members(7) == set()
    # the old intra-{7,8} edge is still indexed, cross edges are not —
    # the caller re-indexes; until then components stay as they were
    assert idx.has_edge(7, 8) and not idx.has_edge(6, 7)
    assert sorted(idx.components_of(6), key=min) == [{5, 6}, {7, 8}]
    idx.insert_edge(6, 7)
    assert idx.components_of(6) == [{5, 6, 7, 8}]


def test_cc_update_edge_wrapper():
    g = Graph.from_edges([(1, 2, 1.0), (2, 3, 1.0)])
    idx = build_cc_index(g, {1: 0, 2: 0, 3: 0})
    assert cc_update_edge(idx, 2, 3, present=False) is True
    assert cc_update_edge(idx, 2, 3, present=True) is False


def _bfs_components(vertices, adj):
    comps, seen = [], set()
    for v in vertices:
        if v in seen:
            continue
        comp, queue = {v}, deque([v])
        seen.add(v)
        while queue:
            x = queue.popleft()
            for y in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    queue.append(y)
        comps.append(comp)
    return sorted(comps, key=min)


def test_random_churn_matches_bfs_recomputation():
    rng = random.Random(17)
    n = 14
    g = Graph()
    for v in range(n):
        g.ensure_vertex(v)
    s = {v: v % 2 for v in range(n)}
    idx = build_cc_index(g, s)
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if s[u] == s[v]]
    for _ in range(600):
        u, v = rng.choice(pairs)
        if v in adj[u]:
            idx.delete_edge(u, v)
            adj[u].discard(v)
            adj[v].discard(u)
        else:
            idx.insert_edge(u, v)
            adj[u].add(v)
            adj[v].add(u)
        for sub in (0, 1):
            verts = sorted(x for x in range(n) if s[x] == sub)
            assert sorted(idx.components_of(sub), key=min) == _bfs_components(verts, adj)
