"""Incremental maintainer: golden traces, structural invariants, fuzz."""

import random

import pytest

from dynleiden.graph import Graph, make_delta
from dynleiden.hit import (
    HitState,
    _Level,
    build_hit_state,
    hit_leiden_step,
    hit_state_to_json,
    inc_aggregation,
)
from dynleiden.metrics import modularity
from dynleiden.static_leiden import run_leiden

from _support import (
    canon_graph,
    check_state,
    edges_dict,
    random_batch,
    random_graph,
    two_block_state,
)


def test_build_matches_static_pipeline():
    g = canon_graph()
    state = build_hit_state(g)
    memb, _ = run_leiden(g)
    # reported labels are top-level sub ids; for this graph they coincide
    assert state.membership() == memb
    assert state.depth() == 3
    check_state(state, g, "fresh build")
    # builder must copy: mutating the source graph leaves the state alone
    g.add_weight(1, 8, 5.0)
    assert abs(state.levels[0].graph.m - 8.0) < 1e-12


def test_worked_step_golden():
    # strengthen 1-3 and cut 3-5: supervertex {1,2} migrates into {3,4}'s
    # community and merges with its sub, two levels up from the edits
    base = canon_graph()
    state = build_hit_state(base)
    batch = [(1, 3, 1.0), (3, 5, -1.0)]
    memb, stats = hit_leiden_step(state, batch)

    assert memb == {1: 3, 2: 3, 3: 3, 4: 3, 5: 6, 6: 6, 7: 6, 8: 6}
    assert stats.changed == 2 and stats.aff == 2
    assert stats.membership_changes == {1: (2, 3), 2: (2, 3)}
    assert stats.feed == [
        {"level": 1, "vertex": 1, "old_community": 2, "new_community": 4},
        {"level": 1, "vertex": 2, "old_community": 2, "new_community": 4},
        {"level": 2, "vertex": 2, "old_community": 2, "new_community": 4},
        {"level": 2, "vertex": 2, "old_sub": 2, "new_sub": 3},
    ]
    got = [(ls.level, ls.deltas_in, ls.deltas_out, ls.moved, ls.reassigned) for ls in stats.levels]
    assert got == [(1, 2, 2, 0, 0), (2, 2, 3, 1, 1), (3, 3, 0, 0, 0)]

    for u, v, a in batch:
        base.apply_one(make_delta(u, v, a))
    check_state(state, base, "worked step")
    # quality check: the maintained labels are the optimum for the new graph
    memb2, _ = run_leiden(base)
    assert modularity(base, memb) == pytest.approx(modularity(base, memb2), abs=1e-12)


def test_empty_batch_is_identity():
    state = build_hit_state(canon_graph())
    before = hit_state_to_json(state)
    memb, stats = hit_leiden_step(state, [])
    assert stats.changed == 0 and stats.aff == 0
    assert stats.feed == [] and stats.membership_changes == {}
    assert memb == state.membership()
    assert hit_state_to_json(state) == before


def test_disconnection_relabels_stranded_vertex():
    # cutting both of 2's edges strands it: its sub splits off, and the new
    # zero-degree supervertex must still materialize one level up
    base = Graph.from_edges([(1, 2, 1.0), (2, 3, 1.0), (1, 3, 1.0)])
    state = build_hit_state(base)
    assert state.depth() == 2
    memb, stats = hit_leiden_step(state, [(1, 2, -1.0), (2, 3, -1.0)])

    lvl0 = state.levels[0]
    assert lvl0.psi.sub_of == {1: 3, 2: 4, 3: 3}
    assert lvl0.f == {1: 3, 2: 3, 3: 3}  # community is unchanged, label is not
    assert memb == {1: 3, 2: 5, 3: 3}
    assert stats.changed == 1 and stats.aff == 1
    assert stats.feed == [
        {"level": 1, "vertex": 2, "old_sub": 3, "new_sub": 4},
        {"level": 2, "vertex": 4, "old_community": None, "new_community": 3},
    ]
    assert stats.levels[0].splits == 1
    assert stats.levels[1].new_vertices == 1
    up = state.levels[1].graph
    assert sorted(up.vertices()) == [3, 4]
    assert edges_dict(up) == {(3, 3): 1.0}

    base.apply_one(make_delta(1, 2, -1.0))
    base.apply_one(make_delta(2, 3, -1.0))
    check_state(state, base, "disconnection")


def test_two_block_state_pulls_vertices_across():
    # same edits against a coarser hierarchy: 3 and 4 defect to {1,2},
    # splitting off as a fresh sub that aggregates into a new supervertex
    state = two_block_state()
    check_state(state, canon_graph(), "hand-built state")
    batch = [(1, 3, 1.0), (3, 5, -1.0)]
    memb, stats = hit_leiden_step(state, batch)

    assert memb == {v: 301 if v <= 4 else 302 for v in range(1, 9)}
    assert stats.changed == 2 and stats.aff == 2
    assert stats.membership_changes == {3: (302, 301), 4: (302, 301)}
    assert stats.feed == [
        {"level": 1, "vertex": 3, "old_community": 102, "new_community": 101},
        {"level": 1, "vertex": 4, "old_community": 102, "new_community": 101},
        {"level": 1, "vertex": 3, "old_sub": 202, "new_sub": 400},
        {"level": 1, "vertex": 4, "old_sub": 202, "new_sub": 400},
        {"level": 2, "vertex": 400, "old_community": None, "new_community": 101},
        {"level": 2, "vertex": 400, "old_sub": 402, "new_sub": 301},
    ]
    got = [(ls.level, ls.moved, ls.reassigned, ls.splits) for ls in stats.levels]
    assert got == [(1, 2, 2, 2), (2, 0, 1, 0)]

    l1, l2 = state.levels
    assert l1.psi.sub_of == {1: 201, 2: 201, 3: 400, 4: 400,
                             5: 202, 6: 202, 7: 202, 8: 202}
    assert edges_dict(l2.graph) == {
        (201, 201): 1.0, (201, 400): 1.0, (202, 202): 5.0, (400, 400): 1.0}
    assert l2.psi.sub_of == {201: 301, 202: 302, 400: 301}

    base = canon_graph()
    for u, v, a in batch:
        base.apply_one(make_delta(u, v, a))
    check_state(state, base, "two-block step")


def test_aggregation_emits_transfer_deltas():
    # vertices 3 and 4 were re-homed from sub 202 to 201 this step; their
    # edges must move supergraph weight, with the shared edge counted once
    g1 = Graph.from_edges(
        [(1, 2, 1.0), (1, 3, 1.0), (3, 4, 1.0), (5, 6, 1.0),
         (6, 7, 1.0), (7, 8, 1.0), (5, 7, 1.0), (6, 8, 1.0)])
    f1 = {v: 101 for v in range(1, 5)} | {v: 102 for v in range(5, 9)}
    s1 = {v: 201 for v in range(1, 5)} | {v: 202 for v in range(5, 9)}
    l1 = _Level(g1, f1, s1)
    l1.pre_sub = {3: 202, 4: 202}
    l2 = _Level(Graph.from_edges([(201, 201, 1.0), (202, 202, 7.0)]),
                {201: 101, 202: 102}, {201: 301, 202: 302})
    state = HitState([l1, l2], 1.0, 400)
    out = inc_aggregation(state, 0, [(1, 3, 1.0), (3, 5, -1.0)], {3, 4})
    assert [(d.u, d.v, d.alpha) for d in out] == [(201, 201, 2.0), (202, 202, -2.0)]


def test_new_vertices_bootstrap_from_an_insertion():
    base = canon_graph()
    state = build_hit_state(base)
    memb, stats = hit_leiden_step(state, [(9, 10, 2.0), (10, 11, 2.0)])
    assert memb[9] == memb[10] == memb[11]
    assert all(memb[v] != memb[9] for v in range(1, 9))
    assert set(stats.membership_changes) == {9, 10, 11}
    # creation rows carry a null previous community
    born = [r for r in stats.feed if r.get("old_community", 0) is None]
    assert {r["vertex"] for r in born if r["level"] == 1} == {9, 10, 11}
    base.apply_one(make_delta(9, 10, 2.0))
    base.apply_one(make_delta(10, 11, 2.0))
    check_state(state, base, "new vertices")


def test_insert_then_delete_leaves_no_residue():
    base = canon_graph()
    state = build_hit_state(base)
    hit_leiden_step(state, [(9, 10, 1.0)])
    memb, _ = hit_leiden_step(state, [(9, 10, -1.0)])
    # 9 and 10 survive as isolated vertices with zero-weight supervertices
    assert 9 in memb and 10 in memb and memb[9] != memb[10]
    base.apply_one(make_delta(9, 10, 1.0))
    base.apply_one(make_delta(9, 10, -1.0))
    check_state(state, base, "insert-delete residue")


def test_state_json_shape():
    state = build_hit_state(canon_graph())
    doc = hit_state_to_json(state)
    assert doc["depth"] == 3 and doc["gamma"] == 1.0
    lvl = doc["levels"][0]
    assert set(lvl) == {"num_vertices", "num_edges", "total_weight", "f", "s", "g", "edges"}
    assert lvl["g"]["1"] == 2 and lvl["g"]["8"] == 6


def test_random_churn_preserves_every_invariant():
    for seed in (1, 2, 3, 11):
        rng = random.Random(seed)
        base = random_graph(rng, rng.randint(4, 12))
        state = build_hit_state(base, levels=6)
        check_state(state, base, f"seed {seed} build")
        for step in range(12):
            batch = random_batch(rng, base, 12)
            hit_leiden_step(state, batch)
            for d in batch:
                base.apply_one(d)
            check_state(state, base, f"seed {seed} step {step}")


def test_maintained_quality_tracks_rebuild():
    # communities maintained through churn should stay close to a rebuild
    rng = random.Random(5)
    base = random_graph(rng, 16, p=0.3)
    state = build_hit_state(base)
    for _ in range(15):
        batch = random_batch(rng, base, 16, max_deltas=3)
        hit_leiden_step(state, batch)
        for d in batch:
            base.apply_one(d)
    q_inc = modularity(base, state.membership())
    memb, _ = run_leiden(base)
    q_fresh = modularity(base, memb)
    assert q_inc >= q_fresh - 0.05
