"""From-scratch pipeline: phases, hierarchy shape, quality."""

import random

import pytest

from dynleiden.graph import Graph
from dynleiden.metrics import EmptyGraph, check_connectivity, modularity, vertex_optimality_fraction
from dynleiden.static_leiden import hierarchy_to_json, move_phase, refine_phase, run_leiden

from _support import canon_graph


def test_worked_example_membership_and_hierarchy():
    g = canon_graph()
    memb, hier = run_leiden(g)
    assert memb == {1: 2, 2: 2, 3: 3, 4: 3, 5: 6, 6: 6, 7: 6, 8: 6}
    assert hier.depth() == 3
    lvl0 = hier.levels[0]
    assert lvl0.f == {1: 2, 2: 2, 3: 4, 4: 4, 5: 7, 6: 7, 7: 7, 8: 7}
    # refinement splits the 4-cycle-heavy community into two halves
    assert lvl0.s == {1: 2, 2: 2, 3: 3, 4: 3, 5: 6, 6: 6, 7: 7, 8: 7}
    assert sorted(hier.levels[1].graph.vertices()) == [2, 3, 6, 7]
    assert sorted(hier.levels[2].graph.vertices()) == [2, 3, 6]
    assert modularity(g, memb) == pytest.approx(45 / 128)


def test_movement_is_vertex_optimal_and_refinement_stays_inside_communities():
    rng = random.Random(3)
    for _ in range(25):
        n = rng.randint(4, 20)
        g = Graph()
        for v in range(n):
            g.ensure_vertex(v)
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < 0.3:
                    g.add_weight(u, v, float(rng.randint(1, 2)))
        if g.m == 0:
            g.add_weight(0, 1, 1.0)
        f = move_phase(g, None, 1.0)
        assert vertex_optimality_fraction(g, f) == 1.0
        s = refine_phase(g, f, 1.0)
        # sub-communities never cross community boundaries and stay connected
        comm_of_sub = {}
        for v in g.vertices():
            comm_of_sub.setdefault(s[v], set()).add(f[v])
        assert all(len(cs) == 1 for cs in comm_of_sub.values())
        assert all(check_connectivity(g, s).values())


def test_level_modularity_is_invariant():
    rng = random.Random(9)
    for _ in range(20):
        n = rng.randint(5, 25)
        g = Graph()
        for v in range(n):
            g.ensure_vertex(v)
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < 0.35:
                    g.add_weight(u, v, float(rng.randint(1, 3)))
        if g.m == 0:
            g.add_weight(0, 1, 1.0)
        memb, hier = run_leiden(g)
        q_base = modularity(g, memb)
        # contracting by sub-communities must not change the score, provided
        # each level is labeled with the final (top-down) assignment
        depth = hier.depth()
        fs = [dict(lvl.f) for lvl in hier.levels]
        for p in range(depth - 2, -1, -1):
            s = hier.levels[p].s
            fs[p] = {v: fs[p + 1][s[v]] for v in hier.levels[p].graph.vertices()}
        for p in range(depth):
            q_level = modularity(hier.levels[p].graph, fs[p])
            assert q_level == pytest.approx(q_base, abs=1e-9)


def test_warm_start_accepts_previous_membership():
    g = canon_graph()
    memb, _ = run_leiden(g)
    memb2, _ = run_leiden(g, f_init=memb)
    # seeding with a converged answer must not lose quality
    assert modularity(g, memb2) >= modularity(g, memb) - 1e-12


def test_planted_blocks_are_recovered():
    from dynleiden.bench import generate_planted_partition, graph_from_edges

    edges = generate_planted_partition(6, 25, p_in=0.4, p_out=0.002, seed=4)
    g = graph_from_edges(edges)
    memb, _ = run_leiden(g)
    # every block should map to exactly one community (labels are arbitrary)
    for b in range(6):
        labels = {memb[v] for v in range(b * 25, (b + 1) * 25) if g.has_vertex(v)}
        assert len(labels) == 1, (b, labels)
    assert modularity(g, memb) > 0.6


def test_rejects_empty_graph_and_bad_levels():
    with pytest.raises(EmptyGraph):
        run_leiden(Graph())
    with pytest.raises(ValueError):
        run_leiden(canon_graph(), levels=0)


def test_levels_cap_limits_depth():
    g = canon_graph()
    _, hier = run_leiden(g, levels=1)
    assert hier.depth() == 1


def test_hierarchy_json_shape():
    g = canon_graph()
    _, hier = run_leiden(g)
    doc = hierarchy_to_json(hier)
    assert doc["depth"] == 3 and doc["gamma"] == 1.0
    lvl = doc["levels"][0]
    assert lvl["num_vertices"] == 8 and lvl["num_edges"] == 8
    assert lvl["total_weight"] == 8.0
    assert lvl["f"]["1"] == 2 and lvl["s"]["8"] == 7
    assert [1, 2, 1.0] in lvl["edges"]
    # deeper levels expose the contracted supergraphs
    assert doc["levels"][1]["num_vertices"] == 4


def test_gamma_controls_granularity():
    g = canon_graph()
    lo, _ = run_leiden(g, gamma=0.05)
    hi, _ = run_leiden(g, gamma=3.0)
    assert len(set(lo.values())) <= len(set(hi.values()))
