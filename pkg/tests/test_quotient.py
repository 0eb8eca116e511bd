import pytest

from bsk.constructions import spider, star_tree
from bsk.errors import InversionError, NotAnIsometry
from bsk.groups import GroupHom, cyclic, identity_hom, sym
from bsk.quotient import (DEGENERATE, NEGATIVE, POSITIVE, DegenerateEdge, FiniteAction,
                          TreeOfGroups, cycle_rank, elliptic_generation_check,
                          follow_positive_chain, fundamental_domain, orient_edges,
                          quotient_graph)
from bsk.trees import Edge, FiniteGraph, FiniteTree, is_tree, validate_graph
from bsk.verify import finite_actions


def trivial_action(tree):
    return FiniteAction(cyclic(1), tree, {0: {v: v for v in tree.vertices}}, "trivial")


# actions

def test_action_validation():
    t = FiniteTree.path(2)
    with pytest.raises(InversionError) as exc:
        FiniteAction(cyclic(2), t, {0: {0: 0, 1: 1}, 1: {0: 1, 1: 0}})
    assert exc.value.edge == (0, 1)
    p = FiniteTree.path(3)
    with pytest.raises(NotAnIsometry):
        FiniteAction(cyclic(2), p, {0: {0: 0, 1: 1, 2: 2}, 1: {0: 0, 1: 2, 2: 1}})
    # two reflections of a path do not give Z3
    with pytest.raises(ValueError, match="homomorphism"):
        FiniteAction(cyclic(3), p, {0: {0: 0, 1: 1, 2: 2}, 1: {0: 2, 1: 1, 2: 0},
                                    2: {0: 2, 1: 1, 2: 0}})


def test_actions_from_generators():
    p = FiniteTree.path(5)
    act = FiniteAction.from_generators(cyclic(2), p, {1: {0: 4, 1: 3, 2: 2, 3: 1, 4: 0}})
    assert act.fixed_vertices(1) == [2]
    with pytest.raises(ValueError, match="generate"):
        FiniteAction.from_generators(cyclic(4), p, {2: {v: v for v in p.vertices}})


# quotients

def test_trivial_quotient_is_the_tree(backend):
    t = FiniteTree.path(4)
    q = quotient_graph(trivial_action(t))
    assert q.graph.vertices == t.vertices
    assert len(q.graph.edges) == len(t.graph.edges)
    assert fundamental_domain(trivial_action(t)).vertices == set(t.vertices)


@pytest.mark.parametrize("n", [2, 3])
def test_rotating_a_star_gives_one_edge(backend, n):
    act = star_tree(cyclic(n))
    q = quotient_graph(act)
    assert q.graph.vertices == ("*", "0")
    assert len(q.graph.edges) == 2 and validate_graph(q.graph) == []
    assert q.vertex_orbits["0"] == {str(i) for i in range(n)}
    fd = fundamental_domain(act, q)
    assert fd.vertices == {"*", "0"} and fd.lift == {"*": "*", "0": "0"}


def test_quotient_incidence_is_induced(backend):
    act = spider(cyclic(3), 3)
    q = quotient_graph(act)
    for e in act.tree.graph.edges:
        r = q.edge_class[e]
        assert q.graph.origin(r) == q.vertex_class[act.tree.graph.origin(e)]
        assert q.graph.inverse(r) == q.edge_class[act.tree.graph.inverse(e)]
    assert is_tree(q.graph) and len(q.graph.vertices) == 4


def test_cycle_rank_examples():
    assert cycle_rank(FiniteTree.path(6).graph) == 0
    loop = FiniteGraph(["v"], [Edge("e", "v", "v", "f"), Edge("f", "v", "v", "e")])
    assert cycle_rank(loop) == 1
    theta = FiniteGraph.from_pairs(["x", "y"], [("x", "y")] * 3)
    assert cycle_rank(theta) == 2
    assert cycle_rank(FiniteGraph.from_pairs(range(4), [(0, 1), (2, 3)])) == 0


def test_elliptic_generation_examples():
    v = elliptic_generation_check(star_tree(cyclic(2)))
    assert v.holds and v.rank == 0
    v = elliptic_generation_check(star_tree(sym(3)))
    assert v.all_elliptic and len(v.amplitudes) == 6 and v.holds


def test_every_corpus_action(backend, env):
    acts = finite_actions() + [env.actions[k] for k in sorted(env.actions)]
    assert len(acts) >= 10
    for act in acts:
        q = quotient_graph(act)
        assert validate_graph(q.graph) == []
        assert elliptic_generation_check(act, q).holds
        fd = fundamental_domain(act, q)
        assert sorted(q.vertex_class[x] for x in fd.vertices) == sorted(q.vertex_orbits)


# trees of groups

def test_chain_orientation(env):
    tog = env.togs["chain3"]
    ori = orient_edges(tog)
    assert ori.positive == [("e01", "g0", "g1"), ("e12", "g1", "g2")]
    assert ori.negative == [("e01", "g1", "g0"), ("e12", "g2", "g1")]
    assert not ori.degenerate and not ori.disagreements
    walk = follow_positive_chain(tog, "g0", ori)
    assert walk.path == ("g0", "g1", "g2") and walk.stop == "sink"
    assert walk.to_dict()["chain"] == ["Z1", "Z2", "Z4"]
    assert walk.inclusions[1].images == (0, 2)


def test_degenerate_classes(env):
    ori = orient_edges(env.togs["flat"])
    assert set(ori.local.values()) == {DEGENERATE}
    assert set(ori.diagnostics.values()) == {"both"}
    ori = orient_edges(env.togs["z2z3_edge"])
    assert set(ori.diagnostics.values()) == {"neither"}
    with pytest.raises(DegenerateEdge) as exc:
        follow_positive_chain(env.togs["z2z3_edge"], "x")
    assert exc.value.reason == "neither"


def test_walk_stops_at_a_fork(env):
    walk = follow_positive_chain(env.togs["fork"], "mid")
    assert walk.stop == "multiple" and walk.path == ("mid",)
    assert walk.outgoing == (("l", "mid", "left"), ("r", "mid", "right"))
    # the global rule sees Z4 on the far side and refuses both edges
    ori = orient_edges(env.togs["fork"])
    assert len(ori.disagreements) == 4
    assert set(ori.global_.values()) == {DEGENERATE}


def test_single_vertex_is_a_sink():
    z2 = cyclic(2)
    tog = TreeOfGroups(["v"], [], {"v": z2}, {}, {})
    walk = follow_positive_chain(tog, "v")
    assert walk.path == ("v",) and walk.stop == "sink" and walk.to_dict()["chain"] == [None]


def test_orientation_reverses_with_the_edge(env):
    flip = {POSITIVE: NEGATIVE, NEGATIVE: POSITIVE, DEGENERATE: DEGENERATE}
    for tog in env.togs.values():
        ori = orient_edges(tog)
        for (n, o, t), c in ori.local.items():
            assert ori.local[(n, t, o)] == flip[c]
        geometric = {n for n, _, _ in tog.edge_list}
        assert len(ori.local) == 2 * len(geometric)


def test_longer_chain_global_rule_agrees():
    z = [cyclic(2 ** k) for k in range(4)]
    incl = [GroupHom(z[k], z[k + 1], tuple(2 * x for x in range(2 ** k)), f"i{k}")
            for k in range(3)]
    alphas = {}
    for k in range(3):
        alphas[(f"e{k}", f"g{k}")] = identity_hom(z[k])
        alphas[(f"e{k}", f"g{k + 1}")] = incl[k]
    tog = TreeOfGroups([f"g{k}" for k in range(4)],
                       [(f"e{k}", f"g{k}", f"g{k + 1}") for k in range(3)],
                       {f"g{k}": z[k] for k in range(4)}, {f"e{k}": z[k] for k in range(3)},
                       alphas)
    ori = orient_edges(tog)
    assert not ori.disagreements
    assert follow_positive_chain(tog, "g0", ori).path == ("g0", "g1", "g2", "g3")


def test_tree_of_groups_validation():
    z2, z4 = cyclic(2), cyclic(4)
    with pytest.raises(ValueError, match="no map"):
        TreeOfGroups(["u", "v"], [("e", "u", "v")], {"u": z2, "v": z2}, {"e": z2},
                     {("e", "u"): identity_hom(z2)})
    bad = GroupHom(z2, z4, (0, 1), "bad")
    with pytest.raises(ValueError, match="not multiplicative"):
        TreeOfGroups(["u", "v"], [("e", "u", "v")], {"u": z2, "v": z4}, {"e": z2},
                     {("e", "u"): identity_hom(z2), ("e", "v"): bad})
