"""Acceptance gate: one test per numbered criterion, summarised at the end of the run."""
import os
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from bsk import isometry as iso
from bsk.constructions import ChainTree, Prufer, chain_end, dinf_word, line_action
from bsk.quotient import (DEGENERATE, cycle_rank, follow_positive_chain, fundamental_domain,
                          orient_edges, quotient_graph)
from bsk.trees import ball
from bsk.verify import SUITES, amplitude_corpus, finite_actions

pytestmark = pytest.mark.acceptance

AMPLITUDE_SECONDS = 60.0
ORIENT_SECONDS = 1.0


def run_suite(env, name, seed=7):
    res = SUITES[name](env, seed)
    assert res.passed, res.failures
    return res


@pytest.mark.criterion(1, "amplitude agreement")
def test_amplitude_agreement(env):
    t0 = time.perf_counter()
    res = run_suite(env, "amplitude")
    elapsed = time.perf_counter() - t0
    assert res.stats["automorphisms"] >= 200
    assert elapsed < AMPLITUDE_SECONDS
    corpus = amplitude_corpus(env)
    names = {n.split(":")[0] for n, _, _ in corpus}
    assert {"z2z3", "z4z6", "dinf", "prufer2", "prufer3"} <= names
    assert sum(n.startswith("dinf:") for n, _, _ in corpus) == 511


@pytest.mark.criterion(2, "Culler-Morgan identity")
def test_culler_morgan_identity(env):
    res = run_suite(env, "culler-morgan")
    assert res.stats["disjoint_elliptic_pairs"] >= 50
    # spot check against the closed form on the generators
    sp = env.amalgams["z2z3"]
    v = iso.culler_morgan_check(sp.translation(sp.parse_word("A:1")),
                                sp.translation(sp.parse_word("B:1")))
    assert v.norm_gh == v.norm_g + v.norm_h + 2 * v.dist == 2


@pytest.mark.criterion(3, "Serre's lemma")
def test_serre_lemma(env):
    res = run_suite(env, "serre")
    assert res.stats["pairs"] >= 500


@pytest.mark.criterion(4, "translation length")
def test_translation_length(env):
    res = run_suite(env, "translation-length")
    assert res.stats["ab_translation_length"] == 2
    sp = env.amalgams["z2z3"]
    ab = sp.parse_word("A:1 B:1")
    assert sp.classify_element(ab).kind == "hyperbolic"
    g = sp.translation(ab)
    assert iso.amplitude_direct(g, ball(sp.tree, sp.base_A, 4)) == 2


@pytest.mark.criterion(5, "stabilizers")
def test_stabilizers(env):
    res = run_suite(env, "stabilizer")
    assert res.cases >= 2 * (3 + 20 * 4)


@pytest.mark.criterion(6, "finite actions and quotients")
def test_finite_actions(env):
    res = run_suite(env, "quotient")
    assert res.stats["actions"] >= 10
    for act in finite_actions():
        q = quotient_graph(act)
        assert cycle_rank(q.graph) == 0
        assert all(act.fixed_vertices(g) for g in act.group.elements())
        fd = fundamental_domain(act, q)
        assert sorted(q.vertex_class[x] for x in fd.vertices) == sorted(q.vertex_orbits)


@pytest.mark.criterion(7, "chain ends to depth 20")
def test_chain_ends(env):
    res = run_suite(env, "chain")
    for p in (2, 3):
        assert res.stats[f"prufer{p}_common_level"] == 20
        rep = chain_end(Prufer(p), [Fraction(1, p ** k) for k in range(1, 21)], 20)
        assert all(rep.elliptic.values()) and rep.all_neutral
        assert rep.common_level == 20
    # the generators only agree at the top of a shallow tree
    ct = ChainTree(Prufer(2), 4)
    fixed = [v for n in range(5) for v in ct.level_vertices(n)
             if all(ct.act(Fraction(1, 2 ** k), v) == v for k in range(1, 5))]
    assert [v.level for v in fixed] == [4]


@pytest.mark.criterion(8, "infinite dihedral group")
def test_dinf(env):
    res = run_suite(env, "dinf")
    assert res.stats["words"] == 511
    assert res.stats["with_inversion_inverting_words"] > 0
    assert line_action("with-inversion").inversion_witness() == ("b", (0, 1))
    assert line_action().inversion_witness() is None
    assert str(dinf_word("ab")) == "(+1,-2)"


@pytest.mark.criterion(9, "orientation")
def test_orientation(env):
    t0 = time.perf_counter()
    run_suite(env, "orient")
    tog = env.togs["chain3"]
    ori = orient_edges(tog)
    walk = follow_positive_chain(tog, "g0", ori)
    again = follow_positive_chain(tog, "g0", orient_edges(tog))
    elapsed = time.perf_counter() - t0
    assert walk == again
    assert walk.to_dict()["chain"] == ["Z1", "Z2", "Z4"]
    edge = orient_edges(env.togs["z2z3_edge"])
    assert set(edge.local.values()) == {DEGENERATE}
    assert set(edge.diagnostics.values()) == {"neither"}
    assert elapsed < ORIENT_SECONDS


@pytest.mark.criterion(10, "deterministic verify report")
def test_determinism(tmp_path):
    cmd = [sys.executable, "-m", "bsk", "verify", "--suite", "all", "--seed", "7"]
    envvars = {k: v for k, v in os.environ.items() if k != "BSK_SEED"}
    runs = [subprocess.run(cmd, capture_output=True, env=envvars, timeout=300) for _ in range(2)]
    assert [r.returncode for r in runs] == [0, 0], runs[0].stderr.decode()
    assert runs[0].stdout == runs[1].stdout
    assert b'"seed": 7' in runs[0].stdout
