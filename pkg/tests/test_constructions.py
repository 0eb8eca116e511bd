from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsk import isometry as iso
from bsk.constructions import (CENTER, DIHEDRAL_IDENTITY, ChainTree, ChainVertex,
                               DihedralElement, Prufer, chain_end, dinf_word, dinf_words,
                               line_action, line_amplitude, line_automorphism, spider, star_tree)
from bsk.errors import InversionError, WordError
from bsk.groups import cyclic, sym
from bsk.trees import ball, explore, is_tree


def all_vertices(ct):
    return [v for n in range(ct.depth + 1) for v in ct.level_vertices(n)]


# chains

def test_prufer_arithmetic():
    p = Prufer(3)
    assert p.level(Fraction(0)) == 0 and p.level(Fraction(2, 9)) == 2
    assert p.op(Fraction(2, 3), Fraction(2, 3)) == Fraction(1, 3)
    assert p.inv(Fraction(1, 9)) == Fraction(8, 9)
    assert p.parse("4/9") == Fraction(4, 9) and p.element(3, 2) == Fraction(1, 3)
    with pytest.raises(ValueError):
        Prufer(4)


def test_prufer2_half_fixes_levels_from_one():
    ct = ChainTree(Prufer(2), 5)
    g = ct.translation(Fraction(1, 2))
    fixed = {v for v in all_vertices(ct) if g(v) == v}
    assert {v.level for v in fixed} == {1, 2, 3, 4, 5}
    assert fixed == {v for v in all_vertices(ct) if v.level >= 1}
    assert all(g(v) != v for v in ct.level_vertices(0))


def test_identity_fixes_everything():
    ct = ChainTree(Prufer(2), 4)
    g = ct.translation(Fraction(0))
    assert all(g(v) == v for v in all_vertices(ct))


def test_prufer3_ninth_fixes_levels_from_two():
    ct = ChainTree(Prufer(3), 4)
    g = ct.translation(Fraction(1, 9))
    fixed = {v for v in all_vertices(ct) if g(v) == v}
    assert fixed == {v for v in all_vertices(ct) if v.level >= 2}


def test_elements_beyond_depth_rejected():
    ct = ChainTree(Prufer(2), 3)
    with pytest.raises(ValueError, match="depth >= 5"):
        ct.translation(Fraction(1, 32))


@pytest.mark.parametrize("p, depth", [(2, 5), (3, 3)])
def test_chain_tree_shape(p, depth):
    ct = ChainTree(Prufer(p), depth)
    verts = all_vertices(ct)
    assert [len(ct.level_vertices(n)) for n in range(depth + 1)] == \
        [p ** (depth - n) for n in range(depth + 1)]
    for v in verts:
        nbrs = ct.tree.neighbors(v)
        up = [w for w in nbrs if w.level == v.level + 1]
        down = [w for w in nbrs if w.level == v.level - 1]
        assert len(up) == (1 if v.level < depth else 0)
        assert len(down) == (p if v.level > 0 else 0)
    assert is_tree(explore(ct.tree, ct.base, 2 * depth).graph)
    assert len(ball(ct.tree, ct.base, 2 * depth)) == len(verts)


def test_chain_end_examples():
    rep = chain_end(Prufer(2), [Fraction(1, 2), Fraction(0)], 6)
    assert rep.levels == {"1/2": 1, "0": 0}
    assert rep.kinds["1/2"].kind == iso.NEUTRAL and rep.kinds["1/2"].index == 1
    assert rep.kinds["0"].index == 0
    assert rep.holds and rep.common_level == 1


@pytest.mark.parametrize("p", [2, 3])
def test_no_common_fixed_vertex_below_depth(p):
    depth = 8
    elems = [Fraction(1, p ** k) for k in range(1, depth + 1)]
    rep = chain_end(Prufer(p), elems, depth)
    assert rep.common_level == depth and rep.holds
    # oracle: intersect fixed sets over every vertex of the tree
    ct = ChainTree(Prufer(p), 4 if p == 2 else 3)
    small = [x for x in elems if Prufer(p).level(x) <= ct.depth]
    common = [v for v in all_vertices(ct) if all(ct.act(x, v) == v for x in small)]
    assert common == [ChainVertex(ct.depth, Fraction(0))]


def test_chain_end_matches_isometry_classification():
    ct = ChainTree(Prufer(3), 6)
    for x in [Fraction(1, 3), Fraction(5, 9), Fraction(13, 27)]:
        k = iso.classify_fixed_end(ct.translation(x), ct.end(), 6)
        assert (k.kind, k.index) == (iso.NEUTRAL, Prufer(3).level(x))


# stars and spiders

def test_star_of_z2():
    act = star_tree(cyclic(2))
    assert act.tree.vertices == ("*", "0", "1")
    assert act(1, "0") == "1" and act(1, "1") == "0" and act(1, CENTER) == CENTER


def test_star_of_z3_rotates_leaves():
    act = star_tree(cyclic(3))
    assert len(act.tree.vertices) == 4
    assert [act(1, x) for x in "012"] == ["1", "2", "0"]


def test_star_of_s3_leaf_stabilizers_are_trivial():
    s3 = sym(3)
    act = star_tree(s3)
    assert len(act.tree.vertices) == 7
    for g in s3.elements():
        expect = list(act.tree.vertices) if g == s3.identity else [CENTER]
        assert act.fixed_vertices(g) == expect


def test_star_on_cosets():
    s3 = sym(3)
    act = star_tree(s3, [s3.index("012"), s3.index("021")])
    assert len(act.tree.vertices) == 4
    assert act.fixed_vertices(s3.index("021")) == ["*", "012"]


def test_spider_legs_move_together():
    act = spider(cyclic(3), 2)
    assert len(act.tree.vertices) == 7
    assert act(1, "0.2") == "1.2"
    assert act.fixed_vertices(2) == [CENTER]


# the infinite dihedral group

def test_dinf_examples():
    assert dinf_word("a") == DihedralElement(-1, 0)
    assert dinf_word("aa") == dinf_word("bb") == DIHEDRAL_IDENTITY
    ab = dinf_word("ab")
    assert ab == DihedralElement(1, -2) and str(ab) == "(+1,-2)"
    assert [ab(x) for x in (0, 5)] == [-2, 3]
    assert line_amplitude(ab) == 2 == iso.amplitude_formula(line_automorphism(ab), 0)
    with pytest.raises(WordError):
        dinf_word("abc")


def test_line_action_examples():
    assert line_amplitude(DihedralElement(1, 4)) == 4
    r = DihedralElement(-1, 6)
    assert line_amplitude(r) == 0 and r.fixed_vertex() == 3
    inv = DihedralElement(-1, 1)
    assert inv.inverted_edge() == (0, 1)
    with pytest.raises(InversionError):
        line_amplitude(inv)
    assert line_action("with-inversion").inversion_witness() == ("b", (0, 1))
    assert line_action().inversion_witness() is None
    with pytest.raises(ValueError, match="relator"):
        line_action({"a": DihedralElement(1, 2), "b": DihedralElement(-1, 0)})


words = st.text(alphabet="ab", max_size=12)


@given(words, words)
def test_dinf_word_is_a_homomorphism(u, v):
    assert dinf_word(u + v) == dinf_word(u) * dinf_word(v)
    assert dinf_word(u) * dinf_word(u).inverse() == DIHEDRAL_IDENTITY


@given(words, st.integers(-10, 10))
def test_word_amplitude_is_line_amplitude(w, x):
    e = dinf_word(w)
    g = line_automorphism(e)
    assert iso.amplitude_formula(g, x) == line_amplitude(e)
    assert iso.amplitude_direct(g, iso.sufficient_ball(g, x)) == line_amplitude(e)
    # without inversion: translations are even, reflections fix a vertex
    assert (e.sign == 1 and e.offset % 2 == 0) or e.fixed_vertex() is not None


def test_word_enumeration():
    assert len(list(dinf_words(8))) == 2 ** 9 - 1
    assert list(dinf_words(1)) == ["", "a", "b"]
