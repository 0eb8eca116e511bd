import pytest

from bsk.errors import SpecError
from bsk.specfile import (AmalgamDecl, GroupDecl, builtin_text, format_spec, load, parse_spec)

Z4Z6 = """\
cyclic 2
cyclic 4
cyclic 6
amalgam G: Z4 *_Z2 Z6
hom a: Z2 -> Z4
  0 |-> 0
  1 |-> 2
hom b: Z2 -> Z6
  0 |-> 0
  1 |-> 3
"""


def test_builtin_shorthand():
    spec = parse_spec("cyclic 2\n")
    assert spec.decls == (GroupDecl("Z2", ("cyclic", 2)),)
    g = load("group K = sym 3\n").groups["K"]
    assert g.order == 6 and g.name == "K"


def test_amalgam_with_pending_homs():
    env = load(Z4Z6)
    sp = env.amalgams["G"]
    assert (sp.A.order, sp.B.order, sp.C.order) == (4, 6, 2)
    assert sp.phi["A"].images == (0, 2) and sp.phi["B"].images == (0, 3)
    decl = [d for d in parse_spec(Z4Z6).decls if isinstance(d, AmalgamDecl)][0]
    assert decl.homs == ("a", "b") and decl.line == 4


def test_explicit_group_table():
    env = load("group V order 2\n  elements e x\n  e * e = e\n  e * x = x\n"
               "  x * e = x\n  x * x = e\n")
    assert env.groups["V"].labels == ("e", "x")


def test_undeclared_group_reports_line():
    with pytest.raises(SpecError) as exc:
        parse_spec("cyclic 2\n\namalgam G: Z2 *_Z1 Z3\n")
    assert exc.value.line == 3 and "Z1" in str(exc.value)


@pytest.mark.parametrize("text, line", [
    ("cyclic 2\nfrobnicate\n", 2),
    ("cyclic 2\nhom h: Z2 -> Z2\n  0 -> 1\n", 3),
    ("cyclic 2\ncyclic 2\n", 2),
    ("cyclic 0\n", 1),
])
def test_syntax_errors(text, line):
    with pytest.raises(SpecError) as exc:
        parse_spec(text)
    assert exc.value.line == line


def test_resolution_errors_carry_the_declaring_line():
    # parses, but the map is not multiplicative
    text = "cyclic 2\ncyclic 3\nhom h: Z2 -> Z3\n  0 |-> 0\n  1 |-> 1\n" \
           "cyclic 1\namalgam G: Z2 *_Z2 Z3 using h h\n"
    with pytest.raises(SpecError) as exc:
        load(text)
    assert exc.value.line is not None


def test_format_round_trip():
    spec = parse_spec(builtin_text())
    text = format_spec(spec)
    assert parse_spec(text) == spec
    assert format_spec(parse_spec(text)) == text


def test_builtin_corpus_contents(env):
    assert sorted(env.amalgams) == ["z2z3", "z4z6"]
    assert sorted(env.chains) == ["prufer2", "prufer3"]
    assert {"chain3", "z2z3_edge", "fork", "flat"} <= set(env.togs)
    assert len(env.actions) >= 5
    with pytest.raises(SpecError, match="known: z2z3, z4z6"):
        env.lookup("amalgams", "nope")
