"""Line-oriented spec files declaring groups, homomorphisms, amalgams, chains, trees of groups and actions.

Grammar (``#`` starts a comment, indentation is ignored)::

    group <name> = cyclic|sym|dihedral <n>
    cyclic <n> | sym <n> | dihedral <n>          # shorthand for Z<n>, S<n>, D<n>
    group <name> order <n>
      elements <label> ...
      <a> * <b> = <c>
    hom <name>: <G> -> <H>
      <x> |-> <y>
    amalgam <name>: <A> *_<C> <B> [using <homA> <homB>] [transversal least|greatest]
    chain <name> prufer <p>  |  chain prufer <p>  # the latter is named prufer<p>
    tog <name>
      vertex <v> = <group>
      edge <e> <u> <v> = <group>
      alpha <e> <v> = <hom>
    end
    action <name> = star <G> [subgroup <label> ...]
    action <name> = spider <G> <leg length>
    action <name>: <G>
      edge <u> <v>
      gen <g>: <v>-><w> ...
    end

An amalgam without ``using`` takes the next two ``hom`` declarations.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

from bsk.amalgam import AmalgamSpec
from bsk.constructions import Prufer, spider, star_tree
from bsk.errors import BSKError, SpecError
from bsk.groups import BUILTINS, GroupHom, group_from_products
from bsk.quotient import FiniteAction, TreeOfGroups
from bsk.trees import FiniteTree

NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
BUILTIN_PREFIX = {"cyclic": "Z", "sym": "S", "dihedral": "D"}


@dataclass(frozen=True)
class GroupDecl:
    name: str
    builtin: tuple | None = None          # (family, n)
    labels: tuple = ()
    products: tuple = ()                  # ((a, b, c), ...)
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class HomDecl:
    name: str
    source: str
    target: str
    pairs: tuple = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AmalgamDecl:
    name: str
    A: str
    C: str
    B: str
    homs: tuple = ()
    prefer: str = "least"
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ChainDecl:
    name: str
    family: str
    p: int
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class TogDecl:
    name: str
    vertices: tuple = ()      # ((v, group), ...)
    edges: tuple = ()         # ((e, u, v, group), ...)
    alphas: tuple = ()        # ((e, v, hom), ...)
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ActionDecl:
    name: str
    kind: str                 # "star" | "spider" | "explicit"
    group: str
    subgroup: tuple = ()
    leg_length: int = 0
    edges: tuple = ()         # ((u, v), ...)
    gens: tuple = ()          # ((g, ((v, w), ...)), ...)
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SpecFile:
    decls: tuple

    def names(self, kind) -> list[str]:
        return [d.name for d in self.decls if isinstance(d, kind)]


# --------------------------------------------------------------------------
# parsing


class _Parser:
    def __init__(self, text: str):
        self.lines = []
        for no, raw in enumerate(text.splitlines(), 1):
            body = raw.split("#", 1)[0]
            if body.strip():
                self.lines.append((no, raw, body.strip()))
        self.pos = 0
        self.decls = []
        self.kinds = {}          # name -> "group" | "hom" | ...
        self.pending = None      # amalgam waiting for hom blocks

    def error(self, msg, no, raw=None, token=None):
        col = None
        if raw is not None:
            col = (raw.find(token) + 1 if token and token in raw else len(raw) - len(raw.lstrip()) + 1)
        raise SpecError(msg, no, col)

    def declare(self, name, kind, no, raw):
        if not NAME.match(name):
            self.error(f"invalid name {name!r}", no, raw, name)
        if name in self.kinds:
            self.error(f"{name} is already declared", no, raw, name)
        self.kinds[name] = kind

    def need(self, name, kind, no, raw):
        have = self.kinds.get(name)
        if have is None:
            self.error(f"reference to undeclared {kind} {name}", no, raw, name)
        if have != kind:
            self.error(f"{name} is a {have}, not a {kind}", no, raw, name)

    def peek(self):
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def parse(self) -> SpecFile:
        while self.pos < len(self.lines):
            no, raw, line = self.lines[self.pos]
            self.pos += 1
            head = line.split()[0]
            handler = {
                "group": self.group, "cyclic": self.shorthand, "sym": self.shorthand,
                "dihedral": self.shorthand, "hom": self.hom, "amalgam": self.amalgam,
                "chain": self.chain, "tog": self.tog, "action": self.action,
            }.get(head)
            if handler is None:
                self.error(f"unknown declaration {head!r}", no, raw, head)
            handler(no, raw, line)
        if self.pending is not None:
            d, no, raw = self.pending
            self.error(f"amalgam {d.name} needs two hom blocks", no, raw)
        return SpecFile(tuple(self.decls))

    def _builtin(self, family, arg, no, raw):
        if not arg.isdigit() or int(arg) < 1:
            self.error(f"{family} needs a positive integer, got {arg!r}", no, raw, arg)
        return family, int(arg)

    def shorthand(self, no, raw, line):
        parts = line.split()
        if len(parts) != 2:
            self.error(f"expected '{parts[0]} <n>'", no, raw)
        fam, n = self._builtin(parts[0], parts[1], no, raw)
        name = f"{BUILTIN_PREFIX[fam]}{n}"
        self.declare(name, "group", no, raw)
        self.decls.append(GroupDecl(name, (fam, n), line=no))

    def group(self, no, raw, line):
        parts = line.split()
        if len(parts) == 5 and parts[2] == "=":
            if parts[3] not in BUILTINS:
                self.error(f"unknown builtin group {parts[3]!r}", no, raw, parts[3])
            fam, n = self._builtin(parts[3], parts[4], no, raw)
            self.declare(parts[1], "group", no, raw)
            self.decls.append(GroupDecl(parts[1], (fam, n), line=no))
            return
        if len(parts) != 4 or parts[2] != "order" or not parts[3].isdigit():
            self.error("expected 'group <name> order <n>' or 'group <name> = <builtin> <n>'", no, raw)
        name, order = parts[1], int(parts[3])
        self.declare(name, "group", no, raw)
        labels, products = None, []
        while (nxt := self.peek()) is not None:
            no2, raw2, l2 = nxt
            toks = l2.split()
            if toks[0] == "elements":
                labels = tuple(toks[1:])
                if len(labels) != order:
                    self.error(f"group {name} has order {order} but {len(labels)} elements",
                               no2, raw2)
            elif len(toks) == 5 and toks[1] == "*" and toks[3] == "=":
                if labels is None:
                    self.error("products given before 'elements'", no2, raw2)
                for t in (toks[0], toks[2], toks[4]):
                    if t not in labels:
                        self.error(f"{t} is not an element of {name}", no2, raw2, t)
                products.append((toks[0], toks[2], toks[4]))
            else:
                break
            self.pos += 1
        if labels is None:
            self.error(f"group {name} has no 'elements' line", no, raw)
        self.decls.append(GroupDecl(name, None, labels, tuple(products), line=no))

    def hom(self, no, raw, line):
        m = re.match(r"hom\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$", line)
        if not m:
            self.error("expected 'hom <name>: <G> -> <H>'", no, raw)
        name, src, dst = m.groups()
        self.need(src, "group", no, raw)
        self.need(dst, "group", no, raw)
        self.declare(name, "hom", no, raw)
        pairs = []
        while (nxt := self.peek()) is not None:
            no2, raw2, l2 = nxt
            toks = l2.split()
            if len(toks) == 3 and toks[1] == "|->":
                pairs.append((toks[0], toks[2]))
                self.pos += 1
            else:
                break
        d = HomDecl(name, src, dst, tuple(pairs), line=no)
        self.decls.append(d)
        if self.pending is not None:
            am, ano, araw = self.pending
            homs = am.homs + (name,)
            am = AmalgamDecl(am.name, am.A, am.C, am.B, homs, am.prefer, line=am.line)
            if len(homs) == 2:
                self._check_amalgam_homs(am, no, raw)
                self.decls.append(am)
                self.pending = None
            else:
                self.pending = (am, ano, araw)

    def _check_amalgam_homs(self, am, no, raw):
        homs = {d.name: d for d in self.decls if isinstance(d, HomDecl)}
        for h, side in zip(am.homs, (am.A, am.B)):
            d = homs[h]
            if d.source != am.C or d.target != side:
                self.error(f"hom {h} must map {am.C} -> {side}", no, raw, h)

    def amalgam(self, no, raw, line):
        m = re.match(r"amalgam\s+(\S+)\s*:\s*(\S+)\s+\*_(\S+)\s+(\S+)(.*)$", line)
        if not m:
            self.error("expected 'amalgam <name>: <A> *_<C> <B>'", no, raw)
        name, A, C, B, rest = m.groups()
        for g in (A, C, B):
            self.need(g, "group", no, raw)
        toks = rest.split()
        homs, prefer = (), "least"
        while toks:
            if toks[0] == "using" and len(toks) >= 3:
                for h in toks[1:3]:
                    self.need(h, "hom", no, raw)
                homs = tuple(toks[1:3])
                toks = toks[3:]
            elif toks[0] == "transversal" and len(toks) >= 2 and toks[1] in ("least", "greatest"):
                prefer = toks[1]
                toks = toks[2:]
            else:
                self.error(f"unexpected {toks[0]!r}", no, raw, toks[0])
        self.declare(name, "amalgam", no, raw)
        d = AmalgamDecl(name, A, C, B, homs, prefer, line=no)
        if homs:
            self._check_amalgam_homs(d, no, raw)
            self.decls.append(d)
        else:
            if self.pending is not None:
                self.error("previous amalgam still waits for its hom blocks", no, raw)
            self.pending = (d, no, raw)

    def chain(self, no, raw, line):
        parts = line.split()
        if len(parts) == 3 and parts[1] == "prufer":
            name, p = f"prufer{parts[2]}", parts[2]
        elif len(parts) == 4 and parts[2] == "prufer":
            name, p = parts[1], parts[3]
        else:
            self.error("expected 'chain [<name>] prufer <p>'", no, raw)
        if not p.isdigit():
            self.error(f"prime expected, got {p!r}", no, raw, p)
        self.declare(name, "chain", no, raw)
        self.decls.append(ChainDecl(name, "prufer", int(p), line=no))

    def _block(self, no, raw, what):
        body = []
        while True:
            nxt = self.peek()
            if nxt is None:
                self.error(f"{what} block is missing 'end'", no, raw)
            self.pos += 1
            if nxt[2] == "end":
                return body
            body.append(nxt)

    def tog(self, no, raw, line):
        parts = line.split()
        if len(parts) != 2:
            self.error("expected 'tog <name>'", no, raw)
        name = parts[1]
        self.declare(name, "tog", no, raw)
        verts, edges, alphas = [], [], []
        vnames, enames = set(), {}
        for no2, raw2, l2 in self._block(no, raw, "tog"):
            toks = l2.split()
            if toks[0] == "vertex" and len(toks) == 4 and toks[2] == "=":
                self.need(toks[3], "group", no2, raw2)
                verts.append((toks[1], toks[3]))
                vnames.add(toks[1])
            elif toks[0] == "edge" and len(toks) == 6 and toks[4] == "=":
                for v in toks[2:4]:
                    if v not in vnames:
                        self.error(f"vertex {v} is not declared", no2, raw2, v)
                self.need(toks[5], "group", no2, raw2)
                edges.append((toks[1], toks[2], toks[3], toks[5]))
                enames[toks[1]] = (toks[2], toks[3])
            elif toks[0] == "alpha" and len(toks) == 5 and toks[3] == "=":
                if toks[1] not in enames:
                    self.error(f"edge {toks[1]} is not declared", no2, raw2, toks[1])
                if toks[2] not in enames[toks[1]]:
                    self.error(f"{toks[2]} is not an endpoint of {toks[1]}", no2, raw2, toks[2])
                self.need(toks[4], "hom", no2, raw2)
                alphas.append((toks[1], toks[2], toks[4]))
            else:
                self.error("expected 'vertex <v> = <G>', 'edge <e> <u> <v> = <G>' or "
                           "'alpha <e> <v> = <hom>'", no2, raw2)
        self.decls.append(TogDecl(name, tuple(verts), tuple(edges), tuple(alphas), line=no))

    def action(self, no, raw, line):
        m = re.match(r"action\s+(\S+)\s*=\s*(star|spider)\s+(\S+)(.*)$", line)
        if m:
            name, kind, grp, rest = m.groups()
            self.need(grp, "group", no, raw)
            toks = rest.split()
            sub, leg = (), 0
            if kind == "star" and toks:
                if toks[0] != "subgroup":
                    self.error(f"unexpected {toks[0]!r}", no, raw, toks[0])
                sub = tuple(toks[1:])
            elif kind == "spider":
                if len(toks) != 1 or not toks[0].isdigit():
                    self.error("expected 'spider <G> <leg length>'", no, raw)
                leg = int(toks[0])
            self.declare(name, "action", no, raw)
            self.decls.append(ActionDecl(name, kind, grp, sub, leg, line=no))
            return
        m = re.match(r"action\s+(\S+)\s*:\s*(\S+)$", line)
        if not m:
            self.error("expected 'action <name> = star|spider ...' or 'action <name>: <G>'", no, raw)
        name, grp = m.groups()
        self.need(grp, "group", no, raw)
        self.declare(name, "action", no, raw)
        edges, gens = [], []
        for no2, raw2, l2 in self._block(no, raw, "action"):
            toks = l2.split()
            if toks[0] == "edge" and len(toks) == 3:
                edges.append((toks[1], toks[2]))
            elif toks[0] == "gen" and len(toks) >= 2 and toks[1].endswith(":"):
                pairs = []
                for t in toks[2:]:
                    v, sep, w = t.partition("->")
                    if not sep or not v or not w:
                        self.error(f"expected <v>-><w>, got {t!r}", no2, raw2, t)
                    pairs.append((v, w))
                gens.append((toks[1][:-1], tuple(pairs)))
            else:
                self.error("expected 'edge <u> <v>' or 'gen <g>: <v>-><w> ...'", no2, raw2)
        self.decls.append(ActionDecl(name, "explicit", grp, edges=tuple(edges), gens=tuple(gens),
                                     line=no))


def parse_spec(text: str) -> SpecFile:
    """Parse spec text; the first problem raises :class:`SpecError` with line and column."""
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# printing


def format_spec(spec: SpecFile) -> str:
    """Canonical text; ``parse_spec(format_spec(s)) == s``."""
    out = []
    for d in spec.decls:
        if isinstance(d, GroupDecl):
            if d.builtin:
                out.append(f"group {d.name} = {d.builtin[0]} {d.builtin[1]}")
            else:
                out.append(f"group {d.name} order {len(d.labels)}")
                out.append("  elements " + " ".join(d.labels))
                out += [f"  {a} * {b} = {c}" for a, b, c in d.products]
        elif isinstance(d, HomDecl):
            out.append(f"hom {d.name}: {d.source} -> {d.target}")
            out += [f"  {x} |-> {y}" for x, y in d.pairs]
        elif isinstance(d, AmalgamDecl):
            tail = "" if d.prefer == "least" else f" transversal {d.prefer}"
            out.append(f"amalgam {d.name}: {d.A} *_{d.C} {d.B} using {d.homs[0]} {d.homs[1]}{tail}")
        elif isinstance(d, ChainDecl):
            out.append(f"chain {d.name} {d.family} {d.p}")
        elif isinstance(d, TogDecl):
            out.append(f"tog {d.name}")
            out += [f"  vertex {v} = {g}" for v, g in d.vertices]
            out += [f"  edge {e} {u} {v} = {g}" for e, u, v, g in d.edges]
            out += [f"  alpha {e} {v} = {h}" for e, v, h in d.alphas]
            out.append("end")
        elif isinstance(d, ActionDecl):
            if d.kind == "star":
                sub = f" subgroup {' '.join(d.subgroup)}" if d.subgroup else ""
                out.append(f"action {d.name} = star {d.group}{sub}")
            elif d.kind == "spider":
                out.append(f"action {d.name} = spider {d.group} {d.leg_length}")
            else:
                out.append(f"action {d.name}: {d.group}")
                out += [f"  edge {u} {v}" for u, v in d.edges]
                out += [f"  gen {g}: " + " ".join(f"{v}->{w}" for v, w in pairs)
                        for g, pairs in d.gens]
                out.append("end")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# resolution


class Environment:
    """Validated objects built from a :class:`SpecFile`, keyed by name."""

    def __init__(self):
        self.groups = {}
        self.homs = {}
        self.amalgams = {}
        self.chains = {}
        self.togs = {}
        self.actions = {}

    def lookup(self, kind: str, name: str):
        table = getattr(self, kind)
        if name not in table:
            known = ", ".join(sorted(table)) or "none"
            raise SpecError(f"no {kind[:-1]} named {name!r} (known: {known})")
        return table[name]


def _build(d, env: Environment):
    if isinstance(d, GroupDecl):
        if d.builtin:
            fam, n = d.builtin
            env.groups[d.name] = BUILTINS[fam](n, name=d.name)
        else:
            env.groups[d.name] = group_from_products(
                d.name, d.labels, {(a, b): c for a, b, c in d.products})
    elif isinstance(d, HomDecl):
        src, dst = env.groups[d.source], env.groups[d.target]
        for x, y in d.pairs:
            if x not in src.labels:
                raise ValueError(f"{x} is not an element of {src.name}")
            if y not in dst.labels:
                raise ValueError(f"{y} is not an element of {dst.name}")
        env.homs[d.name] = GroupHom.from_labels(src, dst, dict(d.pairs), name=d.name)
    elif isinstance(d, AmalgamDecl):
        g = env.groups
        env.amalgams[d.name] = AmalgamSpec(g[d.A], g[d.B], g[d.C], env.homs[d.homs[0]],
                                           env.homs[d.homs[1]], name=d.name, prefer=d.prefer)
    elif isinstance(d, ChainDecl):
        env.chains[d.name] = Prufer(d.p)
    elif isinstance(d, TogDecl):
        env.togs[d.name] = TreeOfGroups(
            [v for v, _ in d.vertices], [(e, u, v) for e, u, v, _ in d.edges],
            {v: env.groups[g] for v, g in d.vertices}, {e: env.groups[g] for e, _, _, g in d.edges},
            {(e, v): env.homs[h] for e, v, h in d.alphas}, name=d.name)
    elif isinstance(d, ActionDecl):
        grp = env.groups[d.group]
        if d.kind == "star":
            sub = [grp.index(x) for x in d.subgroup] if d.subgroup else None
            env.actions[d.name] = star_tree(grp, sub, name=d.name)
        elif d.kind == "spider":
            env.actions[d.name] = spider(grp, d.leg_length, name=d.name)
        else:
            verts = sorted({v for e in d.edges for v in e})
            tree = FiniteTree.from_pairs(verts, list(d.edges))
            gens = {}
            for g, pairs in d.gens:
                p = {v: v for v in verts}
                p.update(dict(pairs))
                gens[grp.index(g)] = p
            env.actions[d.name] = FiniteAction.from_generators(grp, tree, gens, name=d.name)


def resolve(spec: SpecFile) -> Environment:
    """Build every declaration in order; failures become :class:`SpecError` at the declaring line."""
    env = Environment()
    for d in spec.decls:
        try:
            _build(d, env)
        except SpecError:
            raise
        except (BSKError, ValueError, KeyError) as exc:
            prefix = f"{type(d).__name__[:-4].lower()} {d.name}: "
            msg = str(exc) if str(exc).startswith(prefix) else prefix + str(exc)
            raise SpecError(msg, d.line) from exc
    return env


def load(text: str) -> Environment:
    return resolve(parse_spec(text))


def builtin_text() -> str:
    return resources.files("bsk").joinpath("data/corpus.bsk").read_text()


def builtin_environment() -> Environment:
    return load(builtin_text())
