"""Verification suites run by ``bsk verify``.

Each suite checks one family of identities over a fixed corpus and returns
a :class:`SuiteResult`. Sampling goes through a ``random.Random`` seeded from
the run seed and the suite name, so reports are reproducible byte for byte.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from bsk import isometry as iso
from bsk.amalgam import AmalgamSpec
from bsk.constructions import (ChainTree, DIHEDRAL_IDENTITY, Prufer, chain_end,
                               dinf_word, dinf_words, line_action, line_amplitude,
                               line_automorphism, spider, star_tree)
from bsk.errors import InversionError
from bsk.groups import all_subgroups, cyclic, dihedral, sym
from bsk.quotient import (DEGENERATE, POSITIVE, elliptic_generation_check, follow_positive_chain,
                          fundamental_domain, orient_edges, quotient_graph)
from bsk.specfile import Environment, builtin_environment
from bsk.trees import ball

SCHEMA = 1
MAX_FAILURES = 5


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    failed: int = 0

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def check(self, ok: bool, what) -> bool:
        self.cases += 1
        if not ok:
            self.failed += 1
            if len(self.failures) < MAX_FAILURES:
                self.failures.append(what() if callable(what) else str(what))
        return ok

    def to_dict(self) -> dict:
        return {"passed": self.passed, "cases": self.cases, "failed": self.failed,
                "failures": list(self.failures), "stats": dict(sorted(self.stats.items()))}


def _rng(seed: int, name: str) -> random.Random:
    return random.Random(f"{seed}:{name}")


# --------------------------------------------------------------------------
# corpus


def amalgams(env: Environment) -> list[AmalgamSpec]:
    return [env.amalgams[k] for k in ("z2z3", "z4z6")]


def finite_actions() -> list:
    """Every group of order <= 6 on the star of each of its subgroups, plus symmetric trees."""
    groups = [cyclic(n) for n in range(1, 7)] + [dihedral(2, "V4"), sym(3)]
    out = []
    for g in groups:
        for h in all_subgroups(g):
            out.append(star_tree(g, sorted(h)))
    for g in (cyclic(2), cyclic(3)):
        for leg in (1, 2, 3):
            out.append(spider(g, leg))
    return out


def amplitude_corpus(env: Environment, max_syllables: int = 5, dinf_length: int = 8) -> list:
    """``(name, automorphism, base vertices)`` triples; base vertices fill a radius-3 ball."""
    out = []
    for sp in amalgams(env):
        base = ball(sp.tree, sp.base_A, 3).sorted()
        for w in sp.words(max_syllables):
            out.append((f"{sp.name}:{sp.format_word(w)}", sp.translation(w), base))
    line_base = list(range(-3, 4))
    for word in dinf_words(dinf_length):
        out.append((f"dinf:{word or '1'}", line_automorphism(dinf_word(word)), line_base))
    for act in [env.actions[k] for k in sorted(env.actions)]:
        base = act.tree.vertices
        for g in act.group.elements():
            out.append((f"{act.name}:{act.group.label(g)}", act.automorphism(g), base))
    for p, depth in ((2, 6), (3, 4)):
        ct = ChainTree(Prufer(p), depth)
        base = ball(ct.tree, ct.base, 3).sorted()
        for k in range(depth + 1):
            for a in range(p ** k):
                x = Fraction(a, p ** k)
                if k and a % p == 0:
                    continue
                out.append((f"prufer{p}:{x}", ct.translation(x), base))
    return out


def _pair_corpus(env: Environment, max_syllables: int, dinf_length: int) -> list:
    """Groups of ``(host name, [(name, automorphism, product maker)])`` sharing a tree."""
    out = []
    for sp in amalgams(env):
        words = list(sp.words(max_syllables))
        items = [(sp.format_word(w), sp.translation(w), w) for w in words]
        out.append((sp.name, items, lambda u, v, sp=sp: sp.translation(sp.multiply(u, v))))
    seen = {}
    for word in dinf_words(dinf_length):
        seen.setdefault(dinf_word(word), word or "1")
    items = [(w, line_automorphism(e, w), e) for e, w in sorted(seen.items(), key=lambda t: t[1])]
    out.append(("dinf", items, lambda u, v: line_automorphism(u * v)))
    return out


# --------------------------------------------------------------------------
# suites


def suite_normal_form(env: Environment, seed: int) -> SuiteResult:
    res = SuiteResult("normal-form")
    rng = _rng(seed, res.name)
    for sp in amalgams(env):
        words = list(sp.words(3))
        for w in words:
            res.check(sp.reduce(sp.letters(w)) == w, lambda: f"{sp.name}: reduce not idempotent on {w}")
            res.check(sp.multiply(w, sp.inverse(w)) == sp.identity,
                      lambda: f"{sp.name}: w w^-1 != 1 for {sp.format_word(w)}")
        small = list(sp.words(2))
        for u in small:
            for v in small:
                res.check(sp.reduce(sp.letters(u) + sp.letters(v)) == sp.multiply(u, v),
                          lambda: f"{sp.name}: reduce(uv) != u*v for {u}, {v}")
        for _ in range(200):
            u, v, x = (rng.choice(words) for _ in range(3))
            res.check(sp.multiply(sp.multiply(u, v), x) == sp.multiply(u, sp.multiply(v, x)),
                      lambda: f"{sp.name}: associativity fails on {u}, {v}, {x}")
        # raw words of factor letters against letter-by-letter products
        letters = [(s, x) for s in ("A", "B") for x in sp.factor[s].elements()]
        for _ in range(200):
            raw = [rng.choice(letters) for _ in range(rng.randint(0, 8))]
            step = sp.identity
            for s, x in raw:
                step = sp.multiply(step, sp.element(s, x))
            res.check(sp.reduce(raw) == step, lambda: f"{sp.name}: reduce differs on {raw}")
        # spellings change with the transversal, invariants do not
        other = AmalgamSpec(sp.A, sp.B, sp.C, sp.phi["A"], sp.phi["B"], sp.name, prefer="greatest")
        for w in words:
            w2 = other.reduce(sp.letters(w))
            res.check(len(w2) == len(w)
                      and other.classify_element(w2).translation_length
                      == sp.classify_element(w).translation_length,
                      lambda: f"{sp.name}: transversal choice changes invariants of {w}")
        res.stats[f"{sp.name}_words"] = len(words)
    return res


def suite_amplitude(env: Environment, seed: int) -> SuiteResult:
    res = SuiteResult("amplitude")
    corpus = amplitude_corpus(env)
    for name, g, base in corpus:
        for x in base:
            f = iso.amplitude_formula(g, x)
            d = iso.amplitude_direct(g, iso.sufficient_ball(g, x))
            res.check(f == d, lambda: f"{name} at {x}: formula {f} != direct {d}")
    res.stats["automorphisms"] = len(corpus)
    return res


def suite_translation_length(env: Environment, seed: int, max_syllables: int = 6) -> SuiteResult:
    res = SuiteResult("translation-length")
    hyper = 0
    for sp in amalgams(env):
        for w in sp.words(max_syllables):
            cls = sp.classify_element(w)
            g = sp.translation(w)
            amp = iso.amplitude_direct(g, iso.sufficient_ball(g, sp.base_A))
            hyper += cls.kind == "hyperbolic"
            res.check(cls.translation_length == amp,
                      lambda: f"{sp.name}: {sp.format_word(w)} length {cls.translation_length} "
                              f"!= amplitude {amp}")
            if cls.kind == "elliptic":
                u = cls.witness
                core = sp.product(sp.inverse(u), w, u)
                res.check(len(core) <= 1, lambda: f"{sp.name}: bad witness for {w}")
            res.check(iso.detect_inversion(g, window=2) is None,
                      lambda: f"{sp.name}: {sp.format_word(w)} inverts an edge")
    z = env.amalgams["z2z3"]
    ab = z.parse_word("A:1 B:1")
    res.stats["ab_translation_length"] = z.classify_element(ab).translation_length
    res.check(res.stats["ab_translation_length"] == 2, "ab in z2z3 does not translate by 2")
    res.stats["hyperbolic"] = hyper
    return res


def suite_culler_morgan(env: Environment, seed: int) -> SuiteResult:
    res = SuiteResult("culler-morgan")
    pairs = 0
    for host, items, mul in _pair_corpus(env, 5, 7):
        root = items[0][1].host.root
        ell = [it for it in items if iso.amplitude_formula(it[1], root) == 0]
        for (na, ga, ea), (nb, gb, eb) in product(ell, ell):
            d, _ = iso.characteristic_distance(ga, gb)
            if d == 0:
                continue
            pairs += 1
            v = iso.culler_morgan_check(ga, gb, window=3, gh=mul(ea, eb))
            res.check(v.holds, lambda: f"{host}: ({na}, {nb}) gives {v.to_dict()}")
    res.stats["disjoint_elliptic_pairs"] = pairs
    res.check(pairs >= 50, f"only {pairs} disjoint elliptic pairs")
    return res


def suite_serre(env: Environment, seed: int) -> SuiteResult:
    res = SuiteResult("serre")
    examined = applicable = 0
    for host, items, mul in _pair_corpus(env, 3, 4):
        for (na, ga, ea), (nb, gb, eb) in product(items, items):
            v = iso.serre_lemma_check(ga, gb, gh=mul(ea, eb))
            examined += 1
            applicable += v.applicable
            res.check(v.holds, lambda: f"{host}: ({na}, {nb}) all elliptic with disjoint fixed sets")
            if v.applicable and v.common_vertex is not None:
                c = v.common_vertex
                res.check(ga(c) == c and gb(c) == c,
                          lambda: f"{host}: ({na}, {nb}) common vertex {c} not fixed")
    res.stats["pairs"] = examined
    res.stats["all_elliptic_pairs"] = applicable
    res.check(examined >= 500, f"only {examined} pairs examined")
    return res


def suite_stabilizer(env: Environment, seed: int) -> SuiteResult:
    res = SuiteResult("stabilizer")
    rng = _rng(seed, res.name)
    for sp in amalgams(env):
        words = list(sp.words(4))
        a, b = sp.base_A, sp.base_B
        sa, sb, se = sp.stabilizer(a), sp.stabilizer(b), sp.edge_stabilizer(a, b)
        exp_a = {sp.element("A", x) for x in sp.A.elements()}
        exp_b = {sp.element("B", x) for x in sp.B.elements()}
        exp_c = {sp.element("C", x) for x in sp.C.elements()}
        res.check(sa.elements() == exp_a, f"{sp.name}: stab(1A) != A")
        res.check(sb.elements() == exp_b, f"{sp.name}: stab(1B) != B")
        res.check(se.elements() == exp_c, f"{sp.name}: edge stabilizer != C")
        for w in words:
            res.check((sp.act(w, a) == a) == (w in exp_a), lambda: f"{sp.name}: membership 1A at {w}")
            res.check((sp.act(w, b) == b) == (w in exp_b), lambda: f"{sp.name}: membership 1B at {w}")
            res.check((sp.act(w, a) == a and sp.act(w, b) == b) == (w in exp_c),
                      lambda: f"{sp.name}: membership edge at {w}")
        for _ in range(20):
            u = rng.choice(words)
            for base, st in ((a, sa), (b, sb)):
                v = sp.act(u, base)
                conj = {sp.conjugate(s, u) for s in st.elements()}
                sv = sp.stabilizer(v)
                res.check(sv.elements() == conj,
                          lambda: f"{sp.name}: stab({v}) is not u stab({base}) u^-1")
                res.check(all(sp.act(s, v) == v for s in conj),
                          lambda: f"{sp.name}: conjugate stabilizer moves {v}")
            v = sp.act(u, a)
            for nb in sp.tree.neighbors(v):
                es = sp.edge_stabilizer(v, nb)
                res.check(es.elements() == sp.stabilizer(v).elements() & sp.stabilizer(nb).elements(),
                          lambda: f"{sp.name}: edge stabilizer at {v}-{nb} is not the intersection")
    return res


def suite_quotient(env: Environment, seed: int) -> SuiteResult:
    res = SuiteResult("quotient")
    acts = finite_actions() + [env.actions[k] for k in sorted(env.actions)]
    for act in acts:
        q = quotient_graph(act)
        v = elliptic_generation_check(act, q)
        res.check(v.holds, lambda: f"{act.name}: {v.to_dict()}")
        fd = fundamental_domain(act, q)
        classes = [q.vertex_class[x] for x in fd.vertices]
        res.check(len(classes) == len(set(classes)) and set(classes) == set(q.vertex_orbits),
                  lambda: f"{act.name}: fundamental domain does not meet each orbit once")
    res.stats["actions"] = len(acts)
    res.check(len(acts) >= 10, "fewer than 10 actions")
    return res


def suite_chain(env: Environment, seed: int, depth: int = 20) -> SuiteResult:
    res = SuiteResult("chain")
    rng = _rng(seed, res.name)
    for p in (2, 3):
        spec = Prufer(p)
        elems = [Fraction(1, p ** k) for k in range(1, depth + 1)]
        rep = chain_end(spec, elems, depth)
        res.check(all(rep.elliptic.values()), f"prufer{p}: a queried element is not elliptic")
        res.check(rep.all_neutral, f"prufer{p}: end not neutral at the membership level")
        res.check(rep.common_level == depth,
                  f"prufer{p}: common fixed level {rep.common_level}, expected {depth}")
        extra = [spec.element(rng.randrange(1, p ** k), k) for k in rng.sample(range(1, depth), 5)]
        rep2 = chain_end(spec, extra, depth)
        res.check(rep2.holds, f"prufer{p}: sampled elements {extra} fail the end check")
        res.stats[f"prufer{p}_common_level"] = rep.common_level
        # exhaustive fixed-set intersection on a small depth
        small = 4 if p == 2 else 3
        ct = ChainTree(spec, small)
        allv = [v for n in range(small + 1) for v in ct.level_vertices(n)]
        for m in range(1, small + 1):
            common = [v for v in allv if all(ct.act(Fraction(1, p ** k), v) == v
                                             for k in range(1, m + 1))]
            res.check(sorted({v.level for v in common}) == list(range(m, small + 1)),
                      f"prufer{p}: brute-force common fixed set for 1/p..1/p^{m} is wrong")
    return res


def suite_dinf(env: Environment, seed: int, length: int = 8) -> SuiteResult:
    res = SuiteResult("dinf")
    words = list(dinf_words(length))
    half = list(dinf_words(length // 2))
    for u in half:
        for v in half:
            res.check(dinf_word(u + v) == dinf_word(u) * dinf_word(v),
                      lambda: f"dinf: {u}{v} is not the product")
    for rel in ("aa", "bb"):
        res.check(dinf_word(rel) == DIHEDRAL_IDENTITY, f"dinf: {rel} is not the identity")
    for w in words:
        e = dinf_word(w)
        g = line_automorphism(e, w or "1")
        amp = iso.amplitude_direct(g, iso.sufficient_ball(g, 0))
        res.check(amp == line_amplitude(e) == iso.amplitude_formula(g, 0),
                  lambda: f"dinf: {w} amplitude {amp} != line amplitude {line_amplitude(e)}")
        res.check(iso.detect_inversion(g, window=2) is None, lambda: f"dinf: {w} inverts an edge")
    with_inv = line_action("with-inversion")
    wit = with_inv.inversion_witness()
    res.check(wit == ("b", (0, 1)), f"dinf: with-inversion witness {wit}")
    res.check(iso.detect_inversion(with_inv.automorphism("b"), window=2) == (0, 1),
              "dinf: b = R_1/2 not detected as an inversion")
    res.check(line_action("without-inversion").inversion_witness() is None,
              "dinf: without-inversion convention has a witness")
    inverting = 0
    for w in words:
        e = dinf_word(w, "with-inversion")
        if e.inverted_edge() is not None:
            inverting += 1
            try:
                line_amplitude(e)
                ok = False
            except InversionError:
                ok = True
            res.check(ok, f"dinf: {w} inverts but has a line amplitude")
    res.stats["words"] = len(words)
    res.stats["with_inversion_inverting_words"] = inverting
    res.stats["ab"] = str(dinf_word("ab"))
    return res


def suite_orient(env: Environment, seed: int) -> SuiteResult:
    res = SuiteResult("orient")
    tog = env.togs["chain3"]
    ori = orient_edges(tog)
    up = [("e01", "g0", "g1"), ("e12", "g1", "g2")]
    res.check(ori.positive == up, f"chain3: positive edges {ori.positive}")
    res.check(not ori.disagreements, "chain3: local and global orientations differ")
    walk = follow_positive_chain(tog, "g0", ori)
    res.check(walk.path == ("g0", "g1", "g2") and walk.stop == "sink",
              f"chain3: walk {walk.to_dict()}")
    res.check([h.domain.name for h in walk.inclusions] + [walk.inclusions[-1].codomain.name]
              == ["Z1", "Z2", "Z4"], "chain3: chain of groups is not Z1 <= Z2 <= Z4")
    ori = orient_edges(env.togs["z2z3_edge"])
    res.check(all(c == DEGENERATE for c in ori.local.values())
              and set(ori.diagnostics.values()) == {"neither"},
              f"z2z3_edge: {ori.to_dict()}")
    ori = orient_edges(env.togs["flat"])
    res.check(set(ori.diagnostics.values()) == {"both"}, f"flat: {ori.to_dict()}")
    walk = follow_positive_chain(env.togs["fork"], "mid")
    res.check(walk.stop == "multiple" and len(walk.outgoing) == 2, f"fork: {walk.to_dict()}")
    for name in sorted(env.togs):
        ori = orient_edges(env.togs[name])
        for e, c in ori.local.items():
            rev = {POSITIVE: "negative", "negative": POSITIVE, DEGENERATE: DEGENERATE}[c]
            res.check(ori.local[(e[0], e[2], e[1])] == rev, f"{name}: {e} and its reverse disagree")
        res.stats[f"{name}_disagreements"] = len(ori.disagreements)
    return res


SUITES = {
    "normal-form": suite_normal_form,
    "amplitude": suite_amplitude,
    "translation-length": suite_translation_length,
    "culler-morgan": suite_culler_morgan,
    "serre": suite_serre,
    "stabilizer": suite_stabilizer,
    "quotient": suite_quotient,
    "chain": suite_chain,
    "dinf": suite_dinf,
    "orient": suite_orient,
}


def run_suites(names, seed: int, env: Environment | None = None) -> dict:
    """Run the named suites (``"all"`` for every suite) and build the report."""
    env = env or builtin_environment()
    if names == "all" or names == ["all"]:
        names = list(SUITES)
    results = {n: SUITES[n](env, seed).to_dict() for n in names}
    return {"schema": SCHEMA, "command": "verify", "seed": seed,
            "suites": dict(sorted(results.items())),
            "passed": all(r["passed"] for r in results.values())}
