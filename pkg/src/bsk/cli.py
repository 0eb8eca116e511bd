"""Command-line entry point: ``bsk <command> ...``.

Every command prints a JSON report (or DOT with ``--dot``) and exits 0 when
all of its checks pass, 1 when a check fails, 2 on usage or spec errors and
3 when a lazy search runs out of budget.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from bsk import isometry as iso
from bsk.constructions import (CONVENTIONS, ChainTree, chain_end, dinf_word, line_amplitude,
                               line_automorphism)
from bsk.errors import BSKError, BudgetExhausted, InversionError, SpecError
from bsk.quotient import (DEGENERATE, POSITIVE, DegenerateEdge, elliptic_generation_check,
                          follow_positive_chain, fundamental_domain, orient_edges, quotient_graph)
from bsk.specfile import Environment, builtin_text, load
from bsk.trees import explore, to_dot
from bsk.verify import SCHEMA, SUITES, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class CommandError(BSKError):
    pass


def _env(args) -> Environment:
    text = Path(args.spec).read_text() if args.spec else builtin_text()
    return load(text)


def _report(args, result: dict, passed: bool = True) -> dict:
    return {"schema": SCHEMA, "command": args.echo, "result": result, "passed": passed}


# --------------------------------------------------------------------------
# commands


def cmd_classify(args, env):
    sp = env.lookup("amalgams", args.amalgam)
    w = sp.parse_word(args.word)
    cls = sp.classify_element(w)
    g = sp.translation(w)
    amp = iso.amplitude_formula(g, sp.base_A, args.budget)
    res = {
        "normal_form": sp.format_word(w),
        "syllable_length": len(w),
        "class": cls.kind,
        "translation_length": cls.translation_length,
        "tree_amplitude": amp,
        "factor": cls.factor,
        "witness": sp.format_word(cls.witness),
        "core": sp.format_word(cls.core),
    }
    return _report(args, res, amp == cls.translation_length)


def _automorphism(env, source: str, element: str):
    """Resolve ``(source, element)`` to ``(automorphism, default base vertex, parse base)``."""
    if source == "dinf":
        return line_automorphism(dinf_word(element), element), 0, int
    if source in env.amalgams:
        sp = env.amalgams[source]
        return sp.translation(sp.parse_word(element)), sp.base_A, None
    if source in env.actions:
        act = env.actions[source]
        g = act.group.index(element)
        return act.automorphism(g), act.tree.root, str
    if source in env.chains:
        spec = env.chains[source]
        x = spec.parse(element)
        ct = ChainTree(spec, spec.level(x))
        return ct.translation(x), ct.base, None
    raise CommandError(f"unknown source {source!r}: expected dinf or a declared amalgam, "
                       "action or chain")


def cmd_amplitude(args, env):
    g, base, parse = _automorphism(env, args.source, args.element)
    if args.base is not None:
        if parse is None:
            raise CommandError("--base is only supported for dinf and actions")
        base = parse(args.base)
    f = iso.amplitude_formula(g, base, args.budget)
    d = iso.amplitude_direct(g, iso.sufficient_ball(g, base, args.budget), args.budget)
    res = {"element": args.element, "base": str(base), "formula": f, "direct": d,
           "class": "elliptic" if f == 0 else "hyperbolic"}
    return _report(args, res, f == d)


def cmd_bs_tree(args, env):
    sp = env.lookup("amalgams", args.amalgam)
    t = explore(sp.tree, sp.base_A, args.radius)
    if args.dot:
        labels = {v: sp.format_vertex(v) for v in t.vertices}
        return to_dot(t, f"BS({sp.name})", labels=labels)
    deg = {}
    for v in t.vertices:
        deg.setdefault(v.side, set()).add(len(sp.tree.neighbors(v)))
    res = {"amalgam": sp.name, "radius": args.radius, "vertices": len(t.vertices),
           "degrees": {s: sorted(d) for s, d in sorted(deg.items())},
           "index": {"A": sp.index("A"), "B": sp.index("B")}, "trivial": sp.trivial}
    ok = all(d == {sp.index(s)} for s, d in deg.items())
    return _report(args, res, ok)


def cmd_quotient(args, env):
    act = env.lookup("actions", args.action)
    q = quotient_graph(act)
    if args.dot:
        labels = {r: f"{r} ({len(m)})" for r, m in q.vertex_orbits.items()}
        return to_dot(q.graph, f"{act.name} quotient", labels=labels)
    verdict = elliptic_generation_check(act, q)
    fd = fundamental_domain(act, q)
    res = {
        "action": act.name,
        "vertex_orbits": {str(r): sorted(map(str, m)) for r, m in sorted(q.vertex_orbits.items(),
                                                                        key=lambda t: str(t[0]))},
        "geometric_edges": len(q.graph.edges) // 2,
        "cycle_rank": verdict.rank,
        "all_elliptic": verdict.all_elliptic,
        "fundamental_domain": [str(v) for v in fd.sorted()],
    }
    return _report(args, res, verdict.holds)


def cmd_orient(args, env):
    tog = env.lookup("togs", args.tog)
    ori = orient_edges(tog)
    if args.dot:
        gr = tog.tree
        directed = [gr.edge_between(e[1], e[2]) for e in ori.local if ori.local[e] == POSITIVE]
        dashed = [gr.edge_between(e[1], e[2]) for e in ori.local if ori.local[e] == DEGENERATE]
        labels = {v: f"{v}: {tog.vertex_groups[v].name}" for v in gr.vertices}
        return to_dot(gr, tog.name, directed_edges=directed, dashed_edges=dashed, labels=labels)
    res = ori.to_dict()
    start = args.start if args.start is not None else tog.tree.vertices[0]
    try:
        res["walk"] = follow_positive_chain(tog, start, ori).to_dict()
    except DegenerateEdge as exc:
        res["walk"] = {"aborted": str(exc)}
    return _report(args, res, True)


def cmd_chain_end(args, env):
    spec = env.lookup("chains", args.chain)
    if args.elements:
        elems = [spec.parse(x) for x in args.elements]
    else:
        elems = [spec.element(1, k) for k in range(1, args.depth + 1)]
    rep = chain_end(spec, elems, args.depth)
    res = rep.to_dict()
    res["chain"] = spec.name
    return _report(args, res, rep.holds)


def cmd_dinf(args, env):
    e = dinf_word(args.word, args.convention)
    res = {"word": args.word, "convention": args.convention,
           "sign": e.sign, "offset": e.offset}
    edge = e.inverted_edge()
    if edge is not None:
        res.update({"kind": "inversion", "inverted_edge": list(edge)})
        return _report(args, res, True)
    g = line_automorphism(e, args.word or "1")
    amp = iso.amplitude_formula(g, 0)
    res.update({"kind": "translation" if e.sign == 1 else "reflection",
                "translation": e.offset if e.sign == 1 else 0,
                "fixed_vertex": e.fixed_vertex(),
                "amplitude": amp, "line_amplitude": line_amplitude(e)})
    return _report(args, res, amp == line_amplitude(e))


def cmd_verify(args, env):
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("BSK_SEED", "0"))
    names = "all" if args.suite == "all" else [args.suite]
    rep = run_suites(names, seed, env)
    rep["command"] = args.echo
    return rep


COMMANDS = {
    "classify": cmd_classify,
    "amplitude": cmd_amplitude,
    "bs-tree": cmd_bs_tree,
    "quotient": cmd_quotient,
    "orient": cmd_orient,
    "chain-end": cmd_chain_end,
    "dinf": cmd_dinf,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="spec file (default: the bundled corpus)")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--budget", type=int, default=256,
                        help="radius budget for searches in infinite trees (default 256)")

    p = argparse.ArgumentParser(prog="bsk", description="Group actions on trees.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="classify an amalgam element")
    s.add_argument("amalgam")
    s.add_argument("word", help='letters such as "A:1 B:1"')

    s = sub.add_parser("amplitude", parents=[common], help="amplitude by formula and by minimum")
    s.add_argument("source", help="dinf, or an amalgam, action or chain name")
    s.add_argument("element")
    s.add_argument("--base", help="base vertex (dinf and actions)")

    s = sub.add_parser("bs-tree", parents=[common], help="explore a Bass-Serre tree")
    s.add_argument("amalgam", nargs="?", default="z2z3")
    s.add_argument("--radius", type=int, default=2)
    s.add_argument("--dot", action="store_true")

    s = sub.add_parser("quotient", parents=[common], help="quotient of a finite action")
    s.add_argument("action")
    s.add_argument("--dot", action="store_true")

    s = sub.add_parser("orient", parents=[common], help="orient a tree of groups")
    s.add_argument("tog")
    s.add_argument("--start", help="vertex to start the positive walk from")
    s.add_argument("--dot", action="store_true")

    s = sub.add_parser("chain-end", parents=[common], help="end behaviour of a chain tree")
    s.add_argument("chain")
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--elements", nargs="*", help="fractions such as 1/4 (default 1/p .. 1/p^depth)")

    s = sub.add_parser("dinf", parents=[common], help="a word in the infinite dihedral group")
    s.add_argument("word")
    s.add_argument("--convention", choices=sorted(CONVENTIONS), default="without-inversion")

    s = sub.add_parser("verify", parents=[common], help="run verification suites")
    s.add_argument("--suite", choices=["all", *SUITES], default="all")
    s.add_argument("--seed", type=int, help="sampling seed (default $BSK_SEED or 0)")
    return p


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.echo = argv
    try:
        env = _env(args)
        payload = COMMANDS[args.command](args, env)
    except BudgetExhausted as exc:
        _emit(args, {"schema": SCHEMA, "command": argv, "error": "budget-exhausted",
                     "budget": exc.budget, "message": str(exc)})
        return EXIT_BUDGET
    except (SpecError, CommandError, InversionError, BSKError, KeyError, ValueError) as exc:
        _emit(args, {"schema": SCHEMA, "command": argv, "error": type(exc).__name__,
                     "message": str(exc)})
        return EXIT_USAGE
    _emit(args, payload)
    if isinstance(payload, str):
        return EXIT_OK
    return EXIT_OK if payload.get("passed", False) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
