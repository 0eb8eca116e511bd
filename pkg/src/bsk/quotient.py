"""Finite group actions on finite trees, quotient graphs and trees of groups."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from bsk import kernels
from bsk.errors import InvalidGraph, InversionError, NotAnIsometry, NotATree
from bsk.groups import FiniteGroup, GroupHom, check_monomorphism
from bsk.isometry import TreeAutomorphism, amplitude_formula
from bsk.trees import Edge, FiniteGraph, FiniteTree, Subtree, sort_key, validate_graph


class FiniteAction:
    """A finite group acting on a finite tree; ``perms[g]`` maps vertex to vertex.

    Construction checks that each map is a tree automorphism, that ``g -> perms[g]``
    is a homomorphism (on every pair) and that no element inverts an edge.
    """

    def __init__(self, group: FiniteGroup, tree: FiniteTree, perms, name: str = "act",
                 check: bool = True):
        self.group = group
        self.tree = tree
        self.name = name
        self.perms = [dict(perms[g]) for g in group.elements()]
        if check:
            self.validate()

    @classmethod
    def from_generators(cls, group: FiniteGroup, tree: FiniteTree, gens: dict, name="act"):
        """Extend ``{element index: vertex map}`` multiplicatively to the whole group."""
        ident = {v: v for v in tree.vertices}
        perms = {group.identity: ident}
        frontier = [group.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for s, ps in gens.items():
                    y = group.mul(s, x)
                    if y not in perms:
                        px = perms[x]
                        perms[y] = {v: ps[px[v]] for v in tree.vertices}
                        nxt.append(y)
            frontier = nxt
        if len(perms) != group.order:
            raise ValueError(f"{name}: the given elements do not generate {group.name}")
        return cls(group, tree, perms, name)

    def validate(self) -> None:
        verts = set(self.tree.vertices)
        pairs = [(self.tree.graph.origin(e), self.tree.graph.terminus(e))
                 for e, _ in self.tree.graph.geometric_edges()]
        for g, p in enumerate(self.perms):
            lab = self.group.label(g)
            if set(p) != verts or set(p.values()) != verts:
                raise NotAnIsometry(f"{self.name}: {lab} does not permute the vertices", None)
            for u, v in pairs:
                if p[v] not in self.tree.neighbors(p[u]):
                    raise NotAnIsometry(f"{self.name}: {lab} breaks the edge {u}-{v}", (u, v))
                if p[u] == v and p[v] == u:
                    raise InversionError(f"{self.name}: {lab} inverts the edge {u}-{v}",
                                         tuple(sorted((u, v), key=sort_key)))
        for v in verts:
            if self.perms[self.group.identity][v] != v:
                raise ValueError(f"{self.name}: the identity moves {v}")
        for g in self.group.elements():
            pg = self.perms[g]
            for h in self.group.elements():
                ph, pgh = self.perms[h], self.perms[self.group.mul(g, h)]
                for v in verts:
                    if pgh[v] != pg[ph[v]]:
                        raise ValueError(f"{self.name}: not a homomorphism at "
                                         f"({self.group.label(g)}, {self.group.label(h)})")

    def __call__(self, g: int, v):
        return self.perms[g][v]

    def automorphism(self, g: int) -> TreeAutomorphism:
        return TreeAutomorphism.from_table(self.tree, self.perms[g], name=self.group.label(g))

    def automorphisms(self) -> list[TreeAutomorphism]:
        return [self.automorphism(g) for g in self.group.elements()]

    def fixed_vertices(self, g: int) -> list:
        return [v for v in self.tree.vertices if self.perms[g][v] == v]

    def edge_image(self, g: int, e):
        gr = self.tree.graph
        return self.tree.edge_between(self.perms[g][gr.origin(e)], self.perms[g][gr.terminus(e)])

    def __repr__(self):
        return f"FiniteAction({self.name}: {self.group.name} on {len(self.tree.vertices)} vertices)"


# --------------------------------------------------------------------------
# quotients


@dataclass(frozen=True)
class QuotientGraph:
    """Orbits named by their least member; ``graph`` carries the induced maps."""

    graph: FiniteGraph
    vertex_orbits: dict    # representative -> frozenset of vertices
    edge_orbits: dict      # representative -> frozenset of edge ids
    vertex_class: dict     # vertex -> representative
    edge_class: dict       # edge id -> representative


def _orbit_classes(items, image):
    """Map each item to the least member of its orbit; ``image(g, x)`` is the action."""
    items = sorted(items, key=sort_key)
    pos = {x: i for i, x in enumerate(items)}
    rows = image(pos, items)
    labels = kernels.orbit_labels(np.asarray(rows, dtype=np.int64), len(items))
    return {x: items[int(labels[i])] for i, x in enumerate(items)}


def quotient_graph(act: FiniteAction) -> QuotientGraph:
    tree = act.tree
    gr = tree.graph
    vcls = _orbit_classes(tree.vertices,
                          lambda pos, xs: [[pos[p[v]] for v in xs] for p in act.perms])
    ecls = _orbit_classes(gr.edges,
                          lambda pos, xs: [[pos[act.edge_image(g, e)] for e in xs]
                                           for g in act.group.elements()])
    vorb, eorb = {}, {}
    for v, r in vcls.items():
        vorb.setdefault(r, set()).add(v)
    for e, r in ecls.items():
        eorb.setdefault(r, set()).add(e)
    edges = []
    for r, members in eorb.items():
        o = {vcls[gr.origin(e)] for e in members}
        t = {vcls[gr.terminus(e)] for e in members}
        inv = {ecls[gr.inverse(e)] for e in members}
        # the induced maps must not depend on the representative
        assert len(o) == len(t) == len(inv) == 1, f"induced maps ill-defined on orbit {r}"
        (inv_r,) = inv
        if inv_r == r:
            raise InversionError(f"{act.name}: the orbit of edge {r} is self-inverse",
                                 (gr.origin(r), gr.terminus(r)))
        edges.append(Edge(r, o.pop(), t.pop(), inv_r))
    q = FiniteGraph(vorb, edges)
    bad = validate_graph(q)
    if bad:
        raise InvalidGraph(f"quotient of {act.name} violates the graph axioms", bad)
    return QuotientGraph(q, {r: frozenset(m) for r, m in vorb.items()},
                         {r: frozenset(m) for r, m in eorb.items()}, vcls, ecls)


def components(g: FiniteGraph) -> int:
    n = len(g.vertices)
    if n == 0:
        return 0
    indptr, indices, _ = g.csr()
    seen = np.zeros(n, dtype=bool)
    count = 0
    for i in range(n):
        if not seen[i]:
            dist, _ = kernels.bfs(indptr, indices, np.array([i], dtype=np.int64))
            seen |= dist >= 0
            count += 1
    return count


def cycle_rank(g: FiniteGraph) -> int:
    """Free rank of the fundamental group: geometric edges - vertices + components."""
    bad = validate_graph(g)
    if bad:
        raise InvalidGraph("not a graph", bad)
    return len(g.edges) // 2 - len(g.vertices) + components(g)


@dataclass(frozen=True)
class EllipticVerdict:
    all_elliptic: bool
    non_elliptic: tuple
    rank: int
    amplitudes: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.all_elliptic and self.rank == 0

    def to_dict(self) -> dict:
        return {"all_elliptic": self.all_elliptic, "non_elliptic": list(self.non_elliptic),
                "rank": self.rank, "holds": self.holds}


def elliptic_generation_check(act: FiniteAction, quotient: QuotientGraph | None = None) -> EllipticVerdict:
    """Every element of a finite group acting on a finite tree fixes a vertex, and the quotient is a tree."""
    amps = {}
    bad = []
    root = act.tree.root
    for g in act.group.elements():
        aut = act.automorphism(g)
        amp = amplitude_formula(aut, root)
        amps[act.group.label(g)] = amp
        if amp != 0 or not act.fixed_vertices(g):
            bad.append(act.group.label(g))
    q = quotient or quotient_graph(act)
    return EllipticVerdict(not bad, tuple(bad), cycle_rank(q.graph), amps)


class FundamentalDomain(Subtree):
    """A subtree meeting every vertex orbit once; ``lift`` maps orbit representative to its vertex."""

    def __init__(self, host, lift: dict):
        super().__init__(host, lift.values())
        self.lift = dict(lift)


def fundamental_domain(act: FiniteAction, quotient: QuotientGraph | None = None) -> FundamentalDomain:
    """Lift a BFS spanning tree of the quotient, starting from the orbit of the least vertex."""
    q = quotient or quotient_graph(act)
    if cycle_rank(q.graph) != 0 or components(q.graph) != 1:
        raise NotATree(f"quotient of {act.name} is not a tree", None)
    tree = act.tree
    root = min(tree.vertices, key=sort_key)
    lift = {q.vertex_class[root]: root}
    frontier = [root]
    while frontier:
        nxt = []
        for p in frontier:
            for w in sorted(tree.neighbors(p), key=sort_key):
                orb = q.vertex_class[w]
                if orb not in lift:
                    lift[orb] = w
                    nxt.append(w)
        frontier = nxt
    return FundamentalDomain(tree, lift)


# --------------------------------------------------------------------------
# trees of groups


class TreeOfGroups:
    """A finite tree with vertex groups, edge groups and edge monomorphisms.

    ``edges`` is a list of ``(name, u, v)``; ``edge_groups[name]`` is the
    group ``R_e = R_ebar``; ``alphas[(name, x)]`` is the monomorphism from the
    edge group into the group of its endpoint ``x``. A directed edge is a
    triple ``(name, origin, terminus)``.
    """

    def __init__(self, vertices, edges, vertex_groups: dict, edge_groups: dict, alphas: dict,
                 name: str = "T"):
        self.name = name
        self.edge_list = [tuple(e) for e in edges]
        self.tree = FiniteTree.from_pairs(list(vertices), [(u, v) for _, u, v in self.edge_list])
        self.vertex_groups = dict(vertex_groups)
        self.edge_groups = dict(edge_groups)
        self.alphas = dict(alphas)
        self.validate()

    def validate(self) -> None:
        names = [n for n, _, _ in self.edge_list]
        if len(set(names)) != len(names):
            raise ValueError(f"{self.name}: duplicate edge names")
        for v in self.tree.vertices:
            if v not in self.vertex_groups:
                raise ValueError(f"{self.name}: no group for vertex {v}")
        for n, u, v in self.edge_list:
            if n not in self.edge_groups:
                raise ValueError(f"{self.name}: no group for edge {n}")
            for x in (u, v):
                a = self.alphas.get((n, x))
                if a is None:
                    raise ValueError(f"{self.name}: no map from edge {n} into vertex {x}")
                if a.domain != self.edge_groups[n] or a.codomain != self.vertex_groups[x]:
                    raise ValueError(f"{self.name}: map {a.name} has the wrong domain or codomain")
                chk = check_monomorphism(a)
                if not chk:
                    raise ValueError(f"{self.name}: {a.name} is {chk.reason}: witness {chk.witness}")

    def directed_edges(self) -> list[tuple]:
        out = []
        for n, u, v in self.edge_list:
            out += [(n, u, v), (n, v, u)]
        return out

    def alpha(self, e: tuple) -> GroupHom:
        """``alpha_e`` into the origin group."""
        return self.alphas[(e[0], e[1])]

    def onto_origin(self, e: tuple) -> bool:
        return self.alpha(e).is_surjective()

    def side(self, e: tuple) -> list:
        """Vertices whose geodesic to ``t(e)`` passes through ``e`` (the origin side)."""
        n, o, t = e
        out, frontier, seen = [o], [o], {o, t}
        while frontier:
            nxt = []
            for x in frontier:
                for w in self.tree.neighbors(x):
                    if w not in seen:
                        seen.add(w)
                        out.append(w)
                        nxt.append(w)
            frontier = nxt
        return out

    def _toward(self, x, target) -> tuple:
        """The directed edge leaving ``x`` along the geodesic to ``target``."""
        path = self.tree.geodesic(x, target)
        y = path[1]
        for n, u, v in self.edge_list:
            if {u, v} == {x, y}:
                return (n, x, y)
        raise AssertionError("adjacent vertices without an edge")

    def side_collapses(self, e: tuple) -> bool:
        """True iff the group generated by the origin side equals ``R_o(e)``.

        On a tree of monomorphisms this happens exactly when every other
        vertex group of the side is swallowed by the edge towards ``o(e)``.
        """
        o = e[1]
        for x in self.side(e):
            if x != o and not self.onto_origin(self._toward(x, o)):
                return False
        return True


POSITIVE = "positive"
NEGATIVE = "negative"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class Orientation:
    """Per directed edge: local class, global class and degenerate diagnostics."""

    local: dict            # directed edge -> POSITIVE | NEGATIVE | DEGENERATE
    global_: dict          # same, computed from the generated side groups
    diagnostics: dict      # directed edge -> "both" | "neither" (degenerate only, local rule)

    @property
    def positive(self) -> list:
        return sorted((e for e, c in self.local.items() if c == POSITIVE), key=sort_key)

    @property
    def negative(self) -> list:
        return sorted((e for e, c in self.local.items() if c == NEGATIVE), key=sort_key)

    @property
    def degenerate(self) -> list:
        return sorted((e for e, c in self.local.items() if c == DEGENERATE), key=sort_key)

    @property
    def disagreements(self) -> list:
        return sorted((e for e in self.local if self.local[e] != self.global_[e]), key=sort_key)

    def to_dict(self) -> dict:
        def fmt(e):
            return f"{e[0]}:{e[1]}->{e[2]}"

        return {
            "positive": [fmt(e) for e in self.positive],
            "degenerate": {fmt(e): self.diagnostics[e] for e in self.degenerate},
            "global_positive": sorted(fmt(e) for e, c in self.global_.items() if c == POSITIVE),
            "disagreements": [fmt(e) for e in self.disagreements],
        }


def _classify(first: bool, second: bool):
    if first and not second:
        return POSITIVE, None
    if second and not first:
        return NEGATIVE, None
    return DEGENERATE, "both" if first else "neither"


def orient_edges(tog: TreeOfGroups) -> Orientation:
    """Split directed edges into positive, negative and degenerate.

    Local rule: ``e`` is positive iff ``alpha_e`` is onto ``R_o(e)`` and
    ``alpha_ebar`` is not onto ``R_t(e)``. The global rule replaces "onto
    ``R_o(e)``" by "the whole origin side generates ``R_o(e) = R_e``".
    """
    local, glob, diag = {}, {}, {}
    for e in tog.directed_edges():
        n, o, t = e
        ebar = (n, t, o)
        cls, why = _classify(tog.onto_origin(e), tog.onto_origin(ebar))
        local[e] = cls
        if why:
            diag[e] = why
        g1 = tog.onto_origin(e) and tog.side_collapses(e)
        g2 = tog.onto_origin(ebar) and tog.side_collapses(ebar)
        glob[e] = _classify(g1, g2)[0]
    return Orientation(local, glob, diag)


class DegenerateEdge(ValueError):
    def __init__(self, message, edge, reason):
        super().__init__(message)
        self.edge = edge
        self.reason = reason


@dataclass(frozen=True)
class PositiveChain:
    """The walk along positive edges and why it stopped."""

    path: tuple
    inclusions: tuple       # GroupHom R_{x_i} -> R_{x_{i+1}}
    stop: str               # "sink" | "multiple"
    outgoing: tuple = ()    # positive edges at the last vertex when stop == "multiple"

    def to_dict(self) -> dict:
        return {"path": [str(x) for x in self.path],
                "chain": [self._group_name(i) for i in range(len(self.path))],
                "stop": self.stop,
                "outgoing": [f"{e[0]}:{e[1]}->{e[2]}" for e in self.outgoing]}

    def _group_name(self, i):
        if i < len(self.inclusions):
            return self.inclusions[i].domain.name
        if self.inclusions:
            return self.inclusions[-1].codomain.name
        return None


def follow_positive_chain(tog: TreeOfGroups, start, orientation: Orientation | None = None,
                          max_steps: int | None = None) -> PositiveChain:
    """Follow the unique outgoing positive edge from ``start`` until none or several remain.

    Each step ``x -> y`` along ``e`` yields the inclusion ``R_x -> R_y`` as
    ``alpha_ebar`` after the inverse of ``alpha_e``. A degenerate edge at a
    visited vertex aborts the walk with :class:`DegenerateEdge`.
    """
    ori = orientation or orient_edges(tog)
    limit = len(tog.tree.vertices) if max_steps is None else max_steps
    path, incl = [start], []
    x = start
    for _ in range(limit + 1):
        out = sorted((e for e in ori.local if e[1] == x), key=sort_key)
        for e in out:
            if ori.local[e] == DEGENERATE:
                raise DegenerateEdge(f"degenerate edge {e[0]} at {x} ({ori.diagnostics[e]})",
                                     e, ori.diagnostics[e])
        pos = [e for e in out if ori.local[e] == POSITIVE]
        if not pos:
            return PositiveChain(tuple(path), tuple(incl), "sink")
        if len(pos) > 1:
            return PositiveChain(tuple(path), tuple(incl), "multiple", tuple(pos))
        e = pos[0]
        n, o, t = e
        a, abar = tog.alpha(e), tog.alphas[(n, t)]
        back = a.preimage_map()
        images = tuple(abar(back[r]) for r in a.codomain.elements())
        hom = GroupHom(a.codomain, abar.codomain, images, f"{o}->{t}")
        assert check_monomorphism(hom), "inclusion along a positive edge must be injective"
        incl.append(hom)
        path.append(t)
        x = t
    raise AssertionError("positive walk longer than the tree")
