"""Graphs with paired directed edges, finite and lazily expanded trees.

A graph carries an explicit involution on its directed edges, so the axioms
``o(e) = t(ebar)``, ``e != ebar`` and ``ebar-bar = e`` can be asserted as
stored. Trees come in two flavours sharing one interface (``root``,
``neighbors``, ``contains``):

* :class:`FiniteTree` -- an explicit validated graph; breadth-first searches
  go through the integer kernels in :mod:`bsk.kernels`.
* :class:`LazyTree` -- vertices are canonical keys and adjacency is produced on
  demand by an ``expand`` callback. An optional ``parent`` callback (the
  neighbour one step closer to the root) lets distances be read off root paths
  instead of searched for.

Everything that touches an infinite tree takes an explicit radius budget and
raises :class:`~bsk.errors.BudgetExhausted` rather than truncating silently.
"""
from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Sequence

import numpy as np

from bsk import kernels
from bsk.errors import (
    BudgetExhausted,
    EmptyPairwiseIntersection,
    InvalidGraph,
    NotASubtree,
    NotATree,
    VertexNotInTree,
)

Vertex = Hashable


def sort_key(v) -> str:
    """Deterministic vertex ordering: lexicographic on the printed key."""
    return str(v)


# --------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class Edge:
    id: Hashable
    origin: Vertex
    terminus: Vertex
    inverse: Hashable


@dataclass(frozen=True)
class Violation:
    kind: str
    edge: Hashable
    detail: str

    def __str__(self):
        return f"{self.kind} {self.edge}: {self.detail}"


class FiniteGraph:
    """Vertices plus directed edges with origin, terminus and inverse maps.

    The constructor stores whatever it is given; :func:`validate_graph` reports
    the axiom violations. Vertices are kept in :func:`sort_key` order.
    """

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Edge]):
        self.vertices = tuple(sorted(set(vertices), key=sort_key))
        self.edges = {}
        for e in edges:
            if e.id in self.edges:
                raise InvalidGraph(f"duplicate edge id {e.id!r}")
            self.edges[e.id] = e
        self._index = {v: i for i, v in enumerate(self.vertices)}
        self._csr = None
        self._lock = threading.Lock()

    @classmethod
    def from_pairs(cls, vertices, pairs) -> "FiniteGraph":
        """Build a graph with one geometric edge per ``(x, y)`` pair.

        The directed edges get ids ``2i`` (x to y) and ``2i + 1`` (y to x).
        """
        edges = []
        for i, (x, y) in enumerate(pairs):
            edges.append(Edge(2 * i, x, y, 2 * i + 1))
            edges.append(Edge(2 * i + 1, y, x, 2 * i))
        return cls(vertices, edges)

    def origin(self, e):
        return self.edges[e].origin

    def terminus(self, e):
        return self.edges[e].terminus

    def inverse(self, e):
        return self.edges[e].inverse

    def __contains__(self, v):
        return v in self._index

    def index(self, v) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise VertexNotInTree(v) from None

    def geometric_edges(self) -> list[tuple]:
        """One ``(e, ebar)`` pair per geometric edge, ``e`` the smaller id by :func:`sort_key`."""
        seen = set()
        out = []
        for eid in sorted(self.edges, key=sort_key):
            if eid in seen:
                continue
            inv = self.edges[eid].inverse
            seen.update((eid, inv))
            out.append((eid, inv))
        return out

    def csr(self):
        """``(indptr, indices, slot_edges)`` over vertex indices, built once."""
        if self._csr is None:
            with self._lock:
                if self._csr is None:
                    n = len(self.vertices)
                    buckets = [[] for _ in range(n)]
                    for eid in sorted(self.edges, key=sort_key):
                        e = self.edges[eid]
                        buckets[self._index[e.origin]].append((self._index[e.terminus], eid))
                    indptr = np.zeros(n + 1, dtype=np.int64)
                    indptr[1:] = np.cumsum([len(b) for b in buckets])
                    indices = np.array([w for b in buckets for w, _ in b], dtype=np.int64)
                    slots = [eid for b in buckets for _, eid in b]
                    self._csr = (indptr, indices, slots)
        return self._csr

    def __repr__(self):
        return f"FiniteGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


def validate_graph(g: FiniteGraph) -> list[Violation]:
    """List every violated edge axiom; an empty list means the graph is valid."""
    out = []
    vset = set(g.vertices)
    for eid in sorted(g.edges, key=sort_key):
        e = g.edges[eid]
        for end, name in ((e.origin, "origin"), (e.terminus, "terminus")):
            if end not in vset:
                out.append(Violation("unknown-vertex", eid, f"{name} {end!r} is not a vertex"))
        if e.inverse not in g.edges:
            out.append(Violation("missing-inverse", eid, f"inverse {e.inverse!r} is not an edge"))
            continue
        if e.inverse == eid:
            out.append(Violation("self-inverse", eid, f"self-inverse edge {eid}"))
            continue
        inv = g.edges[e.inverse]
        if inv.inverse != eid:
            out.append(Violation("inverse-not-involution", eid,
                                 f"inverse of inverse is {inv.inverse!r}"))
        if e.origin != inv.terminus:
            out.append(Violation("origin/terminus mismatch", eid,
                                 f"o({eid})={e.origin!r} but t({e.inverse})={inv.terminus!r}"))
    return out


@dataclass(frozen=True)
class TreeCheck:
    """Outcome of :func:`is_tree`; truthy iff the graph is a tree."""

    is_tree: bool
    disconnected: tuple | None = None
    loop: tuple | None = None

    def __bool__(self):
        return self.is_tree


def is_tree(g: FiniteGraph) -> TreeCheck:
    """Decide whether ``g`` is connected with no non-trivial reduced loop.

    On failure the witness is either a pair of vertices in different
    components or a reduced loop given as a tuple of edge ids.
    """
    bad = validate_graph(g)
    if bad:
        raise InvalidGraph("graph axioms violated", bad)
    n = len(g.vertices)
    if n == 0:
        return TreeCheck(False, disconnected=())
    indptr, indices, slots = g.csr()
    dist, parent = kernels.bfs(indptr, indices, np.array([0], dtype=np.int64))
    unreached = np.flatnonzero(dist < 0)
    if unreached.size:
        return TreeCheck(False, disconnected=(g.vertices[0], g.vertices[int(unreached[0])]))
    # spanning-tree edge into each non-root vertex: the first slot u -> w with parent[w] == u
    tree_edge = {}
    for u in range(n):
        for k in range(indptr[u], indptr[u + 1]):
            w = int(indices[k])
            if parent[w] == u and w not in tree_edge:
                tree_edge[w] = slots[k]
    used = set()
    for w, eid in tree_edge.items():
        used.update((eid, g.inverse(eid)))
    for eid in sorted(g.edges, key=sort_key):
        if eid in used:
            continue
        # non-tree edge: close it with the spanning-tree path from t(e) back to o(e)
        x, y = g.index(g.origin(eid)), g.index(g.terminus(eid))
        return TreeCheck(False, loop=(eid,) + _tree_path_edges(g, parent, tree_edge, y, x))
    return TreeCheck(True)


def _tree_path_edges(g, parent, tree_edge, a, b):
    """Edge ids of the spanning-tree path from vertex index ``a`` to ``b``."""
    def up(v):
        chain = [v]
        while parent[chain[-1]] >= 0:
            chain.append(int(parent[chain[-1]]))
        return chain

    ua, ub = up(a), up(b)
    sb = set(ub)
    meet = next(v for v in ua if v in sb)
    # a climbs to meet along inverses of tree edges, then descend to b
    climb = [g.inverse(tree_edge[v]) for v in ua[:ua.index(meet)]]
    descend = [tree_edge[v] for v in reversed(ub[:ub.index(meet)])]
    return tuple(climb + descend)


# --------------------------------------------------------------------------
# trees


@dataclass(frozen=True)
class Geodesic:
    vertices: tuple

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def source(self):
        return self.vertices[0]

    @property
    def target(self):
        return self.vertices[-1]

    def reversed(self) -> "Geodesic":
        return Geodesic(tuple(reversed(self.vertices)))

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __getitem__(self, i):
        return self.vertices[i]


class FiniteTree:
    """A validated finite tree."""

    def __init__(self, graph: FiniteGraph, root=None):
        check = is_tree(graph)
        if not check:
            raise NotATree("graph is not a tree", check.disconnected or check.loop)
        self.graph = graph
        self.root = graph.vertices[0] if root is None else root
        if self.root not in graph:
            raise VertexNotInTree(self.root)
        self._bfs_cache = {}

    @classmethod
    def from_pairs(cls, vertices, pairs, root=None) -> "FiniteTree":
        return cls(FiniteGraph.from_pairs(vertices, pairs), root=root)

    @classmethod
    def path(cls, n: int) -> "FiniteTree":
        """The path graph on vertices ``0..n-1``."""
        return cls.from_pairs(range(n), [(i, i + 1) for i in range(n - 1)], root=0)

    @property
    def vertices(self):
        return self.graph.vertices

    def contains(self, v) -> bool:
        return v in self.graph

    __contains__ = contains

    def neighbors(self, v) -> list:
        indptr, indices, _ = self.graph.csr()
        i = self.graph.index(v)
        return [self.graph.vertices[w] for w in indices[indptr[i]:indptr[i + 1]]]

    def edge_between(self, x, y):
        indptr, indices, slots = self.graph.csr()
        i, j = self.graph.index(x), self.graph.index(y)
        for k in range(indptr[i], indptr[i + 1]):
            if indices[k] == j:
                return slots[k]
        return None

    def _bfs(self, source):
        res = self._bfs_cache.get(source)
        if res is None:
            indptr, indices, _ = self.graph.csr()
            src = np.array([self.graph.index(source)], dtype=np.int64)
            res = kernels.bfs(indptr, indices, src)
            self._bfs_cache[source] = res
        return res

    def distance(self, x, y) -> int:
        self.graph.index(x)
        return int(self._bfs(x)[0][self.graph.index(y)])

    def geodesic(self, x, y) -> Geodesic:
        _, parent = self._bfs(x)
        j = self.graph.index(y)
        chain = [j]
        while parent[chain[-1]] >= 0:
            chain.append(int(parent[chain[-1]]))
        return Geodesic(tuple(self.graph.vertices[k] for k in reversed(chain)))

    def distances_from(self, x) -> dict:
        dist = self._bfs(x)[0]
        return {v: int(d) for v, d in zip(self.graph.vertices, dist)}

    def __repr__(self):
        return f"FiniteTree({len(self.vertices)} vertices, root={self.root!r})"


class LazyTree:
    """A tree generated on demand from canonical vertex keys.

    ``expand(v)`` returns the list of ``(label, neighbour)`` pairs of ``v`` and
    must be deterministic. ``parent(v)`` (optional) returns the neighbour of
    ``v`` closer to ``root`` or ``None`` at the root. ``contains(v)``
    (optional) decides membership of a key without exploring.
    """

    def __init__(self, root, expand: Callable, *, parent: Callable | None = None,
                 contains: Callable | None = None, name: str = "X"):
        self.root = root
        self._expand = expand
        self._parent = parent
        self._contains = contains
        self.name = name
        self._cache = {}

    def edges(self, v) -> list:
        out = self._cache.get(v)
        if out is None:
            out = tuple(self._expand(v))
            # setdefault keeps the fill idempotent under concurrent callers
            out = self._cache.setdefault(v, out)
        return list(out)

    def neighbors(self, v) -> list:
        return [w for _, w in self.edges(v)]

    def contains(self, v) -> bool:
        if self._contains is None:
            return True
        return bool(self._contains(v))

    __contains__ = contains

    @property
    def has_parent_hook(self) -> bool:
        return self._parent is not None

    def parent(self, v):
        return self._parent(v)

    def path_to_root(self, v) -> list:
        chain = [v]
        while True:
            p = self._parent(chain[-1])
            if p is None:
                return chain
            chain.append(p)

    def __repr__(self):
        return f"LazyTree({self.name}, root={self.root!r})"


Tree = FiniteTree | LazyTree


def _require(tree, v):
    if not tree.contains(v):
        raise VertexNotInTree(v)


def geodesic(tree: Tree, x, y, budget: int | None = None) -> Geodesic:
    """The unique reduced path from ``x`` to ``y``.

    On a lazy tree the search never goes beyond radius ``budget`` from ``x``;
    if ``y`` lies further away :class:`BudgetExhausted` is raised. A vertex
    that is not in the tree raises :class:`VertexNotInTree` instead.
    """
    _require(tree, x)
    _require(tree, y)
    if isinstance(tree, FiniteTree):
        return tree.geodesic(x, y)
    if x == y:
        return Geodesic((x,))
    if tree.has_parent_hook:
        px, py = tree.path_to_root(x), tree.path_to_root(y)
        # strip the common ancestry; the last shared vertex is the meeting point
        i, j = len(px) - 1, len(py) - 1
        while i > 0 and j > 0 and px[i - 1] == py[j - 1]:
            i -= 1
            j -= 1
        path = tuple(px[:i + 1]) + tuple(reversed(py[:j]))
        if budget is not None and len(path) - 1 > budget:
            raise BudgetExhausted(f"{y} is farther than {budget} from {x}", budget)
        return Geodesic(path)
    parent = {x: None}
    frontier = [x]
    depth = 0
    while frontier:
        if budget is not None and depth >= budget:
            raise BudgetExhausted(f"{y} not reached within radius {budget} of {x}", budget)
        depth += 1
        nxt = []
        for u in frontier:
            for w in tree.neighbors(u):
                if w not in parent:
                    parent[w] = u
                    if w == y:
                        chain = [w]
                        while parent[chain[-1]] is not None:
                            chain.append(parent[chain[-1]])
                        return Geodesic(tuple(reversed(chain)))
                    nxt.append(w)
        frontier = nxt
    raise VertexNotInTree(y)


def distance(tree: Tree, x, y, budget: int | None = None) -> int:
    if isinstance(tree, FiniteTree):
        _require(tree, x)
        _require(tree, y)
        return tree.distance(x, y)
    return geodesic(tree, x, y, budget).length


# --------------------------------------------------------------------------
# subtrees


class Subtree:
    """A finite, non-empty, connected vertex set of a host tree.

    ``exact`` is ``False`` for windows of subtrees that may continue past the
    explored region.
    """

    def __init__(self, host: Tree, vertices: Iterable, *, exact: bool = True, check: bool = True):
        self.host = host
        self.vertices = frozenset(vertices)
        self.exact = exact
        if check:
            if not self.vertices:
                raise NotASubtree("subtree must be non-empty")
            for v in self.vertices:
                _require(host, v)
            if not _connected(host, self.vertices):
                raise NotASubtree("vertex set is not closed under geodesics")

    def __contains__(self, v):
        return v in self.vertices

    def __iter__(self) -> Iterator:
        return iter(sorted(self.vertices, key=sort_key))

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        return isinstance(other, Subtree) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def frontier(self) -> frozenset:
        """Members with at least one neighbour outside the set."""
        return frozenset(v for v in self.vertices
                         if any(w not in self.vertices for w in self.host.neighbors(v)))

    def interior(self) -> frozenset:
        return self.vertices - self.frontier()

    def sorted(self) -> list:
        return sorted(self.vertices, key=sort_key)

    def __repr__(self):
        shown = ", ".join(map(str, self.sorted()[:6]))
        more = ", ..." if len(self) > 6 else ""
        return f"Subtree({{{shown}{more}}}, exact={self.exact})"


class PredicateSubtree:
    """A possibly infinite subtree given by a membership test.

    The predicate must describe a connected set; this is not checkable in
    general and is trusted.
    """

    def __init__(self, host: Tree, member: Callable, name: str = ""):
        self.host = host
        self.member = member
        self.name = name

    def __contains__(self, v):
        return bool(self.member(v))

    def window(self, ball_vertices) -> frozenset:
        return frozenset(v for v in ball_vertices if self.member(v))


def _connected(host, vertices) -> bool:
    start = next(iter(vertices))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in host.neighbors(u):
            if w in vertices and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vertices)


def ball_distances(tree: Tree, center, radius: int) -> dict:
    """``{vertex: distance}`` for every vertex within ``radius`` of ``center``."""
    _require(tree, center)
    if isinstance(tree, FiniteTree):
        indptr, indices, _ = tree.graph.csr()
        src = np.array([tree.graph.index(center)], dtype=np.int64)
        dist, _ = kernels.bfs(indptr, indices, src, radius)
        return {tree.vertices[i]: int(dist[i]) for i in np.flatnonzero(dist >= 0)}
    dist = {center: 0}
    frontier = [center]
    for d in range(1, radius + 1):
        nxt = []
        for u in frontier:
            for w in tree.neighbors(u):
                if w not in dist:
                    dist[w] = d
                    nxt.append(w)
        frontier = nxt
    return dist


def ball(tree: Tree, center, radius: int) -> Subtree:
    """The closed ball of the given radius as a :class:`Subtree`."""
    dist = ball_distances(tree, center, radius)
    sub = Subtree(tree, dist, check=False)
    sub.center = center
    sub.radius = radius
    return sub


def explore(tree: Tree, center, radius: int) -> FiniteTree:
    """Materialise a ball as a :class:`FiniteTree` (vertex keys preserved)."""
    dist = ball_distances(tree, center, radius)
    pairs = []
    for v in sorted(dist, key=sort_key):
        for w in tree.neighbors(v):
            if w in dist and sort_key(v) < sort_key(w):
                pairs.append((v, w))
            elif w in dist and v != w and sort_key(v) == sort_key(w):
                raise ValueError(f"vertex keys {v!r} and {w!r} print identically")
    return FiniteTree.from_pairs(dist.keys(), pairs, root=center)


@dataclass
class HalfLine:
    """An infinite vertex path produced on demand by ``step(i)``."""

    step: Callable[[int], Vertex]
    name: str = ""
    _cache: list = field(default_factory=list, repr=False)

    def __getitem__(self, i: int):
        if i < 0:
            raise IndexError(i)
        while len(self._cache) <= i:
            self._cache.append(self.step(len(self._cache)))
        return self._cache[i]

    def prefix(self, n: int) -> tuple:
        """The first ``n`` vertices."""
        return tuple(self[i] for i in range(n))

    def check(self, host: Tree, n: int) -> None:
        """Assert distinctness and adjacency on the first ``n`` vertices."""
        pts = self.prefix(n)
        if len(set(pts)) != len(pts):
            raise ValueError(f"half-line {self.name} repeats a vertex within {n} steps")
        for a, b in zip(pts, pts[1:]):
            if b not in host.neighbors(a):
                raise ValueError(f"half-line {self.name}: {a!r} and {b!r} are not adjacent")

    @classmethod
    def from_sequence(cls, seq: Sequence, name: str = "") -> "HalfLine":
        """A finite prefix wrapped as a half-line; indexing past it raises."""
        seq = tuple(seq)
        return cls(lambda i: seq[i], name=name)


@dataclass(frozen=True)
class Intersection:
    """Outcome of :func:`subtree_intersection`.

    ``kind`` is ``"vertices"`` (``vertices`` is the full common set),
    ``"half_line"`` (``ray`` is a windowed half-line whose vertices from
    ``tail_start`` on lie in every subtree up to the horizon) or
    ``"undetermined"``.
    """

    kind: str
    vertices: frozenset = frozenset()
    ray: tuple = ()
    tail_start: int | None = None
    exact: bool = True


def subtree_intersection(trees: Sequence, horizon: int | None = None, *, center=None,
                         end: HalfLine | None = None) -> Intersection:
    """Common intersection of a pairwise-intersecting family of subtrees.

    Finite :class:`Subtree` families are handled exactly. Families containing
    a :class:`PredicateSubtree` are examined inside the ball of radius
    ``horizon`` about ``center`` (default: the host root). When the common
    window reaches the ball's boundary the answer is a half-line certificate,
    preferring ``end`` when it has a tail in every subtree.
    """
    if not trees:
        raise ValueError("empty family")
    host = trees[0].host
    if any(t.host is not host for t in trees):
        raise ValueError("subtrees live in different hosts")
    if all(isinstance(t, Subtree) for t in trees):
        for i in range(len(trees)):
            for j in range(i + 1, len(trees)):
                if not trees[i].vertices & trees[j].vertices:
                    raise EmptyPairwiseIntersection(
                        f"subtrees {i} and {j} are disjoint", (i, j))
        common = frozenset.intersection(*(t.vertices for t in trees))
        # non-empty by the Helly property of trees
        assert common, "pairwise-intersecting subtrees with empty intersection"
        return Intersection("vertices", common, exact=all(t.exact for t in trees))

    if horizon is None:
        raise ValueError("a horizon is required for infinite subtrees")
    c = host.root if center is None else center
    dist = ball_distances(host, c, horizon)
    windows = [t.vertices & dist.keys() if isinstance(t, Subtree) else t.window(dist)
               for t in trees]
    for i in range(len(windows)):
        for j in range(i + 1, len(windows)):
            if not windows[i] & windows[j]:
                if isinstance(trees[i], Subtree) and isinstance(trees[j], Subtree):
                    raise EmptyPairwiseIntersection(f"subtrees {i} and {j} are disjoint", (i, j))
                return Intersection("undetermined", exact=False)
    common = frozenset.intersection(*windows)
    if not common:
        return Intersection("undetermined", exact=False)
    on_boundary = sorted((v for v in common if dist[v] == horizon), key=sort_key)
    if not on_boundary:
        return Intersection("vertices", common)
    if end is not None:
        ray = []
        i = 0
        while True:
            v = end[i]
            if v not in dist:
                break
            ray.append(v)
            i += 1
            if dist[v] == horizon:
                break
        ray = tuple(ray)
        start = _tail_start(ray, common)
        if start is not None and ray and dist[ray[-1]] == horizon:
            return Intersection("half_line", common, ray, start, exact=False)
    ray = geodesic(host, c, on_boundary[0]).vertices
    return Intersection("half_line", common, ray, _tail_start(ray, common), exact=False)


def _tail_start(ray, members):
    start = None
    for k in range(len(ray) - 1, -1, -1):
        if ray[k] in members:
            start = k
        else:
            break
    return start


def subtree_distance(s1: Subtree, s2: Subtree, budget: int | None = None) -> tuple[int, Geodesic]:
    """Distance between two subtrees and the bridge realising it.

    The bridge starts in ``s1``, ends in ``s2``, and its interior avoids both.
    """
    host = s1.host
    if s2.host is not host:
        raise ValueError("subtrees live in different hosts")
    common = s1.vertices & s2.vertices
    if common:
        v = min(common, key=sort_key)
        return 0, Geodesic((v,))
    if isinstance(host, FiniteTree):
        indptr, indices, _ = host.graph.csr()
        src = np.array(sorted(host.graph.index(v) for v in s1.vertices), dtype=np.int64)
        dist, parent = kernels.bfs(indptr, indices, src)
        best = min(s2.vertices, key=lambda v: (dist[host.graph.index(v)], sort_key(v)))
        chain = [host.graph.index(best)]
        while parent[chain[-1]] >= 0:
            chain.append(int(parent[chain[-1]]))
        path = tuple(host.vertices[k] for k in reversed(chain))
        return len(path) - 1, Geodesic(path)
    parent = {v: None for v in s1.vertices}
    frontier = sorted(s1.vertices, key=sort_key)
    depth = 0
    while frontier:
        if budget is not None and depth >= budget:
            raise BudgetExhausted(f"subtrees are farther apart than {budget}", budget)
        depth += 1
        hits = []
        nxt = []
        for u in frontier:
            for w in host.neighbors(u):
                if w not in parent:
                    parent[w] = u
                    nxt.append(w)
                    if w in s2.vertices:
                        hits.append(w)
        if hits:
            best = min(hits, key=sort_key)
            chain = [best]
            while parent[chain[-1]] is not None:
                chain.append(parent[chain[-1]])
            return depth, Geodesic(tuple(reversed(chain)))
        frontier = nxt
    raise ValueError("subtrees are in different components")


# --------------------------------------------------------------------------
# text formats


def format_graph(g: FiniteGraph) -> str:
    """Line-oriented text: ``vertex <id>`` then ``edge <id> <o> <t> <inv>`` lines."""
    lines = [f"vertex {v}" for v in g.vertices]
    for eid in sorted(g.edges, key=sort_key):
        e = g.edges[eid]
        lines.append(f"edge {e.id} {e.origin} {e.terminus} {e.inverse}")
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> FiniteGraph:
    """Inverse of :func:`format_graph`; ids are read as strings."""
    from bsk.errors import SpecError

    vertices, edges = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "vertex" and len(parts) == 2:
            vertices.append(parts[1])
        elif parts[0] == "edge" and len(parts) == 5:
            edges.append(Edge(parts[1], parts[2], parts[3], parts[4]))
        else:
            raise SpecError(f"expected 'vertex <id>' or 'edge <id> <o> <t> <inv>', got {line!r}",
                            lineno, raw.find(parts[0]) + 1)
    return FiniteGraph(vertices, edges)


def _dot_id(v) -> str:
    s = str(v).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{s}"'


def to_dot(obj, name: str = "X", *, directed_edges: Iterable = (), dashed_edges: Iterable = (),
           labels: dict | None = None) -> str:
    """DOT text for a graph or finite tree with deterministic ordering.

    Geometric edges are drawn once. Edge ids in ``directed_edges`` are drawn
    as arrows from origin to terminus; those in ``dashed_edges`` dashed.
    """
    g = obj.graph if isinstance(obj, FiniteTree) else obj
    directed = set(directed_edges)
    dashed = set(dashed_edges)
    labels = labels or {}
    lines = [f"graph {_dot_id(name)} {{"]
    for v in g.vertices:
        lab = labels.get(v)
        attr = f" [label={_dot_id(lab)}]" if lab is not None else ""
        lines.append(f"  {_dot_id(v)}{attr};")
    for e, ebar in g.geometric_edges():
        attrs = []
        if e in directed or ebar in directed:
            fwd = e if e in directed else ebar
            o, t = g.origin(fwd), g.terminus(fwd)
            attrs.append("dir=forward")
        else:
            o, t = g.origin(e), g.terminus(e)
        if e in dashed or ebar in dashed:
            attrs.append("style=dashed")
        attr = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {_dot_id(o)} -- {_dot_id(t)}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
