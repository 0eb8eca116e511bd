"""Single automorphisms of simplicial trees.

For an automorphism ``g`` without inversion the displacement
``f(y) = d(y, g(y))`` satisfies ``f(y) = ||g|| + 2 d(y, X_g)``, where
``X_g`` is the fixed-vertex set (elliptic case, ``||g|| = 0``) or the
translation axis (hyperbolic case). Two consequences drive this module:

* the amplitude has two independent computations -- the minimum of ``f``
  over a ball (:func:`amplitude_direct`), and the three-point formula
  ``max(0, d(x, g^2 x) - d(x, g x))`` (:func:`amplitude_formula`);
* the nearest point of ``X_g`` to ``y`` sits on the geodesic from ``y`` to
  ``g(y)`` at distance ``(f(y) - ||g||) / 2`` from ``y``
  (:func:`projection`), which decides disjointness and distances between
  characteristic subtrees exactly, even on infinite trees.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from bsk.errors import (
    BudgetExhausted,
    EndNotFixed,
    InversionError,
    MinimumOnBoundary,
    NotAnIsometry,
    PreconditionFailed,
)
from bsk.trees import (
    FiniteTree,
    Geodesic,
    HalfLine,
    Subtree,
    ball,
    ball_distances,
    distance,
    geodesic,
    sort_key,
    subtree_distance,
)

EXACT = "exact"
HORIZON = "horizon-limited"


class TreeAutomorphism:
    """A vertex map of a host tree assumed to preserve adjacency.

    Finite hosts usually get a table (:meth:`from_table`); lazy hosts get an
    algebraic action such as left translation by a group element.
    """

    def __init__(self, host, image: Callable, inverse: Callable | None = None, name: str = "g"):
        self.host = host
        self.image = image
        self._inverse = inverse
        self.name = name

    @classmethod
    def from_table(cls, host: FiniteTree, table: dict, name: str = "g") -> "TreeAutomorphism":
        verts = set(host.vertices)
        if set(table) != verts or set(table.values()) != verts:
            raise NotAnIsometry(f"{name}: table is not a bijection of the vertex set", None)
        fwd = dict(table)
        back = {w: v for v, w in fwd.items()}
        aut = cls(host, fwd.__getitem__, back.__getitem__, name)
        aut.table = fwd
        return aut

    @classmethod
    def identity(cls, host, name: str = "1") -> "TreeAutomorphism":
        return cls(host, lambda v: v, lambda v: v, name)

    def __call__(self, v):
        return self.image(v)

    @property
    def has_inverse(self) -> bool:
        return self._inverse is not None

    def inverse(self) -> "TreeAutomorphism":
        if self._inverse is None:
            raise ValueError(f"{self.name}: no inverse map supplied")
        return TreeAutomorphism(self.host, self._inverse, self.image, f"{self.name}^-1")

    def compose(self, other: "TreeAutomorphism", name: str | None = None) -> "TreeAutomorphism":
        """``self * other``: apply ``other`` first."""
        f, g = self.image, other.image
        inv = None
        if self._inverse is not None and other._inverse is not None:
            fi, gi = self._inverse, other._inverse
            inv = lambda v: gi(fi(v))  # noqa: E731
        return TreeAutomorphism(self.host, lambda v: f(g(v)), inv, name or f"{self.name}{other.name}")

    __mul__ = compose

    def power(self, n: int) -> "TreeAutomorphism":
        if n < 0:
            return self.inverse().power(-n)
        out = TreeAutomorphism.identity(self.host)
        for _ in range(n):
            out = self.compose(out)
        out.name = f"{self.name}^{n}"
        return out

    def __repr__(self):
        return f"TreeAutomorphism({self.name})"


def displacement(g: TreeAutomorphism, y, budget: int | None = None) -> int:
    """``d(y, g(y))``."""
    return distance(g.host, y, g(y), budget)


def _default_center(g, center):
    return g.host.root if center is None else center


def _edge(u, v):
    return tuple(sorted((u, v), key=sort_key))


def check_isometry(g: TreeAutomorphism, window: int, center=None) -> None:
    """Check adjacency preservation on every edge of a ball; raise on the first failure."""
    c = _default_center(g, center)
    dist = ball_distances(g.host, c, window)
    for v in sorted(dist, key=sort_key):
        gv = g(v)
        nbrs = set(g.host.neighbors(gv))
        for w in g.host.neighbors(v):
            if w in dist and g(w) not in nbrs:
                raise NotAnIsometry(f"{g.name} maps the edge {v!r}-{w!r} to a non-edge", (v, w))
    if isinstance(g.host, FiniteTree) and window >= len(g.host.vertices):
        images = {g(v) for v in g.host.vertices}
        if len(images) != len(g.host.vertices):
            raise NotAnIsometry(f"{g.name} is not injective", None)


def detect_inversion(g: TreeAutomorphism, window: int | None = None, center=None,
                     budget: int | None = None):
    """An edge ``{u, v}`` with ``g(u) = v`` and ``g(v) = u``, or ``None``.

    The ball of radius ``window`` is scanned (and checked for adjacency
    preservation). When the scan finds nothing, the middle edge of the
    geodesic from the centre to its image is tested: an inverted edge is
    always the midpoint of every such geodesic, so the answer is exact.
    """
    host = g.host
    c = _default_center(g, center)
    if window is None:
        window = len(host.vertices) if isinstance(host, FiniteTree) else 3
    check_isometry(g, window, c)
    dist = ball_distances(host, c, window)
    hits = []
    for v in dist:
        gv = g(v)
        if gv in dist and gv != v and g(gv) == v and gv in host.neighbors(v):
            hits.append(_edge(v, gv))
    if hits:
        return min(hits, key=lambda e: (sort_key(e[0]), sort_key(e[1])))
    path = geodesic(host, c, g(c), budget)
    if path.length % 2 == 1:
        k = path.length // 2
        u, v = path[k], path[k + 1]
        if g(u) == v and g(v) == u:
            return _edge(u, v)
    return None


def _require_no_inversion(g, center, budget=None):
    path = geodesic(g.host, center, g(center), budget)
    if path.length % 2 == 1:
        k = path.length // 2
        u, v = path[k], path[k + 1]
        if g(u) == v and g(v) == u:
            raise InversionError(f"{g.name} inverts the edge {u!r}-{v!r}", _edge(u, v))
    return path


def amplitude_formula(g: TreeAutomorphism, x, budget: int | None = None) -> int:
    """``max(0, d(x, g^2 x) - d(x, g x))`` at the base vertex ``x``."""
    gx = g(x)
    return max(0, distance(g.host, x, g(gx), budget) - distance(g.host, x, gx, budget))


def amplitude_direct(g: TreeAutomorphism, region: Subtree, budget: int | None = None) -> int:
    """Minimum displacement over a finite subtree.

    The result is exact when the minimum is attained at an interior vertex
    (all of whose neighbours are in the region): displacement decreases by 2
    towards ``X_g``, so an interior local minimum is a global one. Otherwise
    :class:`MinimumOnBoundary` is raised and the caller should enlarge the
    region.
    """
    values = {y: displacement(g, y, budget) for y in region.vertices}
    m = min(values.values())
    argmin = sorted((y for y, d in values.items() if d == m), key=sort_key)
    if m % 2 == 1:
        y = argmin[0]
        _require_no_inversion(g, y, budget)
    interior = region.interior()
    if not any(y in interior for y in argmin):
        raise MinimumOnBoundary(f"minimum displacement {m} of {g.name} only on the frontier",
                                m, argmin)
    return m


def sufficient_ball(g: TreeAutomorphism, x, budget: int | None = None) -> Subtree:
    """A ball about ``x`` holding the nearest point of ``X_g`` strictly inside.

    That point is at distance at most ``d(x, g x) / 2`` from ``x``.
    """
    return ball(g.host, x, displacement(g, x, budget) // 2 + 1)


def projection(g: TreeAutomorphism, y, amplitude: int | None = None, budget: int | None = None):
    """The vertex of ``X_g`` nearest to ``y``."""
    path = _require_no_inversion(g, y, budget)
    n = amplitude_formula(g, y, budget) if amplitude is None else amplitude
    return path[(path.length - n) // 2]


def distance_to_characteristic(g: TreeAutomorphism, y, budget: int | None = None) -> int:
    n = amplitude_formula(g, y, budget)
    return (displacement(g, y, budget) - n) // 2


class CharacteristicSubtree(Subtree):
    """A window of ``X_g``: the fixed set (elliptic) or a segment of the axis (hyperbolic)."""

    def __init__(self, host, vertices, *, kind: str, amplitude: int, anchor, exact: bool,
                 axis: Geodesic | None = None):
        super().__init__(host, vertices, exact=exact, check=False)
        self.kind = kind
        self.amplitude = amplitude
        self.anchor = anchor
        self.axis = axis


def characteristic_subtree(g: TreeAutomorphism, window: int, center=None,
                           budget: int | None = None) -> CharacteristicSubtree:
    """``X_g`` within ``window`` of the point of ``X_g`` nearest ``center``.

    Elliptic: the fixed vertices in that ball; exact unless a fixed vertex is
    on the ball's frontier. Hyperbolic: the axis vertices ``x_{-window}`` to
    ``x_{window}`` with ``g(x_m) = x_{m+n}`` verified on the segment; never
    exact (the axis is infinite).
    """
    c = _default_center(g, center)
    _require_no_inversion(g, c, budget)
    n = amplitude_formula(g, c, budget)
    p = projection(g, c, n, budget)
    if n == 0:
        region = ball(g.host, p, window)
        fixed = set()
        stack = [p]
        while stack:
            u = stack.pop()
            if u in fixed:
                continue
            fixed.add(u)
            stack.extend(w for w in g.host.neighbors(u)
                         if w in region.vertices and w not in fixed and g(w) == w)
        exact = not (fixed & region.frontier())
        return CharacteristicSubtree(g.host, fixed, kind="elliptic", amplitude=0, anchor=p,
                                     exact=exact)
    seg = geodesic(g.host, p, g(p), budget).vertices   # x_0 .. x_n
    fwd = list(seg)
    while len(fwd) <= window:
        fwd.append(g(fwd[len(fwd) - n]))
    gi = g.inverse()
    back = []  # x_{-1}, x_{-2}, ...
    while len(back) < window:
        k = len(back) + 1   # want x_{-k} = g^{-1}(x_{n-k})
        src = fwd[n - k] if n - k >= 0 else back[k - n - 1]
        back.append(gi(src))
    line = list(reversed(back)) + fwd[:window + 1]
    for m in range(len(line) - n):
        if g(line[m]) != line[m + n]:
            raise AssertionError(f"{g.name}: axis window is not translated by {n}")
    return CharacteristicSubtree(g.host, line, kind="hyperbolic", amplitude=n, anchor=p,
                                 exact=False, axis=Geodesic(tuple(line)))


@dataclass(frozen=True)
class IsometryReport:
    kind: str                       # "elliptic" | "hyperbolic" | "inversion"
    amplitude: int | None = None
    fixed_subtree: Subtree | None = None
    axis_window: Geodesic | None = None
    witness: tuple | None = None
    confidence: str = EXACT

    @property
    def is_elliptic(self) -> bool:
        return self.kind == "elliptic"

    def to_dict(self) -> dict:
        if self.fixed_subtree is not None:
            window = [str(v) for v in self.fixed_subtree.sorted()]
        elif self.axis_window is not None:
            window = [str(v) for v in self.axis_window.vertices]
        else:
            window = [str(v) for v in (self.witness or ())]
        return {
            "class": self.kind,
            "amplitude": self.amplitude,
            "window": window,
            "confidence": self.confidence,
        }


def classify(g: TreeAutomorphism, window: int = 3, center=None,
             budget: int | None = None) -> IsometryReport:
    """Elliptic / hyperbolic / inversion classification of ``g``.

    The amplitude (and hence the class) is exact whenever distances are; the
    ``confidence`` field reports whether the characteristic subtree window is
    complete.
    """
    c = _default_center(g, center)
    try:
        _require_no_inversion(g, c, budget)
    except InversionError as err:
        return IsometryReport("inversion", witness=err.edge)
    xs = characteristic_subtree(g, window, c, budget)
    if xs.kind == "elliptic":
        return IsometryReport("elliptic", 0, fixed_subtree=xs,
                              confidence=EXACT if xs.exact else HORIZON)
    return IsometryReport("hyperbolic", xs.amplitude, axis_window=xs.axis, confidence=HORIZON)


def characteristic_distance(g: TreeAutomorphism, h: TreeAutomorphism, center=None,
                            budget: int | None = None) -> tuple[int, Geodesic]:
    """``dist(X_g, X_h)`` and a bridge from ``X_g`` to ``X_h``, by projections.

    For disjoint subtrees the projection of all of ``X_h`` onto ``X_g`` is one
    point ``r``, and ``r``'s projection ``q`` onto ``X_h`` closes the bridge.
    When they meet, ``r`` already lies in ``X_h``.
    """
    c = _default_center(g, center)
    y = projection(h, c, budget=budget)
    r = projection(g, y, budget=budget)
    q = projection(h, r, budget=budget)
    return distance(g.host, r, q, budget), geodesic(g.host, r, q, budget)


@dataclass(frozen=True)
class CullerMorganVerdict:
    norm_g: int
    norm_h: int
    dist: int
    norm_gh: int
    bridge: Geodesic
    brute_dist: int | None = None

    @property
    def rhs(self) -> int:
        return self.norm_g + self.norm_h + 2 * self.dist

    @property
    def holds(self) -> bool:
        return self.norm_gh == self.rhs and self.brute_dist in (None, self.dist)

    def to_dict(self) -> dict:
        return {"norm_g": self.norm_g, "norm_h": self.norm_h, "dist": self.dist,
                "norm_gh": self.norm_gh, "rhs": self.rhs, "holds": self.holds}


def culler_morgan_check(g: TreeAutomorphism, h: TreeAutomorphism, window: int | None = None,
                        center=None, budget: int | None = None,
                        gh: TreeAutomorphism | None = None) -> CullerMorganVerdict:
    """Both sides of ``||gh|| = ||g|| + ||h|| + 2 dist(X_g, X_h)`` for disjoint ``X_g``, ``X_h``.

    ``||g||``, ``||h||`` come from the formula, ``||gh||`` from the direct
    minimum over a sufficient ball, and the distance from projections. When
    ``window`` is given and both are elliptic with exact windows, the distance
    is also recomputed by breadth-first search between the fixed sets.
    ``gh`` may be supplied when a faster action of the product is available.
    """
    c = _default_center(g, center)
    _require_no_inversion(g, c, budget)
    _require_no_inversion(h, c, budget)
    d, bridge = characteristic_distance(g, h, c, budget)
    if d == 0:
        raise PreconditionFailed(f"X_{g.name} and X_{h.name} intersect")
    ng = amplitude_formula(g, c, budget)
    nh = amplitude_formula(h, c, budget)
    prod = gh if gh is not None else g.compose(h)
    ngh = amplitude_direct(prod, sufficient_ball(prod, c, budget), budget)
    brute = None
    if window is not None and ng == 0 and nh == 0:
        xg = characteristic_subtree(g, window, c, budget)
        xh = characteristic_subtree(h, window, c, budget)
        if xg.exact and xh.exact:
            brute, _ = subtree_distance(xg, xh, budget=None if budget is None else 2 * budget)
    return CullerMorganVerdict(ng, nh, d, ngh, bridge, brute)


@dataclass(frozen=True)
class SerreVerdict:
    applicable: bool
    classes: tuple          # kinds of (g, h, gh)
    common_vertex: object = None
    disjoint: bool | None = None

    @property
    def holds(self) -> bool:
        """False only for a counterexample: all three elliptic with disjoint fixed sets."""
        return not (self.applicable and self.disjoint)

    def to_dict(self) -> dict:
        return {"applicable": self.applicable, "classes": list(self.classes),
                "common_vertex": None if self.common_vertex is None else str(self.common_vertex),
                "disjoint": self.disjoint, "holds": self.holds}


def serre_lemma_check(g: TreeAutomorphism, h: TreeAutomorphism, window: int | None = None,
                      center=None, budget: int | None = None,
                      gh: TreeAutomorphism | None = None) -> SerreVerdict:
    """If ``g``, ``h`` and ``gh`` are all elliptic, exhibit a vertex fixed by both.

    Classification uses the amplitude formula. The candidate common vertex is
    the projection onto ``X_g`` of a point of ``X_h``; it is verified by
    direct evaluation. ``window`` is accepted for interface symmetry and, if
    given, bounds an additional scan of the ball about the centre.
    """
    c = _default_center(g, center)
    prod = gh if gh is not None else g.compose(h)
    try:
        kinds = []
        for a in (g, h, prod):
            _require_no_inversion(a, c, budget)
            kinds.append("elliptic" if amplitude_formula(a, c, budget) == 0 else "hyperbolic")
    except BudgetExhausted:
        return SerreVerdict(False, ("undetermined",) * 3)
    kinds = tuple(kinds)
    d, bridge = characteristic_distance(g, h, c, budget)
    if kinds != ("elliptic",) * 3:
        return SerreVerdict(False, kinds, disjoint=d > 0)
    r = bridge.source
    if d == 0 and g(r) == r and h(r) == r:
        return SerreVerdict(True, kinds, common_vertex=r, disjoint=False)
    if window is not None:
        for v in sorted(ball_distances(g.host, c, window), key=sort_key):
            if g(v) == v and h(v) == v:
                return SerreVerdict(True, kinds, common_vertex=v, disjoint=False)
    return SerreVerdict(True, kinds, disjoint=True)


# ends


NEUTRAL = "neutral"
ATTRACTING = "attracting"
REPULSING = "repulsing"


@dataclass(frozen=True)
class FixedEndKind:
    kind: str          # NEUTRAL | ATTRACTING | REPULSING
    index: int         # the n realising the case
    shift: int         # g(x_m) = x_{m + shift} on the stable tail
    confidence: str = EXACT

    def to_dict(self) -> dict:
        return {"kind": self.kind, "index": self.index, "shift": self.shift,
                "confidence": self.confidence}


def _prefix(end: HalfLine, n: int) -> list:
    pts = []
    for i in range(n):
        try:
            pts.append(end[i])
        except IndexError:
            break
    return pts


def classify_fixed_end(g: TreeAutomorphism, end: HalfLine, horizon: int) -> FixedEndKind:
    """Neutral / attracting / repulsing for an end fixed by ``g``.

    Finds the longest tail ``x_n .. x_horizon`` on which ``g(x_m) =
    x_{m+s}`` for one shift ``s``: ``s = 0`` is neutral, ``s > 0``
    attracting, ``s < 0`` repulsing. The realising index is the least ``n``
    for which the corresponding case holds on the window. The verdict is
    ``exact`` only if the tail was observed on at least three indices.
    """
    pts = _prefix(end, 2 * horizon + 2)
    if len(pts) <= horizon:
        horizon = len(pts) - 1
    pos = {v: i for i, v in enumerate(pts)}
    shifts = []
    for i in range(horizon + 1):
        j = pos.get(g(pts[i]))
        shifts.append(None if j is None else j - i)
    s = shifts[horizon]
    if s is None:
        raise EndNotFixed(f"{g.name} moves the end off itself within horizon {horizon}")
    n = horizon
    while n > 0 and shifts[n - 1] == s:
        n -= 1
    if s == 0:
        kind, index = NEUTRAL, n
    elif s > 0:
        kind, index = ATTRACTING, n
    else:
        kind, index = REPULSING, max(0, n + s)
    conf = EXACT if horizon - n + 1 >= 3 else HORIZON
    return FixedEndKind(kind, index, s, conf)


@dataclass(frozen=True)
class EndAggregate:
    per_generator: dict = field(default_factory=dict)

    @property
    def all_fix(self) -> bool:
        return all(v is not None for v in self.per_generator.values())


def fixed_end_aggregate(gens: dict, end: HalfLine, horizon: int) -> EndAggregate:
    """Per-generator end classification; ``None`` marks a generator that moves the end."""
    out = {}
    for name, g in gens.items():
        try:
            out[name] = classify_fixed_end(g, end, horizon)
        except EndNotFixed:
            out[name] = None
    return EndAggregate(out)
