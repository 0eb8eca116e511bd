"""Finite groups as multiplication tables.

Elements are referred to by their index in ``FiniteGroup.labels``; the label
order is the canonical element order used to pick coset representatives.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from bsk import kernels
from bsk.errors import GroupAxiomError, NotASubgroup


class FiniteGroup:
    """A validated finite group. Build with :func:`validate_group` or a builtin."""

    def __init__(self, name: str, labels: Sequence[str], table, identity: int, inverses: Sequence[int]):
        self.name = name
        self.labels = tuple(labels)
        self.table = np.asarray(table, dtype=np.int64)
        self.table.setflags(write=False)
        self.identity = identity
        self.inverses = tuple(inverses)
        self._rows = self.table.tolist()
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def order(self) -> int:
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    def mul(self, a: int, b: int) -> int:
        return self._rows[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def product(self, elems: Iterable[int]) -> int:
        out = self.identity
        for x in elems:
            out = self._rows[out][x]
        return out

    def index(self, label) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise KeyError(f"{label!r} is not an element of {self.name}") from None

    def label(self, i: int) -> str:
        return self.labels[i]

    def elements(self) -> range:
        return range(len(self.labels))

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def __eq__(self, other):
        return (isinstance(other, FiniteGroup) and self.labels == other.labels
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.labels, self.table.tobytes()))

    def __repr__(self):
        return f"FiniteGroup({self.name}, order {self.order})"


def validate_group(labels: Sequence[str], table, name: str = "G") -> FiniteGroup:
    """Check the group axioms on a square table over ``labels``.

    Raises :class:`GroupAxiomError` naming the first violated axiom
    (closure, associativity, identity, inverse) with witnesses.
    """
    labels = tuple(str(x) for x in labels)
    n = len(labels)
    if len(set(labels)) != n:
        raise GroupAxiomError("duplicate element labels", "labels", labels)
    t = np.asarray(table, dtype=np.int64)
    if t.shape != (n, n):
        raise GroupAxiomError(f"table must be {n}x{n}, got {t.shape}", "shape", t.shape)
    bad = np.argwhere((t < 0) | (t >= n))
    if bad.size:
        a, b = map(int, bad[0])
        raise GroupAxiomError(f"{labels[a]}*{labels[b]} is outside the element set",
                              "closure", (a, b))
    triple = kernels.first_nonassociative(t)
    if triple is not None:
        a, b, c = map(int, triple)
        raise GroupAxiomError(
            f"({labels[a]}*{labels[b]})*{labels[c]} != {labels[a]}*({labels[b]}*{labels[c]})",
            "associativity", (a, b, c))
    ar = np.arange(n)
    ids = [e for e in range(n) if (t[e] == ar).all() and (t[:, e] == ar).all()]
    if not ids:
        raise GroupAxiomError("no two-sided identity", "identity", None)
    e = ids[0]
    inverses = []
    for a in range(n):
        cands = np.flatnonzero((t[a] == e) & (t[:, a] == e))
        if cands.size == 0:
            raise GroupAxiomError(f"{labels[a]} has no inverse", "inverse", a)
        inverses.append(int(cands[0]))
    return FiniteGroup(name, labels, t, e, inverses)


def group_from_products(name: str, labels: Sequence[str], products: dict) -> FiniteGroup:
    """Build from ``{(a_label, b_label): c_label}`` covering every pair."""
    idx = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    t = np.full((n, n), -1, dtype=np.int64)
    for (a, b), c in products.items():
        t[idx[a], idx[b]] = idx[c]
    missing = np.argwhere(t < 0)
    if missing.size:
        a, b = map(int, missing[0])
        raise GroupAxiomError(f"product {labels[a]}*{labels[b]} not given", "closure", (a, b))
    return validate_group(labels, t, name)


# builtins


def cyclic(n: int, name: str | None = None) -> FiniteGroup:
    """Z/n with labels ``"0" .. "n-1"``; label ``k`` is index ``k``."""
    if n < 1:
        raise ValueError("order must be positive")
    t = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    return validate_group([str(i) for i in range(n)], t, name or f"Z{n}")


def sym(n: int, name: str | None = None) -> FiniteGroup:
    """Symmetric group on ``0..n-1``, elements in one-line notation, lexicographic order.

    The product ``p*q`` is the composite "apply ``q`` first, then ``p``".
    """
    if not 1 <= n <= 5:
        raise ValueError("sym supports 1 <= n <= 5")
    perms = list(permutations(range(n)))
    idx = {p: i for i, p in enumerate(perms)}
    t = [[idx[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return validate_group(["".join(map(str, p)) for p in perms], t, name or f"S{n}")


def dihedral(n: int, name: str | None = None) -> FiniteGroup:
    """Dihedral group of order ``2n``: rotations ``r0..r{n-1}`` then reflections ``s0..s{n-1}``.

    ``s_k = r^k s``; ``dihedral(2)`` is the Klein four-group.
    """
    if n < 1:
        raise ValueError("n must be positive")
    labels = [f"r{k}" for k in range(n)] + [f"s{k}" for k in range(n)]

    def mul(x, y):
        (a, fa), (b, fb) = x, y
        return ((a + (-b if fa else b)) % n, fa ^ fb)

    elems = [(k, 0) for k in range(n)] + [(k, 1) for k in range(n)]
    idx = {x: i for i, x in enumerate(elems)}
    t = [[idx[mul(x, y)] for y in elems] for x in elems]
    return validate_group(labels, t, name or f"D{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup, name: str | None = None) -> FiniteGroup:
    labels = [f"{a},{b}" for a in g.labels for b in h.labels]
    m = h.order
    t = [[g.mul(i // m, j // m) * m + h.mul(i % m, j % m) for j in range(g.order * m)]
         for i in range(g.order * m)]
    return validate_group(labels, t, name or f"{g.name}x{h.name}")


BUILTINS = {"cyclic": cyclic, "sym": sym, "dihedral": dihedral}


# subgroups and cosets


def subgroup_closure(g: FiniteGroup, gens: Iterable[int]) -> frozenset:
    """Smallest subgroup containing ``gens`` (closed under product; finiteness gives inverses)."""
    gens = sorted(set(int(x) for x in gens))
    for x in gens:
        if not 0 <= x < g.order:
            raise ValueError(f"{x} is not an element index of {g.name}")
    out = kernels.closure(g.table, np.array(gens, dtype=np.int64), g.identity)
    return frozenset(int(x) for x in out)


def is_subgroup(g: FiniteGroup, h: Iterable[int]) -> bool:
    h = set(h)
    if g.identity not in h:
        return False
    return all(g.mul(a, g.inv(b)) in h for a in h for b in h)


def all_subgroups(g: FiniteGroup) -> list[frozenset]:
    """Every subgroup, found as closures of subsets of cyclic subgroups; sorted by (size, elements)."""
    found = {frozenset([g.identity])}
    frontier = list(found)
    while frontier:
        nxt = []
        for h in frontier:
            for x in g.elements():
                if x not in h:
                    k = subgroup_closure(g, h | {x})
                    if k not in found:
                        found.add(k)
                        nxt.append(k)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


@dataclass(frozen=True)
class Transversal:
    """Left-coset representatives of a subgroup.

    ``reps`` is ordered by representative; the subgroup itself is represented
    by the identity and every other coset by its least element in the group's
    element order (or greatest, when built with ``prefer="greatest"``).
    """

    group: FiniteGroup
    subgroup: frozenset
    reps: tuple
    rep_of: tuple      # element -> representative of its coset
    remainder: tuple   # element x -> h in H with x = rep_of[x] * h

    def __len__(self):
        return len(self.reps)

    def decompose(self, x: int) -> tuple[int, int]:
        """``(t, h)`` with ``x = t * h``, ``t`` a representative and ``h`` in the subgroup."""
        return self.rep_of[x], self.remainder[x]

    def coset(self, t: int) -> frozenset:
        return frozenset(self.group.mul(t, h) for h in self.subgroup)


def left_cosets(g: FiniteGroup, h: Iterable[int], *, prefer: str = "least") -> Transversal:
    h = frozenset(int(x) for x in h)
    if not is_subgroup(g, h):
        raise NotASubgroup(f"{sorted(g.label(x) for x in h)} is not a subgroup of {g.name}")
    if prefer not in ("least", "greatest"):
        raise ValueError("prefer must be 'least' or 'greatest'")
    pick = min if prefer == "least" else max
    rep_of = [None] * g.order
    reps = []
    hs = sorted(h)
    for x in g.elements():
        if rep_of[x] is not None:
            continue
        coset = [g.mul(x, y) for y in hs]
        t = g.identity if g.identity in coset else pick(coset)
        reps.append(t)
        for y in coset:
            rep_of[y] = t
    remainder = [g.mul(g.inv(rep_of[x]), x) for x in g.elements()]
    return Transversal(g, h, tuple(sorted(reps)), tuple(rep_of), tuple(remainder))


# homomorphisms


@dataclass(frozen=True)
class GroupHom:
    domain: FiniteGroup
    codomain: FiniteGroup
    images: tuple
    name: str = "phi"

    def __call__(self, x: int) -> int:
        return self.images[x]

    @classmethod
    def from_labels(cls, domain, codomain, mapping: dict, name="phi") -> "GroupHom":
        images = [None] * domain.order
        for a, b in mapping.items():
            images[domain.index(a)] = codomain.index(b)
        missing = [domain.label(i) for i, y in enumerate(images) if y is None]
        if missing:
            raise ValueError(f"hom {name}: no image for {', '.join(missing)}")
        return cls(domain, codomain, tuple(images), name)

    @classmethod
    def from_generators(cls, domain, codomain, gens: dict, name="phi") -> "GroupHom":
        """Extend ``{generator index: image index}``; fails if the extension is not well defined."""
        images = {domain.identity: codomain.identity}
        frontier = [domain.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for s, t in gens.items():
                    y = domain.mul(x, s)
                    img = codomain.mul(images[x], t)
                    if y in images:
                        if images[y] != img:
                            raise ValueError(f"hom {name}: generator images do not extend")
                    else:
                        images[y] = img
                        nxt.append(y)
            frontier = nxt
        if len(images) != domain.order:
            raise ValueError(f"hom {name}: generators do not generate {domain.name}")
        return cls(domain, codomain, tuple(images[i] for i in domain.elements()), name)

    def image(self) -> frozenset:
        return frozenset(self.images)

    def is_surjective(self) -> bool:
        return len(self.image()) == self.codomain.order

    def preimage_map(self) -> dict:
        """``{image: preimage}``; only meaningful for injective maps."""
        return {y: x for x, y in enumerate(self.images)}

    def compose(self, other: "GroupHom", name=None) -> "GroupHom":
        """``self`` after ``other``."""
        return GroupHom(other.domain, self.codomain, tuple(self.images[y] for y in other.images),
                        name or f"{self.name}.{other.name}")


@dataclass(frozen=True)
class MonoCheck:
    ok: bool
    reason: str | None = None
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def check_monomorphism(phi: GroupHom) -> MonoCheck:
    """True iff ``phi`` is multiplicative and injective.

    The witness is the first pair ``(x, y)`` (element indices, row-major)
    with ``phi(xy) != phi(x)phi(y)``, or else a pair of distinct elements with
    equal images.
    """
    g, h = phi.domain, phi.codomain
    for x in g.elements():
        for y in g.elements():
            if phi(g.mul(x, y)) != h.mul(phi(x), phi(y)):
                return MonoCheck(False, "not multiplicative", (x, y))
    seen = {}
    for x in g.elements():
        y = phi(x)
        if y in seen:
            return MonoCheck(False, "not injective", (seen[y], x))
        seen[y] = x
    return MonoCheck(True)


def identity_hom(g: FiniteGroup) -> GroupHom:
    return GroupHom(g, g, tuple(g.elements()), f"id_{g.name}")


def inclusion(sub: FiniteGroup, g: FiniteGroup, images: Sequence[int], name="incl") -> GroupHom:
    return GroupHom(sub, g, tuple(images), name)
