"""Amalgamated free products ``G = A *_C B`` of finite groups.

Elements are kept in the normal form ``t_1 t_2 ... t_n c``: each ``t_i`` is
a non-identity left-coset representative of ``phi_A(C)`` in ``A`` or of
``phi_B(C)`` in ``B``, consecutive syllables come from different factors,
and ``c`` is an element of ``C``. With the transversals fixed the spelling
is unique, so equality of group elements is equality of tuples.

The Bass-Serre tree has the left cosets ``gA`` and ``gB`` as vertices. A
coset ``gS`` is keyed by the normal form of ``g`` with ``c`` dropped and a
trailing ``S``-syllable removed; every prefix of a key is again a key, which
gives each vertex a parent towards ``1A`` for free.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator, NamedTuple

from bsk.errors import WordError
from bsk.groups import FiniteGroup, GroupHom, check_monomorphism, left_cosets
from bsk.isometry import TreeAutomorphism
from bsk.trees import LazyTree

SIDES = ("A", "B")
OTHER = {"A": "B", "B": "A"}


@dataclass(frozen=True)
class NormalFormWord:
    """``syllables`` is a tuple of ``(side, representative index)``; ``tail`` is an index in ``C``."""

    syllables: tuple = ()
    tail: int = 0

    @property
    def syllable_length(self) -> int:
        return len(self.syllables)

    def __len__(self):
        return len(self.syllables)


class BSVertex(NamedTuple):
    side: str
    key: tuple

    def __str__(self):
        body = " ".join(f"{s}:{t}" for s, t in self.key) or "1"
        return f"({body}){self.side}"


class AmalgamSpec:
    """Finite groups ``A``, ``B``, ``C`` with monomorphisms ``C -> A`` and ``C -> B``.

    ``prefer`` selects the coset representative rule (``"least"`` or
    ``"greatest"`` in element order); only spellings depend on it.
    """

    def __init__(self, A: FiniteGroup, B: FiniteGroup, C: FiniteGroup,
                 phi_A: GroupHom, phi_B: GroupHom, name: str = "G", prefer: str = "least"):
        for phi, side, grp in ((phi_A, "A", A), (phi_B, "B", B)):
            if phi.domain != C or phi.codomain != grp:
                raise ValueError(f"phi_{side} must map {C.name} into {grp.name}")
            chk = check_monomorphism(phi)
            if not chk:
                raise ValueError(f"phi_{side} ({phi.name}) is {chk.reason}: witness {chk.witness}")
        self.name = name
        self.A, self.B, self.C = A, B, C
        self.factor = {"A": A, "B": B}
        self.phi = {"A": phi_A, "B": phi_B}
        self.image = {s: self.phi[s].image() for s in SIDES}
        self.transversal = {s: left_cosets(self.factor[s], self.image[s], prefer=prefer)
                            for s in SIDES}
        self._pre = {s: self.phi[s].preimage_map() for s in SIDES}
        self._phi_images = {s: self.phi[s].images for s in SIDES}
        self._rows = {s: self.factor[s]._rows for s in SIDES}
        self._rep_of = {s: self.transversal[s].rep_of for s in SIDES}
        self._rem = {s: self.transversal[s].remainder for s in SIDES}
        self._ident = {s: self.factor[s].identity for s in SIDES}
        self.identity = NormalFormWord((), C.identity)
        self.prefer = prefer

    @property
    def trivial(self) -> bool:
        """True when ``phi_A`` or ``phi_B`` is onto (the amalgam is then ``B`` or ``A``)."""
        return any(len(self.image[s]) == self.factor[s].order for s in SIDES)

    def index(self, side: str) -> int:
        return len(self.transversal[side])

    def __repr__(self):
        return f"AmalgamSpec({self.name} = {self.A.name} *_{self.C.name} {self.B.name})"

    # ---- word arithmetic

    def _push(self, sylls: list, c: int, side: str, x: int) -> int:
        """Right-multiply the state ``sylls * c`` by ``x`` in ``side``; return the new tail."""
        rows = self._rows[side]
        y = rows[self._phi_images[side][c]][x]
        if sylls and sylls[-1][0] == side:
            y = rows[sylls.pop()[1]][y]
        t = self._rep_of[side][y]
        if t != self._ident[side]:
            sylls.append((side, t))
        return self._pre[side][self._rem[side][y]]

    def _letter(self, side: str, x: int) -> tuple:
        if side == "C":
            return "A", self._phi_images["A"][x]
        if side not in SIDES:
            raise WordError(f"unknown factor {side!r}")
        return side, x

    def reduce(self, letters) -> NormalFormWord:
        """Normal form of a product of letters ``(side, element index)``; side may be ``"C"``."""
        sylls, c = [], self.C.identity
        for side, x in letters:
            s, y = self._letter(side, x)
            c = self._push(sylls, c, s, y)
        return NormalFormWord(tuple(sylls), c)

    def letters(self, w: NormalFormWord) -> list:
        out = list(w.syllables)
        if w.tail != self.C.identity:
            out.append(("C", w.tail))
        return out

    def multiply(self, u: NormalFormWord, v: NormalFormWord) -> NormalFormWord:
        sylls, c = list(u.syllables), u.tail
        for side, t in v.syllables:
            c = self._push(sylls, c, side, t)
        return NormalFormWord(tuple(sylls), self.C.mul(c, v.tail))

    def product(self, *words: NormalFormWord) -> NormalFormWord:
        out = self.identity
        for w in words:
            out = self.multiply(out, w)
        return out

    def inverse(self, w: NormalFormWord) -> NormalFormWord:
        sylls, c = [], self.C.inv(w.tail)
        for side, t in reversed(w.syllables):
            c = self._push(sylls, c, side, self.factor[side].inv(t))
        return NormalFormWord(tuple(sylls), c)

    def power(self, w: NormalFormWord, n: int) -> NormalFormWord:
        base = self.inverse(w) if n < 0 else w
        out = self.identity
        for _ in range(abs(n)):
            out = self.multiply(out, base)
        return out

    def conjugate(self, w: NormalFormWord, u: NormalFormWord) -> NormalFormWord:
        """``u w u^-1``."""
        return self.product(u, w, self.inverse(u))

    def element(self, side: str, x) -> NormalFormWord:
        """The normal form of a single factor element (index or label)."""
        grp = self.C if side == "C" else self.factor[side]
        idx = grp.index(x) if isinstance(x, str) else x
        return self.reduce([(side, idx)])

    def is_reduced(self, w: NormalFormWord) -> bool:
        prev = None
        for side, t in w.syllables:
            if side not in SIDES or side == prev:
                return False
            if self._rep_of[side][t] != t or t == self._ident[side]:
                return False
            prev = side
        return 0 <= w.tail < self.C.order

    def words(self, max_length: int, tails: bool = True) -> Iterator[NormalFormWord]:
        """Every normal form with at most ``max_length`` syllables, in a fixed order."""
        nontrivial = {s: [t for t in self.transversal[s].reps if t != self._ident[s]]
                      for s in SIDES}
        cs = list(self.C.elements()) if tails else [self.C.identity]
        for n in range(max_length + 1):
            starts = ("A",) if n == 0 else SIDES
            for first in starts:
                sides = [first if i % 2 == 0 else OTHER[first] for i in range(n)]
                for reps in product(*(nontrivial[s] for s in sides)):
                    sylls = tuple(zip(sides, reps))
                    for c in cs:
                        yield NormalFormWord(sylls, c)

    # ---- text

    def format_word(self, w: NormalFormWord) -> str:
        parts = [f"{s}:{self.factor[s].label(t)}" for s, t in w.syllables]
        if w.tail != self.C.identity:
            parts.append(f"C:{self.C.label(w.tail)}")
        return " ".join(parts) or "1"

    def parse_word(self, text: str) -> NormalFormWord:
        """Whitespace-separated ``A:<label>`` / ``B:<label>`` / ``C:<label>`` letters; ``1`` is the identity."""
        letters = []
        for tok in text.split():
            if tok == "1":
                continue
            side, sep, lab = tok.partition(":")
            if not sep or side not in ("A", "B", "C"):
                raise WordError(f"bad letter {tok!r}: expected A:<elt>, B:<elt> or C:<elt>")
            grp = self.C if side == "C" else self.factor[side]
            try:
                letters.append((side, grp.index(lab)))
            except KeyError:
                raise WordError(f"{lab!r} is not an element of {grp.name}") from None
        return self.reduce(letters)

    def format_vertex(self, v: BSVertex) -> str:
        body = " ".join(f"{s}:{self.factor[s].label(t)}" for s, t in v.key) or "1"
        return f"({body}){v.side}"

    # ---- Bass-Serre tree

    def vertex(self, g: NormalFormWord, side: str) -> BSVertex:
        """The vertex ``g·side`` (the coset ``gA`` or ``gB``)."""
        key = g.syllables
        if key and key[-1][0] == side:
            key = key[:-1]
        return BSVertex(side, key)

    @property
    def base_A(self) -> BSVertex:
        return BSVertex("A", ())

    @property
    def base_B(self) -> BSVertex:
        return BSVertex("B", ())

    def key_word(self, v: BSVertex) -> NormalFormWord:
        return NormalFormWord(v.key, self.C.identity)

    def _expand(self, v: BSVertex) -> list:
        side, key = v
        other = OTHER[side]
        up = key[:-1] if key and key[-1][0] == other else key
        out = [(self._ident[side], BSVertex(other, up))]
        for t in self.transversal[side].reps:
            if t != self._ident[side]:
                out.append((t, BSVertex(other, key + ((side, t),))))
        return out

    def _parent(self, v: BSVertex):
        side, key = v
        if not key:
            return None if side == "A" else BSVertex("A", ())
        last = key[-1][0]
        return BSVertex(last, key[:-1])

    def _contains(self, v) -> bool:
        if not isinstance(v, tuple) or len(v) != 2 or v[0] not in SIDES:
            return False
        side, key = v
        if key and key[-1][0] == side:
            return False
        try:
            return self.is_reduced(NormalFormWord(tuple(key), self.C.identity))
        except (TypeError, ValueError, IndexError):
            return False

    @cached_property
    def tree(self) -> LazyTree:
        """The Bass-Serre tree, rooted at ``1A``."""
        return LazyTree(self.base_A, self._expand, parent=self._parent,
                        contains=self._contains, name=f"BS({self.name})")

    def act(self, w: NormalFormWord, v: BSVertex) -> BSVertex:
        """Left translation ``w · v``."""
        sylls, c = list(w.syllables), w.tail
        for side, t in v.key:
            c = self._push(sylls, c, side, t)
        if sylls and sylls[-1][0] == v.side:
            sylls.pop()
        return BSVertex(v.side, tuple(sylls))

    def translation(self, w: NormalFormWord, name: str | None = None) -> TreeAutomorphism:
        winv = self.inverse(w)
        return TreeAutomorphism(self.tree, lambda v: self.act(w, v), lambda v: self.act(winv, v),
                                name or self.format_word(w))

    # ---- algebraic classification and stabilizers

    def classify_element(self, w: NormalFormWord) -> "ElementClass":
        """Cyclically reduce ``w``; syllable length <= 1 is elliptic, otherwise hyperbolic.

        For elliptic elements ``witness`` is ``u`` with ``u^-1 w u`` in
        ``factor``; for hyperbolic ones the translation length is the
        cyclically reduced syllable length.
        """
        if not self.is_reduced(w):
            raise WordError("word is not in normal form")
        u, core = self.identity, w
        while True:
            n = len(core.syllables)
            if n == 0:
                return ElementClass("elliptic", "A", u, 0, core)
            if n == 1:
                return ElementClass("elliptic", core.syllables[0][0], u, 0, core)
            first, last = core.syllables[0], core.syllables[-1]
            if first[0] != last[0]:
                return ElementClass("hyperbolic", None, u, n, core)
            t = NormalFormWord((first,), self.C.identity)
            core = self.product(self.inverse(t), core, t)
            u = self.multiply(u, t)

    def stabilizer(self, v: BSVertex) -> "Stabilizer":
        return Stabilizer(self, self.key_word(v), v.side, v)

    def edge_stabilizer(self, u: BSVertex, v: BSVertex) -> "Stabilizer":
        """``h C h^-1`` for the edge between ``hA`` and ``hB``."""
        if v not in self.tree.neighbors(u):
            raise ValueError(f"{u} and {v} are not adjacent")
        h = u.key if len(u.key) >= len(v.key) else v.key
        return Stabilizer(self, NormalFormWord(h, self.C.identity), "C", (u, v))


@dataclass(frozen=True)
class ElementClass:
    kind: str                  # "elliptic" | "hyperbolic"
    factor: str | None         # "A" / "B" for elliptic elements
    witness: NormalFormWord    # u with u^-1 w u = core
    translation_length: int
    core: NormalFormWord


class Stabilizer:
    """The subgroup ``h S h^-1`` (``S`` one of ``A``, ``B``, ``C``), fixing ``target``."""

    def __init__(self, spec: AmalgamSpec, conjugator: NormalFormWord, factor: str, target):
        self.spec = spec
        self.conjugator = conjugator
        self.factor = factor
        self.target = target

    def factor_elements(self) -> list[NormalFormWord]:
        sp = self.spec
        grp = sp.C if self.factor == "C" else sp.factor[self.factor]
        return [sp.element(self.factor, x) for x in grp.elements()]

    def elements(self) -> frozenset:
        sp = self.spec
        return frozenset(sp.conjugate(s, self.conjugator) for s in self.factor_elements())

    def __contains__(self, w: NormalFormWord) -> bool:
        """Membership by action: ``w`` fixes the vertex (or both ends of the edge)."""
        sp = self.spec
        if isinstance(self.target, BSVertex):
            return sp.act(w, self.target) == self.target
        u, v = self.target
        return sp.act(w, u) == u and sp.act(w, v) == v

    def __len__(self):
        return len(self.elements())

    def describe(self) -> str:
        h = self.spec.format_word(self.conjugator)
        return self.factor if h == "1" else f"({h}){self.factor}({h})^-1"
