"""Concrete actions: the tree of a chain of subgroups, star trees, and the infinite dihedral group on a line."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import NamedTuple

from bsk.errors import InversionError, WordError
from bsk.groups import FiniteGroup, left_cosets
from bsk.isometry import (NEUTRAL, TreeAutomorphism, amplitude_formula, classify_fixed_end)
from bsk.quotient import FiniteAction
from bsk.trees import FiniteTree, HalfLine, LazyTree

# --------------------------------------------------------------------------
# chains of subgroups


class ChainSpec:
    """An increasing chain ``G_0 < G_1 < ...`` of finite abelian groups inside one group.

    Subclasses supply the group operation, the least level containing an
    element, a canonical representative for ``x + G_n`` and representatives
    of ``G_n / G_{n-1}``.
    """

    name = "chain"
    identity = None

    def op(self, x, y):
        raise NotImplementedError

    def level(self, x) -> int:
        raise NotImplementedError

    def coset(self, x, n: int):
        raise NotImplementedError

    def step_reps(self, n: int) -> list:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, x) -> str:
        return str(x)


class Prufer(ChainSpec):
    """The Prüfer ``p``-group: fractions ``a/p^k`` mod 1 with ``G_n`` cyclic of order ``p^n``.

    Elements are reduced :class:`~fractions.Fraction` values in ``[0, 1)``;
    the level of ``a/p^k`` in lowest terms is ``k``.
    """

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"Prufer({p})"
        self.identity = Fraction(0)

    def op(self, x, y):
        return (x + y) % 1

    def inv(self, x):
        return (-x) % 1

    def level(self, x) -> int:
        d, k = x.denominator, 0
        while d % self.p == 0:
            d //= self.p
            k += 1
        if d != 1:
            raise ValueError(f"{x} is not in {self.name}")
        return k

    def coset(self, x, n: int):
        return x % Fraction(1, self.p ** n)

    def step_reps(self, n: int) -> list:
        return [Fraction(j, self.p ** n) for j in range(self.p)]

    def element(self, a: int, k: int) -> Fraction:
        return Fraction(a, self.p ** k) % 1

    def parse(self, text: str) -> Fraction:
        try:
            x = Fraction(text.strip()) % 1
        except (ValueError, ZeroDivisionError):
            raise WordError(f"{text!r} is not a fraction") from None
        try:
            self.level(x)
        except ValueError as exc:
            raise WordError(str(exc)) from None
        return x

    def __repr__(self):
        return self.name


class ChainVertex(NamedTuple):
    level: int
    rep: object

    def __str__(self):
        return f"{self.rep}+G{self.level}"


class ChainTree:
    """Cosets ``x + G_n`` for ``n <= depth``, with ``x + G_n`` adjacent to ``x + G_{n+1}``.

    This is the component of ``G_0`` in the coset tree of the chain, acted
    on by ``G_depth``; the root is ``G_0``.
    """

    def __init__(self, spec: ChainSpec, depth: int):
        if depth < 0:
            raise ValueError("depth must be non-negative")
        self.spec = spec
        self.depth = depth
        self.base = ChainVertex(0, spec.identity)
        self.tree = LazyTree(self.base, self._expand, parent=self._parent, contains=self._contains,
                             name=f"{spec.name} to depth {depth}")

    def vertex(self, x, n: int) -> ChainVertex:
        return ChainVertex(n, self.spec.coset(x, n))

    def _expand(self, v):
        n, r = v
        out = []
        if n < self.depth:
            out.append(("up", self.vertex(r, n + 1)))
        if n > 0:
            for s in self.spec.step_reps(n):
                out.append((s, self.vertex(self.spec.op(r, s), n - 1)))
        return out

    def _parent(self, v):
        n, r = v
        if r == self.spec.identity:
            return None if n == 0 else ChainVertex(n - 1, r)
        return self.vertex(r, n + 1)

    def _contains(self, v) -> bool:
        if not isinstance(v, tuple) or len(v) != 2:
            return False
        n, r = v
        try:
            return 0 <= n <= self.depth and self.spec.level(r) <= self.depth \
                and self.spec.coset(r, n) == r
        except (ValueError, TypeError, AttributeError):
            return False

    def require(self, x) -> None:
        k = self.spec.level(x)
        if k > self.depth:
            raise ValueError(f"{self.spec.format(x)} lies in level {k}; "
                             f"build the chain tree with depth >= {k}")

    def act(self, x, v: ChainVertex) -> ChainVertex:
        return self.vertex(self.spec.op(x, v.rep), v.level)

    def translation(self, x) -> TreeAutomorphism:
        self.require(x)
        xi = self.spec.inv(x)
        return TreeAutomorphism(self.tree, lambda v: self.act(x, v), lambda v: self.act(xi, v),
                                self.spec.format(x))

    def level_vertices(self, n: int) -> list:
        """All vertices at level ``n`` (there are ``|G_depth / G_n|`` of them)."""
        reps = [self.spec.identity]
        for m in range(self.depth, n, -1):
            reps = [self.spec.op(r, s) for r in reps for s in self.spec.step_reps(m)]
        return sorted({self.vertex(r, n) for r in reps}, key=lambda v: v.rep)

    def end(self) -> HalfLine:
        """The half-line ``(G_0, G_1, ..., G_depth)``; indexing past ``depth`` raises."""
        def step(i):
            if i > self.depth:
                raise IndexError(i)
            return ChainVertex(i, self.spec.identity)

        return HalfLine(step, name=f"end of {self.spec.name}")


def chain_tree(spec: ChainSpec, depth: int) -> ChainTree:
    return ChainTree(spec, depth)


@dataclass(frozen=True)
class ChainEndReport:
    depth: int
    levels: dict          # formatted element -> least n with the element in G_n
    kinds: dict           # formatted element -> FixedEndKind
    elliptic: dict        # formatted element -> bool
    common_level: int | None   # least level all elements fix, None if beyond depth

    @property
    def all_neutral(self) -> bool:
        return all(k.kind == NEUTRAL and k.index == self.levels[x] for x, k in self.kinds.items())

    @property
    def holds(self) -> bool:
        return self.all_neutral and all(self.elliptic.values())

    def to_dict(self) -> dict:
        return {"depth": self.depth,
                "elements": {x: {"level": self.levels[x], "elliptic": self.elliptic[x],
                                 **self.kinds[x].to_dict()} for x in self.levels},
                "common_fixed_level": self.common_level,
                "holds": self.holds}


def chain_end(spec: ChainSpec, elements, depth: int) -> ChainEndReport:
    """Classify the end ``(G_0, G_1, ...)`` for each element and find their common fixed level.

    The level of ``x`` is where the end becomes pointwise fixed, so the end
    must come out neutral at exactly that index. The action is abelian, so
    every vertex at level ``n`` has stabilizer ``G_n`` and the elements fix a
    common vertex at level ``n`` iff they all lie in ``G_n``.
    """
    ct = ChainTree(spec, depth)
    end = ct.end()
    levels, kinds, ell = {}, {}, {}
    for x in elements:
        g = ct.translation(x)
        key = spec.format(x)
        levels[key] = spec.level(x)
        kinds[key] = classify_fixed_end(g, end, horizon=depth)
        ell[key] = amplitude_formula(g, ct.base) == 0
    common = None
    for n in range(depth + 1):
        v = ChainVertex(n, spec.identity)
        if all(ct.act(x, v) == v for x in elements):
            common = n
            break
    return ChainEndReport(depth, levels, kinds, ell, common)


# --------------------------------------------------------------------------
# stars and spiders

CENTER = "*"


def star_tree(group: FiniteGroup, subgroup=None, name: str | None = None) -> FiniteAction:
    """``group`` acting on a star: the centre is fixed, leaves are the left cosets of ``subgroup``.

    With no subgroup the leaves are the elements themselves (left translation).
    """
    H = [group.identity] if subgroup is None else sorted(subgroup)
    tr = left_cosets(group, H)
    leaves = [group.label(t) for t in tr.reps]
    if CENTER in leaves:
        raise ValueError(f"label {CENTER!r} is reserved for the centre")
    tree = FiniteTree.from_pairs([CENTER] + leaves, [(CENTER, leaf) for leaf in leaves], root=CENTER)
    perms = {}
    for g in group.elements():
        p = {CENTER: CENTER}
        for t in tr.reps:
            p[group.label(t)] = group.label(tr.rep_of[group.mul(g, t)])
        perms[g] = p
    suffix = "" if subgroup is None else "/" + ",".join(group.label(h) for h in H)
    return FiniteAction(group, tree, perms, name or f"star({group.name}{suffix})")


def spider(group: FiniteGroup, leg_length: int, name: str | None = None) -> FiniteAction:
    """One leg of ``leg_length`` edges per element; ``group`` permutes the legs by left translation."""
    verts = [CENTER]
    pairs = []
    for g in group.elements():
        prev = CENTER
        for d in range(1, leg_length + 1):
            v = f"{group.label(g)}.{d}"
            verts.append(v)
            pairs.append((prev, v))
            prev = v
    tree = FiniteTree.from_pairs(verts, pairs, root=CENTER)
    perms = {}
    for g in group.elements():
        p = {CENTER: CENTER}
        for x in group.elements():
            y = group.label(group.mul(g, x))
            for d in range(1, leg_length + 1):
                p[f"{group.label(x)}.{d}"] = f"{y}.{d}"
        perms[g] = p
    return FiniteAction(group, tree, perms, name or f"spider({group.name}, {leg_length})")


# --------------------------------------------------------------------------
# the infinite dihedral group on the line


@dataclass(frozen=True)
class DihedralElement:
    """The affine map ``x -> sign * x + offset`` of the integer line."""

    sign: int
    offset: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def __call__(self, x):
        return self.sign * x + self.offset

    def __mul__(self, other: "DihedralElement") -> "DihedralElement":
        """``self`` after ``other``."""
        return DihedralElement(self.sign * other.sign, self.sign * other.offset + self.offset)

    def inverse(self) -> "DihedralElement":
        return DihedralElement(self.sign, -self.sign * self.offset)

    @property
    def is_reflection(self) -> bool:
        return self.sign == -1

    def inverted_edge(self):
        """The edge swapped by a reflection about a half-integer, else ``None``."""
        if self.sign == -1 and self.offset % 2:
            lo = self.offset // 2
            return (lo, lo + 1)
        return None

    def fixed_vertex(self):
        if self.sign == -1 and self.offset % 2 == 0:
            return self.offset // 2
        return None

    def __str__(self):
        return f"({self.sign:+d},{self.offset})"


DIHEDRAL_IDENTITY = DihedralElement(1, 0)

CONVENTIONS = {
    # reflections about the vertices 0 and 1
    "without-inversion": {"a": DihedralElement(-1, 0), "b": DihedralElement(-1, 2)},
    # reflections about 0 and about the midpoint of the edge 0-1
    "with-inversion": {"a": DihedralElement(-1, 0), "b": DihedralElement(-1, 1)},
}
DEFAULT_CONVENTION = "without-inversion"


def dinf_word(word: str, convention: str | dict = DEFAULT_CONVENTION) -> DihedralElement:
    """Compose the letters of ``word``; the rightmost letter acts first."""
    images = CONVENTIONS[convention] if isinstance(convention, str) else convention
    out = DIHEDRAL_IDENTITY
    for ch in word:
        if ch not in images:
            raise WordError(f"letter {ch!r} is not one of {''.join(sorted(images))}")
        out = out * images[ch]
    return out


def dinf_words(max_length: int, alphabet: str = "ab"):
    """Every word over ``alphabet`` of length at most ``max_length``, shortest first."""
    for n in range(max_length + 1):
        for letters in product(alphabet, repeat=n):
            yield "".join(letters)


def line_amplitude(g: DihedralElement) -> int:
    if g.inverted_edge() is not None:
        raise InversionError(f"{g} reflects about the midpoint of an edge", g.inverted_edge())
    return abs(g.offset) if g.sign == 1 else 0


def _line_parent(n):
    if n == 0:
        return None
    return n - 1 if n > 0 else n + 1


LINE = LazyTree(0, lambda n: [("-", n - 1), ("+", n + 1)], parent=_line_parent,
                contains=lambda n: isinstance(n, int) and not isinstance(n, bool), name="Z")


def line_automorphism(g: DihedralElement, name: str | None = None) -> TreeAutomorphism:
    return TreeAutomorphism(LINE, g, g.inverse(), name or str(g))


class LineAction:
    """Generators realised as affine maps of the line, checked against relators."""

    def __init__(self, images: dict, relators=("aa", "bb")):
        self.images = dict(images)
        for rel in relators:
            val = dinf_word(rel, self.images)
            if val != DIHEDRAL_IDENTITY:
                raise ValueError(f"relator {rel} evaluates to {val}, not the identity")
        self.relators = tuple(relators)

    def element(self, word: str) -> DihedralElement:
        return dinf_word(word, self.images)

    def automorphism(self, word: str) -> TreeAutomorphism:
        return line_automorphism(self.element(word), name=word or "1")

    def inversion_witness(self):
        """``(generator, edge)`` for the first generator inverting an edge, else ``None``."""
        for gen in sorted(self.images):
            e = self.images[gen].inverted_edge()
            if e is not None:
                return gen, e
        return None


def line_action(images: dict | str = DEFAULT_CONVENTION, relators=("aa", "bb")) -> LineAction:
    if isinstance(images, str):
        images = CONVENTIONS[images]
    return LineAction(images, relators)
