"""Permutations and finite permutation groups given by generators.

Products follow function composition: ``p * r`` is the map ``i -> p(r(i))``.
Groups are enumerated by plain breadth-first closure; there is no
stabilizer-chain machinery, so everything here is meant for groups of at most
a few million elements.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

from .caps import CapExceeded, get_caps


class DegreeMismatch(ValueError):
    pass


class NotInGroup(ValueError):
    pass


class EnumerationOverflow(CapExceeded):
    """Raised instead of ever returning a truncated group."""


class Permutation:
    __slots__ = ("images", "_hash")

    def __init__(self, images: Sequence[int]):
        imgs = tuple(int(i) for i in images)
        n = len(imgs)
        if sorted(imgs) != list(range(n)):
            raise ValueError(f"not a bijection on 0..{n - 1}: {imgs}")
        self.images = imgs
        self._hash = hash(imgs)

    @classmethod
    def _raw(cls, images: tuple) -> "Permutation":
        # trusted constructor for hot loops
        p = object.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> "Permutation":
        """Parse 0-based disjoint-cycle notation such as ``"(0 1)(2 3 4)"``.

        Whitespace and commas inside cycles are ignored; ``"()"``, ``"e"`` and
        the empty string denote the identity.
        """
        images = list(range(degree))
        text = text.strip()
        if text in ("", "e", "()", "id"):
            return cls._raw(tuple(images))
        cycles = re.findall(r"\(([^()]*)\)", text)
        if re.sub(r"\([^()]*\)", "", text).strip():
            raise ValueError(f"bad cycle notation: {text!r}")
        seen: set[int] = set()
        for cyc in cycles:
            pts = [int(tok) for tok in re.split(r"[\s,]+", cyc.strip()) if tok]
            for a in pts:
                if a < 0 or a >= degree or a in seen:
                    raise ValueError(f"bad point {a} in {text!r}")
                seen.add(a)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                images[a] = b
        return cls._raw(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation._raw(tuple(inv))

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        result = 1
        for cyc in self.cycles():
            result = result * len(cyc) // gcd(result, len(cyc))
        return result

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def __str__(self) -> str:
        parts = ["(" + " ".join(map(str, c)) + ")" for c in self.cycles() if len(c) > 1]
        return "".join(parts) if parts else "()"

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r}, degree={self.degree})"


def _check(p: Permutation, r: Permutation) -> None:
    if len(p.images) != len(r.images):
        raise DegreeMismatch(f"degrees {p.degree} and {r.degree} differ")


def compose(p: Permutation, r: Permutation) -> Permutation:
    _check(p, r)
    pi = p.images
    return Permutation._raw(tuple([pi[j] for j in r.images]))


def conjugate(g: Permutation, h: Permutation) -> Permutation:
    """Return ``g h g^-1``."""
    _check(g, h)
    gi = g.images
    out = [0] * len(gi)
    # g h g^-1 sends g(i) to g(h(i))
    for i, hi in enumerate(h.images):
        out[gi[i]] = gi[hi]
    return Permutation._raw(tuple(out))


def cycle_type(p: Permutation) -> dict[int, int]:
    """Cycle lengths with multiplicities, fixed points included."""
    counts: dict[int, int] = {}
    for cyc in p.cycles():
        counts[len(cyc)] = counts.get(len(cyc), 0) + 1
    return dict(sorted(counts.items()))


def format_cycle_type(ct: dict[int, int]) -> str:
    """``{1: 3, 4: 1}`` -> ``"(1^3,4)"``."""
    parts = [f"{k}^{v}" if v > 1 else str(k) for k, v in sorted(ct.items())]
    return "(" + ",".join(parts) + ")"


@dataclass(eq=False)
class PermGroup:
    """A permutation group given by generators; elements enumerated lazily."""

    generators: list[Permutation]
    degree: int = -1
    _elements: list[Permutation] | None = field(default=None, repr=False)
    _index: dict[Permutation, int] | None = field(default=None, repr=False)

    def __post_init__(self):
        gens = list(self.generators)
        if self.degree < 0:
            if not gens:
                raise ValueError("degree required for a group without generators")
            self.degree = gens[0].degree
        for g in gens:
            if g.degree != self.degree:
                raise DegreeMismatch("generators of different degrees")
        self.generators = gens

    @property
    def enumerated(self) -> bool:
        return self._elements is not None

    def elements(self, bound: int | None = None) -> list[Permutation]:
        if self._elements is None:
            self._elements = _bfs_closure(self.generators, self.degree, bound)
            self._index = {g: i for i, g in enumerate(self._elements)}
        return self._elements

    def index(self, g: Permutation) -> int:
        self.elements()
        try:
            return self._index[g]
        except KeyError:
            raise NotInGroup(str(g)) from None

    @property
    def order(self) -> int:
        return len(self.elements())

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def __contains__(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            return False
        if g.is_identity() or g in self.generators:
            return True
        self.elements()
        return g in self._index

    def __len__(self) -> int:
        return self.order


def _bfs_closure(gens: Sequence[Permutation], degree: int, bound: int | None) -> list[Permutation]:
    if bound is None:
        bound = get_caps().group_elements
    e = tuple(range(degree))
    elements = [e]
    seen = {e}
    gen_imgs = [g.images for g in gens]
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for gi in gen_imgs:
            # x * g : apply g first, then x
            y = tuple([x[j] for j in gi])
            if y not in seen:
                if len(elements) >= bound:
                    raise EnumerationOverflow(f"group exceeds {bound} elements")
                seen.add(y)
                elements.append(y)
                queue.append(y)
    return [Permutation._raw(x) for x in elements]


def generate(gens: Iterable[Permutation], bound: int | None = None, degree: int = -1) -> PermGroup:
    """Enumerate the group generated by ``gens`` (BFS from the identity)."""
    G = PermGroup(list(gens), degree=degree)
    G.elements(bound)
    return G


def symmetric_group(n: int) -> PermGroup:
    if n == 1:
        return PermGroup([], degree=1)
    gens = [Permutation.from_cycles("(0 1)", n)]
    if n > 2:
        gens.append(Permutation._raw(tuple(list(range(1, n)) + [0])))
    return PermGroup(gens)


def alternating_group(n: int) -> PermGroup:
    if n < 3:
        return PermGroup([], degree=n)
    gens = [Permutation._raw(tuple([1, 2, 0] + list(range(3, n))))]
    if n > 3:
        # (0 1 ... n-1) for odd n, (1 2 ... n-1) for even n
        if n % 2:
            gens.append(Permutation._raw(tuple(list(range(1, n)) + [0])))
        else:
            gens.append(Permutation._raw(tuple([0] + list(range(2, n)) + [1])))
    return PermGroup(gens)


def mathieu_m11() -> PermGroup:
    """M11 in its natural action on 11 points (order 7920)."""
    return PermGroup([
        Permutation.from_cycles("(0 1 2 3 4 5 6 7 8 9 10)", 11),
        Permutation.from_cycles("(2 6 10 7)(3 9 4 5)", 11),
    ])


def conjugation_orbit(gens: Sequence[Permutation], x: Permutation, cap: int | None = None) -> list[Permutation]:
    """Orbit of ``x`` under conjugation by ``gens``, in BFS order.

    ``x`` does not have to lie in the group generated by ``gens``; this is
    what twisted classes realized in a semidirect product need.
    """
    if cap is None:
        cap = get_caps().group_elements
    orbit = [x.images]
    seen = {x.images}
    queue = deque(orbit)
    gi = [g.images for g in gens]
    n = x.degree
    while queue:
        h = queue.popleft()
        for g in gi:
            out = [0] * n
            for i in range(n):
                out[g[i]] = g[h[i]]
            y = tuple(out)
            if y not in seen:
                if len(orbit) >= cap:
                    raise EnumerationOverflow(f"orbit exceeds {cap} elements")
                seen.add(y)
                orbit.append(y)
                queue.append(y)
    return [Permutation._raw(y) for y in orbit]


def conjugacy_class(G: PermGroup, x: Permutation) -> list[Permutation]:
    if x not in G:
        raise NotInGroup(f"{x} is not in the group")
    return conjugation_orbit(G.generators, x)


def _reduce_generators(elements: Sequence[Permutation], degree: int) -> list[Permutation]:
    # greedy: keep an element only if it is not in the span of earlier picks
    gens: list[Permutation] = []
    span = {tuple(range(degree))}
    for g in elements:
        if g.images in span:
            continue
        gens.append(g)
        span = {x.images for x in _bfs_closure(gens, degree, len(elements) + 1)}
        if len(span) == len(elements):
            break
    return gens


def centralizer(G: PermGroup, x: Permutation) -> PermGroup:
    if x not in G:
        raise NotInGroup(f"{x} is not in the group")
    xi = x.images
    members = []
    for g in G.elements():
        gi = g.images
        if all(gi[xi[i]] == xi[gi[i]] for i in range(len(xi))):
            members.append(g)
    K = PermGroup(_reduce_generators(members, G.degree), degree=G.degree)
    K._elements = members
    K._index = {g: i for i, g in enumerate(members)}
    return K


def subgroup(elements: Sequence[Permutation], degree: int) -> PermGroup:
    """Wrap an already closed list of elements as a group."""
    K = PermGroup(_reduce_generators(list(elements), degree), degree=degree)
    K._elements = list(elements)
    K._index = {g: i for i, g in enumerate(K._elements)}
    return K


class GroupAutomorphism:
    """An automorphism stored as a full table on the enumerated elements."""

    def __init__(self, domain: PermGroup, table: Sequence[int], check: bool = True):
        self.domain = domain
        self.table = list(table)
        els = domain.elements()
        if len(self.table) != len(els) or sorted(self.table) != list(range(len(els))):
            raise ValueError("automorphism table is not a bijection")
        if check:
            self._check_multiplicative()

    def _check_multiplicative(self, samples: int = 1000, seed: int = 0) -> None:
        import random

        els = self.domain.elements()
        n = len(els)
        idx = self.domain.index
        if n <= 2000:
            # multiplicativity on generators pins down the whole map
            pairs = [(i, idx(g)) for i in range(n) for g in self.domain.generators]
        else:
            rng = random.Random(seed)
            pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(samples)]
        for a, b in pairs:
            ab = idx(els[a] * els[b])
            if els[self.table[ab]] != els[self.table[a]] * els[self.table[b]]:
                raise ValueError(f"not multiplicative at ({els[a]}, {els[b]})")

    def __call__(self, g: Permutation) -> Permutation:
        els = self.domain.elements()
        return els[self.table[self.domain.index(g)]]

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.table))

    @classmethod
    def identity(cls, G: PermGroup) -> "GroupAutomorphism":
        return cls(G, range(G.order), check=False)


def automorphism_from_conjugator(G: PermGroup, t: Permutation) -> GroupAutomorphism:
    """The automorphism ``x -> t x t^-1`` of ``G``; ``t`` must normalize ``G``."""
    for g in G.generators:
        if conjugate(t, g) not in G:
            raise ValueError(f"{t} does not normalize the group")
    els = G.elements()
    table = [G.index(conjugate(t, x)) for x in els]
    return GroupAutomorphism(G, table, check=True)
