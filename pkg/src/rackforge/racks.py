"""Finite racks as dense operation tables.

``table[x, y]`` is ``x |> y``; the left translation ``phi_x`` is row ``x``.
All constructors validate the rack axioms (bijective translations,
self-distributivity, ``x |> x = x`` and the crossed-set condition) before
returning.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from itertools import product as iproduct
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .caps import CapExceeded, get_caps
from .fields import FqMatrix, matrix_group_to_perm
from .fields import field as gf_field
from .perms import (
    GroupAutomorphism,
    Permutation,
    PermGroup,
    conjugacy_class,
    conjugate,
    generate,
)


class RackAxiomError(ValueError):
    """A table violates a rack axiom; ``axiom`` and ``witness`` say where."""

    def __init__(self, axiom: str, witness: tuple):
        self.axiom = axiom
        self.witness = tuple(int(w) for w in witness)
        super().__init__(f"{axiom} fails at {self.witness}")


@dataclass(eq=False)
class Rack:
    table: np.ndarray
    labels: list[str] | None = None
    provenance: str = ""
    validation: str = "full"
    _inverse: np.ndarray | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return int(self.table.shape[0])

    def __len__(self) -> int:
        return self.size

    def op(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    @property
    def inverse_table(self) -> np.ndarray:
        """``inverse_table[x, y] = phi_x^{-1}(y)``."""
        if self._inverse is None:
            n = self.size
            inv = np.empty_like(self.table)
            cols = np.arange(n, dtype=self.table.dtype)
            for x in range(n):
                inv[x, self.table[x]] = cols
            self._inverse = inv
        return self._inverse

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def same_table(self, other: "Rack") -> bool:
        return self.size == other.size and bool(np.array_equal(self.table, other.table))

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "table": self.table.tolist(),
            "labels": list(self.labels) if self.labels else [str(i) for i in range(self.size)],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Rack":
        table = data["table"]
        if "size" in data and data["size"] != len(table):
            raise RackAxiomError("size mismatch", (data["size"], len(table)))
        return validate(table, labels=data.get("labels"), provenance=data.get("provenance", ""))


def _as_table(table) -> np.ndarray:
    t = np.asarray(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise RackAxiomError("non-square table", (t.shape[0] if t.ndim else 0,))
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        bad = np.argwhere((t < 0) | (t >= n))[0]
        raise RackAxiomError("entry out of range", tuple(bad))
    return t.astype(np.int32 if n < 2**31 else np.int64)


def _check_self_distributive(t: np.ndarray, rows: Iterable[int]) -> None:
    for x in rows:
        tx = t[x]
        lhs = tx[t]  # x |> (y |> z)
        rhs = t[tx][:, tx]  # (x |> y) |> (x |> z)
        if not np.array_equal(lhs, rhs):
            y, z = np.argwhere(lhs != rhs)[0]
            raise RackAxiomError("self-distributivity", (x, y, z))


def validate(table, labels: Sequence[str] | None = None, provenance: str = "") -> Rack:
    """Check every axiom and return a :class:`Rack`.

    Self-distributivity is checked on all triples up to ``full_axiom_check``
    elements; above that, on every pair ``(y, z)`` for a seeded random
    sample of 32 first arguments, recorded as ``validation="sampled"``.
    """
    t = _as_table(table)
    n = t.shape[0]
    if n > get_caps().rack_size:
        raise CapExceeded(f"rack of size {n} exceeds the rack_size cap")
    srt = np.sort(t, axis=1)
    bad_rows = np.nonzero((srt != np.arange(n)).any(axis=1))[0]
    if len(bad_rows):
        raise RackAxiomError("non-bijective translation", (bad_rows[0],))
    if n <= get_caps().full_axiom_check:
        _check_self_distributive(t, range(n))
        mode = "full"
    else:
        rng = random.Random(n)
        _check_self_distributive(t, sorted(rng.sample(range(n), min(32, n))))
        mode = "sampled"
    diag = t[np.arange(n), np.arange(n)]
    bad = np.nonzero(diag != np.arange(n))[0]
    if len(bad):
        raise RackAxiomError("quandle axiom", (bad[0],))
    # x |> y = y  implies  y |> x = x
    fixes = t == np.arange(n)[None, :]
    back = t.T == np.arange(n)[:, None]
    viol = np.argwhere(fixes & ~back)
    if len(viol):
        raise RackAxiomError("crossed-set axiom", tuple(viol[0]))
    if labels is not None and len(labels) != n:
        raise ValueError("labels length differs from rack size")
    return Rack(t, list(labels) if labels is not None else None, provenance, mode)


# -- constructions ---------------------------------------------------------


def trivial_rack(n: int) -> Rack:
    return validate(np.tile(np.arange(n), (n, 1)), provenance=f"trivial({n})")


def _rack_on_perms(elements: Sequence[Permutation], op, provenance: str) -> Rack:
    index = {g: i for i, g in enumerate(elements)}
    n = len(elements)
    if n > get_caps().rack_size:
        raise CapExceeded(f"rack of size {n} exceeds the rack_size cap")
    table = np.empty((n, n), dtype=np.int32)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            try:
                table[i, j] = index[op(a, b)]
            except KeyError:
                raise RackAxiomError("not closed", (i, j)) from None
    return validate(table, labels=[str(g) for g in elements], provenance=provenance)


def from_conjugacy_class(G: PermGroup, x: Permutation) -> Rack:
    cls = conjugacy_class(G, x)
    return _rack_on_perms(cls, conjugate, f"conj(deg {G.degree},{x})")


def from_conjugacy_classes(G: PermGroup, xs: Sequence[Permutation]) -> Rack:
    """The subrack of ``G`` formed by the union of several classes."""
    elements: list[Permutation] = []
    seen: set[Permutation] = set()
    for x in xs:
        for g in conjugacy_class(G, x):
            if g not in seen:
                seen.add(g)
                elements.append(g)
    return _rack_on_perms(elements, conjugate, "conj-union(" + ",".join(map(str, xs)) + ")")


def twisted_orbit(G: PermGroup, u: GroupAutomorphism, x: Permutation) -> list[Permutation]:
    """Orbit of ``x`` under ``g -> g y u(g)^-1`` for the generators ``g``."""
    gens = [(g, u(g).inverse()) for g in G.generators]
    orbit = [x]
    seen = {x}
    queue = deque(orbit)
    while queue:
        y = queue.popleft()
        for g, ug_inv in gens:
            z = g * y * ug_inv
            if z not in seen:
                seen.add(z)
                orbit.append(z)
                queue.append(z)
    return orbit


def from_twisted_class(G: PermGroup, u: GroupAutomorphism, x: Permutation) -> Rack:
    """Rack on the twisted class of ``x`` with ``y |> z = y u(z y^-1)``."""
    if u.domain is not G:
        raise ValueError("automorphism belongs to a different group")
    if x not in G:
        raise ValueError(f"{x} is not in the group")
    orbit = twisted_orbit(G, u, x)

    def op(y, z):
        return y * u(z * y.inverse())

    return _rack_on_perms(orbit, op, f"twisted(deg {G.degree},{x})")


def _mat_mod(T: Sequence[Sequence[int]], m: int) -> list[list[int]]:
    return [[int(a) % m for a in row] for row in T]


def _det_int(M: list[list[int]]) -> int:
    from fractions import Fraction

    n = len(M)
    A = [[Fraction(a) for a in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return int(det)


def affine(modulus: int, T, provenance: str | None = None) -> Rack:
    """Affine rack on ``(Z/m)^k`` with ``x |> y = (1 - T) x + T y``.

    ``T`` is an integer or a ``k x k`` integer matrix; elements are the
    vectors in lexicographic order.
    """
    if isinstance(T, int):
        T = [[T]]
    T = _mat_mod(T, modulus)
    k = len(T)
    if gcd(_det_int(T) % modulus, modulus) != 1:
        raise ValueError("T is not invertible modulo m")
    vecs = np.array(list(iproduct(range(modulus), repeat=k)), dtype=np.int64).reshape(-1, k)
    Tm = np.array(T, dtype=np.int64)
    one_minus = (np.eye(k, dtype=np.int64) - Tm) % modulus
    a = vecs @ one_minus.T % modulus  # (1-T)x
    b = vecs @ Tm.T % modulus  # Ty
    res = (a[:, None, :] + b[None, :, :]) % modulus
    weights = modulus ** np.arange(k - 1, -1, -1)
    table = (res * weights).sum(axis=2)
    labels = [",".join(map(str, v)) for v in vecs.tolist()]
    prov = provenance or f"affine(Z/{modulus},{T if k > 1 else T[0][0]})"
    return validate(table, labels=labels, provenance=prov)


def affine_field(q: int, a: int) -> Rack:
    """Affine rack on GF(q) with ``T`` multiplication by the field element ``a``.

    ``a`` uses the integer encoding of :mod:`rackforge.fields`.
    """
    F = gf_field(q)
    if a % q == 0:
        raise ValueError("multiplier must be nonzero")
    a = a % q
    one_minus_a = F.sub(1, a)
    table = [[F.add(F.mul(one_minus_a, x), F.mul(a, y)) for y in range(q)] for x in range(q)]
    return validate(table, labels=[str(i) for i in range(q)], provenance=f"affine(GF({q}),{a})")


def dihedral(n: int) -> Rack:
    return affine(n, -1, provenance=f"dihedral({n})")


def power_rack(X: Rack, j: int) -> Rack:
    """``X^[j]``: same set, ``x |>^j y = phi_x^j(y)``."""
    n = X.size
    base = X.table if j >= 0 else X.inverse_table
    k = abs(j)
    result = np.tile(np.arange(n, dtype=X.table.dtype), (n, 1))
    power = base.copy()
    while k:
        if k & 1:
            result = np.take_along_axis(power, result, axis=1)
        power = np.take_along_axis(power, power, axis=1)
        k >>= 1
    return validate(result, labels=X.labels, provenance=f"power({X.provenance},{j})")


def product(X: Rack, Z: Rack) -> Rack:
    """Componentwise product; element ``(x, z)`` has index ``x * |Z| + z``."""
    n, m = X.size, Z.size
    table = (X.table[:, None, :, None] * m + Z.table[None, :, None, :]).reshape(n * m, n * m)
    labels = [f"({X.label(x)},{Z.label(z)})" for x in range(n) for z in range(m)]
    return validate(table, labels=labels, provenance=f"product({X.provenance},{Z.provenance})")


# -- subracks and orbits ----------------------------------------------------


@dataclass(frozen=True)
class SubrackHandle:
    parent: Rack
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def as_rack(self) -> Rack:
        idx = {x: i for i, x in enumerate(self.members)}
        sub = self.parent.table[np.ix_(self.members, self.members)]
        table = np.vectorize(idx.__getitem__, otypes=[np.int32])(sub)
        labels = [self.parent.label(x) for x in self.members]
        return validate(table, labels=labels, provenance=f"sub({self.parent.provenance})")


def subrack_closure(X: Rack, S: Iterable[int]) -> SubrackHandle:
    """Smallest subset containing ``S`` closed under ``|>`` and its inverse."""
    S = list(dict.fromkeys(int(s) for s in S))
    if not S:
        raise ValueError("seed set must be nonempty")
    T, Ti = X.table, X.inverse_table
    members = list(S)
    inside = set(S)
    pending = deque(S)
    while pending:
        a = pending.popleft()
        snapshot = list(members)
        for b in snapshot:
            for c in (T[a, b], T[b, a], Ti[a, b], Ti[b, a]):
                c = int(c)
                if c not in inside:
                    inside.add(c)
                    members.append(c)
                    pending.append(c)
    return SubrackHandle(X, tuple(sorted(inside)))


def orbit_under(X: Rack, gens: Sequence[int], start: int) -> list[int]:
    """Orbit of ``start`` under the translations ``phi_g``, ``g`` in ``gens``."""
    T = X.table
    seen = {start}
    orbit = [start]
    queue = deque(orbit)
    while queue:
        y = queue.popleft()
        for g in gens:
            z = int(T[g, y])
            if z not in seen:
                seen.add(z)
                orbit.append(z)
                queue.append(z)
    return orbit


def orbit_decomposition(X: Rack, members: Sequence[int] | None = None) -> list[list[int]]:
    """Orbits of the inner group (of the subrack ``members``, if given)."""
    pts = list(range(X.size)) if members is None else sorted(members)
    T = X.table
    label = {}
    orbits = []
    for start in pts:
        if start in label:
            continue
        orb = [start]
        label[start] = len(orbits)
        queue = deque(orb)
        while queue:
            y = queue.popleft()
            for g in pts:
                z = int(T[g, y])
                if z not in label:
                    label[z] = len(orbits)
                    orb.append(z)
                    queue.append(z)
        orbits.append(sorted(orb))
    return orbits


def is_indecomposable(X: Rack) -> bool:
    return len(orbit_decomposition(X)) == 1


def translation_perms(X: Rack) -> list[Permutation]:
    return [Permutation._raw(tuple(int(v) for v in row)) for row in X.table]


def inner_group(X: Rack, bound: int | None = None) -> PermGroup:
    """The group generated by the left translations."""
    gens = list(dict.fromkeys(translation_perms(X)))
    gens = [g for g in gens if not g.is_identity()]
    return generate(gens, bound=bound, degree=X.size)


def defect_rank(X: Rack) -> int:
    """Free rank of the defect group: the number of inner orbits."""
    return len(orbit_decomposition(X))


# -- isomorphism ------------------------------------------------------------


def _cycle_signature(row: np.ndarray) -> tuple[int, ...]:
    n = len(row)
    seen = np.zeros(n, dtype=bool)
    lengths = []
    for s in range(n):
        if not seen[s]:
            L = 0
            j = s
            while not seen[j]:
                seen[j] = True
                j = row[j]
                L += 1
            lengths.append(L)
    return tuple(sorted(lengths))


def _generating_set(X: Rack) -> list[int]:
    gens: list[int] = []
    covered: set[int] = set()
    for x in range(X.size):
        if x not in covered:
            gens.append(x)
            covered = set(subrack_closure(X, gens).members)
            if len(covered) == X.size:
                break
    return gens


def is_isomorphic(X: Rack, Y: Rack, cap: int | None = None) -> list[int] | None:
    """Return a rack isomorphism ``X -> Y`` as an image list, or ``None``.

    Backtracks over images of a generating set of ``X``, pruning by the
    cycle type of each translation; every partial map is propagated through
    the operation so that a full assignment is an isomorphism by construction.
    """
    cap = get_caps().isomorphism_size if cap is None else cap
    if X.size != Y.size:
        return None
    if X.size > cap:
        raise CapExceeded(f"isomorphism search limited to {cap} elements")
    n = X.size
    sigX = [_cycle_signature(X.table[x]) for x in range(n)]
    sigY = [_cycle_signature(Y.table[y]) for y in range(n)]
    if sorted(sigX) != sorted(sigY):
        return None
    gens = _generating_set(X)
    TX, TY = X.table, Y.table
    TXi, TYi = X.inverse_table, Y.inverse_table

    def extend(f: dict[int, int], used: set[int]) -> tuple[dict[int, int], set[int]] | None:
        f = dict(f)
        used = set(used)
        queue = deque(f)
        while queue:
            a = queue.popleft()
            for b in list(f):
                for ta, ty in ((TX, TY), (TXi, TYi)):
                    for (u, v) in ((a, b), (b, a)):
                        c = int(ta[u, v])
                        d = int(ty[f[u], f[v]])
                        if c in f:
                            if f[c] != d:
                                return None
                        else:
                            if d in used or sigX[c] != sigY[d]:
                                return None
                            f[c] = d
                            used.add(d)
                            queue.append(c)
        return f, used

    def search(i: int, f: dict[int, int], used: set[int]) -> dict[int, int] | None:
        if i == len(gens):
            return f
        g = gens[i]
        if g in f:
            return search(i + 1, f, used)
        for cand in range(n):
            if cand in used or sigY[cand] != sigX[g]:
                continue
            res = extend({**f, g: cand}, used | {cand})
            if res is not None:
                out = search(i + 1, *res)
                if out is not None:
                    return out
        return None

    f = search(0, {}, set())
    if f is None or len(f) != n:
        return None
    return [f[x] for x in range(n)]


def is_isomorphism(X: Rack, Y: Rack, f: Sequence[int]) -> bool:
    fa = np.asarray(f)
    if sorted(fa.tolist()) != list(range(Y.size)):
        return False
    return bool(np.array_equal(fa[X.table], Y.table[np.ix_(fa, fa)]))


# -- subrack enumeration ----------------------------------------------------


def enumerate_subracks(X: Rack, max_size: int | None = None) -> list[SubrackHandle]:
    """All subracks with at most ``max_size`` elements, smallest first."""
    cap = get_caps().subrack_enumeration
    if X.size > cap:
        raise CapExceeded(f"exhaustive subrack enumeration limited to {cap} elements")
    max_size = X.size if max_size is None else max_size
    found: set[tuple[int, ...]] = set()
    frontier = []
    for x in range(X.size):
        s = subrack_closure(X, [x]).members
        if s not in found:
            found.add(s)
            frontier.append(s)
    while frontier:
        nxt = []
        for s in frontier:
            if len(s) >= max_size:
                continue
            for x in range(X.size):
                if x in s:
                    continue
                t = subrack_closure(X, s + (x,)).members
                if t not in found:
                    found.add(t)
                    nxt.append(t)
        frontier = nxt
    keep = sorted((s for s in found if len(s) <= max_size), key=lambda s: (len(s), s))
    return [SubrackHandle(X, s) for s in keep]


def commutes(X: Rack, x: int, y: int) -> bool:
    return X.table[x, y] == y and X.table[y, x] == x


def abelian_subracks(X: Rack) -> list[list[int]]:
    """Maximal subsets of pairwise commuting elements, sorted."""
    import networkx as nx

    T = X.table
    n = X.size
    comm = (T == np.arange(n)[None, :]) & (T.T == np.arange(n)[:, None])
    G = nx.Graph()
    G.add_nodes_from(range(n))
    for x, y in np.argwhere(np.triu(comm, 1)):
        G.add_edge(int(x), int(y))
    cap = get_caps().clique_count
    cliques = []
    for c in nx.find_cliques(G):
        cliques.append(sorted(c))
        if len(cliques) > cap:
            raise CapExceeded(f"more than {cap} maximal abelian subracks")
    return sorted(cliques, key=lambda c: (-len(c), c))


# -- torus racks --------------------------------------------------------------


def _monomial_matrix(F, n: int, a: int, xi: int, x: Sequence[int]) -> FqMatrix:
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = F.pow(xi, x[i - 1])
    rows[0][n - 1] = F.mul(a, F.pow(xi, x[n - 1]))
    return FqMatrix(n, F.q, tuple(tuple(r) for r in rows))


def torus_model_matrix(n: int) -> list[list[int]]:
    """``g(x_1..x_{n-1}) = (-sum x_i, x_1, ..., x_{n-2})`` as an integer matrix."""
    k = n - 1
    g = [[0] * k for _ in range(k)]
    g[0] = [-1] * k
    for i in range(1, k):
        g[i][i - 1] = 1
    return g


def torus_rack(n: int, q: int, a: int) -> tuple[Rack, Rack]:
    """Return the monomial-matrix rack ``{mu_x}`` and its predicted affine model.

    ``mu_x = n_a diag(xi^x_1, ..., xi^x_n)`` for ``x`` in ``(Z/(q-1))^n`` with
    coordinate sum zero, ``xi`` the smallest primitive element of GF(q) and
    ``n_a`` the companion matrix of ``X^n - a``.  The matrices are turned into
    permutations of the nonzero vectors of GF(q)^n and the rack is their
    conjugation.  Element ``i`` of both racks corresponds to the ``i``-th
    ``(x_1..x_{n-1})`` in lexicographic order.
    """
    F = gf_field(q)
    aa = F.from_int(a)
    if aa == 0:
        raise ValueError("a must be nonzero")
    xi = F.primitive_element()
    m = q - 1
    xs = []
    for head in iproduct(range(m), repeat=n - 1):
        xs.append(tuple(head) + ((-sum(head)) % m,))
    mats = [_monomial_matrix(F, n, aa, xi, x) for x in xs]
    perms = matrix_group_to_perm(n, q, mats, action="vectors")
    X = _rack_on_perms(perms, conjugate, f"torus(n={n},q={q},a={a})")
    X.labels = [",".join(map(str, x[:-1])) for x in xs]
    model = affine(m, torus_model_matrix(n), provenance=f"torus-model(n={n},q={q})")
    return X, model


# -- affine certificate -------------------------------------------------------


def affine_model_typeD_certificate(g: Sequence[Sequence[int]], m: int, x: Sequence[int]) -> bool:
    """True iff ``x`` is outside ``Im(1 - g)`` and ``x - gx + g^2x - g^3x != 0`` mod ``m``."""
    from .intlinalg import solvable_mod

    k = len(g)
    G = np.array(_mat_mod(g, m), dtype=object)
    if gcd(_det_int(G.tolist()) % m, m) != 1:
        raise ValueError("g is singular modulo m")
    xv = np.array([int(v) % m for v in x], dtype=object)
    one_minus = (np.eye(k, dtype=object) - G) % m
    if solvable_mod(one_minus.tolist(), xv.tolist(), m):
        return False
    gx = G.dot(xv) % m
    g2x = G.dot(gx) % m
    g3x = G.dot(g2x) % m
    alt = (xv - gx + g2x - g3x) % m
    return bool(any(alt))
