"""Scalar rack 2-cocycles with values in the m-th roots of unity.

A cocycle is stored as an exponent table ``e`` over ``Z/m`` with
``q[x][y] = zeta_m ** e[x][y]``.  The cocycle law reads additively::

    e[x][y|>z] + e[y][z] = e[x|>y][x|>z] + e[x][z]      (mod m)
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np

from .caps import CapExceeded, get_caps
from .fields import FqMatrix, field as gf_field, matrix_group_to_perm
from .intlinalg import IncrementalRowSpace, IntMatrix, factorize, rref_mod_p, smith_normal_form, sparse_rank_mod_p
from .perms import Permutation, symmetric_group
from .racks import Rack, from_conjugacy_class, orbit_decomposition, power_rack, product as rack_product


class CocycleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ScalarCocycle:
    rack: Rack
    m: int
    exponents: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.exponents, dtype=np.int64) % self.m
        if e.shape != (self.rack.size, self.rack.size):
            raise CocycleError("exponent table has the wrong shape")
        object.__setattr__(self, "exponents", e)

    @classmethod
    def constant(cls, X: Rack, m: int, value: int = 1) -> "ScalarCocycle":
        """Constant cocycle ``zeta_m ** value``; ``constant(X, 2)`` is the constant -1."""
        return cls(X, m, np.full((X.size, X.size), value % m, dtype=np.int64))

    def value(self, x: int, y: int) -> int:
        return int(self.exponents[x, y])

    def same(self, other: "ScalarCocycle") -> bool:
        return self.m == other.m and self.rack.same_table(other.rack) and np.array_equal(self.exponents, other.exponents)

    def to_json(self) -> dict:
        return {"rack": self.rack.to_json(), "m": self.m, "exponents": self.exponents.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "ScalarCocycle":
        return cls(Rack.from_json(data["rack"]), int(data["m"]), np.array(data["exponents"]))


@dataclass(frozen=True)
class GaugeMap:
    m: int
    gamma: tuple[int, ...]


# -- checks --------------------------------------------------------------------


def _triples(N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x, y, z = np.indices((N, N, N)).reshape(3, -1)
    return x, y, z


def is_cocycle(q: ScalarCocycle) -> tuple[bool, tuple[int, int, int] | None]:
    """Exhaustive check of the cocycle law; returns the first failing ``(x, y, z)``."""
    T = q.rack.table
    e = q.exponents
    N = q.rack.size
    x, y, z = _triples(N)
    lhs = e[x, T[y, z]] + e[y, z]
    rhs = e[T[x, y], T[x, z]] + e[x, z]
    bad = np.nonzero((lhs - rhs) % q.m)[0]
    if len(bad):
        k = bad[0]
        return False, (int(x[k]), int(y[k]), int(z[k]))
    return True, None


def is_faithful(q: ScalarCocycle) -> bool:
    """Injectivity of ``x -> g_x`` with ``g_x(e_y) = q[x][y] e_{x|>y}``."""
    T, e = q.rack.table, q.exponents
    seen = set()
    for x in range(q.rack.size):
        key = (T[x].tobytes(), e[x].tobytes())
        if key in seen:
            return False
        seen.add(key)
    return True


def has_constant_diagonal(q: ScalarCocycle) -> bool:
    d = np.diag(q.exponents)
    return bool(np.all(d == d[0]))


# -- linear systems ---------------------------------------------------------------


def _check_cap(X: Rack) -> None:
    cap = get_caps().cocycle_rack_size
    if X.size > cap:
        raise CapExceeded(f"rack of size {X.size} exceeds cocycle_rack_size={cap}")


def cocycle_equations(X: Rack) -> IntMatrix:
    """One row per triple, columns indexed by ``x*N + y`` (the unknown ``e[x][y]``)."""
    N = X.size
    T = X.table.astype(np.int64)
    x, y, z = _triples(N)
    cols = [x * N + T[y, z], y * N + z, T[x, y] * N + T[x, z], x * N + z]
    signs = [1, 1, -1, -1]
    rowid = np.arange(N ** 3, dtype=np.int64)
    keys = np.concatenate([rowid * N * N + c for c in cols])
    vals = np.concatenate([np.full(N ** 3, s) for s in signs])
    uk, inv = np.unique(keys, return_inverse=True)
    sums = np.bincount(inv, weights=vals).astype(np.int64)
    nz = sums != 0
    uk, sums = uk[nz], sums[nz]
    M = IntMatrix(N ** 3, N * N)
    for k, v in zip(uk.tolist(), sums.tolist()):
        M.rows[k // (N * N)][k % (N * N)] = v
    # identical rows do not change the solution set
    seen = set()
    kept = []
    for r in M.rows:
        if r:
            key = tuple(sorted(r.items()))
            if key not in seen:
                seen.add(key)
                kept.append(r)
    return IntMatrix(len(kept), N * N, kept or [])


def gauge_matrix(X: Rack) -> IntMatrix:
    """Map ``gamma -> (gamma[j] - gamma[i|>j])_{i,j}``; one row per pair ``(i, j)``."""
    N = X.size
    M = IntMatrix(N * N, N)
    for i in range(N):
        for j in range(N):
            k = int(X.table[i, j])
            if k != j:
                M.rows[i * N + j] = {j: 1, k: -1}
    return M


def _kernel_count_log(divisors: list[int], nvars: int, p: int, k: int) -> int:
    """``log_p`` of the number of solutions of ``A x = 0`` in ``(Z/p^k)^nvars``."""
    out = k * (nvars - len(divisors))
    for d in divisors:
        v = 0
        while d % p == 0 and v < k:
            d //= p
            v += 1
        out += v
    return out


@dataclass(frozen=True)
class FiniteAbelian:
    """``prod Z/d_i`` with ``d_1 | d_2 | ...``."""

    invariants: tuple[int, ...]

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariants:
            out *= d
        return out

    def __str__(self) -> str:
        return " x ".join(f"Z/{d}" for d in self.invariants) or "0"


def _assemble(pparts: dict[int, list[int]]) -> FiniteAbelian:
    """Combine prime-power cyclic factors into invariant factors."""
    length = max((len(v) for v in pparts.values()), default=0)
    inv = [1] * length
    for p, exps in pparts.items():
        exps = sorted(exps)
        for i, e in enumerate(exps):
            inv[length - len(exps) + i] *= p ** e
    return FiniteAbelian(tuple(d for d in inv if d > 1))


@dataclass(frozen=True)
class CocycleSpace:
    rack_size: int
    m: int
    Z2: FiniteAbelian
    B2: FiniteAbelian
    H2: FiniteAbelian

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "Z2": list(self.Z2.invariants),
            "B2": list(self.B2.invariants),
            "H2": list(self.H2.invariants),
            "H2_order": self.H2.order,
        }


def _structure_from_logs(logs: list[int], p: int) -> list[int]:
    """Exponents of the cyclic p-factors from ``log_p |G[p^j]|`` for ``j = 0..k``.

    The number of factors of order at least ``p^j`` is ``logs[j] - logs[j-1]``.
    """
    at_least = [logs[j] - logs[j - 1] for j in range(1, len(logs))] + [0]
    out = []
    for j in range(1, len(logs)):
        out += [j] * (at_least[j - 1] - at_least[j])
    return out


def cocycle_space(X: Rack, m: int) -> CocycleSpace:
    """``Z^2``, ``B^2`` and ``H^2 = Z^2/B^2`` with values in ``Z/m``.

    Sizes come from the Smith forms of the cocycle-law system and of the gauge
    map; ``H^2(X, Z/p^j)`` counts for ``j <= k`` then pin down the ``p``-part.
    """
    if m < 1:
        raise ValueError("m must be positive")
    _check_cap(X)
    N = X.size
    if m == 1:
        z = FiniteAbelian(())
        return CocycleSpace(N, 1, z, z, z)
    A = smith_normal_form(cocycle_equations(X))
    G = smith_normal_form(gauge_matrix(X))
    zparts, bparts, hparts = {}, {}, {}
    for p, k in factorize(m).items():
        # Z^2 and B^2 are subgroups of (Z/p^k)^n, Hom(-, Z/p^j) counts give the structure
        zlogs = [_kernel_count_log(A, N * N, p, j) for j in range(k + 1)]
        # |B^2(Z/p^j)| = |Z/p^j|^N / |ker gauge|
        blogs = [j * N - _kernel_count_log(G, N, p, j) for j in range(k + 1)]
        hlogs = [a - b for a, b in zip(zlogs, blogs)]
        zparts[p] = _structure_from_logs(zlogs, p)
        bparts[p] = _structure_from_logs(_b_torsion_logs(G, N, p, k), p)
        hparts[p] = _structure_from_logs(hlogs, p)
    return CocycleSpace(N, m, _assemble(zparts), _assemble(bparts), _assemble(hparts))


def _b_torsion_logs(G: list[int], N: int, p: int, k: int) -> list[int]:
    """``log_p`` of the p^j-torsion of ``B^2(Z/p^k)``, the image of the gauge map."""
    # image of Z/p^k-module map with Smith divisors d_i: prod (Z/p^k)/(p^{v_i}) over nonzero rows
    exps = []
    for d in G:
        v = 0
        while d % p == 0 and v < k:
            d //= p
            v += 1
        if v < k:
            exps.append(k - v)
    return [sum(min(e, j) for e in exps) for j in range(k + 1)]


def h2_order_mod_p(X: Rack, p: int) -> int:
    """``|H^2(X, Z/p)|`` for prime ``p`` by elimination over GF(p) (no Smith form)."""
    _check_cap(X)
    N = X.size
    z_dim = N * N - sparse_rank_mod_p(cocycle_equations(X), p)
    b_dim = sparse_rank_mod_p(gauge_matrix(X), p)
    return p ** (z_dim - b_dim)


def representatives_mod_p(X: Rack, p: int) -> list[ScalarCocycle]:
    """Cocycles over ``Z/p`` whose classes form a basis of ``H^2(X, Z/p)``."""
    _check_cap(X)
    N = X.size
    A = np.array(cocycle_equations(X).to_dense(), dtype=np.int64) % p
    R, piv = rref_mod_p(A, p) if len(A) else (np.zeros((0, N * N), dtype=np.int64), [])
    free = [c for c in range(N * N) if c not in set(piv)]
    kernel = []
    for f in free:
        v = np.zeros(N * N, dtype=np.int64)
        v[f] = 1
        for row, c in zip(R, piv):
            v[c] = (-row[f]) % p
        kernel.append(v)
    gauge = np.zeros((N, N * N), dtype=np.int64)
    for i in range(N):
        for j in range(N):
            gauge[j, i * N + j] += 1
            gauge[int(X.table[i, j]), i * N + j] -= 1
    space = IncrementalRowSpace(N * N, p)
    space.add(gauge % p)
    out = []
    for v in kernel:
        before = space.rank
        space.add(v[None, :])
        if space.rank > before:
            out.append(ScalarCocycle(X, p, v.reshape(N, N)))
    return out


# -- gauge ---------------------------------------------------------------------------


def gauge_transform(q: ScalarCocycle, g: GaugeMap) -> ScalarCocycle:
    """``q~[i][j] = gamma[i|>j]^-1 q[i][j] gamma[j]``."""
    if g.m != q.m or len(g.gamma) != q.rack.size:
        raise CocycleError("gauge map does not match the cocycle")
    gam = np.array(g.gamma, dtype=np.int64)
    e = q.exponents - gam[q.rack.table] + gam[None, :]
    return ScalarCocycle(q.rack, q.m, e)


def are_gauge_equivalent(q: ScalarCocycle, q2: ScalarCocycle) -> GaugeMap | None:
    """A ``gamma`` with ``gauge_transform(q, gamma) == q2``, or ``None``.

    The equations ``gamma[i|>j] = gamma[j] + q[i][j] - q2[i][j]`` are solved by
    propagation along each inner orbit; the homogeneous solutions are the
    functions constant on orbits, so fixing ``gamma = 0`` at one point per
    orbit loses nothing and the answer is definitive.
    """
    if q.m != q2.m or not q.rack.same_table(q2.rack):
        raise CocycleError("cocycles live on different racks or root orders")
    X, m = q.rack, q.m
    N = X.size
    diff = (q.exponents - q2.exponents) % m
    gamma = [None] * N
    for orbit in orbit_decomposition(X):
        root = orbit[0]
        gamma[root] = 0
        queue = deque([root])
        while queue:
            j = queue.popleft()
            for i in range(N):
                k = int(X.table[i, j])
                val = (gamma[j] + diff[i, j]) % m
                if gamma[k] is None:
                    gamma[k] = val
                    queue.append(k)
                elif gamma[k] != val:
                    return None
    return GaugeMap(m, tuple(int(g) for g in gamma))


# -- special cocycles ----------------------------------------------------------------


def transposition_rack(m_sym: int) -> Rack:
    """``O^m_2``: the class of ``(0 1)`` in ``S_m``."""
    G = symmetric_group(m_sym)
    return from_conjugacy_class(G, Permutation.from_cycles("(0 1)", m_sym))


def chi_cocycle(m_sym: int, X: Rack | None = None) -> ScalarCocycle:
    """``chi(s, (i j)) = -1`` iff ``s(i) > s(j)`` (``i < j``), on the transpositions of ``S_m``."""
    if m_sym < 3:
        raise ValueError("need at least 3 points")
    X = X or transposition_rack(m_sym)
    perms = [Permutation.from_cycles(l, m_sym) for l in X.labels]
    e = np.zeros((X.size, X.size), dtype=np.int64)
    for a, s in enumerate(perms):
        for b, t in enumerate(perms):
            i, j = sorted(next(c for c in t.cycles() if len(c) == 2))
            e[a, b] = 1 if s(i) > s(j) else 0
    return ScalarCocycle(X, 2, e)


def diagonal_braiding(X: Rack, q: ScalarCocycle, S) -> np.ndarray:
    """Exponent matrix ``(q[i][j])`` on an abelian subrack ``S``."""
    S = list(S)
    for a in S:
        for b in S:
            if X.table[a, b] != b:
                raise CocycleError(f"elements {a} and {b} do not commute")
    return q.exponents[np.ix_(S, S)].copy()


def dual_cocycle(X: Rack, q: ScalarCocycle) -> tuple[Rack, ScalarCocycle]:
    """``(X^[-1], q^)`` with ``q^[x][y] = q[x][x|>^-1 y]``."""
    Xd = power_rack(X, -1)
    e = np.take_along_axis(q.exponents, X.inverse_table.astype(np.int64), axis=1)
    return Xd, ScalarCocycle(Xd, q.m, e)


# -- twisting ----------------------------------------------------------------------


def twist_condition(X: Rack, phi: np.ndarray, m: int) -> tuple[bool, tuple[int, int, int] | None]:
    """The eight-factor identity that makes ``q^phi`` a cocycle for every cocycle ``q``."""
    T = X.table
    f = np.asarray(phi, dtype=np.int64) % m
    x, y, z = _triples(X.size)
    yz = T[y, z]
    xyz = T[x, yz]
    xy, xz = T[x, y], T[x, z]
    lhs = f[x, z] + f[xy, xz] + f[xyz, x] + f[yz, y]
    rhs = f[y, z] + f[x, yz] + f[xyz, xy] + f[xz, x]
    bad = np.nonzero((lhs - rhs) % m)[0]
    if len(bad):
        k = bad[0]
        return False, (int(x[k]), int(y[k]), int(z[k]))
    return True, None


def twist(q: ScalarCocycle, phi: np.ndarray, m: int | None = None) -> ScalarCocycle:
    """``q^phi[x][y] = phi(x, y) phi(x|>y, x)^-1 q[x][y]``.

    ``phi`` has exponents modulo ``m`` (default ``q.m``); the result lives modulo
    ``lcm(m, q.m)``.
    """
    X = q.rack
    m = m or q.m
    ok, wit = twist_condition(X, phi, m)
    if not ok:
        raise CocycleError(f"twist condition fails at {wit}")
    from math import lcm

    L = lcm(m, q.m)
    f = np.asarray(phi, dtype=np.int64) * (L // m)
    e = q.exponents * (L // q.m)
    T = X.table
    idx = np.arange(X.size)
    e = e + f - f[T, idx[:, None]]
    return ScalarCocycle(X, L, e)


def sign_section_cocycle_S4() -> tuple[Rack, np.ndarray]:
    """A nontrivial sign-valued group 2-cocycle on ``S_4``, restricted to ``O^4_2``.

    ``PGL(2,3)`` acts on the 4 points of the projective line over GF(3) as
    ``S_4``; choosing one matrix in ``GL(2,3)`` above each permutation gives
    ``s(g) s(h) = +-s(gh)``, and the sign is a 2-cocycle with values in ``Z/2``.
    Returns the transposition rack of that ``S_4`` and ``phi`` as exponents mod 2.
    """
    F = gf_field(3)
    mats = []
    for a, b, c, d in iproduct(range(3), repeat=4):
        M = FqMatrix(2, 3, ((a, b), (c, d)))
        if M.det():
            mats.append(M)
    perms = matrix_group_to_perm(2, 3, mats, "projective")
    section: dict[Permutation, FqMatrix] = {}
    for M, g in zip(mats, perms):
        section.setdefault(g, M)  # lexicographically first lift
    neg = {M.entries: FqMatrix(2, 3, tuple(tuple(F.neg(a) for a in r) for r in M.entries)).entries for M in section.values()}
    G = symmetric_group(4)
    X = from_conjugacy_class(G, Permutation.from_cycles("(0 1)", 4))
    elems = [Permutation.from_cycles(l, 4) for l in X.labels]
    phi = np.zeros((X.size, X.size), dtype=np.int64)
    for a, g in enumerate(elems):
        for b, h in enumerate(elems):
            prod = (section[g] @ section[h]).entries
            gh = section[g * h].entries
            if prod == gh:
                phi[a, b] = 0
            elif prod == neg[gh]:
                phi[a, b] = 1
            else:
                raise AssertionError("section is not projective")
    return X, phi
