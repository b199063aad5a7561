"""Hilbert series of Nichols algebras of braided vector spaces ``(CX, c^q)``.

``c^q(e_x (x) e_y) = q[x][y] e_{x|>y} (x) e_x``.  Two engines:

* the quantum symmetrizer ``Q_n``, a sum of Matsumoto lifts over ``S_n``
  (definitional, small ``n`` only);
* an incremental engine realizing ``B_n`` inside ``CX (x) B_{n-1}`` through
  the joint derivation map ``b |-> (d_y b)_y``, which is injective in positive
  degree.  It uses ``d_y(e_x b) = delta_{xy} b + q[x][z] e_x d_z(b)`` with
  ``z = x |>^-1 y``.

The incremental engine and the quadratic cover work in ``GF(P)`` for a prime
``P = 1 mod m`` below ``2**31``; the symmetrizer rank is exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .caps import CapExceeded, get_caps
from .cocycles import CocycleError, ScalarCocycle, is_cocycle, twist
from .cyclotomic import CycScalar, exact_rank
from .intlinalg import IntMatrix, factorize, inverse_mod_p, matmul_mod, rref_mod_p, smith_normal_form
from .racks import Rack


# -- scalars -----------------------------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def modulus_for(m: int, below: int = 2**31) -> int:
    """Largest prime ``P < below`` with ``P = 1 mod m``."""
    P = below - 1
    P -= (P - 1) % m
    while not _is_prime(P):
        P -= m
    return P


@lru_cache(maxsize=None)
def root_of_unity_mod(m: int, P: int) -> int:
    """A primitive ``m``-th root of unity in ``GF(P)``."""
    if (P - 1) % m:
        raise ValueError(f"GF({P}) has no primitive {m}-th root of unity")
    primes = list(factorize(m)) if m > 1 else []
    for g in range(2, P):
        z = pow(g, (P - 1) // m, P)
        if all(pow(z, m // p, P) != 1 for p in primes):
            return z
    raise AssertionError("unreachable")


# -- braided spaces ----------------------------------------------------------------


class BraidError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BraidedSpace:
    rack: Rack
    q: ScalarCocycle

    def __post_init__(self):
        if self.q.rack.size != self.rack.size:
            raise CocycleError("cocycle does not match the rack")
        ok, wit = braid_equation_holds(self.rack, self.q)
        if not ok:
            raise BraidError(f"braid equation fails at {wit}")

    @property
    def dim(self) -> int:
        return self.rack.size

    @property
    def m(self) -> int:
        return self.q.m

    def mod_values(self, P: int) -> np.ndarray:
        """``q[x][y]`` as residues mod ``P``."""
        z = root_of_unity_mod(self.m, P)
        powers = np.array([pow(z, k, P) for k in range(self.m)], dtype=np.int64)
        return powers[self.q.exponents]

    def exact_value(self, e: int):
        e %= self.m
        if self.m <= 2:
            return -1 if e else 1
        return CycScalar.root(self.m, e)


def braid_equation_holds(X: Rack, q: ScalarCocycle) -> tuple[bool, tuple[int, int, int] | None]:
    """``(c (x) id)(id (x) c)(c (x) id) = (id (x) c)(c (x) id)(id (x) c)`` on every basis triple."""
    T = X.table.astype(np.int64)
    e = q.exponents
    N = X.size
    x, y, z = (a.ravel() for a in np.meshgrid(np.arange(N), np.arange(N), np.arange(N), indexing="ij"))
    xy, xz, yz = T[x, y], T[x, z], T[y, z]
    lhs_word = (T[xy, xz], xy, x)
    lhs_exp = e[x, y] + e[x, z] + e[xy, xz]
    rhs_word = (T[x, yz], xy, x)
    rhs_exp = e[y, z] + e[x, yz] + e[x, y]
    bad = (lhs_word[0] != rhs_word[0]) | ((lhs_exp - rhs_exp) % q.m != 0)
    idx = np.nonzero(bad)[0]
    if len(idx):
        k = idx[0]
        return False, (int(x[k]), int(y[k]), int(z[k]))
    return True, None


def braided_space(X: Rack, q: ScalarCocycle | str | int = "const:-1") -> BraidedSpace:
    """Convenience constructor; ``q`` may be a cocycle, ``"const:-1"`` or ``"const:1"``."""
    if isinstance(q, ScalarCocycle):
        return BraidedSpace(X, q)
    if q in ("const:-1", -1):
        return BraidedSpace(X, ScalarCocycle.constant(X, 2))
    if q in ("const:1", 1):
        return BraidedSpace(X, ScalarCocycle.constant(X, 1, 0))
    raise ValueError(f"unknown cocycle shorthand {q!r}")


def braiding(V: BraidedSpace, P: int | None = None) -> np.ndarray:
    """Matrix of ``c`` on ``CX (x) CX`` (basis ``x*N + y``, columns are sources).

    Entries are integers for ``m <= 2``, otherwise residues mod ``P``.
    """
    N = V.dim
    if V.m <= 2 and P is None:
        vals = np.where(V.q.exponents % 2 == 1, -1, 1).astype(np.int64)
    else:
        P = P or modulus_for(V.m)
        vals = V.mod_values(P)
    T = V.rack.table
    C = np.zeros((N * N, N * N), dtype=np.int64)
    for x in range(N):
        for y in range(N):
            C[int(T[x, y]) * N + x, x * N + y] = vals[x, y]
    return C


# -- the quantum symmetrizer -------------------------------------------------------


@lru_cache(maxsize=None)
def reduced_words(n: int) -> dict[tuple[int, ...], tuple[int, ...]]:
    """A reduced word in ``s_0 .. s_{n-2}`` for every permutation of ``n`` letters (BFS)."""
    ident = tuple(range(n))
    words = {ident: ()}
    queue = deque([ident])
    while queue:
        p = queue.popleft()
        for i in range(n - 1):
            nxt = list(p)
            nxt[i], nxt[i + 1] = nxt[i + 1], nxt[i]  # p * s_i
            nxt = tuple(nxt)
            if nxt not in words:
                words[nxt] = words[p] + (i,)
                queue.append(nxt)
    return words


def _words(N: int, n: int) -> np.ndarray:
    idx = np.arange(N ** n)
    return np.stack([(idx // N ** (n - 1 - i)) % N for i in range(n)], axis=1)


def _lift_action(V: BraidedSpace, word: tuple[int, ...], n: int) -> tuple[np.ndarray, np.ndarray]:
    """Target indices and scalar exponents of ``rho_n(M(sigma))`` on every basis word."""
    N = V.dim
    T = V.rack.table.astype(np.int64)
    W = _words(N, n)
    exp = np.zeros(len(W), dtype=np.int64)
    # M(s_i1 .. s_ik) = sigma_i1 .. sigma_ik: the rightmost factor acts first
    for i in reversed(word):
        a, b = W[:, i].copy(), W[:, i + 1].copy()
        exp += V.q.exponents[a, b]
        W[:, i] = T[a, b]
        W[:, i + 1] = a
    target = np.zeros(len(W), dtype=np.int64)
    for i in range(n):
        target = target * N + W[:, i]
    return target, exp % V.m


def _check_oracle(V: BraidedSpace, n: int) -> None:
    cap = get_caps().symmetrizer_dim
    if V.dim ** n > cap:
        raise CapExceeded(f"symmetrizer on dimension {V.dim ** n} exceeds {cap}")


def symmetrizer(V: BraidedSpace, n: int, P: int | None = None) -> np.ndarray:
    """``Q_n = sum over S_n of rho_n(M(sigma))`` as a dense matrix.

    Integer entries when ``m <= 2`` and ``P`` is None, otherwise residues mod ``P``.
    """
    _check_oracle(V, n)
    D = V.dim ** n
    exact = V.m <= 2 and P is None
    if not exact:
        P = P or modulus_for(V.m)
        z = root_of_unity_mod(V.m, P)
        powers = np.array([pow(z, k, P) for k in range(V.m)], dtype=np.int64)
    Q = np.zeros((D, D), dtype=np.int64)
    src = np.arange(D)
    for word in reduced_words(n).values():
        tgt, exp = _lift_action(V, word, n)
        vals = np.where(exp == 1, -1, 1) if exact else powers[exp]
        np.add.at(Q, (tgt, src), vals)
    return Q if exact else Q % P


def _symmetrizer_sparse_exact(V: BraidedSpace, n: int) -> list[dict]:
    D = V.dim ** n
    cols: list[dict] = [dict() for _ in range(D)]
    for word in reduced_words(n).values():
        tgt, exp = _lift_action(V, word, n)
        for s, (t, e) in enumerate(zip(tgt.tolist(), exp.tolist())):
            cols[s][t] = cols[s].get(t, 0) + V.exact_value(e)
    return cols


def symmetrizer_rank(V: BraidedSpace, n: int, exact: bool = True) -> int:
    """``dim B_n`` as the rank of ``Q_n``.

    Exact over ``Q(zeta_m)``: an integer Smith form for ``m <= 2``, cyclotomic
    elimination otherwise.  ``exact=False`` ranks modulo a large prime.
    """
    _check_oracle(V, n)
    if n == 0:
        return 1
    if not exact:
        P = modulus_for(V.m)
        _, piv = rref_mod_p(symmetrizer(V, n, P), P, copy=False)
        return len(piv)
    cols = _symmetrizer_sparse_exact(V, n)
    D = V.dim ** n
    if V.m <= 2:
        # each column is a row of Q_n^T; the rank is the same
        rows = [{t: v for t, v in c.items() if v} for c in cols]
        M = IntMatrix(D, D, rows)
        return sum(1 for d in smith_normal_form(M) if d)
    dense = [[c.get(t, CycScalar.from_int(V.m, 0)) for t in range(D)] for c in cols]
    return exact_rank(dense)


# -- the incremental engine ----------------------------------------------------------


@dataclass
class GradedComponent:
    """``B_n`` with basis ``e_x b_k`` (``b_k`` in ``B_{n-1}``) listed in ``basis``.

    ``derivations`` has shape ``(dim, N * dim_{n-1})``: row ``i`` holds
    ``(d_y b_i)_y`` in the basis of ``B_{n-1}``.  ``left_mult[x]`` has shape
    ``(dim_{n-1}, dim)`` and sends the coordinates of ``b`` to those of ``e_x b``.
    """

    degree: int
    dim: int
    basis: list[tuple[int, int]]
    derivations: np.ndarray
    left_mult: np.ndarray
    prime: int

    def derivation(self, y: int) -> np.ndarray:
        """Matrix of ``d_y``: rows are basis elements of ``B_n``."""
        prev = self.derivations.shape[1] // max(1, self.left_mult.shape[0])
        return self.derivations[:, y * prev:(y + 1) * prev]


def first_component(V: BraidedSpace, P: int | None = None) -> GradedComponent:
    """``B_1 = CX`` with ``d_y(e_x) = delta_{xy}``."""
    P = P or modulus_for(V.m)
    N = V.dim
    eye = np.eye(N, dtype=np.int64)
    return GradedComponent(1, N, [(x, 0) for x in range(N)], eye.copy(), eye.reshape(N, 1, N), P)


def _candidate_matrix(V: BraidedSpace, prev: GradedComponent, qv: np.ndarray) -> np.ndarray:
    N, P = V.dim, prev.prime
    d, dp = prev.dim, prev.derivations.shape[1] // N
    Tinv = V.rack.inverse_table.astype(np.int64)
    stacked = prev.derivations.reshape(d * N, dp)
    C = np.zeros((N * d, N * d), dtype=np.int64)
    for x in range(N):
        # rows k, blocks z: e_x d_z(b_k)
        M = matmul_mod(stacked, prev.left_mult[x], P).reshape(d, N, d)
        z = Tinv[x]
        block = M[:, z, :] * qv[x, z][None, :, None] % P
        block[:, x, :] = (block[:, x, :] + np.eye(d, dtype=np.int64)) % P
        C[x * d:(x + 1) * d] = block.reshape(d, N * d)
    return C


def derivation_step(V: BraidedSpace, prev: GradedComponent) -> GradedComponent:
    """``B_{n+1}`` from ``B_n``: the image of ``e_x b_k`` under the joint derivation.

    Candidates ``e_x b_k`` are scanned in ``(x, k)`` order and the first
    independent ones form the basis.
    """
    N, P = V.dim, prev.prime
    d = prev.dim
    if prev.left_mult.shape != (N, prev.derivations.shape[1] // N, d):
        raise ValueError("inconsistent previous component")
    if d == 0:
        empty = np.zeros((0, 0), dtype=np.int64)
        return GradedComponent(prev.degree + 1, 0, [], empty, np.zeros((N, 0, 0), dtype=np.int64), P)
    qv = V.mod_values(P)
    C = _candidate_matrix(V, prev, qv)
    # first independent rows: pivot columns of C^T
    _, rows = rref_mod_p(C.T, P, copy=True)
    B = C[rows]
    R, pc = rref_mod_p(B, P, copy=True)
    if len(pc) != len(rows):
        raise AssertionError("joint derivation map is not injective on the chosen basis")
    alpha = matmul_mod(C[:, pc], inverse_mod_p(B[:, pc], P), P)
    left = alpha.reshape(N, d, len(rows))
    basis = [divmod(r, d) for r in rows]
    return GradedComponent(prev.degree + 1, len(rows), basis, B, left, P)


@dataclass
class NicholsReport:
    dims: list[int]
    finite: bool
    truncated: bool = False
    quadratic_cover: list[int] | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def total(self) -> int | None:
        return sum(self.dims) if self.finite else None

    @property
    def top(self) -> int | None:
        if not self.finite:
            return None
        return max(i for i, d in enumerate(self.dims) if d)

    @property
    def relations_degree2(self) -> int | None:
        if len(self.dims) < 3:
            return None
        return self.dims[1] ** 2 - self.dims[2]

    def to_json(self) -> dict:
        out = {"dims": list(self.dims), "finite": self.finite, "total": self.total, "top": self.top}
        if self.truncated:
            out["truncated"] = True
        if self.quadratic_cover is not None:
            out["quadratic_cover"] = list(self.quadratic_cover)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def hilbert_series(V: BraidedSpace, max_degree: int | None = None, P: int | None = None) -> NicholsReport:
    """Dimensions of ``B_0, B_1, ..`` until a zero component or ``max_degree``."""
    caps = get_caps()
    max_degree = caps.nichols_max_degree if max_degree is None else max_degree
    if max_degree > caps.nichols_max_degree:
        raise CapExceeded(f"degree {max_degree} exceeds nichols_max_degree={caps.nichols_max_degree}")
    dims = [1]
    if max_degree == 0:
        return NicholsReport(dims, False, truncated=True)
    comp = first_component(V, P)
    dims.append(comp.dim)
    while comp.degree < max_degree:
        if V.dim * comp.dim > caps.nichols_degree_dim:
            return NicholsReport(dims, False, truncated=True,
                                 notes=[f"degree {comp.degree + 1} candidates exceed nichols_degree_dim={caps.nichols_degree_dim}"])
        comp = derivation_step(V, comp)
        if comp.dim == 0:
            # generated in degree 1, so every later component vanishes too
            assert derivation_step(V, comp).dim == 0
            return NicholsReport(dims, True)
        dims.append(comp.dim)
    return NicholsReport(dims, False, truncated=True)


def components(V: BraidedSpace, max_degree: int, P: int | None = None) -> list[GradedComponent]:
    """``B_1 .. B_max_degree`` with their derivation data."""
    out = [first_component(V, P)]
    while out[-1].degree < max_degree and out[-1].dim:
        out.append(derivation_step(V, out[-1]))
    return out


# -- the quadratic cover ---------------------------------------------------------------


def _nullspace_mod_p(A: np.ndarray, P: int) -> np.ndarray:
    R, piv = rref_mod_p(A, P)
    n = A.shape[1]
    free = [j for j in range(n) if j not in set(piv)]
    K = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        K[i, f] = 1
        for r, pcol in enumerate(piv):
            K[i, pcol] = (-R[r, f]) % P
    return K


def quadratic_relations(V: BraidedSpace, P: int | None = None) -> np.ndarray:
    """A basis of ``ker Q_2 = ker(id + c)`` (rows, basis ``x*N + y``)."""
    P = P or modulus_for(V.m)
    N = V.dim
    Q2 = (np.eye(N * N, dtype=np.int64) + braiding(V, P)) % P
    return _nullspace_mod_p(Q2, P)


def quadratic_cover_dims(V: BraidedSpace, max_degree: int, P: int | None = None) -> list[int]:
    """Dimensions of ``T(V) / <ker Q_2>`` in degrees ``0..max_degree``.

    ``A_k = (A_{k-1} (x) V) / image of A_{k-2} (x) ker Q_2``; ``proj`` maps
    ``A_{k-2} (x) V`` onto ``A_{k-1}``.
    """
    P = P or modulus_for(V.m)
    N = V.dim
    cap = get_caps().nichols_degree_dim
    dims = [1, N][:max_degree + 1]
    if max_degree < 2:
        return dims
    Rel = quadratic_relations(V, P)
    nr = len(Rel)
    Rv = Rel.reshape(nr, N, N)  # [r, u, v]
    Rflat = Rv.transpose(0, 2, 1).reshape(nr * N, N)  # [(r, v), u]
    proj = np.eye(N, dtype=np.int64)  # A_0 (x) V -> A_1
    for k in range(2, max_degree + 1):
        d2, d1 = dims[k - 2], dims[k - 1]
        if d1 * N > cap:
            raise CapExceeded(f"quadratic cover degree {k} exceeds nichols_degree_dim={cap}")
        P3 = proj.reshape(d2, N, d1)
        blocks = []
        for a in range(d2):
            E = matmul_mod(Rflat, P3[a], P).reshape(nr, N, d1)  # [r, v, b]
            blocks.append(E.transpose(0, 2, 1).reshape(nr, d1 * N))
        rel = np.concatenate(blocks) if blocks else np.zeros((0, d1 * N), dtype=np.int64)
        R, piv = rref_mod_p(rel, P, copy=False)
        n = d1 * N
        pivset = set(piv)
        nonpiv = [j for j in range(n) if j not in pivset]
        red = np.eye(n, dtype=np.int64)
        if piv:
            red[piv] = (red[piv] - R) % P
        proj = red[:, nonpiv]
        dims.append(len(nonpiv))
        if not nonpiv:
            dims += [0] * (max_degree - k)
            break
    return dims


def first_excess_degree(V: BraidedSpace, report: NicholsReport, max_degree: int | None = None) -> int | None:
    """First degree where the quadratic cover is bigger than ``B(V)``."""
    top = max_degree if max_degree is not None else len(report.dims)
    cover = quadratic_cover_dims(V, top)
    dims = report.dims + [0] * (top + 1 - len(report.dims))
    report.quadratic_cover = cover
    for k, (a, b) in enumerate(zip(cover, dims)):
        if a > b:
            return k
    return None


# -- twisting ---------------------------------------------------------------------------


def poincare_twist_check(V: BraidedSpace, phi: np.ndarray, m: int | None = None, max_degree: int = 6) -> bool:
    """``B(X, q)`` and ``B(X, q^phi)`` have the same dimensions up to ``max_degree``."""
    W = BraidedSpace(V.rack, twist(V.q, phi, m))
    assert is_cocycle(W.q)[0]
    a = hilbert_series(V, max_degree).dims
    b = hilbert_series(W, max_degree).dims
    return a == b
