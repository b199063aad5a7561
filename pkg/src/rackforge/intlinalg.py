"""Exact linear algebra over Z, Z/p and Z/p^k.

* :class:`IntMatrix` is a sparse integer matrix (one dict per row).
* :func:`smith_normal_form` first eliminates unit pivots sparsely (Markowitz
  style, shortest row first) and finishes the small remaining core with a
  dense Smith reduction on Python integers.
* :func:`rank_mod_p` / :func:`rref_mod_p` are numpy eliminations over a prime
  field; products stay below 2**63 as long as ``p < 2**31``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

import numpy as np


@dataclass
class IntMatrix:
    nrows: int
    ncols: int
    rows: list[dict[int, int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.rows:
            self.rows = [dict() for _ in range(self.nrows)]

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]]) -> "IntMatrix":
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        rows = [{j: int(v) for j, v in enumerate(r) if v} for r in data]
        return cls(nrows, ncols, rows or [dict() for _ in range(nrows)])

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out[i][j] = v
        return out

    def add(self, i: int, j: int, v: int) -> None:
        r = self.rows[i]
        w = r.get(j, 0) + v
        if w:
            r[j] = w
        else:
            r.pop(j, None)

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def transpose(self) -> "IntMatrix":
        t = IntMatrix(self.ncols, self.nrows)
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                t.rows[j][i] = v
        return t

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = IntMatrix(self.nrows, other.ncols)
        for i, r in enumerate(self.rows):
            acc: dict[int, int] = {}
            for k, v in r.items():
                for j, w in other.rows[k].items():
                    acc[j] = acc.get(j, 0) + v * w
            out.rows[i] = {j: v for j, v in acc.items() if v}
        return out

    def is_zero(self) -> bool:
        return all(not r for r in self.rows)


# -- Smith normal form ------------------------------------------------------


def _normalize_diagonal(diag: list[int]) -> list[int]:
    d = sorted(abs(x) for x in diag if x)
    # enforce d1 | d2 | ... by gcd/lcm exchanges
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            a, b = d[i], d[j]
            g = gcd(a, b)
            if g != a:
                d[i], d[j] = g, a // g * b
    return d


def _dense_snf_diagonal(A: list[list[int]]) -> list[int]:
    """Diagonal of a dense integer matrix after Smith reduction (unsorted)."""
    A = [row[:] for row in A if any(row)]
    diag = []
    while A:
        # drop zero columns lazily: find smallest nonzero entry
        best = None
        for i, row in enumerate(A):
            for j, v in enumerate(row):
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        A[0], A[pi] = A[pi], A[0]
        for row in A:
            row[0], row[pj] = row[pj], row[0]
        while True:
            p = A[0][0]
            done = True
            # clear column 0
            for i in range(1, len(A)):
                v = A[i][0]
                if v:
                    q = v // p
                    if q:
                        r0 = A[0]
                        A[i] = [a - q * b for a, b in zip(A[i], r0)]
                    if A[i][0]:
                        done = False
            # clear row 0
            r0 = A[0]
            for j in range(1, len(r0)):
                v = r0[j]
                if v:
                    q = v // p
                    if q:
                        for row in A:
                            row[j] -= q * row[0]
                    if r0[j]:
                        done = False
            if done:
                # divisibility of the rest by the pivot
                bad = next(((i, j) for i in range(1, len(A)) for j in range(1, len(A[0])) if A[i][j] % p), None)
                if bad is None:
                    break
                i = bad[0]
                A[0] = [a + b for a, b in zip(A[0], A[i])]
                continue
            # move the smallest remaining entry of row/column 0 to the corner
            best = (abs(p), 0, 0)
            for i in range(1, len(A)):
                if A[i][0] and abs(A[i][0]) < best[0]:
                    best = (abs(A[i][0]), i, 0)
            for j in range(1, len(A[0])):
                if A[0][j] and abs(A[0][j]) < best[0]:
                    best = (abs(A[0][j]), 0, j)
            _, bi, bj = best
            if bi:
                A[0], A[bi] = A[bi], A[0]
            if bj:
                for row in A:
                    row[0], row[bj] = row[bj], row[0]
        diag.append(abs(A[0][0]))
        A = [row[1:] for row in A[1:]]
        A = [row for row in A if any(row)]
        if A:
            keep = [j for j in range(len(A[0])) if any(row[j] for row in A)]
            A = [[row[j] for j in keep] for row in A]
    return diag


def smith_normal_form(M: IntMatrix | Sequence[Sequence[int]], transpose: bool = False) -> list[int]:
    """Nonzero elementary divisors ``d1 | d2 | ...`` of an integer matrix."""
    if not isinstance(M, IntMatrix):
        M = IntMatrix.from_dense(M)
    if transpose:
        M = M.transpose()
    rows = {i: dict(r) for i, r in enumerate(M.rows) if r}
    cols: dict[int, set[int]] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    units = 0
    heap = [(len(r), i) for i, r in rows.items()]
    heapq.heapify(heap)
    while heap:
        length, i = heapq.heappop(heap)
        r = rows.get(i)
        if r is None or len(r) != length:
            continue
        # unit entry whose column is shortest
        piv = None
        for j, v in r.items():
            if v == 1 or v == -1:
                c = len(cols[j])
                if piv is None or c < piv[0]:
                    piv = (c, j, v)
                    if c == 1:
                        break
        if piv is None:
            continue
        _, pj, pv = piv
        for k in list(cols[pj]):
            if k == i:
                continue
            rk = rows[k]
            f = rk[pj] * pv
            for j, v in r.items():
                w = rk.get(j, 0) - f * v
                if w:
                    if j not in rk:
                        cols[j].add(k)
                    rk[j] = w
                elif j in rk:
                    del rk[j]
                    cols[j].discard(k)
            if rk:
                heapq.heappush(heap, (len(rk), k))
            else:
                del rows[k]
        for j in r:
            cols[j].discard(i)
            if not cols[j]:
                del cols[j]
        del rows[i]
        units += 1
    core = [r for r in rows.values() if r]
    diag = [1] * units
    if core:
        used = sorted({j for r in core for j in r})
        pos = {j: k for k, j in enumerate(used)}
        dense = [[0] * len(used) for _ in core]
        for a, r in enumerate(core):
            for j, v in r.items():
                dense[a][pos[j]] = v
        if len(dense) > len(used):
            dense = [list(col) for col in zip(*dense)]
        diag += _dense_snf_diagonal(dense)
    return _normalize_diagonal(diag)


def smith_with_transforms(A: Sequence[Sequence[int]]):
    """Dense SNF with unimodular ``U, V`` such that ``U A V = D`` (small matrices)."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, r)) for r in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        D[dst] = [a + f * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for row in D:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return U, D, V


def solvable_mod(A: Sequence[Sequence[int]], b: Sequence[int], m: int) -> bool:
    """Does ``A x = b`` have a solution modulo ``m``?"""
    U, D, _ = smith_with_transforms(A)
    rows = len(A)
    ub = [sum(U[i][k] * b[k] for k in range(rows)) % m for i in range(rows)]
    for i in range(rows):
        d = D[i][i] if i < len(D[0]) else 0
        if ub[i] % gcd(d, m):
            return False
    return True


# -- prime fields -------------------------------------------------------------


def rref_mod_p(A: np.ndarray, p: int, copy: bool = True) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(p) and the pivot columns."""
    M = np.array(A, dtype=np.int64, copy=copy) % p
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if len(nz) == 0:
            continue
        k = r + nz[0]
        if k != r:
            M[[r, k]] = M[[k, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r] = M[r] * inv % p
        col = M[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if len(nzr):
            M[nzr] = (M[nzr] - np.outer(col[nzr], M[r])) % p
        pivots.append(c)
        r += 1
    return M[:r], pivots


def independent_rows_mod_p(A: np.ndarray, p: int) -> list[int]:
    """Indices of the lexicographically first maximal independent set of rows."""
    _, piv = rref_mod_p(np.asarray(A).T, p)
    return piv


def rank_mod_p(A: np.ndarray, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    if A.shape[0] < A.shape[1]:
        A = A.T
    return len(rref_mod_p(A.T if A.shape[1] > A.shape[0] else A, p)[1])


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """``A @ B mod p`` without int64 overflow for ``p < 2**31``."""
    A = np.asarray(A, dtype=np.int64) % p
    B = np.asarray(B, dtype=np.int64) % p
    if p < 2**20 and A.shape[1] < 2**20:
        return (A @ B) % p
    lo = A & 0xFFFF
    hi = A >> 16
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    step = 1 << 14
    for s in range(0, A.shape[1], step):
        Bs = B[s:s + step]
        part_lo = (lo[:, s:s + step] @ Bs) % p
        part_hi = (hi[:, s:s + step] @ Bs) % p
        out = (out + part_lo + (part_hi * 65536) % p) % p
    return out


def inverse_mod_p(A: np.ndarray, p: int) -> np.ndarray:
    n = A.shape[0]
    aug = np.concatenate([np.asarray(A, dtype=np.int64) % p, np.eye(n, dtype=np.int64)], axis=1)
    R, piv = rref_mod_p(aug, p, copy=False)
    if piv[:n] != list(range(n)) or len(piv) < n or (len(piv) > n and piv[n - 1] != n - 1):
        raise ValueError("matrix is singular mod p")
    return R[:, n:]


class IncrementalRowSpace:
    """Row space over GF(p) grown in chunks; keeps an RREF basis.

    Suited to tall systems (many more equations than unknowns): each chunk is
    reduced against the current basis with one matrix product.
    """

    def __init__(self, ncols: int, p: int):
        self.ncols = ncols
        self.p = p
        self.basis = np.zeros((0, ncols), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, chunk: np.ndarray) -> None:
        p = self.p
        C = np.asarray(chunk, dtype=np.int64) % p
        if len(C) == 0:
            return
        if self.pivots:
            C = (C - matmul_mod(C[:, self.pivots], self.basis, p)) % p
        C = C[np.any(C, axis=1)]
        if len(C) == 0:
            return
        R, piv = rref_mod_p(C, p, copy=False)
        if not piv:
            return
        if self.pivots:
            self.basis = (self.basis - matmul_mod(self.basis[:, piv], R, p)) % p
        basis = np.concatenate([self.basis, R])
        pivots = self.pivots + piv
        order = np.argsort(pivots, kind="stable")
        self.basis = basis[order]
        self.pivots = [pivots[k] for k in order]


# -- chain rings Z/p^k ----------------------------------------------------------


def _valuation(a: int, p: int, k: int) -> int:
    if a == 0:
        return k
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def smith_valuations_mod_prime_power(A: Sequence[Sequence[int]], p: int, k: int) -> list[int]:
    """Valuations of the Smith diagonal of ``A`` over ``Z/p^k`` (entries < k only)."""
    mod = p ** k
    M = [[int(a) % mod for a in row] for row in A]
    M = [r for r in M if any(r)]
    out = []
    while M:
        best = None
        for i, row in enumerate(M):
            for j, a in enumerate(row):
                if a:
                    v = _valuation(a, p, k)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        M[0], M[i] = M[i], M[0]
        piv = M[0][j]
        unit = piv // p ** v
        uinv = pow(unit, -1, mod)
        M[0] = [a * uinv % mod for a in M[0]]
        # the pivot is now p^v; every entry has valuation >= v
        new = []
        for row in M[1:]:
            a = row[j]
            if a:
                f = a // p ** v
                row = [(x - f * y) % mod for x, y in zip(row, M[0])]
            new.append(row)
        # column operations clear the pivot row; drop pivot column
        out.append(v)
        M = [[x for jj, x in enumerate(r) if jj != j] for r in new]
        M = [r for r in M if any(r)]
    return out


def count_solutions_mod(A: Sequence[Sequence[int]], nvars: int, m: int) -> int:
    """Number of ``x`` in ``(Z/m)^nvars`` with ``A x = 0`` (dense, small systems)."""
    total = 1
    for p, k in factorize(m).items():
        vals = smith_valuations_mod_prime_power(A, p, k)
        total *= p ** (sum(vals) + k * (nvars - len(vals)))
    return total


def factorize(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def sparse_rank_mod_p(M: IntMatrix, p: int) -> int:
    """Rank over GF(p) of a sparse integer matrix (Markowitz-style pivoting)."""
    rows = {}
    for i, r in enumerate(M.rows):
        rr = {j: v % p for j, v in r.items() if v % p}
        if rr:
            rows[i] = rr
    cols: dict[int, set[int]] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    rank = 0
    heap = [(len(r), i) for i, r in rows.items()]
    heapq.heapify(heap)
    while heap:
        length, i = heapq.heappop(heap)
        r = rows.get(i)
        if r is None or len(r) != length:
            continue
        pj = min(r, key=lambda j: len(cols[j]))
        inv = pow(r[pj], p - 2, p)
        for k in list(cols[pj]):
            if k == i:
                continue
            rk = rows[k]
            f = rk[pj] * inv % p
            for j, v in r.items():
                w = (rk.get(j, 0) - f * v) % p
                if w:
                    if j not in rk:
                        cols[j].add(k)
                    rk[j] = w
                elif j in rk:
                    del rk[j]
                    cols[j].discard(k)
            if rk:
                heapq.heappush(heap, (len(rk), k))
            else:
                del rows[k]
        for j in r:
            cols[j].discard(i)
        del rows[i]
        rank += 1
    return rank
