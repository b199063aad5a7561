"""Rack homology with integer coefficients.

Differential on ``Z[X^n]``::

    d(x1..xn) = sum_{i=2}^{n} (-1)^i [ (x1..^xi..xn) - (xi|>x1, .., xi|>x_{i-1}, x_{i+1}, .., xn) ]

with ``d_1 = 0``.  Tuples are indexed lexicographically (``x1`` most significant).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .caps import CapExceeded, get_caps
from .intlinalg import IntMatrix, smith_normal_form
from .racks import Rack


@dataclass(frozen=True)
class HomologyResult:
    degree: int
    betti: int
    torsion: tuple[int, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {"degree": self.degree, "betti": self.betti, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = ["Z" if self.betti == 1 else f"Z^{self.betti}"] if self.betti else []
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"


def _check_size(X: Rack, n: int) -> None:
    caps = get_caps()
    if X.size > caps.homology_rack_size:
        raise CapExceeded(f"rack of size {X.size} exceeds homology_rack_size={caps.homology_rack_size}")
    if X.size ** n > caps.homology_chains:
        raise CapExceeded(f"{X.size}^{n} chains exceed homology_chains={caps.homology_chains}")


def _boundary_entries(X: Rack, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(domain index, codomain index, coefficient) triples of d_n, duplicates merged."""
    N = X.size
    T = X.table.astype(np.int64)
    tuples = np.indices((N,) * n).reshape(n, -1).T  # lexicographic order
    src = np.arange(N ** n, dtype=np.int64)
    weights = N ** np.arange(n - 2, -1, -1, dtype=np.int64)
    keys, vals = [], []
    for i in range(1, n):  # 0-based position of x_{i+1}
        sign = 1 if (i + 1) % 2 == 0 else -1
        keep = np.delete(tuples, i, axis=1)
        moved = keep.copy()
        moved[:, :i] = T[tuples[:, i:i + 1], tuples[:, :i]]
        keys += [src * N ** (n - 1) + keep @ weights, src * N ** (n - 1) + moved @ weights]
        vals += [np.full(len(src), sign), np.full(len(src), -sign)]
    keys = np.concatenate(keys)
    vals = np.concatenate(vals)
    uk, inv = np.unique(keys, return_inverse=True)
    sums = np.bincount(inv, weights=vals).astype(np.int64)
    nz = sums != 0
    uk, sums = uk[nz], sums[nz]
    return uk // N ** (n - 1), uk % N ** (n - 1), sums


def boundary_matrix(X: Rack, n: int, transpose: bool = False) -> IntMatrix:
    """Matrix of ``d_n`` (rows: ``X^(n-1)``, columns: ``X^n``); ``transpose`` gives one row per chain."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    _check_size(X, n)
    N = X.size
    if n == 1:
        M = IntMatrix(1, N)
        return M.transpose() if transpose else M
    dom, cod, coef = _boundary_entries(X, n)
    if transpose:
        M = IntMatrix(N ** n, N ** (n - 1))
        for a, b, c in zip(dom.tolist(), cod.tolist(), coef.tolist()):
            M.rows[a][b] = c
    else:
        M = IntMatrix(N ** (n - 1), N ** n)
        for a, b, c in zip(dom.tolist(), cod.tolist(), coef.tolist()):
            M.rows[b][a] = c
    return M


def _divisors(X: Rack, n: int) -> list[int]:
    if n == 1:
        return []
    return smith_normal_form(boundary_matrix(X, n, transpose=True))


def rack_homology(X: Rack, n: int) -> HomologyResult:
    """``H_n(X, Z)`` as free rank plus torsion divisors."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    _check_size(X, n + 1)
    rank_n = len(_divisors(X, n))
    div_next = _divisors(X, n + 1)
    betti = X.size ** n - rank_n - len(div_next)
    return HomologyResult(n, betti, tuple(d for d in div_next if d > 1))


@dataclass(frozen=True)
class DualGroup:
    """Finite abelian group ``(Z/m)^free x prod Z/d`` from ``Hom(H_2, Z/m)``."""

    m: int
    free: int
    torsion: tuple[int, ...]

    @property
    def order(self) -> int:
        out = self.m ** self.free
        for d in self.torsion:
            out *= d
        return out

    def to_json(self) -> dict:
        return {"m": self.m, "free_rank": self.free, "torsion": list(self.torsion), "order": self.order}


def h2_dual(H2: HomologyResult, m: int) -> DualGroup:
    """``Hom(H_2, Z/m)``, read as cocycles with values in m-th roots of unity."""
    if m < 1:
        raise ValueError("m must be positive")
    tors = tuple(g for g in (gcd(d, m) for d in H2.torsion) if g > 1)
    return DualGroup(m, H2.betti if m > 1 else 0, tors)


def torsion_dual_label(H2: HomologyResult) -> str:
    """Symbolic ``H^2(X, C^x)``: one ``C^x`` per free summand times ``G_d`` per torsion divisor."""
    parts = ["C^x"] * H2.betti + [f"G{d}" for d in H2.torsion]
    return " x ".join(parts) or "1"
