"""Small finite fields and permutation realizations of matrix groups.

Elements of GF(p^k) are encoded as integers ``0 <= a < q`` whose base-``p``
digits (least significant first) are the coefficients of a polynomial in the
generator of a fixed Conway polynomial.  Prime fields are plain residues.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Sequence

from .caps import CapExceeded, get_caps
from .perms import Permutation

# Conway polynomials, coefficients from degree 0 upwards (monic, leading 1 implied).
CONWAY = {
    4: (2, (1, 1)),
    8: (2, (1, 1, 0)),
    9: (3, (2, 2)),
    16: (2, (1, 1, 0, 0)),
    25: (5, (2, 4)),
    27: (3, (1, 2, 0)),
    32: (2, (1, 0, 1, 0, 0)),
    49: (7, (3, 6)),
}


class UnsupportedField(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class GF:
    def __init__(self, q: int):
        if _is_prime(q):
            self.p, self.k = q, 1
            self.modulus: tuple[int, ...] = ()
        elif q in CONWAY:
            self.p, self.modulus = CONWAY[q]
            self.k = len(self.modulus)
        else:
            raise UnsupportedField(f"GF({q}) is not supported")
        self.q = q
        if self.k > 1:
            self._build_tables()

    def _to_poly(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _from_poly(self, c: Sequence[int]) -> int:
        a = 0
        for coef in reversed(c):
            a = a * self.p + coef % self.p
        return a

    def _build_tables(self) -> None:
        p, k, q = self.p, self.k, self.q
        polys = [self._to_poly(a) for a in range(q)]
        self._add = [[self._from_poly([x + y for x, y in zip(polys[a], polys[b])]) for b in range(q)] for a in range(q)]
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                prod = [0] * (2 * k - 1)
                for i, x in enumerate(polys[a]):
                    if x:
                        for j, y in enumerate(polys[b]):
                            prod[i + j] += x * y
                # reduce with x^k = -(modulus)
                for deg in range(2 * k - 2, k - 1, -1):
                    c = prod[deg] % p
                    if c:
                        prod[deg] = 0
                        for i, m in enumerate(self.modulus):
                            prod[deg - k + i] -= c * m
                mul[a][b] = mul[b][a] = self._from_poly(prod[:k])
        self._mul = mul
        self._neg = [self._from_poly([-c for c in polys[a]]) for a in range(q)]
        self._inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    self._inv[a] = b
                    break

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q if self.k == 1 else self._add[a][b]

    def neg(self, a: int) -> int:
        return (-a) % self.q if self.k == 1 else self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.q if self.k == 1 else self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.q - 2, self.q) if self.k == 1 else self._inv[a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` in the prime subfield."""
        return n % self.p

    def mult_order(self, a: int) -> int:
        x, k = a, 1
        while x != 1:
            x = self.mul(x, a)
            k += 1
        return k

    def primitive_element(self) -> int:
        """Smallest element (in integer encoding) generating the multiplicative group."""
        for a in range(1, self.q):
            if self.mult_order(a) == self.q - 1:
                return a
        raise AssertionError("no primitive element")


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)


@dataclass(frozen=True)
class FqMatrix:
    n: int
    q: int
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, q: int, rows: Sequence[Sequence[int]]) -> "FqMatrix":
        F = field(q)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        # integer entries are read as field-element encodings when 0 <= a < q,
        # otherwise (negative) as prime-subfield integers
        ent = tuple(tuple(a if 0 <= a < q else F.from_int(a) for a in r) for r in rows)
        return cls(n, q, ent)

    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        F = field(self.q)
        n = self.n
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = 0
                for k in range(n):
                    acc = F.add(acc, F.mul(self.entries[i][k], other.entries[k][j]))
                row.append(acc)
            rows.append(tuple(row))
        return FqMatrix(n, self.q, tuple(rows))

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        F = field(self.q)
        out = []
        for row in self.entries:
            acc = 0
            for a, b in zip(row, v):
                if a and b:
                    acc = F.add(acc, F.mul(a, b))
            out.append(acc)
        return tuple(out)

    def det(self) -> int:
        F = field(self.q)
        m = [list(r) for r in self.entries]
        n = self.n
        d = 1
        for c in range(n):
            piv = next((r for r in range(c, n) if m[r][c]), None)
            if piv is None:
                return 0
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                d = F.neg(d)
            d = F.mul(d, m[c][c])
            inv = F.inv(m[c][c])
            for r in range(c + 1, n):
                if m[r][c]:
                    f = F.mul(m[r][c], inv)
                    m[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[r], m[c])]
        return d


def _points(n: int, q: int, action: str) -> list[tuple[int, ...]]:
    vecs = [v for v in product(range(q), repeat=n) if any(v)]
    if action == "vectors":
        return vecs
    if action == "projective":
        return [v for v in vecs if v[next(i for i, a in enumerate(v) if a)] == 1]
    raise ValueError(f"unknown action {action!r}")


def _normalize(F: GF, v: tuple[int, ...]) -> tuple[int, ...]:
    lead = next(a for a in v if a)
    inv = F.inv(lead)
    return tuple(F.mul(inv, a) for a in v)


def matrix_group_to_perm(n: int, q: int, gens: Sequence[FqMatrix], action: str = "vectors") -> list[Permutation]:
    """Permutations induced on nonzero vectors or projective points.

    Points are listed lexicographically by coordinate tuple; for the
    projective action each point is represented by the vector whose first
    nonzero coordinate is 1.
    """
    npoints = (q ** n - 1) if action == "vectors" else (q ** n - 1) // (q - 1)
    if npoints > get_caps().field_points:
        raise CapExceeded(f"{npoints} points exceed the field_points cap")
    F = field(q)
    pts = _points(n, q, action)
    index = {v: i for i, v in enumerate(pts)}
    perms = []
    for M in gens:
        if M.n != n or M.q != q:
            raise ValueError("matrix shape or field mismatch")
        if M.det() == 0:
            raise SingularMatrix("singular generator")
        imgs = []
        for v in pts:
            w = M.apply(v)
            if action == "projective":
                w = _normalize(F, w)
            imgs.append(index[w])
        perms.append(Permutation(imgs))
    return perms
