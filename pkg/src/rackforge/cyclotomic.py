"""Exact arithmetic in the cyclotomic field Q(zeta_m)."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


def _polydivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    out = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        coef = Fraction(a[-1]) / b[-1]
        shift = len(a) - len(b)
        out[shift] = coef
        for i, c in enumerate(b):
            a[shift + i] -= coef * c
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return out, a


def _trim(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, constant term first."""
    num = [Fraction(-1)] + [Fraction(0)] * (m - 1) + [Fraction(1)]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            num, rem = _polydivmod(num, list(map(Fraction, cyclotomic_polynomial(d))))
            assert not _trim(rem)
    return tuple(int(c) for c in _trim(num))


class CycScalar:
    """Element of Q(zeta_m) as a polynomial in zeta_m of degree < phi(m)."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs):
        self.m = m
        phi = cyclotomic_polynomial(m)
        c = [Fraction(x) for x in coeffs]
        if len(c) >= len(phi):
            _, c = _polydivmod(c, [Fraction(x) for x in phi])
        c = c + [Fraction(0)] * (len(phi) - 1 - len(c))
        self.coeffs = tuple(c)

    @classmethod
    def root(cls, m: int, k: int = 1) -> "CycScalar":
        """``zeta_m ** k``."""
        c = [0] * (k % m + 1)
        c[k % m] = 1
        return cls(m, c)

    @classmethod
    def from_int(cls, m: int, n) -> "CycScalar":
        return cls(m, [n])

    def _same(self, other) -> "CycScalar":
        if isinstance(other, CycScalar):
            if other.m != self.m:
                raise ValueError("different cyclotomic fields")
            return other
        return CycScalar(self.m, [other])

    def __add__(self, other):
        o = self._same(other)
        return CycScalar(self.m, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(self.m, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        o = self._same(other)
        prod = [Fraction(0)] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CycScalar(self.m, prod)

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0")
        # extended Euclid in Q[x] against Phi_m
        phi = [Fraction(x) for x in cyclotomic_polynomial(self.m)]
        r0, r1 = phi, _trim(self.coeffs)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or (r1 and False):
            qt, rem = _polydivmod(r0, r1)
            r0, r1 = r1, _trim(rem)
            s0, s1 = s1, _trim(_polysub(s0, _polymul(qt, s1)))
            if not r1:
                raise ZeroDivisionError("not invertible")
        c = r1[0]
        return CycScalar(self.m, [x / c for x in s1])

    def __truediv__(self, other):
        return self * self._same(other).inverse()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other) -> bool:
        try:
            o = self._same(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        return hash((self.m, self.coeffs))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        terms = [f"{c}*z^{i}" if i else f"{c}" for i, c in enumerate(self.coeffs) if c]
        return f"CycScalar({self.m}: {' + '.join(terms) or '0'})"


def _polymul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _polysub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def exact_rank(rows: list[list]) -> int:
    """Rank of a matrix whose entries are ``CycScalar`` or rationals."""
    M = [list(r) for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = 1 / M[rank][c] if not isinstance(M[rank][c], CycScalar) else M[rank][c].inverse()
        prow = [a * inv for a in M[rank]]
        M[rank] = prow
        for i in range(len(M)):
            if i != rank and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], prow)]
        rank += 1
    return rank
