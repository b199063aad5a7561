"""Twisted homogeneous racks ``C_l`` of class ``(L, t, theta)``.

``u(l1, .., lt) = (theta(lt), l1, .., l_{t-1})`` on ``L^t`` and ``C_l`` is the
twisted class of ``(e, .., e, l)``.  For ``L`` acting on ``n`` points and
``theta`` conjugation by ``c``, let ``U`` on ``n t`` points shift block ``i``
to block ``i+1`` and send the last block to block 0 through ``c``.  Then
``U g U^-1 = u(g)``, so ``y -> yU`` turns ``x |-> x y u(x)^-1`` into plain
conjugation and ``y |>_u z`` into ``yU zU (yU)^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

import numpy as np

from .caps import CapExceeded, get_caps
from .perms import GroupAutomorphism, PermGroup, Permutation, automorphism_from_conjugator, conjugation_orbit
from .racks import Rack, orbit_decomposition, validate
from .typed import Status, TypeDVerdict, is_type_D_class, is_type_D_rack, quasi_real_types, verify_rack_witness


@dataclass(frozen=True)
class THRSpec:
    L: PermGroup
    t: int
    ell: Permutation
    theta_conjugator: Permutation | None = None

    def __post_init__(self):
        if self.t < 2:
            raise ValueError("t must be at least 2")
        if self.ell.degree != self.L.degree:
            raise ValueError("ell has the wrong degree")

    @property
    def theta_is_identity(self) -> bool:
        c = self.theta_conjugator
        if c is None or c.is_identity():
            return True
        # conjugation by an element of L is inner, but only the identity map counts as trivial here
        return all(c * g == g * c for g in self.L.generators)

    @property
    def theta(self) -> GroupAutomorphism:
        if self.theta_conjugator is None:
            return GroupAutomorphism.identity(self.L)
        return automorphism_from_conjugator(self.L, self.theta_conjugator)

    def apply_theta(self, g: Permutation) -> Permutation:
        c = self.theta_conjugator
        return g if c is None else c * g * c.inverse()


# -- tuples and the wreath realization ----------------------------------------------


def normalize_representative(xs: Sequence[Permutation]) -> Permutation:
    """``l = x_t x_{t-1} .. x_1`` (product ``gh`` is ``g`` after ``h``)."""
    out = xs[0]
    for x in xs[1:]:
        out = x * out
    return out


def _embed(xs: Sequence[Permutation], n: int) -> list[int]:
    img = []
    for i, x in enumerate(xs):
        img += [i * n + x(p) for p in range(n)]
    return img


def _shift(spec: THRSpec) -> Permutation:
    n, t = spec.L.degree, spec.t
    c = spec.theta_conjugator or Permutation.identity(n)
    img = []
    for i in range(t):
        if i < t - 1:
            img += [(i + 1) * n + p for p in range(n)]
        else:
            img += [c(p) for p in range(n)]
    return Permutation(img)


def to_wreath(spec: THRSpec, xs: Sequence[Permutation]) -> Permutation:
    if len(xs) != spec.t:
        raise ValueError("tuple length must equal t")
    return Permutation(_embed(xs, spec.L.degree)) * _shift(spec)


def from_wreath(spec: THRSpec, w: Permutation) -> tuple[Permutation, ...]:
    n = spec.L.degree
    y = w * _shift(spec).inverse()
    return tuple(Permutation([y(i * n + p) - i * n for p in range(n)]) for i in range(spec.t))


def _block_generators(spec: THRSpec) -> list[Permutation]:
    n, t = spec.L.degree, spec.t
    e = Permutation.identity(n)
    gens = []
    for i in range(t):
        for g in spec.L.generators:
            xs = [e] * t
            xs[i] = g
            gens.append(Permutation(_embed(xs, n)))
    return gens


def seed_tuple(spec: THRSpec) -> tuple[Permutation, ...]:
    e = Permutation.identity(spec.L.degree)
    return (e,) * (spec.t - 1) + (spec.ell,)


def twisted_class_size_in_L(spec: THRSpec) -> int:
    c = spec.theta_conjugator or Permutation.identity(spec.L.degree)
    return len(conjugation_orbit(spec.L.generators, spec.ell * c))


def thr_size(spec: THRSpec) -> int:
    return spec.L.order ** (spec.t - 1) * twisted_class_size_in_L(spec)


def thr_elements(spec: THRSpec, seed: Sequence[Permutation] | None = None, cap: int | None = None) -> list[Permutation]:
    """Wreath images of ``C_l`` in canonical (sorted) order."""
    size = thr_size(spec)
    cap = cap if cap is not None else get_caps().group_elements
    if size > cap:
        raise CapExceeded(f"THR of size {size} exceeds the cap {cap}")
    x0 = to_wreath(spec, seed if seed is not None else seed_tuple(spec))
    orbit = conjugation_orbit(_block_generators(spec), x0, cap)
    return sorted(orbit, key=lambda w: w.images)


def _label(xs: Sequence[Permutation]) -> str:
    return "[" + "; ".join(str(x) for x in xs) + "]"


def build_thr(spec: THRSpec, seed: Sequence[Permutation] | None = None) -> Rack:
    """Dense rack on ``C_l``; elements sorted by their wreath images."""
    size = thr_size(spec)
    cap = get_caps().rack_size
    if size > cap:
        raise CapExceeded(f"THR of size {size} exceeds rack_size={cap}")
    elems = thr_elements(spec, seed)
    E = np.array([w.images for w in elems], dtype=np.int64)
    K, D = E.shape
    Einv = np.empty_like(E)
    rows = np.arange(K)[:, None]
    Einv[rows, E] = np.arange(D)[None, :]
    rng = np.random.default_rng(0)
    weights = rng.integers(1, 2**62, size=D, dtype=np.int64)
    keys = (E * weights).sum(axis=1)
    order = np.argsort(keys)
    skeys = keys[order]
    table = np.empty((K, K), dtype=np.int32)
    for a in range(K):
        # a b a^-1 for every b
        R = E[a][E[:, Einv[a]]]
        pos = np.searchsorted(skeys, (R * weights).sum(axis=1))
        idx = order[np.minimum(pos, K - 1)]
        if not np.array_equal(E[idx], R):
            raise AssertionError("orbit is not closed under the rack operation")
        table[a] = idx
    labels = [_label(from_wreath(spec, w)) for w in elems]
    theta = "id" if spec.theta_conjugator is None else str(spec.theta_conjugator)
    prov = f"thr(t={spec.t},theta={theta},ell={spec.ell})"
    return validate(table, labels=labels, provenance=prov)


# -- the functional operation ------------------------------------------------------


def op_u(spec: THRSpec, y: Sequence[Permutation], z: Sequence[Permutation]) -> tuple[Permutation, ...]:
    """``y |>_u z = y u(z y^-1)`` componentwise."""
    zy = [a * b.inverse() for a, b in zip(z, y)]
    uzy = [spec.apply_theta(zy[-1])] + zy[:-1]
    return tuple(a * b for a, b in zip(y, uzy))


def _orbit_u(spec: THRSpec, gens, start) -> set:
    seen = {tuple(g.images for g in start)}
    queue = [tuple(start)]
    while queue:
        y = queue.pop()
        for g in gens:
            z = op_u(spec, g, y)
            key = tuple(p.images for p in z)
            if key not in seen:
                seen.add(key)
                queue.append(z)
    return seen


def verify_thr_witness(spec: THRSpec, r: Sequence[Permutation], s: Sequence[Permutation]) -> bool:
    """Recheck a witness with ``|>_u`` only: the inequality and disjoint orbits."""
    r, s = tuple(r), tuple(s)
    chain = op_u(spec, r, op_u(spec, s, op_u(spec, r, s)))
    if chain == s:
        return False
    return not (_orbit_u(spec, [r, s], r) & _orbit_u(spec, [r, s], s))


# -- criteria ----------------------------------------------------------------------


def _odd_prime_divisor(n: int) -> int | None:
    while n % 2 == 0:
        n //= 2
    return n if n > 1 else None


# L = A5, A6 with t = 2 and l = e; rechecked by an exhaustive scan before being reported
KNOWN_NEGATIVES = {(60, 5, 2), (360, 6, 2)}


def thr_criteria(spec: THRSpec, recheck_negatives: bool = True) -> TypeDVerdict:
    """Rule-based verdict for ``theta = id``; ``INCONCLUSIVE`` when no rule applies."""
    if not spec.theta_is_identity:
        return TypeDVerdict(Status.INCONCLUSIVE, "thr_rules", notes=["rules only cover theta = id"])
    L, t, ell = spec.L, spec.t, spec.ell
    order = ell.order()
    if not ell.is_identity():
        js = quasi_real_types(L, ell)
        for j in sorted(js):
            if t >= 3 or (2 * (1 - j)) % order != 0:
                return TypeDVerdict(Status.TYPE_D, "quasi_real", {"j": j})
        if order == 2 and t > 4 and t % 2 == 0:
            return TypeDVerdict(Status.TYPE_D, "involution_even_t")
        if order == 2 and t % 2 == 1:
            inner = is_type_D_class(L, ell)
            if inner.is_type_D:
                return TypeDVerdict(Status.TYPE_D, "involution_odd_t", {"class_witness": inner.witness})
        return TypeDVerdict(Status.INCONCLUSIVE, "thr_rules")
    g = gcd(t, L.order)
    p = _odd_prime_divisor(g)
    if p is not None:
        return TypeDVerdict(Status.TYPE_D, "odd_prime", {"gcd": g})
    if g % 2 == 0 and t >= 6:
        return TypeDVerdict(Status.TYPE_D, "even_gcd", {"gcd": g})
    if (L.order, L.degree, t) in KNOWN_NEGATIVES:
        if recheck_negatives:
            v = is_type_D_rack(build_thr(spec))
            if v.status is Status.NOT_TYPE_D:
                return TypeDVerdict(Status.NOT_TYPE_D, "checked_negative")
            return TypeDVerdict(Status.INCONCLUSIVE, "checked_negative", notes=["recheck disagrees"])
        return TypeDVerdict(Status.NOT_TYPE_D, "checked_negative", notes=["not rechecked"])
    return TypeDVerdict(Status.INCONCLUSIVE, "thr_rules")


def generic_thr_check(spec: THRSpec, jobs: int = 1) -> TypeDVerdict:
    """Generic search on ``C_l``: the dense rack scan when it fits, else the orbit scan
    on the wreath realization; witnesses are rechecked with ``|>_u``."""
    size = thr_size(spec)
    if size <= get_caps().rack_size:
        X = build_thr(spec)
        v = is_type_D_rack(X)
        if v.is_type_D:
            assert verify_rack_witness(X, v.witness["r"], v.witness["s"])
            v.witness["r_label"] = X.label(v.witness["r"])
            v.witness["s_label"] = X.label(v.witness["s"])
        return v
    elems = thr_elements(spec)
    # start from the seed so that r is the canonical representative
    x0 = to_wreath(spec, seed_tuple(spec))
    k0 = next(i for i, w in enumerate(elems) if w == x0)
    ordered = [elems[k0]] + elems[:k0] + elems[k0 + 1:]
    v = is_type_D_class(None, x0, jobs=jobs, cls=ordered)
    v.method = "wreath_orbit_scan"
    if v.is_type_D:
        r = from_wreath(spec, ordered[0])
        s = from_wreath(spec, ordered[v.witness["s"]])
        if not verify_thr_witness(spec, r, s):
            return TypeDVerdict(Status.INCONCLUSIVE, "wreath_orbit_scan", notes=["witness failed the |>_u recheck"])
        v.witness["r_label"] = _label(r)
        v.witness["s_label"] = _label(s)
    return v
