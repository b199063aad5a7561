"""Type-D decisions for racks and conjugacy classes.

A rack is of type D when some subrack ``<<{r, s}>>`` splits into two inner
orbits, one containing ``r`` and the other ``s``, with
``r |> (s |> (r |> s)) != s``.  Inside a group the inequality is
``(rs)^2 != (sr)^2`` and ``<<{r, s}>>`` is the union of the classes of ``r``
and ``s`` in ``H = <r, s>``.
"""

from __future__ import annotations

import multiprocessing
import os
from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Sequence

from .caps import CapExceeded
from .perms import (
    EnumerationOverflow,
    NotInGroup,
    PermGroup,
    Permutation,
    centralizer,
    conjugacy_class,
    conjugation_orbit,
)
from .racks import Rack, is_indecomposable, orbit_decomposition, orbit_under, subrack_closure


class Status(str, Enum):
    TYPE_D = "TYPE_D"
    NOT_TYPE_D = "NOT_TYPE_D"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class TypeDVerdict:
    status: Status
    method: str
    witness: dict | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def is_type_D(self) -> bool:
        return self.status is Status.TYPE_D

    def to_json(self) -> dict:
        out = {"status": self.status.value, "witness": self.witness, "method": self.method}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


# -- racks ----------------------------------------------------------------------


def condition_pair(X: Rack, r: int, s: int) -> bool:
    """``r |> (s |> (r |> s)) != s``."""
    T = X.table
    return int(T[r, T[s, T[r, s]]]) != s


def _pair_witness(X: Rack, r: int, s: int) -> dict | None:
    if not condition_pair(X, r, s):
        return None
    orbit_r = orbit_under(X, [r, s], r)
    if s in orbit_r:
        return None
    orbit_s = orbit_under(X, [r, s], s)
    return {"r": r, "s": s, "closure_size": len(orbit_r) + len(orbit_s), "orbit_sizes": [len(orbit_r), len(orbit_s)]}


def is_type_D_rack(X: Rack) -> TypeDVerdict:
    """Exhaustive pair scan; only ``r = 0`` is needed when ``X`` is indecomposable."""
    rs = [0] if is_indecomposable(X) else range(X.size)
    for r in rs:
        for s in range(X.size):
            w = _pair_witness(X, r, s)
            if w is not None:
                return TypeDVerdict(Status.TYPE_D, "rack_scan", w)
    return TypeDVerdict(Status.NOT_TYPE_D, "rack_scan")


def verify_rack_witness(X: Rack, r: int, s: int) -> bool:
    """Recheck from scratch: closure by iteration, orbit split, and the inequality."""
    if not condition_pair(X, r, s):
        return False
    Y = subrack_closure(X, [r, s])
    orbits = orbit_decomposition(X, Y.members)
    which = {x: k for k, orb in enumerate(orbits) for x in orb}
    if which[r] == which[s]:
        return False
    R = set(next(o for o in orbits if r in o))
    S = set(Y.members) - R
    T = X.table
    # both parts must be subracks
    for part in (R, S):
        for a in part:
            for b in part:
                if int(T[a, b]) not in part:
                    return False
    return True


# -- groups -----------------------------------------------------------------------


def _sq(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """``(p q)^2`` as an image tuple (``p q`` means ``p`` after ``q``)."""
    pq = tuple(p[q[i]] for i in range(len(p)))
    return tuple(pq[pq[i]] for i in range(len(p)))


def _class_pair(r: Permutation, s: Permutation, cap: int | None) -> dict | None | str:
    ri, si = r.images, s.images
    if _sq(ri, si) == _sq(si, ri):
        return None
    try:
        orbit_r = conjugation_orbit([r, s], r, cap)
        seen = {g.images for g in orbit_r}
        if si in seen:
            return None
        orbit_s = conjugation_orbit([r, s], s, cap)
    except EnumerationOverflow:
        return "skipped"
    return {"closure_size": len(orbit_r) + len(orbit_s), "orbit_sizes": [len(orbit_r), len(orbit_s)]}


def _scan_block(args) -> tuple[int | None, dict | None, int]:
    """Scan ``block`` (class elements from index ``lo`` on) for the first witness."""
    r, block, lo, cap = args
    skipped = 0
    for k, s in enumerate(block, lo):
        res = _class_pair(r, s, cap)
        if res == "skipped":
            skipped += 1
        elif res is not None:
            return k, res, skipped
    return None, None, skipped


def _blocks(r: Permutation, cls: list[Permutation], cap: int | None):
    """Contiguous blocks of doubling size (16 up to 1024)."""
    lo, step = 0, 16
    while lo < len(cls):
        yield r, cls[lo:lo + step], lo, cap
        lo += step
        step = min(2 * step, 1024)


def is_type_D_class(G: PermGroup, x: Permutation, jobs: int = 1, orbit_cap: int | None = None,
                    cls: Sequence[Permutation] | None = None) -> TypeDVerdict:
    """The group algorithm with ``r = x`` fixed; witnesses are class indices (BFS order).

    With ``jobs > 1`` the scan is split into contiguous blocks run in worker
    processes; the lowest-index witness is reported, so the result does not
    depend on ``jobs``.
    """
    if cls is None:
        cls = conjugacy_class(G, x)
    cls = list(cls)
    r = cls[0]
    n = len(cls)
    if jobs > 1 and n > 64:
        skipped, hit = 0, None
        # ordered results, so the first hit is the lowest index; terminate() drops later blocks
        with multiprocessing.Pool(jobs) as pool:
            for k, w, sk in pool.imap(_scan_block, _blocks(r, cls, orbit_cap)):
                skipped += sk
                if k is not None:
                    hit = (k, w)
                    break
            pool.terminate()
    else:
        k, w, skipped = _scan_block((r, cls, 0, orbit_cap))
        hit = (k, w) if k is not None else None
    if hit is not None:
        k, w = hit
        witness = {"r": 0, "s": k, "r_perm": str(r), "s_perm": str(cls[k]), **w}
        return TypeDVerdict(Status.TYPE_D, "algorithm", witness)
    if skipped:
        return TypeDVerdict(Status.INCONCLUSIVE, "algorithm", notes=[f"{skipped} pairs skipped at the orbit cap"])
    return TypeDVerdict(Status.NOT_TYPE_D, "algorithm")


def verify_class_witness(r: Permutation, s: Permutation) -> bool:
    """Recheck a group witness: the square test, then disjoint ``<r,s>``-classes."""
    if _sq(r.images, s.images) == _sq(s.images, r.images):
        return False
    orbit_r = {g.images for g in conjugation_orbit([r, s], r)}
    orbit_s = {g.images for g in conjugation_orbit([r, s], s)}
    return not (orbit_r & orbit_s)


def default_jobs() -> int:
    return max(1, min(8, os.cpu_count() or 1))


# -- auxiliary criteria -------------------------------------------------------------


def quasi_real_types(G: PermGroup, g: Permutation) -> set[int]:
    """All ``j`` in ``2..ord(g)-1`` with ``g^j != g`` and ``g^j`` conjugate to ``g``."""
    if g not in G:
        raise NotInGroup(f"{g} is not in the group")
    n = g.order()
    if n <= 2:
        return set()
    cls = {h.images for h in conjugacy_class(G, g)}
    out = set()
    for j in range(2, n):
        h = g ** j
        if h != g and h.images in cls:
            out.add(j)
    return out


def jordan_criterion(G: PermGroup, tau: Permutation, kappa: Permutation) -> TypeDVerdict:
    """Type D for the class of ``g = tau kappa`` from commuting parts of coprime orders.

    Hypotheses: the class of ``g`` in ``G`` and of ``tau`` in ``K = C_G(kappa)``
    are quasi-real of a common type ``j``, ``gcd(ord tau, ord kappa) = 1``,
    ``ord kappa`` does not divide ``j - 1``, and some pair of the ``K``-class
    of ``tau`` satisfies the inequality.  The witness ``(r0 kappa, (s0 kappa)^j)``
    is rechecked with the group test.
    """
    if tau.is_identity() or kappa.is_identity():
        raise ValueError("tau and kappa must be nontrivial")
    if tau * kappa != kappa * tau:
        raise ValueError("tau and kappa do not commute")
    g = tau * kappa
    N, M = tau.order(), kappa.order()
    notes = []
    if gcd(N, M) != 1:
        return TypeDVerdict(Status.INCONCLUSIVE, "jordan", notes=["orders are not coprime"])
    K = centralizer(G, kappa)
    common = quasi_real_types(G, g) & quasi_real_types(K, tau)
    js = sorted(j for j in common if (j - 1) % M != 0)
    if not js:
        return TypeDVerdict(Status.INCONCLUSIVE, "jordan", notes=["no common quasi-real type j with M not dividing j-1"])
    O = conjugacy_class(K, tau)
    for j in js:
        for r0 in O:
            for s0 in O:
                if _sq(r0.images, s0.images) == _sq(s0.images, r0.images):
                    continue
                r = r0 * kappa
                s = (s0 * kappa) ** j
                if verify_class_witness(r, s):
                    orbit_r = conjugation_orbit([r, s], r)
                    orbit_s = conjugation_orbit([r, s], s)
                    w = {"r_perm": str(r), "s_perm": str(s), "j": j,
                         "closure_size": len(orbit_r) + len(orbit_s), "orbit_sizes": [len(orbit_r), len(orbit_s)]}
                    return TypeDVerdict(Status.TYPE_D, "jordan", w)
                notes.append(f"j={j}: constructed pair did not recheck")
                break
            else:
                continue
            break
    return TypeDVerdict(Status.INCONCLUSIVE, "jordan", notes=notes or ["hypothesis (4) fails"])


def subrack_lift_check(G: PermGroup, K: PermGroup, kappa: Permutation, tau: Permutation) -> TypeDVerdict:
    """Lift type D from the ``K``-class of ``tau`` to the ``G``-class of ``tau kappa``."""
    for k in K.generators:
        if k * kappa != kappa * k:
            raise ValueError("kappa does not centralize K")
    if tau not in K:
        raise NotInGroup("tau is not in K")
    O = conjugacy_class(K, tau)
    # g -> g kappa must be an injective rack morphism on O
    lifted = [a * kappa for a in O]
    if len({h.images for h in lifted}) != len(O):
        return TypeDVerdict(Status.INCONCLUSIVE, "subrack_lift", notes=["lift is not injective"])
    for a, la in zip(O, lifted):
        for b, lb in zip(O, lifted):
            if (a * b * a.inverse()) * kappa != la * lb * la.inverse():
                return TypeDVerdict(Status.INCONCLUSIVE, "subrack_lift", notes=["lift is not a rack morphism"])
    inner = is_type_D_class(K, tau, cls=O)
    if not inner.is_type_D:
        return TypeDVerdict(Status.INCONCLUSIVE, "subrack_lift", notes=[f"K-class verdict {inner.status.value}"])
    r = O[0] * kappa
    s = O[inner.witness["s"]] * kappa
    if not verify_class_witness(r, s):
        return TypeDVerdict(Status.INCONCLUSIVE, "subrack_lift", notes=["lifted witness did not recheck"])
    w = dict(inner.witness)
    w.update({"r_perm": str(r), "s_perm": str(s)})
    return TypeDVerdict(Status.TYPE_D, "subrack_lift", w)


def is_type_M(X: Rack) -> bool:
    """Every ``<<{r, s}>>`` is indecomposable or equals ``{r, s}``."""
    if not is_indecomposable(X):
        raise ValueError("type M is defined for indecomposable racks")
    r = 0  # indecomposable racks are homogeneous
    for s in range(X.size):
        members = set(orbit_under(X, [r, s], r)) | set(orbit_under(X, [r, s], s))
        if members == {r, s}:
            continue
        if len(orbit_decomposition(X, sorted(members))) != 1:
            return False
    return True
