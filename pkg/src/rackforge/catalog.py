"""Named groups, class representatives and the known exception lists."""

from __future__ import annotations

import re
from typing import Iterator

from .fields import FqMatrix, field as gf_field, matrix_group_to_perm
from .perms import (
    PermGroup,
    Permutation,
    alternating_group,
    conjugacy_class,
    cycle_type,
    format_cycle_type,
    generate,
    mathieu_m11,
    symmetric_group,
)


def psl2(q: int) -> PermGroup:
    """``PSL(2, q)`` acting on the projective line."""
    F = gf_field(q)
    xi = F.primitive_element()
    gens = [
        FqMatrix.from_rows(q, [[1, 1], [0, 1]]),
        FqMatrix.from_rows(q, [[1, xi], [0, 1]]),
        FqMatrix.from_rows(q, [[0, F.neg(1)], [1, 0]]),
    ]
    return generate(matrix_group_to_perm(2, q, gens, "projective"))


def named_group(name: str) -> PermGroup:
    """``S<n>``, ``A<n>``, ``M11`` or ``PSL(2,q)``."""
    key = name.replace(" ", "")
    if m := re.fullmatch(r"S(\d+)", key):
        return symmetric_group(int(m.group(1)))
    if m := re.fullmatch(r"A(\d+)", key):
        return alternating_group(int(m.group(1)))
    if key == "M11":
        return mathieu_m11()
    if m := re.fullmatch(r"PSL\(2,(\d+)\)", key):
        return psl2(int(m.group(1)))
    raise ValueError(f"unknown group name {name!r}")


def partitions(n: int, largest: int | None = None) -> Iterator[list[int]]:
    largest = largest or n
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield [k] + rest


def partition_representative(parts: list[int], m: int) -> Permutation:
    """Consecutive cycles ``(0 .. k-1)(k ..)`` of the given lengths."""
    text, i = "", 0
    for k in parts:
        if k > 1:
            text += "(" + " ".join(str(j) for j in range(i, i + k)) + ")"
        i += k
    return Permutation.from_cycles(text, m)


def type_label(x: Permutation) -> str:
    return format_cycle_type(cycle_type(x))


def _is_prime(p: int) -> bool:
    return p > 1 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def in_symmetric_exceptions(ct: dict[int, int]) -> bool:
    """Odd classes of ``S_m`` not known to be of type D: ``(2,3)``, ``(2^3)``, ``(1^n,2)``."""
    if ct == {2: 1, 3: 1} or ct == {2: 3}:
        return True
    return ct.get(2) == 1 and set(ct) <= {1, 2}


def in_alternating_exceptions(ct: dict[int, int]) -> bool:
    """Classes of ``A_m`` not known to be of type D."""
    listed = [{3: 2}, {2: 2, 3: 1}, {2: 4}, {1: 2, 2: 2}, {1: 1, 2: 2}]
    if ct in listed:
        return True
    if ct.get(3) == 1 and set(ct) <= {1, 3}:
        return True  # (1^n, 3)
    big = [k for k in ct if k > 1]
    if len(big) == 1 and ct[big[0]] == 1 and _is_prime(big[0]) and ct.get(1, 0) <= 1:
        return True  # (p) and (1, p)
    return False


def symmetric_sweep(m: int) -> list[tuple[str, str, Permutation, bool]]:
    """Nontrivial classes as the type-D theorems treat them.

    Odd ``sigma`` is taken in ``S_m`` and even ``sigma`` in ``A_m``.  Entries are
    ``(group name, type label, representative, listed as an exception)``.
    """
    out = []
    for parts in partitions(m):
        x = partition_representative(parts, m)
        if x.is_identity():
            continue
        ct = cycle_type(x)
        if x.sign() == -1:
            out.append((f"S{m}", type_label(x), x, in_symmetric_exceptions(ct)))
        else:
            out.append((f"A{m}", type_label(x), x, in_alternating_exceptions(ct)))
    return out


def class_representatives(G: PermGroup) -> list[tuple[str, Permutation, int]]:
    """Nontrivial classes named by element order and a letter.

    Classes of equal order are lettered by increasing size, then by the
    smallest image tuple in the class; this can differ from other naming
    schemes when two classes have equal size.
    """
    seen: set = set()
    found = []
    for g in G.elements():
        if g.images in seen or g.is_identity():
            continue
        cls = conjugacy_class(G, g)
        seen |= {h.images for h in cls}
        rep = min(cls, key=lambda h: h.images)
        found.append((g.order(), len(cls), rep))
    found.sort(key=lambda t: (t[0], t[1], t[2].images))
    out, count = [], {}
    for order, size, rep in found:
        k = count.get(order, 0)
        count[order] = k + 1
        out.append((f"{order}{chr(ord('A') + k)}", rep, size))
    return out
