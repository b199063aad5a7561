"""JSON formats for groups, racks, cocycles and THR specs."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

import numpy as np

from .catalog import named_group
from .cocycles import ScalarCocycle, chi_cocycle
from .fields import FqMatrix, matrix_group_to_perm
from .perms import PermGroup, Permutation, generate
from .racks import Rack
from .thr import THRSpec

SCHEMA = "rackforge.report/1"


def dumps(obj: Any) -> str:
    """Canonical text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_json(path: str | Path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def digest(obj: Any) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def _resolve(data: Any, base: Path | None) -> Any:
    """Inline objects pass through; strings are paths (relative to ``base``) or group names."""
    if isinstance(data, str) and data.endswith(".json"):
        p = Path(data)
        if base is not None and not p.is_absolute():
            p = base / p
        return read_json(p)
    return data


def group_from_json(data: Any, base: Path | None = None) -> PermGroup:
    data = _resolve(data, base)
    if isinstance(data, str):
        return named_group(data)
    if "name" in data:
        return named_group(data["name"])
    if "degree" in data:
        n = int(data["degree"])
        return generate([Permutation.from_cycles(g, n) for g in data["generators"]], degree=n)
    if "q" in data:
        n, q = int(data["n"]), int(data["q"])
        mats = [FqMatrix.from_rows(q, g) for g in data["generators"]]
        return generate(matrix_group_to_perm(n, q, mats, data.get("action", "vectors")))
    raise ValueError("unrecognized group description")


def load_group(path: str | Path) -> PermGroup:
    """A group file, or a name such as ``S5`` when no such file exists."""
    p = Path(path)
    if p.exists():
        return group_from_json(read_json(p), p.parent)
    return named_group(str(path))


def rack_from_json(data: Any, base: Path | None = None) -> Rack:
    return Rack.from_json(_resolve(data, base))


def load_rack(path: str | Path) -> Rack:
    return Rack.from_json(read_json(path))


def cocycle_from_json(data: Any, base: Path | None = None, rack: Rack | None = None) -> ScalarCocycle:
    data = _resolve(data, base)
    X = rack if rack is not None else rack_from_json(data["rack"], base)
    return ScalarCocycle(X, int(data["m"]), np.array(data["exponents"], dtype=np.int64))


def parse_cocycle(spec: str, X: Rack) -> ScalarCocycle:
    """``const:-1``, ``const:1``, ``const:<k>/<m>`` (``zeta_m^k``), ``chi`` or a cocycle file."""
    if spec in ("const:-1", "-1"):
        return ScalarCocycle.constant(X, 2)
    if spec in ("const:1", "1"):
        return ScalarCocycle.constant(X, 1, 0)
    if spec.startswith("const:") and "/" in spec:
        k, m = spec[len("const:"):].split("/")
        return ScalarCocycle.constant(X, int(m), int(k))
    if spec == "chi":
        labels = X.labels or []
        if not labels:
            raise ValueError("chi needs a transposition rack with permutation labels")
        degree = 1 + max(int(t) for lab in labels for t in lab.replace("(", " ").replace(")", " ").split())
        return chi_cocycle(max(degree, 3), X)
    p = Path(spec)
    if p.exists():
        return cocycle_from_json(read_json(p), p.parent, rack=X)
    raise ValueError(f"unknown cocycle {spec!r}")


def thr_from_json(data: Any, base: Path | None = None) -> THRSpec:
    data = _resolve(data, base)
    L = group_from_json(data["L"], base)
    n = L.degree
    ell = data.get("ell", "e")
    ell = Permutation.identity(n) if ell in ("e", "", "()") else Permutation.from_cycles(ell, n)
    theta = data.get("theta", "id")
    conj = None if theta in ("id", None) else Permutation.from_cycles(theta["conjugator"], n)
    return THRSpec(L, int(data["t"]), ell, conj)
