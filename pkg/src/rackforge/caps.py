"""Size caps shared by all modules.

Defaults can be overridden with the ``RACKFORGE_CAPS`` environment variable,
a JSON object such as ``{"rack_size": 8192, "nichols_degree_dim": 50000}``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace


class CapExceeded(RuntimeError):
    """A configured size cap was hit; the computation was not attempted."""


@dataclass(frozen=True)
class Caps:
    group_elements: int = 10_000_000
    field_points: int = 100_000
    rack_size: int = 4096
    full_axiom_check: int = 800
    isomorphism_size: int = 64
    subrack_enumeration: int = 16
    clique_count: int = 100_000
    homology_rack_size: int = 64
    homology_chains: int = 300_000
    cocycle_rack_size: int = 64
    gauge_exhaustive: int = 20
    symmetrizer_dim: int = 10_000
    nichols_degree_dim: int = 20_000
    nichols_max_degree: int = 40


_override: Caps | None = None


def get_caps() -> Caps:
    if _override is not None:
        return _override
    raw = os.environ.get("RACKFORGE_CAPS")
    if not raw:
        return Caps()
    data = json.loads(raw)
    known = {f.name for f in fields(Caps)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown caps in RACKFORGE_CAPS: {sorted(unknown)}")
    return replace(Caps(), **data)


def set_caps(caps: Caps | None) -> None:
    """Install process-wide caps (``None`` restores env/defaults)."""
    global _override
    _override = caps
