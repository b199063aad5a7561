"""``rackforge`` command-line front end.

Every command prints one JSON report::

    {"schema", "command", "inputs_digest", "result", "engine_version"}

plus ``"timing"`` when ``--timing`` is given, so that reports are otherwise
byte-identical across runs and ``--jobs`` values.  ``build`` writes a plain
rack file instead, so its output can be fed back to the other commands.

Exit codes: 0 success, 1 expectation mismatch (``verify-paper``), 2 invalid
input, 3 size cap exceeded, 4 inconclusive verdict under ``--strict``.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import __version__
from .caps import CapExceeded, get_caps
from .cocycles import cocycle_space, representatives_mod_p
from .homology import h2_dual, rack_homology
from .intlinalg import factorize
from .io import SCHEMA, digest, dumps, load_group, load_rack, parse_cocycle, read_json, thr_from_json
from .nichols import BraidedSpace, first_excess_degree, hilbert_series, symmetrizer_rank
from .perms import Permutation
from .racks import affine, affine_field, dihedral, from_conjugacy_class, from_conjugacy_classes, trivial_rack
from .thr import THRSpec, build_thr, generic_thr_check, thr_criteria, thr_size
from .typed import (
    Status,
    TypeDVerdict,
    is_type_D_class,
    is_type_D_rack,
    is_type_M,
    verify_class_witness,
    verify_rack_witness,
)
from .verify import class_from_name, verify_paper


class Inconclusive(Exception):
    pass


def _file_input(path: str) -> dict:
    p = Path(path)
    return {"path": p.name, "sha256": digest(read_json(p))} if p.exists() else {"name": path}


def _emit(args, command: str, inputs: dict, result: dict, started: float) -> None:
    report = {
        "schema": SCHEMA,
        "command": command,
        "inputs_digest": digest(inputs),
        "result": result,
        "engine_version": __version__,
    }
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - started, 3)}
    text = dumps(report)
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _strict(args, verdict: TypeDVerdict) -> None:
    if args.strict and verdict.status is Status.INCONCLUSIVE:
        raise Inconclusive(verdict.method)


# -- commands ----------------------------------------------------------------------


def cmd_build(args) -> dict:
    if args.conj:
        G = load_group(args.conj[0])
        reps = [Permutation.from_cycles(c, G.degree) for c in args.conj[1:]]
        X = from_conjugacy_class(G, reps[0]) if len(reps) == 1 else from_conjugacy_classes(G, reps)
    elif args.affine:
        X = affine(int(args.affine[0]), int(args.affine[1]))
    elif args.affine_field:
        X = affine_field(int(args.affine_field[0]), int(args.affine_field[1]))
    elif args.dihedral:
        X = dihedral(args.dihedral)
    elif args.trivial:
        X = trivial_rack(args.trivial)
    elif args.thr:
        spec = thr_from_json({"L": args.thr, "t": args.t, "ell": args.ell,
                              "theta": "id" if args.theta == "id" else {"conjugator": args.theta}},
                             Path.cwd())
        X = build_thr(spec)
    else:
        raise ValueError("choose one of --conj, --affine, --affine-field, --dihedral, --trivial, --thr")
    text = dumps(X.to_json())
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return {}


def cmd_typed(args) -> dict:
    if args.rack:
        X = load_rack(args.rack)
        v = is_type_D_rack(X)
        if v.is_type_D and not verify_rack_witness(X, v.witness["r"], v.witness["s"]):
            raise AssertionError("witness failed the independent recheck")
        out = v.to_json()
        if args.type_m and not v.is_type_D:
            out["type_M"] = is_type_M(X)
        inputs = {"rack": _file_input(args.rack)}
    else:
        if not (args.group and args.cls):
            raise ValueError("give a rack file or --group and --class")
        G = load_group(args.group)
        x = class_from_name(G, args.cls)
        v = is_type_D_class(G, x, jobs=args.jobs, orbit_cap=args.orbit_cap)
        if v.is_type_D:
            r = Permutation.from_cycles(v.witness["r_perm"], G.degree)
            s = Permutation.from_cycles(v.witness["s_perm"], G.degree)
            if not verify_class_witness(r, s):
                raise AssertionError("witness failed the independent recheck")
        out = v.to_json()
        if args.type_m and not v.is_type_D:
            out["type_M"] = is_type_M(from_conjugacy_class(G, x))
        inputs = {"group": _file_input(args.group), "class": args.cls, "orbit_cap": args.orbit_cap}
    _strict(args, v)
    return {"inputs": inputs, "result": out}


def cmd_h2(args) -> dict:
    X = load_rack(args.rack)
    H = rack_homology(X, args.degree)
    out = H.to_json()
    if args.m:
        out["dual"] = h2_dual(H, args.m).to_json()
    return {"inputs": {"rack": _file_input(args.rack), "degree": args.degree, "m": args.m}, "result": out}


def cmd_cocycles(args) -> dict:
    X = load_rack(args.rack)
    out = cocycle_space(X, args.m).to_json()
    primes = factorize(args.m)
    if args.representatives:
        if len(primes) == 1 and list(primes.values()) == [1]:
            out["representatives"] = [q.exponents.tolist() for q in representatives_mod_p(X, args.m)]
        else:
            out["representatives_note"] = "representatives are listed for prime m only"
    return {"inputs": {"rack": _file_input(args.rack), "m": args.m, "representatives": args.representatives},
            "result": out}


def cmd_nichols(args) -> dict:
    from .caps import Caps, set_caps

    X = load_rack(args.rack)
    V = BraidedSpace(X, parse_cocycle(args.cocycle, X))
    if args.long:
        set_caps(Caps(**{**get_caps().__dict__, "nichols_degree_dim": 10**6}))
    rep = hilbert_series(V, args.max_degree)
    out = rep.to_json()
    out["relations_degree2"] = rep.relations_degree2
    if args.quadratic_cover:
        out["first_cover_excess"] = first_excess_degree(V, rep, args.quadratic_cover)
        out["quadratic_cover"] = rep.quadratic_cover
    if args.symmetrizer:
        out["symmetrizer_ranks"] = [symmetrizer_rank(V, n) for n in range(args.symmetrizer + 1)]
    inputs = {"rack": _file_input(args.rack), "cocycle": args.cocycle, "max_degree": args.max_degree,
              "long": args.long, "quadratic_cover": args.quadratic_cover, "symmetrizer": args.symmetrizer}
    return {"inputs": inputs, "result": out}


def cmd_thr(args) -> dict:
    p = Path(args.spec)
    spec: THRSpec = thr_from_json(read_json(p), p.parent)
    v = thr_criteria(spec)
    out = {"size": thr_size(spec), "rules": v.to_json()}
    final = v
    if args.generic or v.status is Status.INCONCLUSIVE:
        g = generic_thr_check(spec, jobs=args.jobs)
        out["generic"] = g.to_json()
        if v.status is Status.INCONCLUSIVE:
            final = g
    out["status"] = final.status.value
    _strict(args, final)
    return {"inputs": {"spec": _file_input(args.spec), "generic": args.generic}, "result": out}


def cmd_verify(args) -> dict:
    only = args.only.split(",") if args.only else None
    res = verify_paper(only, long=args.long, jobs=args.jobs)
    return {"inputs": {"only": only, "long": args.long}, "result": res}


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rackforge", description="Exact computations with finite racks.")
    ap.add_argument("--version", action="version", version=f"rackforge {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, jobs=False, strict=False):
        p.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")
        p.add_argument("-o", "--output", help="write the report here instead of stdout")
        if jobs:
            p.add_argument("--jobs", type=int, default=1, help="worker processes for scans")
        if strict:
            p.add_argument("--strict", action="store_true", help="exit 4 on an inconclusive verdict")

    p = sub.add_parser("build", help="write a validated rack file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--conj", nargs="+", metavar=("GROUP", "REP"), help="group file or name, then class representatives")
    g.add_argument("--affine", nargs=2, metavar=("N", "T"), help="affine rack on Z/N with multiplier T")
    g.add_argument("--affine-field", nargs=2, metavar=("Q", "A"), help="affine rack on GF(Q) with multiplier A")
    g.add_argument("--dihedral", type=int, metavar="N")
    g.add_argument("--trivial", type=int, metavar="N")
    g.add_argument("--thr", metavar="GROUP", help="twisted homogeneous rack over this group")
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--ell", default="e")
    p.add_argument("--theta", default="id", help="'id' or a conjugating permutation")
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("typed", help="decide type D")
    p.add_argument("rack", nargs="?")
    p.add_argument("--group")
    p.add_argument("--class", dest="cls", help="class representative, or 'involution'")
    p.add_argument("--type-m", action="store_true", help="also test type M when not of type D")
    p.add_argument("--orbit-cap", type=int, help="skip pairs whose <r,s>-orbits exceed this size")
    common(p, jobs=True, strict=True)
    p.set_defaults(func=cmd_typed)

    p = sub.add_parser("h2", help="integral rack homology")
    p.add_argument("rack")
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--m", type=int, help="also report Hom(H_n, Z/m)")
    common(p)
    p.set_defaults(func=cmd_h2)

    p = sub.add_parser("cocycles", help="H^2 with coefficients in Z/m")
    p.add_argument("rack")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--representatives", action="store_true", help="list cocycle representatives (prime m)")
    common(p)
    p.set_defaults(func=cmd_cocycles)

    p = sub.add_parser("nichols", help="Hilbert series of B(X, q)")
    p.add_argument("rack")
    p.add_argument("--cocycle", default="const:-1", help="const:-1, const:1, const:K/M, chi, or a cocycle file")
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--long", action="store_true", help="lift the per-degree dimension cap")
    p.add_argument("--quadratic-cover", type=int, metavar="DEG", help="compare with T(V)/<ker Q_2> up to DEG")
    p.add_argument("--symmetrizer", type=int, metavar="N", help="also rank Q_0..Q_N exactly")
    common(p)
    p.set_defaults(func=cmd_nichols)

    p = sub.add_parser("thr", help="type D for a twisted homogeneous rack")
    p.add_argument("spec")
    p.add_argument("--generic", action="store_true", help="also run the generic search")
    common(p, jobs=True, strict=True)
    p.set_defaults(func=cmd_thr)

    p = sub.add_parser("verify-paper", help="run the bundled expectation tables")
    p.add_argument("--only", help="comma-separated tables: homology,cohomology,nichols,typed,thr")
    p.add_argument("--long", action="store_true", help="include the long-running rows")
    common(p, jobs=True)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        payload = args.func(args)
        if args.command == "build":
            return 0
        _emit(args, args.command, payload["inputs"], payload["result"], started)
        if args.command == "verify-paper" and not payload["result"]["ok"]:
            return 1
        return 0
    except CapExceeded as exc:
        print(f"rackforge: cap exceeded: {exc}", file=sys.stderr)
        return 3
    except Inconclusive as exc:
        print(f"rackforge: inconclusive ({exc})", file=sys.stderr)
        return 4
    except (ValueError, KeyError, FileNotFoundError) as exc:
        print(f"rackforge: invalid input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
