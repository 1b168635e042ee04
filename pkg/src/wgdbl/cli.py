"""Command line interface: ``wgdbl <module> <op> [input] [options]``.

Exit status is 0 when every verdict passes, 1 when a checked property fails
(the report carries the witness), 2 on malformed input or usage errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from pathlib import Path

from . import fixtures
from .bicat import (Bicategory, bicat_of_fractions, equivalences,
                    fundamental_bicategory, locally_discrete, marked_paths_double,
                    omega_comparison, quasi_units, validate_bicategory)
from .companion import (comp_double_category, find_companion, find_conjoint,
                        is_precompanion)
from .dblcat import (DoubleCategory, check_weak_globularity, discretize, horizontal_embedding,
                     horizontal_nerve,
                     pi0_double, simplicial_identity_failures, validate_double_category)
from .errors import InputError, ParseError, UnknownCommand, WgdblError
from .fincat import (FinCategory, is_equivalent_to_discrete, pi0, validate_category)
from .fractions import (build_fractions, check_fractions_conditions, classify_for_companions,
                        factor_cell, lift_w_friendly, phi_functor, presentation_from_json)
from .homotopy import check_groupoidal, homotopy_groups, postnikov_map

DEFAULT_SEED = 0


# ---------------------------------------------------------------------------
# dot export

def _q(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(structure, name: str = "") -> str:
    """Graphviz text: solid edges horizontal, dashed vertical; identities omitted."""
    lines = [f"digraph {_q(name or getattr(structure, 'name', '') or 'G')} {{"]
    if isinstance(structure, DoubleCategory):
        D = structure
        for A in D.objects:
            lines.append(f"  {_q(A)};")
        for f in D.X1.objects:
            if D.is_h_identity(f):
                continue
            lines.append(f"  {_q(D.hsrc(f))} -> {_q(D.htgt(f))} [label={_q(f)}];")
        for v, (A, B) in D.X0.arrows.items():
            if D.X0.is_identity(v):
                continue
            lines.append(f"  {_q(A)} -> {_q(B)} [label={_q(v)}, style=dashed];")
        for c, (top, bottom) in D.X1.arrows.items():
            if D.X1.is_identity(c) or c in D._id_c:
                continue
            lines.append(f"  // cell {c}: {top} => {bottom}")
    elif isinstance(structure, Bicategory):
        B = structure
        units = set(B.units.values())
        for A in B.objects:
            lines.append(f"  {_q(A)};")
        for f, (A, C) in B.cells1.items():
            if f in units:
                continue
            lines.append(f"  {_q(A)} -> {_q(C)} [label={_q(f)}];")
        for a, (A, C) in B.cell2.items():
            if B.homs[(A, C)].is_identity(a):
                continue
            lines.append(f"  // 2-cell {a}: {B.dom2(a)} => {B.cod2(a)}")
    elif isinstance(structure, FinCategory):
        C = structure
        for A in C.objects:
            lines.append(f"  {_q(A)};")
        for f, (A, B) in C.arrows.items():
            if C.is_identity(f):
                continue
            lines.append(f"  {_q(A)} -> {_q(B)} [label={_q(f)}];")
    else:
        raise TypeError("export_dot needs a FinCategory, DoubleCategory or Bicategory")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# input

def load_input(ref):
    if ref is None:
        raise ParseError("this command needs an input file")
    path = Path(ref)
    if not path.exists():
        alt = fixtures.fixture_path(ref)
        if not alt.exists():
            raise ParseError(f"no such file or fixture: {ref}")
        path = alt
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {ref}: {e}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", f"{path.name}:{e.lineno}:{e.colno}") from None
    return raw


def _digest(raw) -> str:
    return hashlib.sha256(json.dumps(raw, sort_keys=True).encode()).hexdigest()[:16]


def _double(raw):
    if "X0" not in raw and "objects" in raw:
        # a plain category stands for H(C)
        return horizontal_embedding(validate_category(raw))
    return validate_double_category(raw)


def _presentation(raw):
    return presentation_from_json(raw)


def _bicategory(raw):
    if "cells1" in raw:
        return validate_bicategory(raw)
    C = validate_category(raw)
    return locally_discrete(C)


# ---------------------------------------------------------------------------
# operations; each returns (ok, result, dot_structure)

def op_fincat(op, raw, args):
    C = validate_category(raw)
    if op == "validate":
        return True, C.to_json(), C
    if op == "pi0":
        return True, {"classes": pi0(C)}, C
    if op == "discrete":
        v = is_equivalent_to_discrete(C)
        return v.is_equivalence, v.to_json(), C
    raise UnknownCommand(f"unknown fincat operation '{op}'")


def op_dblcat(op, raw, args):
    D = _double(raw)
    if op == "validate":
        return True, D.to_json(), D
    if op == "check-wg":
        r = check_weak_globularity(D, args.nmax)
        return r.passed, r.to_json(), D
    if op == "pi0":
        P = pi0_double(D)
        return True, P.to_json(), D
    if op == "nerve":
        N = horizontal_nerve(D, args.level)
        return True, N.to_json(), D
    if op == "discretize":
        T = discretize(D, args.nmax)
        fails = simplicial_identity_failures(T, args.nmax)
        return True, {"levels": [len(L.objects) for L in T.levels],
                      "segal": [[n, v.to_json()] for n, v in T.segal],
                      "simplicial_identity_failures": [list(map(str, f)) for f in fails]}, D
    raise UnknownCommand(f"unknown dblcat operation '{op}'")


def _arrows(D, args):
    if args.arrow:
        if args.arrow not in D.X1.objects:
            raise ParseError(f"unknown horizontal arrow {args.arrow}", "--arrow")
        return [args.arrow]
    return list(D.X1.objects)


def op_companion(op, raw, args):
    D = _double(raw)
    if op == "find":
        out = {f: (p.to_json() if (p := find_companion(D, f)) else None) for f in _arrows(D, args)}
        return (all(out.values()) if args.arrow else True), {"companions": out}, D
    if op == "conjoint":
        out = {f: (p.to_json() if (p := find_conjoint(D, f)) else None) for f in _arrows(D, args)}
        return (all(out.values()) if args.arrow else True), {"conjoints": out}, D
    if op == "precompanion":
        r = check_weak_globularity(D, args.nmax)
        out = {f: (w.to_json() if (w := is_precompanion(D, f, r)) else None)
               for f in _arrows(D, args)}
        return (all(out.values()) if args.arrow else True), {"precompanions": out}, D
    if op == "comp":
        CD = comp_double_category(D)
        validate_double_category(CD)
        return True, {"double_category": CD.to_json(),
                      "quadruples": {k: list(q) for k, q in CD.quad.items()}}, CD
    raise UnknownCommand(f"unknown companion operation '{op}'")


def op_fractions(op, raw, args):
    P = _presentation(raw)
    if op == "check":
        r = check_fractions_conditions(P)
        return r.passed, r.to_json(), P.base
    F = build_fractions(P)
    if op == "build":
        return True, {"double_category": F.to_json(), "provenance": F.provenance_json()}, F
    if op == "classify":
        c = classify_for_companions(F)
        return c.ok, c.to_json(), F
    if op == "factor":
        cells = [args.cell] if args.cell else sorted(F.cell)
        if args.cell and args.cell not in F.cell:
            raise ParseError(f"unknown cell {args.cell}", "--cell")
        plans = {c: factor_cell(F, c) for c in cells}
        return all(p.ok for p in plans.values()), {c: p.to_json() for c, p in plans.items()}, F
    if op == "lift":
        S = phi_functor(P, F).structure
        L = lift_w_friendly(S, F)
        return L.ok, L.to_json(), F
    raise UnknownCommand(f"unknown fractions operation '{op}'")


def _bicat_summary(B):
    return {"bicategory": B.to_json(), "quasi_units": quasi_units(B),
            "equivalences": equivalences(B)}


def op_bicat(op, raw, args):
    if op == "validate":
        B = _bicategory(raw)
        return True, B.to_json(), B
    if op == "fundamental":
        D = _double(raw)
        B = fundamental_bicategory(D, check_weak_globularity(D, args.nmax))
        return True, _bicat_summary(B), B
    if op == "marked-paths":
        B = _bicategory(raw)
        D = marked_paths_double(B, args.max_path_len)
        r = check_weak_globularity(D, max(2, min(args.nmax, args.max_path_len)))
        return r.passed, {"double_category": D.to_json(), "weak_globularity": r.to_json()}, D
    if op == "fractions":
        B = bicat_of_fractions(_presentation(raw))
        return True, _bicat_summary(B), B
    if op == "omega":
        rep = omega_comparison(_presentation(raw))
        return rep.ok, rep.to_json(), None
    raise UnknownCommand(f"unknown bicat operation '{op}'")


def op_homotopy(op, raw, args):
    X = _double(raw)
    if op == "groups":
        if args.basepoint is not None and args.basepoint not in X.objects:
            raise ParseError(f"unknown basepoint {args.basepoint}", "--basepoint")
        h = homotopy_groups(X, args.basepoint)
        return True, h.to_json(), X
    if op == "groupoidal":
        v = check_groupoidal(X)
        return v.ok, v.to_json(), X
    if op == "postnikov":
        p = postnikov_map(X)
        return p.ok, p.to_json(), X
    raise UnknownCommand(f"unknown homotopy operation '{op}'")


def op_random(op, raw, args):
    """``fincat random``: a random finite preorder, reproducible from the seed."""
    rng = random.Random(args.seed)
    n = args.size
    order = {(i, j) for i in range(n) for j in range(n) if i == j or (i < j and rng.random() < 0.4)}
    changed = True
    while changed:
        changed = False
        for (i, j) in list(order):
            for (k, l) in list(order):
                if j == k and (i, l) not in order:
                    order.add((i, l))
                    changed = True
    objs = [f"o{i}" for i in range(n)]
    arrows = [{"id": f"o{i}<o{j}" if i != j else f"1o{i}", "src": f"o{i}", "tgt": f"o{j}"}
              for i, j in sorted(order)]
    name = lambda i, j: f"o{i}<o{j}" if i != j else f"1o{i}"
    compose = [[name(j, k), name(i, j), name(i, k)]
               for (i, j) in sorted(order) for (j2, k) in sorted(order)
               if j == j2 and i != j and j != k]
    raw = {"name": f"random-{args.seed}", "objects": objs, "arrows": arrows,
           "identities": {f"o{i}": f"1o{i}" for i in range(n)}, "compose": compose}
    C = validate_category(raw)
    return True, C.to_json(), C


MODULES = {
    "fincat": (op_fincat, ("validate", "pi0", "discrete", "random")),
    "dblcat": (op_dblcat, ("validate", "check-wg", "pi0", "nerve", "discretize")),
    "companion": (op_companion, ("find", "conjoint", "precompanion", "comp")),
    "fractions": (op_fractions, ("check", "build", "classify", "factor", "lift")),
    "bicat": (op_bicat, ("validate", "fundamental", "marked-paths", "fractions", "omega")),
    "homotopy": (op_homotopy, ("groups", "groupoidal", "postnikov")),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UnknownCommand(message)


def build_parser() -> argparse.ArgumentParser:
    ops = "\n".join(f"  {m:10} {' | '.join(o)}" for m, (_, o) in MODULES.items())
    p = _Parser(prog="wgdbl", formatter_class=argparse.RawDescriptionHelpFormatter,
                description="Weakly globular double categories on finite presentations.",
                epilog=f"modules and operations:\n{ops}\n\n"
                       "INPUT is a JSON file or a bundled fixture name (e.g. FIX-POSB).\n"
                       "Where a double category is expected, a category C is read as H(C).\n"
                       "WGDBL_FIXTURES overrides the fixtures directory.\n"
                       "Exit status: 0 pass, 1 a checked property fails, 2 input error.")
    p.add_argument("module")
    p.add_argument("op")
    p.add_argument("input", nargs="?")
    p.add_argument("--nmax", type=int, default=3, help="Segal bound (default 3)")
    p.add_argument("--max-path-len", type=int, default=2, dest="max_path_len",
                   help="path length bound for marked paths (default 2)")
    p.add_argument("--dot", help="write a dot rendering of the main structure")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--json", action="store_true",
                   help="wrap the result in a report with command, digest and verdict")
    p.add_argument("--timing", action="store_true", help="add elapsed time to the report")
    p.add_argument("--basepoint")
    p.add_argument("--arrow", help="restrict companion searches to one horizontal arrow")
    p.add_argument("--cell", help="restrict factorization to one cell")
    p.add_argument("--level", type=int, default=2, help="nerve level")
    p.add_argument("--size", type=int, default=4, help="object count for fincat random")
    return p


def run(argv=None, out=None, err=None):
    """Run one command; returns ``(exit_code, report)``."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        parser.print_help(out)
        return 0, None
    t0 = time.perf_counter()
    try:
        args = parser.parse_args(argv)
        if args.module not in MODULES:
            raise UnknownCommand(f"unknown module '{args.module}'")
        fn, ops = MODULES[args.module]
        if args.op not in ops:
            raise UnknownCommand(f"unknown {args.module} operation '{args.op}'")
        if args.nmax < 2:
            raise ParseError("--nmax must be at least 2", "--nmax")
        if args.max_path_len < 1:
            raise ParseError("--max-path-len must be at least 1", "--max-path-len")
        if args.module == "fincat" and args.op == "random":
            raw = {"seed": args.seed, "size": args.size}
            ok, result, structure = op_random(args.op, None, args)
        else:
            raw = load_input(args.input)
            if not isinstance(raw, dict):
                raise ParseError("top-level JSON value must be an object")
            ok, result, structure = fn(args.op, raw, args)
    except InputError as e:
        print(f"error: {e}", file=err)
        return 2, None
    except WgdblError as e:
        report = {"command": f"{argv[0]} {argv[1] if len(argv) > 1 else ''}".strip(),
                  "ok": False, "error": type(e).__name__, "message": str(e)}
        data = getattr(e, "report", None) or getattr(e, "verdict", None)
        if data is not None and hasattr(data, "to_json"):
            report["witness"] = data.to_json()
        json.dump(report, out, sort_keys=True, indent=2)
        out.write("\n")
        return 1, report
    if args.dot and structure is not None:
        Path(args.dot).write_text(export_dot(structure), encoding="utf-8")
    if args.json:
        report = {"command": f"{args.module} {args.op}", "input_digest": _digest(raw),
                  "ok": bool(ok), "result": result}
        if args.timing:
            report["timing"] = round(time.perf_counter() - t0, 6)
    else:
        report = result
    json.dump(report, out, sort_keys=True, indent=2)
    out.write("\n")
    return (0 if ok else 1), report


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
