"""Batch command-line front-end.

Subcommands: validate, minimize, hom, weight-complex, truncate,
verify-axioms, chi, chi-dual, check-square, windows.  Reports are plain
`KEY: value` lines (classes are printed bare); exit status is 0 on success,
1 on a failed mathematical check, 2 on input errors.

Complex file schema:
  {"instance": "q"|"z"|"tate"|"algebra",
   "algebra": {"dim": d, "table": [[[coord,...],...],...], "unit": [...]}?,
   "terms": {"<degree>": rank-or-twist-array},
   "diffs": {"<degree>": flat row-major array of entry strings}}
Entries are exact rationals/integers as strings ("3/2"); over an algebra
instance each entry is an array of dim coordinate strings.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .linalg import rational
from .addcat import (
    ALGEBRA,
    Algebra,
    CategoryInstance,
    DUAL_NUMBERS_INSTANCE,
    FREE_Q,
    FREE_Z,
    Mor,
    Obj,
    Q_INSTANCE,
    TATE,
    TATE_INSTANCE,
    Z_INSTANCE,
    algebra_instance,
    tate_obj,
)
from .complexes import (
    ChainMap,
    Complex,
    chain_map,
    complex_of,
    hom_group_K,
    hom_group_QK,
    minimize,
    validate,
)
from .weight import verify_axioms, weight_complex, weight_truncate
from .motive import (
    MalformedExpr,
    chi,
    chi_dual,
    check_square,
    expr_from_data,
    expr_to_data,
    square_from_data,
    weight_window,
)


class InputError(ValueError):
    """Malformed input file or schema violation (exit status 2)."""


# --------------------------------------------------------------------------
# complex / chain-map serialization
# --------------------------------------------------------------------------

def _entry_to_data(inst: CategoryInstance, e):
    if inst.kind == ALGEBRA:
        return [str(x) for x in e]
    return str(e)


def _entry_from_data(inst: CategoryInstance, data, where: str):
    try:
        if inst.kind == ALGEBRA:
            if not isinstance(data, list):
                raise InputError(f"{where}: algebra entry must be an array of coordinates")
            return inst.ent_coerce([rational(x) for x in data])
        return inst.ent_coerce(rational(data))
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"{where}: bad entry {data!r} ({exc})") from exc


def _rational_list(data, where: str):
    try:
        return tuple(rational(x) for x in data)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"{where}: bad rational ({exc})") from exc


def algebra_to_data(alg: Algebra) -> dict:
    return {
        "dim": alg.dim,
        "table": [[[str(x) for x in cell] for cell in row] for row in alg.table],
        "unit": [str(x) for x in alg.unit],
    }


def algebra_from_data(data) -> Algebra:
    if not isinstance(data, dict):
        raise InputError("algebra: expected an object")
    try:
        dim = int(data["dim"])
        table = tuple(
            tuple(_rational_list(cell, "algebra.table") for cell in row)
            for row in data["table"]
        )
        unit = _rational_list(data["unit"], "algebra.unit")
        return Algebra(dim, table, unit)
    except KeyError as exc:
        raise InputError(f"algebra: missing field {exc.args[0]!r}") from exc
    except ValueError as exc:
        raise InputError(f"algebra: {exc}") from exc


def _obj_to_data(o: Obj):
    if o.instance.kind == TATE:
        return list(o.twists)
    return o.rank


def _obj_from_data(inst: CategoryInstance, data, where: str) -> Obj:
    if inst.kind == TATE:
        if not isinstance(data, list) or not all(isinstance(t, int) for t in data):
            raise InputError(f"{where}: Tate object must be an array of integer twists")
        return tate_obj(data)
    if not isinstance(data, int) or data < 0:
        raise InputError(f"{where}: object must be a non-negative rank integer")
    return Obj(inst, data)


def _mor_to_data(m: Mor):
    inst = m.instance
    return [_entry_to_data(inst, e) for row in m.mat for e in row]


def _mor_from_data(inst, src: Obj, tgt: Obj, data, where: str) -> Mor:
    if not isinstance(data, list):
        raise InputError(f"{where}: matrix must be a flat row-major array")
    if len(data) != src.rank * tgt.rank:
        raise InputError(
            f"{where}: matrix has {len(data)} entries, expected {tgt.rank}x{src.rank}"
        )
    mat = tuple(
        tuple(
            _entry_from_data(inst, data[r * src.rank + c], f"{where}[{r},{c}]")
            for c in range(src.rank)
        )
        for r in range(tgt.rank)
    )
    try:
        return Mor(src, tgt, mat)
    except Exception as exc:
        raise InputError(f"{where}: {exc}") from exc


def instance_from_data(data) -> CategoryInstance:
    kind = data.get("instance")
    if kind == FREE_Q:
        return Q_INSTANCE
    if kind == FREE_Z:
        return Z_INSTANCE
    if kind == TATE:
        return TATE_INSTANCE
    if kind == ALGEBRA:
        if "algebra" not in data:
            raise InputError("instance 'algebra' needs an 'algebra' object")
        return algebra_instance(algebra_from_data(data["algebra"]))
    raise InputError(f"unknown instance {kind!r}")


def complex_to_data(c: Complex) -> dict:
    data = {
        "instance": c.instance.kind,
        "terms": {str(k): _obj_to_data(o) for k, o in c.terms},
        "diffs": {str(k): _mor_to_data(m) for k, m in c.diffs},
    }
    if c.instance.kind == ALGEBRA:
        data["algebra"] = algebra_to_data(c.instance.algebra)
    return data


def complex_from_data(data, check: bool = True) -> Complex:
    if not isinstance(data, dict):
        raise InputError("complex: expected an object")
    inst = instance_from_data(data)
    terms = {}
    for key, od in data.get("terms", {}).items():
        try:
            k = int(key)
        except ValueError as exc:
            raise InputError(f"terms: degree key {key!r} is not an integer") from exc
        terms[k] = _obj_from_data(inst, od, f"terms.{key}")
    diffs = {}
    from .addcat import zero_obj

    for key, md in data.get("diffs", {}).items():
        try:
            k = int(key)
        except ValueError as exc:
            raise InputError(f"diffs: degree key {key!r} is not an integer") from exc
        src = terms.get(k, zero_obj(inst))
        tgt = terms.get(k + 1, zero_obj(inst))
        diffs[k] = _mor_from_data(inst, src, tgt, md, f"diffs.{key}")
    try:
        return complex_of(inst, terms, diffs, check=check)
    except InputError:
        raise
    except Exception as exc:
        raise InputError(f"complex: {exc}") from exc


def serialize_complex(c: Complex) -> str:
    return json.dumps(complex_to_data(c), sort_keys=True)


def parse_complex_text(text: str) -> Complex:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return complex_from_data(data)


def chain_map_to_data(f: ChainMap) -> dict:
    return {
        "source": complex_to_data(f.source),
        "target": complex_to_data(f.target),
        "components": {str(k): _mor_to_data(m) for k, m in f.components},
    }


def chain_map_from_data(data) -> ChainMap:
    if not isinstance(data, dict):
        raise InputError("chain map: expected an object")
    try:
        src = complex_from_data(data["source"])
        tgt = complex_from_data(data["target"])
    except KeyError as exc:
        raise InputError(f"chain map: missing field {exc.args[0]!r}") from exc
    comps = {}
    for key, md in data.get("components", {}).items():
        try:
            k = int(key)
        except ValueError as exc:
            raise InputError(f"components: degree key {key!r} is not an integer") from exc
        comps[k] = _mor_from_data(src.instance, src.term(k), tgt.term(k), md, f"components.{key}")
    try:
        return chain_map(src, tgt, comps, check=True)
    except InputError:
        raise
    except Exception as exc:
        raise InputError(f"chain map: {exc}") from exc


def serialize_chain_map(f: ChainMap) -> str:
    return json.dumps(chain_map_to_data(f), sort_keys=True)


def serialize_expr(e) -> str:
    return json.dumps(expr_to_data(e), sort_keys=True)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _load_complex(path: str) -> Complex:
    return complex_from_data(_load_json(path))


def _load_expr(path: str):
    try:
        return expr_from_data(_load_json(path))
    except MalformedExpr as exc:
        raise InputError(f"{path}: {exc}") from exc


def _support_str(c: Complex) -> str:
    return json.dumps(list(c.support))


def _cmd_validate(args, out) -> int:
    c = complex_from_data(_load_json(args.complex), check=False)
    rep = validate(c)
    out.write(f"VALID: {'true' if rep.valid else 'false'}\n")
    out.write(f"SUPPORT: {json.dumps(list(rep.support))}\n")
    if not rep.valid:
        out.write(f"MESSAGE: {rep.message}\n")
        out.write(f"DEGREE: {rep.degree}\n")
        return 1
    return 0


def _cmd_minimize(args, out) -> int:
    c = _load_complex(args.complex)
    res = minimize(c)
    out.write(f"FIELD_MINIMAL: {'true' if res.field_minimal else 'false'}\n")
    out.write(f"SUPPORT: {_support_str(res.complex)}\n")
    out.write(f"COMPLEX: {serialize_complex(res.complex)}\n")
    return 0


def _cmd_hom(args, out) -> int:
    a = _load_complex(args.a)
    b = _load_complex(args.b)
    if a.instance != b.instance:
        raise InputError("hom: the two complexes live over different instances")
    gp = hom_group_K(a, b) if args.cat == "K" else hom_group_QK(a, b)
    out.write(f"CATEGORY: {args.cat}\n")
    out.write(f"FREE_RANK: {gp.free_rank}\n")
    out.write(f"INVARIANT_FACTORS: {json.dumps(list(gp.invariant_factors))}\n")
    out.write(f"GENERATORS: {len(gp.generators)}\n")
    return 0


def _cmd_weight_complex(args, out) -> int:
    c = _load_complex(args.complex)
    res = weight_complex(c)
    out.write(f"SUPPORT: {_support_str(res.wc)}\n")
    out.write(f"COMPLEX: {serialize_complex(res.wc)}\n")
    return 0


def _cmd_truncate(args, out) -> int:
    c = _load_complex(args.complex)
    tri = weight_truncate(c, args.level)
    out.write(f"LEVEL: {tri.n}\n")
    out.write(f"LOW: {serialize_complex(tri.low)}\n")
    out.write(f"HIGH: {serialize_complex(tri.high)}\n")
    return 0


_INSTANCE_FLAGS = {
    "q": Q_INSTANCE,
    "z": Z_INSTANCE,
    "tate": TATE_INSTANCE,
    "dual": DUAL_NUMBERS_INSTANCE,
}


def _cmd_verify_axioms(args, out) -> int:
    inst = _INSTANCE_FLAGS[args.instance]
    rep = verify_axioms(inst, samples=args.samples, seed=args.seed)
    for name, runs, fails in rep.checks:
        status = "pass" if fails == 0 else "fail"
        out.write(f"{name}: {status} {runs - fails}/{runs}\n")
    out.write(f"RESULT: {'pass' if rep.passed else 'fail'}\n")
    if not rep.passed:
        for ce in rep.counterexamples:
            out.write(f"COUNTEREXAMPLE: {ce}\n")
        return 1
    return 0


def _cmd_chi(args, out) -> int:
    e = _load_expr(args.expr)
    out.write(chi(e).render() + "\n")
    return 0


def _cmd_chi_dual(args, out) -> int:
    e = _load_expr(args.expr)
    out.write(chi_dual(e, args.s).render() + "\n")
    return 0


def _cmd_check_square(args, out) -> int:
    data = _load_json(args.square)
    try:
        sq = square_from_data(data)
    except MalformedExpr as exc:
        raise InputError(f"{args.square}: {exc}") from exc
    ok = check_square(sq, args.s)
    out.write(f"SQUARE: {'pass' if ok else 'fail'}\n")
    return 0 if ok else 1


def _cmd_windows(args, out) -> int:
    e = _load_expr(args.expr)
    fwd, dual = weight_window(e)
    out.write(f"FORWARD: {json.dumps(list(fwd))}\n")
    out.write(f"DUAL: {json.dumps(list(dual))}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="weightcx",
        description="Exact engine for bounded complexes, weight structures and "
        "motivic Euler characteristics.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check d.d = 0 and report the support")
    s.add_argument("complex")
    s.set_defaults(func=_cmd_validate)

    s = sub.add_parser("minimize", help="reduce to a minimal model")
    s.add_argument("complex")
    s.set_defaults(func=_cmd_minimize)

    s = sub.add_parser("hom", help="hom-group in the (quasi-)homotopy category")
    s.add_argument("--cat", choices=["K", "QK"], default="K")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=_cmd_hom)

    s = sub.add_parser("weight-complex", help="weight complex of a bounded complex")
    s.add_argument("complex")
    s.set_defaults(func=_cmd_weight_complex)

    s = sub.add_parser("truncate", help="weight truncation triangle at a level")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("complex")
    s.set_defaults(func=_cmd_truncate)

    s = sub.add_parser("verify-axioms", help="randomized weight-structure axiom checks")
    s.add_argument("--instance", choices=sorted(_INSTANCE_FLAGS), required=True)
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=_cmd_verify_axioms)

    s = sub.add_parser("chi", help="class of a variety expression")
    s.add_argument("expr")
    s.set_defaults(func=_cmd_chi)

    s = sub.add_parser("chi-dual", help="dual class of a variety expression")
    s.add_argument("--s", type=int, default=0)
    s.add_argument("expr")
    s.set_defaults(func=_cmd_chi_dual)

    s = sub.add_parser("check-square", help="additivity on a distinguished square")
    s.add_argument("--s", type=int, default=0)
    s.add_argument("square")
    s.set_defaults(func=_cmd_check_square)

    s = sub.add_parser("windows", help="guaranteed weight windows of an expression")
    s.add_argument("expr")
    s.set_defaults(func=_cmd_windows)
    return p


def main(argv: Optional[list] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args, out)
    except InputError as exc:
        out.write(f"ERROR: {exc}\n")
        return 2
    except MalformedExpr as exc:
        out.write(f"ERROR: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
