"""Command-line front end: ``qlogic <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import io
from .contexts import context_from_commuting
from .daseinise import (
    daseinise_proj_inner,
    daseinise_proj_outer,
    daseinise_sa_inner,
    daseinise_sa_outer,
    inner_values,
    outer_values,
)
from .dynamics import StarHom, transform_truth
from .errors import QLogicError
from .linalg import check_projection
from .logic import Variant, elementary_prop, heyting_impl, heyting_join, heyting_meet, heyting_neg
from .sampling import orbit_poset
from .states import truth_sieve
from .suite import run_suite

DIGITS = 10


def _clean(obj):
    """Round floats and turn numpy scalars into plain JSON values."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = round(float(obj), DIGITS)
        return 0.0 if x == 0 else x
    return obj


def _emit(payload: dict, as_json: bool, table=None) -> None:
    if as_json or table is None:
        print(json.dumps(_clean(payload), sort_keys=True, indent=2))
    else:
        print(table(payload))


def _table(rows: Sequence[Sequence], header: Sequence[str]) -> str:
    cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _fmt(x: float) -> str:
    return f"{round(float(x), 6):g}"


# ---------------------------------------------------------------------------
# poset construction shared by several commands


def _generators(paths: Sequence[str]) -> Dict[str, List[np.ndarray]]:
    gens: Dict[str, List[np.ndarray]] = {}
    for p in paths:
        gens[Path(p).stem] = [io.load_matrix(p)]
    return gens


def _poset_spec(args, fallback_op: Optional[str] = None) -> dict:
    if getattr(args, "poset", None):
        return io.read_json(args.poset)
    paths = list(getattr(args, "gen", None) or [])
    if not paths and fallback_op:
        paths = [fallback_op]
    if not paths:
        raise QLogicError("no generators given")
    return io.poset_to_json(_generators(paths), down_close=not getattr(args, "no_down_close", False),
                            include_bottom=not args.drop_bottom)


def _add_poset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gen", nargs="+", metavar="FILE", help="operator files generating the contexts")
    p.add_argument("--poset", metavar="FILE", help="poset JSON (overrides --gen)")
    p.add_argument("--drop-bottom", action="store_true", help="exclude the scalar context")
    p.add_argument("--no-down-close", action="store_true", help="keep only the generated contexts")


def _add_variant(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=[v.value for v in Variant], default=Variant.CONTRAVARIANT.value)


# ---------------------------------------------------------------------------
# commands


def cmd_ctx_build(args) -> int:
    spec = io.poset_to_json(_generators(args.gen), args.down_close, not args.drop_bottom)
    poset = io.poset_from_json(spec, cap=args.cap)
    payload = {"contexts": poset.describe(), "size": len(poset), "down_closed": poset.is_down_closed()}
    if args.out:
        Path(args.out).write_text(json.dumps(_clean(spec), sort_keys=True, indent=2) + "\n")

    def table(pl):
        rows = [(c["label"], c["atoms"], ",".join(map(str, c["ranks"])), " ".join(c["below"]) or "-")
                for c in pl["contexts"]]
        return _table(rows, ["context", "atoms", "ranks", "below"])

    _emit(payload, args.json, table)
    return 0


def cmd_das(args) -> int:
    a = io.load_matrix(args.op)
    ctx = context_from_commuting([io.load_matrix(g) for g in args.ctx], label="C")
    if args.proj:
        p = check_projection(a)
        outer, inner = daseinise_proj_outer(p, ctx), daseinise_proj_inner(p, ctx)
    else:
        outer, inner = daseinise_sa_outer(a, ctx), daseinise_sa_inner(a, ctx)
    payload = {
        "outer": io.matrix_to_json(outer),
        "inner": io.matrix_to_json(inner),
        "atom_values": {"outer": list(outer_values(a, ctx)), "inner": list(inner_values(a, ctx))},
        "atoms": [io.matrix_to_json(q) for q in ctx.atoms],
    }

    def table(pl):
        rows = [(k, _fmt(o), _fmt(i)) for k, (o, i) in
                enumerate(zip(pl["atom_values"]["outer"], pl["atom_values"]["inner"]))]
        return _table(rows, ["atom", "outer", "inner"])

    _emit(payload, args.json, table)
    return 0


def _family_table(pl) -> str:
    rows = [(label, " ".join(map(str, idx)) or "-") for label, idx in pl["family"].items()]
    return f"variant: {pl['variant']}\n" + _table(rows, ["context", "atoms"])


def cmd_prop(args) -> int:
    spec = _poset_spec(args, args.op)
    poset = io.poset_from_json(spec)
    s = elementary_prop(io.load_matrix(args.op), io.load_borel(args.delta), poset, args.variant)
    payload = io.subobject_to_json(s, spec)
    if args.out:
        Path(args.out).write_text(json.dumps(_clean(payload), sort_keys=True, indent=2) + "\n")
    _emit(payload, args.json, _family_table)
    return 0


def cmd_heyting(args) -> int:
    first = io.read_json(args.subobjects[0])
    spec = first.get("poset")
    poset = io.poset_from_json(spec) if spec is not None else None
    subs = [io.subobject_from_json(io.read_json(f), poset) if i else io.subobject_from_json(first, poset)
            for i, f in enumerate(args.subobjects)]
    need = 1 if args.op == "neg" else 2
    if len(subs) != need:
        raise QLogicError(f"'{args.op}' takes {need} subobject file(s), got {len(subs)}")
    ops = {"meet": heyting_meet, "join": heyting_join, "impl": heyting_impl, "neg": heyting_neg}
    result = ops[args.op](*subs)
    payload = io.subobject_to_json(result, spec)
    if result.variant is Variant.COVARIANT and args.op in ("impl", "neg"):
        payload["poset_relative"] = True
    _emit(payload, args.json, _family_table)
    return 0


def cmd_truth(args) -> int:
    spec = _poset_spec(args, args.op)
    poset = io.poset_from_json(spec)
    psi = io.load_state(args.state)
    s = elementary_prop(io.load_matrix(args.op), io.load_borel(args.delta), poset, args.variant)
    sieve = truth_sieve(psi, s, args.threshold)
    probs = {c.label: psi(s.projection(i)) for i, c in enumerate(poset)}
    payload = {"variant": s.variant.value, "threshold": args.threshold, "direction": sieve.direction,
               "sieve": sieve.labels(), "probabilities": probs}

    def table(pl):
        rows = [(k, _fmt(v), "yes" if k in pl["sieve"] else "no") for k, v in pl["probabilities"].items()]
        return _table(rows, ["context", "probability", "in sieve"])

    _emit(payload, args.json, table)
    return 0


def cmd_dyn(args) -> int:
    h = StarHom.automorphism(io.load_matrix(args.unitary))
    a = io.load_matrix(args.op)
    if args.poset:
        poset = io.poset_from_json(io.read_json(args.poset))
    else:
        paths = args.gen or [args.op]
        gens = [context_from_commuting(ops, label=name) for name, ops in _generators(paths).items()]
        poset = orbit_poset(h, gens, include_bottom=not args.drop_bottom)
    t = transform_truth(h, io.load_state(args.state), a, io.load_borel(args.delta), poset, args.variant)
    payload = {"variant": Variant.parse(args.variant).value, "contexts": poset.labels(),
               "sieve1": t.sieve1.labels(), "sieve2": t.sieve2.labels(), "equivalent": t.equivalent,
               "closed_form_agrees": t.closed_form_agrees}

    def table(pl):
        return "\n".join([f"pulled back : {' '.join(pl['sieve1']) or '-'}",
                          f"transformed : {' '.join(pl['sieve2']) or '-'}",
                          f"equivalent  : {pl['equivalent']}"])

    _emit(payload, args.json, table)
    return 0 if t.equivalent and t.closed_form_agrees else 2


def cmd_check(args) -> int:
    report = run_suite(args.seed, args.trials)

    def table(pl):
        rows = [(name, sec["checked"], len(sec["failures"])) for name, sec in pl["sections"].items()]
        return _table(rows, ["section", "checked", "failures"]) + f"\n\ntotal failures: {pl['failures']}"

    _emit(report, args.json, table)
    return 2 if report["failures"] else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qlogic", description="Quantum logics over context posets of M_n(C).")
    ap.add_argument("--json", action="store_true", help="emit JSON instead of tables")
    sub = ap.add_subparsers(dest="command", required=True)

    ctx = sub.add_parser("ctx", help="context posets")
    ctx_sub = ctx.add_subparsers(dest="ctx_command", required=True)
    b = ctx_sub.add_parser("build", help="build a poset from generator operators")
    b.add_argument("--gen", nargs="+", required=True, metavar="FILE")
    b.add_argument("--down-close", action="store_true")
    b.add_argument("--drop-bottom", action="store_true")
    b.add_argument("--cap", type=int, default=5000)
    b.add_argument("--out", metavar="FILE", help="write the poset JSON here")
    b.set_defaults(func=cmd_ctx_build)

    d = sub.add_parser("das", help="daseinise an operator at a context")
    d.add_argument("--op", required=True)
    d.add_argument("--ctx", nargs="+", required=True, metavar="FILE", help="commuting generators of the context")
    d.add_argument("--proj", action="store_true", help="treat the operator as a projection")
    d.set_defaults(func=cmd_das)

    p = sub.add_parser("prop", help="elementary proposition [a in delta]")
    p.add_argument("--op", required=True)
    p.add_argument("--delta", required=True, help='interval literal such as "(0.5,1.5)" or a JSON file')
    p.add_argument("--out", metavar="FILE")
    _add_variant(p)
    _add_poset_args(p)
    p.set_defaults(func=cmd_prop)

    h = sub.add_parser("heyting", help="Heyting operations on stored subobjects")
    h.add_argument("op", choices=["meet", "join", "impl", "neg"])
    h.add_argument("subobjects", nargs="+", metavar="FILE")
    h.set_defaults(func=cmd_heyting)

    t = sub.add_parser("truth", help="truth sieve of a proposition in a state")
    t.add_argument("--state", required=True)
    t.add_argument("--op", required=True)
    t.add_argument("--delta", required=True)
    t.add_argument("--threshold", type=float, default=1.0)
    _add_variant(t)
    _add_poset_args(t)
    t.set_defaults(func=cmd_truth)

    y = sub.add_parser("dyn", help="transform a truth value along an automorphism")
    y.add_argument("--unitary", required=True)
    y.add_argument("--op", required=True)
    y.add_argument("--delta", required=True)
    y.add_argument("--state", required=True)
    _add_variant(y)
    _add_poset_args(y)
    y.set_defaults(func=cmd_dyn)

    c = sub.add_parser("check", help="run the seeded property suite")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--trials", type=int, default=100)
    c.set_defaults(func=cmd_check)
    return ap


def _hoist_json_flag(argv: List[str]) -> List[str]:
    # accept --json anywhere on the line
    if "--json" in argv:
        argv = ["--json"] + [a for a in argv if a != "--json"]
    return argv


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = _hoist_json_flag(list(sys.argv[1:] if argv is None else argv))
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QLogicError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(err, sort_keys=True) if args.json else f"error: {err['error']}: {err['message']}",
              file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
