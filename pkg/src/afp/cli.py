"""``afp`` command-line entry point.

Exit codes: 0 on success (identity holds, programs agree, all reference
rows match); 1 when a valid identity fails, the stable-model oracle
disagrees or a reference row mismatches; 2 on usage, input or
monotonicity errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import identities, io, lp, reference
from .errors import AFPError, NotPMonotone, ProgramSyntaxError
from .fixpoint import dagger_split, stable_set, well_founded
from .lattice import DEFAULT_CAP, build_lattice, verify_lattice
from .morphism import POINT_CAP, bilattice_points, classify

DEFAULT_SEED = identities.DEFAULT_SEED


class UsageError(Exception):
    pass


def _emit(args, payload, text):
    if args.json:
        print(io.dumps(payload))
    else:
        print(text)


def _load_morphism(path, cap):
    obj = io.load_json(path)
    if not isinstance(obj, dict) or not {"domain", "codomain", "table"} <= set(obj):
        raise UsageError(f"{path}: morphism JSON needs domain, codomain and table")
    f = io.morphism_from_json(obj)
    if f.domain.size ** 2 > cap:
        raise UsageError(f"{path}: {f.domain.size ** 2} input points exceed cap {cap}")
    return f


def _fmt_point(p):
    x, xp = io.point_to_json(p)
    return f"({','.join(map(str, x))} | {','.join(map(str, xp))})"


# -- lattice ---------------------------------------------------------------------


def cmd_lattice(args):
    cap = args.cap or DEFAULT_CAP
    src = args.lattice or args.source or "2"
    if src.endswith(".json"):
        lat = io.lattice_from_json(io.load_json(src))
    else:
        lat = build_lattice(src, cap=cap)
    problem = verify_lattice(lat)
    payload = io.lattice_to_json(lat)
    payload.update(size=lat.size, height=lat.height, valid=problem is None)
    if problem is not None:
        payload["violation"] = problem
    lines = [f"lattice {src}: {lat.size} elements, height {lat.height}",
             "covers: " + ", ".join(f"{lat.name(a)}<{lat.name(b)}"
                                    for a in lat.elements() for b in lat.upper_covers(a))]
    _emit(args, payload, "\n".join(lines))
    return 0 if problem is None else 2


# -- morphism --------------------------------------------------------------------


def cmd_morphism(args):
    cap = args.cap or POINT_CAP
    try:
        f = _load_morphism(args.file, cap)
    except NotPMonotone as exc:
        p, q = exc.witness
        payload = {"file": args.file, "monotone": False,
                   "witness": [io.point_to_json(p), io.point_to_json(q)],
                   "values": [io.point_to_json(v) for v in exc.values]}
        _emit(args, payload, f"{args.file}: NOT precision-monotone\n  {exc}")
        return 2
    if args.action == "check":
        payload = {"file": args.file, "monotone": True, "certificate": f.certificate,
                   "domain": io.shape_to_json(f.domain),
                   "codomain": io.shape_to_json(f.codomain)}
        _emit(args, payload, f"{args.file}: precision-monotone ({f.certificate})")
        return 0
    prof = classify(f, cap).to_dict()
    payload = {"file": args.file, **prof}
    _emit(args, payload, "\n".join(f"{k}: {'yes' if v else 'no'}" for k, v in prof.items()))
    return 0


# -- wf --------------------------------------------------------------------------


def cmd_wf(args):
    cap = args.cap or POINT_CAP
    f = _load_morphism(args.file, cap)
    dagger_split(f)
    fw = well_founded(f)
    entries = [[io.point_to_json(q), io.point_to_json(fw(q))] for q in bilattice_points(fw.domain)]
    payload = {"wf": entries}
    lines = [f"wf {_fmt_point(q)} -> {_fmt_point(fw(q))}" for q in bilattice_points(fw.domain)]
    if args.stable_set:
        sets = []
        for q in bilattice_points(fw.domain):
            pts = stable_set(f, q, cap)
            sets.append([io.point_to_json(q), [io.point_to_json(p) for p in pts]])
            lines.append(f"stable {_fmt_point(q)}: " + " ".join(_fmt_point(p) for p in pts))
        payload["stable_set"] = sets
    _emit(args, payload, "\n".join(lines))
    return 0


# -- identities --------------------------------------------------------------------


def cmd_verify(args):
    schema = identities.SCHEMAS.get(args.identity)
    if schema is None:
        raise UsageError(f"unknown identity {args.identity!r}; choose from "
                         + ", ".join(identities.SCHEMAS))
    seed = DEFAULT_SEED if args.seed is None else args.seed
    limit = args.cap or identities.EXHAUSTIVE_LIMIT
    lat = io.resolve_lattice(args.lattice)
    outcome = identities.search_counterexample(
        args.identity, lat, mode=args.mode, samples=args.samples, seed=seed, limit=limit,
        n=args.n)
    payload = outcome.to_dict()
    payload["valid_schema"] = schema.valid
    payload["lattice"] = args.lattice
    if outcome.found:
        r = outcome.counterexample
        text = (f"{args.identity} over {args.lattice}: counterexample after {outcome.checked} "
                f"instances\n  at {_fmt_point(r.witness)}: lhs {_fmt_point(r.lhs)} "
                f"rhs {_fmt_point(r.rhs)}")
    else:
        text = (f"{args.identity} over {args.lattice}: no counterexample in {outcome.checked} "
                f"instances ({outcome.mode}"
                + (f", seed {outcome.seed}" if outcome.seed is not None else "") + ")")
        if outcome.inapplicable:
            text += f"; premise not satisfied in {outcome.inapplicable}"
    _emit(args, payload, text)
    return 1 if outcome.found and schema.valid else 0


def cmd_reproduce(args):
    seed = DEFAULT_SEED if args.seed is None else args.seed
    rows = reference.reproduce_suite(exhaustive=args.exhaustive, samples=args.samples, seed=seed)
    ok = all(r.match for r in rows)
    payload = {"rows": [r.to_dict() for r in rows], "all_match": ok, "seed": seed,
               "exhaustive": args.exhaustive}
    width = max(len(r.name) for r in rows)
    lines = [f"{r.name:<{width}}  {'match' if r.match else 'MISMATCH'}" for r in rows]
    lines.append("all rows match" if ok else "some rows do not match")
    _emit(args, payload, "\n".join(lines))
    return 0 if ok else 1


# -- lp ----------------------------------------------------------------------------


def _read_program(path, cap):
    with open(path, encoding="utf-8") as fh:
        return lp.parse_program(fh.read(), cap=cap)


def cmd_lp(args):
    cap = args.cap or lp.ATOM_CAP
    prog = _read_program(args.file, cap if args.action != "wf" else None)
    if args.action == "wf":
        wf = lp.wf_model(prog).classify(prog.atoms)
        wf.pop("inconsistent")
        payload = {"wf": wf}
        _emit(args, payload, "\n".join(f"{k}: {' '.join(v)}" for k, v in wf.items()))
        return 0
    if args.action == "stable":
        models = lp.stable_models_aft(prog, cap=cap)
        payload = {"stable": models}
        text = "\n".join("{" + ", ".join(m) + "}" for m in models) or "no stable models"
        _emit(args, payload, text)
        return 0
    res = lp.analyze(prog, cap=cap)
    payload = res.to_dict()
    text = "\n".join([
        *(f"{k}: {' '.join(v)}" for k, v in payload["wf"].items()),
        "stable: " + (" ".join("{" + ",".join(m) + "}" for m in res.stable) or "none"),
        "oracle: " + (" ".join("{" + ",".join(m) + "}" for m in res.oracle) or "none"),
        "agree" if res.agree else "DISAGREE",
    ])
    _emit(args, payload, text)
    return 0 if res.agree else 1


# -- parser --------------------------------------------------------------------------


def _globals(parser, default):
    # registered on the top level and on every subcommand; SUPPRESS keeps a
    # flag given before the subcommand from being reset after it
    parser.add_argument("--json", action="store_true", default=default(False),
                        help="machine-readable output")
    parser.add_argument("--seed", type=int, default=default(None),
                        help=f"seed for randomized modes (default {DEFAULT_SEED})")
    parser.add_argument("--cap", type=int, default=default(None),
                        help="size cap for exhaustive work (meaning depends on the command)")


def build_parser():
    top = argparse.ArgumentParser(prog="afp", description="Approximation fixpoint toolkit.")
    _globals(top, lambda v: v)
    sub = top.add_subparsers(dest="command", required=True)

    def add(sp, name, **kw):
        p = sp.add_parser(name, **kw)
        _globals(p, lambda v: argparse.SUPPRESS)
        return p

    p = add(sub, "lattice", help="build and verify a lattice")
    p.add_argument("source", nargs="?", help="lattice spec (2, chain:N, pow:N, AxB) or JSON file")
    p.add_argument("--lattice", help="lattice spec, same as the positional argument")
    p.set_defaults(run=cmd_lattice)

    p = add(sub, "morphism", help="certify or classify a tabulated morphism")
    p.add_argument("action", choices=["check", "classify"])
    p.add_argument("file")
    p.set_defaults(run=cmd_morphism)

    p = add(sub, "wf", help="well-founded fixed point of a morphism A x B -o A")
    p.add_argument("file")
    p.add_argument("--stable-set", action="store_true", help="also list every stable fixed point")
    p.set_defaults(run=cmd_wf)

    p = add(sub, "identities", help="identity checks and the reference suite")
    isub = p.add_subparsers(dest="action", required=True)
    v = add(isub, "verify", help="search one identity for counterexamples")
    v.add_argument("--identity", required=True, choices=list(identities.SCHEMAS))
    v.add_argument("--lattice", default="2")
    v.add_argument("--mode", choices=["auto", "exhaustive", "sample"], default="auto")
    v.add_argument("--samples", type=int, default=identities.DEFAULT_SAMPLES)
    v.add_argument("--n", type=int, default=2, help="block count for permutation/group/weak_functorial")
    v.set_defaults(run=cmd_verify)
    r = add(isub, "reproduce-paper", help="recompute every reference value and compare")
    r.add_argument("--exhaustive", action="store_true",
                   help="search the valid laws exhaustively instead of by sampling")
    r.add_argument("--samples", type=int, default=500)
    r.set_defaults(run=cmd_reproduce)

    p = add(sub, "lp", help="logic program semantics")
    p.add_argument("action", choices=["wf", "stable", "analyze"])
    p.add_argument("file")
    p.set_defaults(run=cmd_lp)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.run(args)
    except (UsageError, ProgramSyntaxError, AFPError, ValueError, KeyError, OSError) as exc:
        if isinstance(exc, json.JSONDecodeError):
            exc = f"invalid JSON: {exc}"
        print(f"afp: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
