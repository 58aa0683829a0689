"""Command-line surface: every operation, machine-readable in and out.

Output is a single JSON document on stdout with a ``schema`` field, the
command name, restated inputs and the result; diagnostics go to stderr.
Rationals are serialized as "p/q" strings with positive denominator and
coprime parts; index subsets as sorted 1-based arrays.  Exit codes: 0 on
success, 1 on a domain error (with a machine-readable error object), 2 on
usage errors.  Identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import selftest as selftest_mod
from .cones import (
    DivisorClass,
    cone_membership_lp,
    decompose,
    extremality_certificate,
    git_cone_membership,
    git_effective_generators,
    moduli_cone,
    moduli_effective_generators,
    surgery,
)
from .conformal import (
    DEFAULT_MAX_WEIGHT_SUM,
    BlockSpec,
    DoubleSequence,
    enumerate_paths,
    height,
    rank_fusion,
    rank_sections,
)
from .errors import DomainError
from .models import classify_model, theta_class, wall_walk
from .weights import (
    ParabolicWeight,
    PointConfig,
    classify_linearization,
    picard_rank_git,
    stability,
    walls_containing,
)

SCHEMA = 1


def _frac(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _fracs(xs):
    return [_frac(x) for x in xs]


def _indices(members):
    return [i + 1 for i in sorted(members)]


def _parse_fraction(s: str) -> Fraction:
    return Fraction(s.strip())


def _parse_weight(s: str) -> ParabolicWeight:
    return ParabolicWeight(tuple(_parse_fraction(p) for p in s.split(",")))


def _parse_ints(s: str):
    return tuple(int(p) for p in s.split(","))


def _divisor_json(d: DivisorClass):
    return {"b": _fracs(d.b), "t": _frac(d.t)}


def _wall_json(w):
    return {"I": _indices(w.members), "m": w.m}


def _cmd_rank(args):
    spec = BlockSpec(args.level, _parse_ints(args.shape))
    inputs = {"level": args.level, "shape": list(spec.shape), "method": args.method}
    if args.method == "fusion":
        value = rank_fusion(spec)
    elif args.method == "paths":
        value = len(enumerate_paths(spec, args.max_weight_sum))
    else:
        point = tuple(_parse_fraction(p) for p in args.point.split(",")) if args.point else None
        value = rank_sections(spec, point, args.max_weight_sum)
        result = {"rank": value, "method": args.method, "odd_total": spec.total % 2 != 0}
        return inputs, result
    return inputs, {"rank": value, "method": args.method}


def _cmd_paths(args):
    spec = BlockSpec(args.level, _parse_ints(args.shape))
    paths = enumerate_paths(spec, args.max_weight_sum)
    result = {
        "count": len(paths),
        "paths": [{"top": list(p.top), "bottom": list(p.bottom)} for p in paths],
    }
    return {"level": args.level, "shape": list(spec.shape)}, result


def _cmd_surgery(args):
    ds = DoubleSequence(_parse_ints(args.top), _parse_ints(args.bottom), args.level)
    res = surgery(ds)
    result = {
        "T": _indices(res.removed),
        "height_in": height(ds),
        "height_out": height(res.ds_out),
        "output": {
            "top": list(res.ds_out.top),
            "bottom": list(res.ds_out.bottom),
            "level": res.ds_out.level,
        },
    }
    inputs = {"level": args.level, "top": list(ds.top), "bottom": list(ds.bottom)}
    return inputs, result


def _cmd_decompose(args):
    d = DivisorClass(tuple(_parse_fraction(p) for p in args.b.split(",")), _parse_fraction(args.t))
    dec = decompose(d, args.max_weight_sum)
    result = {
        "cleared": _divisor_json(dec.cleared),
        "scale": _frac(dec.scale),
        "terms": [
            {"I": _indices(members), "multiplicity": _frac(mult)} for members, mult in dec.terms
        ],
    }
    return {"b": _fracs(d.b), "t": _frac(d.t)}, result


def _cmd_generators(args):
    if args.kind == "git":
        w = _parse_weight(args.weight)
        gens = git_effective_generators(w, require_general=not args.include_nongeneral)
        inputs = {"kind": "git", "weight": _fracs(w.entries)}
    else:
        gens = moduli_effective_generators(args.n)
        inputs = {"kind": "moduli", "n": args.n}
    result = {"count": len(gens), "generators": [_divisor_json(g) for g in gens]}
    return inputs, result


def _cmd_certify(args):
    if args.exceptional:
        g = DivisorClass.exceptional(args.n)
        inputs = {"n": args.n, "generator": "E"}
    else:
        members = tuple(i - 1 for i in _parse_ints(args.members))
        g = DivisorClass.generator(members, args.n)
        inputs = {"n": args.n, "I": _indices(members)}
    cert = extremality_certificate(g)
    result = {
        "I": _indices(cert.members),
        "lp_extremal": cert.lp_extremal,
        "functionals": [_fracs(f) for f in cert.functionals],
    }
    return inputs, result


def _cmd_stability(args):
    w = _parse_weight(args.weight)
    blocks = tuple(tuple(i - 1 for i in _parse_ints(part)) for part in args.blocks.split(";"))
    config = PointConfig(blocks)
    verdict = stability(config, w)
    inputs = {"weight": _fracs(w.entries), "blocks": [_indices(b) for b in config.blocks]}
    return inputs, {"stability": verdict.value}


def _cmd_classify_weight(args):
    w = _parse_weight(args.weight)
    cls, maximal = classify_linearization(w)
    result = {"class": cls.value, "maximal_stable_locus": maximal}
    try:
        pic = picard_rank_git(w)
        result["picard_rank"] = pic.rank
        result["unstable_pairs"] = [_indices(p) for p in pic.unstable_pairs]
    except DomainError:
        pass
    return {"weight": _fracs(w.entries)}, result


def _cmd_walls(args):
    w = _parse_weight(args.weight)
    walls = walls_containing(w)
    return {"weight": _fracs(w.entries)}, {"count": len(walls), "walls": [_wall_json(x) for x in walls]}


def _cmd_walk(args):
    w = _parse_weight(args.weight)
    res = wall_walk(w)
    events = [
        {
            "c": _frac(e.c),
            "wall": _wall_json(e.wall),
            "dim_minus": e.dim_minus,
            "dim_plus": e.dim_plus,
            "kind": e.kind.value,
        }
        for e in res.events
    ]
    collapse = None
    if res.collapse is not None:
        collapse = {"c": _frac(res.collapse[0]), "wall": _wall_json(res.collapse[1])}
    return {"weight": _fracs(w.entries)}, {"events": events, "collapse": collapse}


def _cmd_theta(args):
    w = _parse_weight(args.weight)
    th = theta_class(w)
    result = {"k": th.k, "class": _divisor_json(th.divisor), "system_rank": th.system_rank}
    return {"weight": _fracs(w.entries)}, result


def _cmd_classify_model(args):
    d = DivisorClass(tuple(_parse_fraction(p) for p in args.b.split(",")), _parse_fraction(args.t))
    md = classify_model(d)
    result = {
        "kind": md.kind.value,
        "weight": _fracs(md.weight),
        "remaining": _indices(md.remaining),
        "dropped_vacua": _indices(md.dropped_vacua),
        "dropped_saturated": _indices(md.dropped_saturated),
        "degree_shift": md.degree_shift,
        "reduction_order": md.reduction_order,
    }
    return {"b": _fracs(d.b), "t": _frac(d.t)}, result


def _cmd_git_cone(args):
    b = tuple(_parse_fraction(p) for p in args.b.split(","))
    pos = git_cone_membership(b)
    result = {"position": pos.value}
    if args.lp:
        from itertools import combinations

        n = len(b)
        gens = tuple(
            tuple(Fraction(1 if i in pair else 0) for i in range(n))
            for pair in combinations(range(n), 2)
        )
        from .cones import RationalCone

        lp_pos, _ = RationalCone(gens).membership(b)
        result["lp_position"] = lp_pos.value
        result["lp_agrees"] = lp_pos == pos
    return {"b": _fracs(b)}, result


def _cmd_selftest(args):
    checks = selftest_mod.run_selftest(quick=args.quick, workers=_worker_count())
    all_passed = all(c["passed"] for c in checks)
    return {"quick": args.quick}, {"checks": checks, "all_passed": all_passed}


def _worker_count() -> int:
    raw = os.environ.get("PARABLOCKS_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        print(f"ignoring invalid PARABLOCKS_WORKERS={raw!r}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parablocks")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_bound(p):
        p.add_argument("--max-weight-sum", type=int, default=DEFAULT_MAX_WEIGHT_SUM)

    p = sub.add_parser("rank", help="block rank by fusion, path count, or sections")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--shape", required=True)
    p.add_argument("--method", choices=["fusion", "paths", "sections"], default="fusion")
    p.add_argument("--point", default=None, help="comma-separated rationals for --method sections")
    add_bound(p)
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("paths", help="enumerate boxed Catalan paths")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--shape", required=True)
    add_bound(p)
    p.set_defaults(func=_cmd_paths)

    p = sub.add_parser("surgery", help="lower a path's height by one")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--top", required=True)
    p.add_argument("--bottom", required=True)
    p.set_defaults(func=_cmd_surgery)

    p = sub.add_parser("decompose", help="write an effective class over the generators")
    p.add_argument("--b", required=True)
    p.add_argument("--t", required=True)
    add_bound(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("generators", help="effective cone generators")
    p.add_argument("--kind", choices=["git", "moduli"], required=True)
    p.add_argument("--weight", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--include-nongeneral", action="store_true")
    p.set_defaults(func=_cmd_generators)

    p = sub.add_parser("certify", help="extremality certificate for one generator")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--members", default=None, help="1-based even subset, e.g. 1,2")
    p.add_argument("--exceptional", action="store_true", help="certify E instead")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("stability", help="stability of a coincidence pattern")
    p.add_argument("--weight", required=True)
    p.add_argument("--blocks", required=True, help="semicolon-separated 1-based groups")
    p.set_defaults(func=_cmd_stability)

    p = sub.add_parser("classify-weight", help="effective/general classification")
    p.add_argument("--weight", required=True)
    p.set_defaults(func=_cmd_classify_weight)

    p = sub.add_parser("walls", help="stability walls through a weight")
    p.add_argument("--weight", required=True)
    p.set_defaults(func=_cmd_walls)

    p = sub.add_parser("walk", help="wall crossings while scaling a weight up")
    p.add_argument("--weight", required=True)
    p.set_defaults(func=_cmd_walk)

    p = sub.add_parser("theta", help="natural ample class of a weight")
    p.add_argument("--weight", required=True)
    p.set_defaults(func=_cmd_theta)

    p = sub.add_parser("classify-model", help="name the model of an effective class")
    p.add_argument("--b", required=True)
    p.add_argument("--t", required=True)
    p.set_defaults(func=_cmd_classify_model)

    p = sub.add_parser("git-cone", help="membership in the pair cone")
    p.add_argument("--b", required=True)
    p.add_argument("--lp", action="store_true", help="cross-check with exact LP")
    p.set_defaults(func=_cmd_git_cone)

    p = sub.add_parser("selftest", help="exhaustive small-instance invariant suites")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=_cmd_selftest)

    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        inputs, result = args.func(args)
    except DomainError as exc:
        doc = {
            "schema": SCHEMA,
            "command": args.command,
            "error": {"tag": exc.tag, "message": str(exc)},
        }
        print(json.dumps(doc, sort_keys=True))
        return 1
    except (ValueError,OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    doc = {"schema": SCHEMA, "command": args.command, "inputs": inputs, "result": result}
    print(json.dumps(doc, sort_keys=True))
    if args.command == "selftest" and not result["all_passed"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
