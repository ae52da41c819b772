"""Command-line front door.

Subcommands: area, construct, check, compare, density, verify.  Exit
codes: 0 pass, 1 verification failure, 2 usage error.  Rational-valued
flags are "p/q" strings; APFREE_THREADS mirrors --threads.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .baselines import behrend_set, halfbox_set
from .blocks import BuildingBlock, PIECE_LABELS
from .dsets import DiscreteSet
from .groups import BuildOptions, build_fpn_set, build_group_set
from .integers import build_integer_set, build_integer_set_direct
from .rational import decimal_str, parse_point, parse_rational, rat_str
from .storage import dump_json, read_set, write_set
from .verify import (
    area_oracle,
    check_all,
    check_building_block,
    check_facts,
    check_midpoint_sums,
    check_x1z1_bound,
    clipped_areas,
    density_estimate,
)


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _moduli(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad moduli list {text!r}") from exc


def _shift(text: str) -> tuple[Fraction, ...]:
    try:
        return parse_point(text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _default_threads() -> int:
    return int(os.environ.get("APFREE_THREADS", "1"))


def _print(obj) -> None:
    sys.stdout.write(dump_json(obj))


def _report_lines(report) -> None:
    _print(report.to_jsonable())
    sys.stderr.write(
        f"[{report.subject}] pass={report.passed} checked={report.checked} "
        f"elapsed={report.elapsed:.3f}s\n"
    )


def cmd_area(args) -> int:
    block = BuildingBlock(args.epsilon)
    stated = block.piece_areas()
    clipped = clipped_areas(args.epsilon)
    total = sum(stated.values(), Fraction(0))
    if args.polygons:
        for poly in block.piece_polygons().values():
            _print(poly.to_jsonable())
    for piece in (1, 2, 3):
        _print(
            {
                "piece": PIECE_LABELS[piece],
                "exact": rat_str(stated[piece]),
                "approx": decimal_str(stated[piece]),
            }
        )
    _print({"piece": "total", "exact": rat_str(total), "approx": decimal_str(total)})
    oracle = area_oracle(args.epsilon)
    agree = all(stated[k] == clipped[k] for k in (1, 2, 3))
    bound_ok = total >= Fraction(7, 24) - args.epsilon
    _print(
        {
            "check": "area",
            "oracles_agree": agree,
            "lower_bound": rat_str(Fraction(7, 24) - args.epsilon),
            "bound_ok": bound_ok,
            "piece_bounds_ok": oracle.passed,
        }
    )
    return 0 if (agree and bound_ok and oracle.passed) else 1


def _apply_config(args, parser) -> None:
    """Fill construct parameters from a JSON config; explicit flags win.

    Recognized keys: moduli, p, n, N, epsilon, delta, trials, seed, shift,
    slice_j, n_override (rationals as "p/q" strings).
    """
    with open(args.config) as fh:
        config = json.load(fh)
    rationals = {"epsilon", "delta"}
    for key, value in config.items():
        if key not in {"moduli", "p", "n", "N", "epsilon", "delta", "trials",
                       "seed", "shift", "slice_j", "n_override"}:
            parser.error(f"unknown config key {key!r}")
        if getattr(args, key, None) is None:
            if key in rationals:
                value = parse_rational(str(value))
            elif key == "moduli":
                value = tuple(int(m) for m in value)
            elif key == "shift":
                value = tuple(parse_rational(str(v)) for v in value)
            setattr(args, key, value)


def _build(args) -> DiscreteSet:
    trials = getattr(args, "trials", None)
    seed = getattr(args, "seed", None)
    options = BuildOptions(
        epsilon=getattr(args, "epsilon", None),
        delta=getattr(args, "delta", None),
        trials=16 if trials is None else trials,
        seed=0 if seed is None else seed,
        shift=getattr(args, "shift", None),
        slice_index=getattr(args, "slice_j", None),
    )
    kind = args.kind
    if kind == "zm":
        return build_group_set(args.moduli, options)
    if kind == "fpn":
        return build_fpn_set(args.p, args.n, options)
    if kind == "int":
        return build_integer_set(args.N, options, n_override=args.n_override)
    if kind == "int-direct":
        return build_integer_set_direct(args.N, n=args.n_override, options=options,
                                        b_trials=args.b_trials)
    if kind == "behrend":
        return behrend_set(args.N)
    if kind == "halfbox":
        return halfbox_set(args.p, args.n)
    raise AssertionError(kind)


def _default_name(args, dset: DiscreteSet) -> str:
    kind = args.kind.replace("-", "_")
    if dset.kind == "group":
        core = "x".join(str(m) for m in dset.moduli)
    else:
        core = f"N{dset.bound}"
    seed = getattr(args, "seed", None)
    return f"{kind}_{core}" + (f"_s{seed}" if seed is not None else "")


def cmd_construct(args) -> int:
    dset = _build(args)
    report = None
    if not args.no_verify:
        report = dset.verify()
        if not report.passed:
            _print(report.to_jsonable())
            sys.stderr.write("verification FAILED; refusing to write the set\n")
            return 1
    name = args.name or _default_name(args, dset)
    paths = write_set(dset, args.outdir, name, report)
    summary = {
        "name": name,
        "kind": args.kind,
        "size": dset.size,
        "universe": dset.universe,
        "density": rat_str(dset.density),
        "files": {k: str(p) for k, p in paths.items()},
        "verified": None if report is None else report.passed,
    }
    _print(summary)
    return 0


def cmd_check(args) -> int:
    runner = {
        "block": lambda: [check_building_block(args.epsilon, args.Q, args.threads)],
        "midpoint": lambda: [check_midpoint_sums(args.epsilon, args.Q, args.threads)],
        "x1z1": lambda: [check_x1z1_bound(args.epsilon, args.Q, args.threads)],
        "facts": lambda: [check_facts(args.epsilon, args.Q, args.threads)],
        "all": lambda: check_all(args.epsilon, args.Q, args.threads),
    }[args.props]
    reports = runner()
    for report in reports:
        _report_lines(report)
    return 0 if all(r.passed for r in reports) else 1


def _compare_rows(args):
    options = BuildOptions(seed=args.seed)
    if args.context == "int":
        yield "behrend", behrend_set(args.N)
        yield "crt-construction", build_integer_set(args.N, options)
        yield "direct-construction", build_integer_set_direct(args.N, options=options)
    else:
        yield "halfbox", halfbox_set(args.p, args.n)
        yield "new", build_fpn_set(args.p, args.n, options)


def cmd_compare(args) -> int:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["construction", "universe", "size", "density", "density_approx", "certified"])
    ok = True
    for label, dset in _compare_rows(args):
        report = dset.verify(subject=label)
        ok = ok and report.passed
        writer.writerow(
            [label, dset.universe, dset.size, rat_str(dset.density),
             decimal_str(dset.density), report.passed]
        )
    text = buf.getvalue()
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0 if ok else 1


def cmd_density(args) -> int:
    report = density_estimate(args.epsilon, args.m)
    _report_lines(report)
    return 0 if report.passed else 1


def cmd_verify(args) -> int:
    dset = read_set(args.set, args.sidecar)
    report = dset.verify()
    if args.all:
        report.counts["all_counterexamples"] = _all_counterexamples(dset)
    _report_lines(report)
    return 0 if report.passed else 1


def _all_counterexamples(dset: DiscreteSet) -> list:
    out = []
    elems = list(dset.elements)
    if dset.kind == "integer":
        member = set(elems)
        for ai, x in enumerate(elems):
            for z in elems[ai + 1:]:
                if (x + z) % 2 == 0 and (x + z) // 2 in member and (x + z) // 2 != x:
                    out.append({"x": x, "y": (x + z) // 2, "z": z})
    else:
        from .verify import _halve_mod
        from itertools import product as iproduct

        member = set(elems)
        for ai, x in enumerate(elems):
            for z in elems[ai + 1:]:
                per = [_halve_mod(x[i] + z[i], m) for i, m in enumerate(dset.moduli)]
                if any(not c for c in per):
                    continue
                for y in iproduct(*per):
                    if y in member:
                        out.append({"x": list(x), "y": list(y), "z": list(z)})
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apfree",
        description="Construct, certify and measure progression-free sets "
        "with exact rational arithmetic.",
    )
    parser.add_argument("--threads", type=int, default=_default_threads(),
                        help="worker cap for grid sweeps (env APFREE_THREADS)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_area = sub.add_parser("area", help="piece and total block areas, dual oracles")
    p_area.add_argument("--epsilon", type=_rational, required=True)
    p_area.add_argument("--polygons", action="store_true",
                        help="also print the piece polygons as rational-string JSON")
    p_area.set_defaults(fn=cmd_area)

    p_con = sub.add_parser("construct", help="build, certify and write a set")
    p_con.add_argument("kind", choices=["zm", "fpn", "int", "int-direct", "behrend", "halfbox"])
    p_con.add_argument("--moduli", type=_moduli, help="comma-separated, e.g. 12,12")
    p_con.add_argument("--p", type=int)
    p_con.add_argument("--n", type=int)
    p_con.add_argument("--N", type=int)
    p_con.add_argument("--n-override", dest="n_override", type=int, default=None)
    p_con.add_argument("--epsilon", type=_rational, default=None)
    p_con.add_argument("--delta", type=_rational, default=None)
    p_con.add_argument("--trials", type=int, default=None)
    p_con.add_argument("--seed", type=int, default=None)
    p_con.add_argument("--shift", type=_shift, default=None)
    p_con.add_argument("--slice-j", dest="slice_j", type=int, default=None)
    p_con.add_argument("--b-trials", dest="b_trials", type=int, default=64)
    p_con.add_argument("--outdir", default="out")
    p_con.add_argument("--name", default=None)
    p_con.add_argument("--no-verify", action="store_true",
                       help="skip certification; sidecar is watermarked UNCERTIFIED")
    p_con.add_argument("--config", default=None,
                       help="JSON file with construction parameters; flags override")
    p_con.set_defaults(fn=cmd_construct)

    p_chk = sub.add_parser("check", help="exhaustive grid sweeps of the block facts")
    p_chk.add_argument("props", choices=["all", "block", "midpoint", "x1z1", "facts"])
    p_chk.add_argument("--epsilon", type=_rational, required=True)
    p_chk.add_argument("--Q", type=int, default=120, help="grid denominator (multiple of 24)")
    p_chk.set_defaults(fn=cmd_check)

    p_cmp = sub.add_parser("compare", help="size table: new construction vs baseline")
    p_cmp.add_argument("context", choices=["int", "fpn"])
    p_cmp.add_argument("--N", type=int)
    p_cmp.add_argument("--p", type=int)
    p_cmp.add_argument("--n", type=int)
    p_cmp.add_argument("--seed", type=int, default=0)
    p_cmp.add_argument("--out", default=None, help="also write the CSV here")
    p_cmp.set_defaults(fn=cmd_compare)

    p_den = sub.add_parser("density", help="grid density of the block vs exact area")
    p_den.add_argument("--epsilon", type=_rational, required=True)
    p_den.add_argument("--m", type=int, required=True)
    p_den.set_defaults(fn=cmd_density)

    p_ver = sub.add_parser("verify", help="re-certify an existing set file")
    p_ver.add_argument("--set", required=True)
    p_ver.add_argument("--sidecar", default=None)
    p_ver.add_argument("--all", action="store_true",
                       help="enumerate every counterexample, not just the first")
    p_ver.set_defaults(fn=cmd_verify)
    return parser


def _validate(args, parser) -> None:
    need = {
        "zm": ["moduli"], "fpn": ["p", "n"], "int": ["N"], "int-direct": ["N"],
        "behrend": ["N"], "halfbox": ["p", "n"],
    }
    if args.command == "construct":
        if args.config is not None:
            _apply_config(args, parser)
        for field in need[args.kind]:
            if getattr(args, field) is None:
                parser.error(f"construct {args.kind} requires --{field}")
    if args.command == "compare":
        if args.context == "int" and args.N is None:
            parser.error("compare int requires --N")
        if args.context == "fpn" and (args.p is None or args.n is None):
            parser.error("compare fpn requires --p and --n")
    if args.command == "check" and args.Q % 24 != 0:
        parser.error("--Q must be a multiple of 24")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(args, parser)
    try:
        return args.fn(args)
    except (ValueError, RuntimeError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
