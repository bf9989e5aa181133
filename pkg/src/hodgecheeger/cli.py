"""Command-line front end: ``hodgecheeger {gen,spectra,cheeger,plap,verify}``.

Reports go to stdout as JSON (exact values as fraction strings), a short
summary goes to stderr.  Exit codes: 0 success, 1 failed assertion, 2 bad
input, 3 capacity limit reached.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import cheeger as ch
from . import p_laplacian as pl
from .complex import betti_numbers, load_complex, to_facet_json
from .errors import (
    CapacityError, HodgeCheegerError, Limits, MalformedInputError, default_limits,
)
from .generators import SUITE, generate
from .harness import SECTIONS, parse_sections, run_sections
from .laplacians import LaplacianSpec, spectral_report
from .reporting import FAIL, REPORT, Assertion, check, jsonable

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3


def _limits(args) -> Limits:
    limits = default_limits()
    changes = {}
    for item in args.limit or []:
        key, sep, value = item.partition("=")
        if not sep or key not in Limits.__dataclass_fields__:
            raise MalformedInputError(f"bad --limit {item!r}; use NAME=VALUE with NAME in {list(Limits.__dataclass_fields__)}")
        changes[key] = int(float(value))
    return limits.replace(**changes) if changes else limits


def _inputs(args) -> list[tuple[str, object]]:
    if getattr(args, "suite", False):
        return [(spec, generate(spec).complex) for spec in SUITE]
    if args.input:
        return [(args.input, load_complex(args.input))]
    if args.gen:
        return [(args.gen, generate(args.gen).complex)]
    raise MalformedInputError("give --input FILE or --gen SPEC")


def _cmd_gen(args, limits):
    named = generate(args.gen)
    payload = to_facet_json(named.complex)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, sort_keys=True)
            fh.write("\n")
    result = {"name": named.name, "complex": payload, "f_vector": named.complex.f_vector(),
              "betti": betti_numbers(named.complex), "expected": named.expected}
    return [(args.gen, named.complex, result, [])]


def _cmd_spectra(args, limits):
    out = []
    for name, K in _inputs(args):
        rep = spectral_report(K, LaplacianSpec(args.dim, args.kind, args.normalized))
        result = rep.to_dict()
        betti = betti_numbers(K)
        result["betti"] = betti
        asserts = []
        if args.kind == "full":
            asserts.append(check(f"zero multiplicity = b_{args.dim}", rep.zero_multiplicity == betti[args.dim],
                                 rep.zero_multiplicity, betti[args.dim]))
        out.append((name, K, result, asserts))
    return out


def _all_defs(K, d, M, limits, threads):
    r1 = ch.h_sigma_d_bruteforce(K, d, M, limits, threads)
    r2 = ch.h_sigma_d_zexpander(K, d, M, limits, threads)
    r4 = ch.h_sigma_d_filling(K, d, "grid", M, limits, threads)
    asserts = [check(f"D1 = D2 = D4 [d={d}]", r1.value == r2.value == r4.value, r1.value, (r2.value, r4.value))]
    if r2.value > 0:
        asserts.append(check(f"D3 certificate [d={d}]", ch.certify_d3(K, d, r2), r2.value, r2.witness))
    for r in (r1, r2, r4):
        if not r.stabilized:
            asserts.append(Assertion(f"{r.method} stabilization", REPORT, r.checked_M, None, "grid capped before two equal values"))
    return {"D1": r1.to_dict(), "D2": r2.to_dict(), "D4": r4.to_dict()}, asserts


def _cmd_cheeger(args, limits):
    out = []
    for name, K in _inputs(args):
        d = K.dim - 1 if args.dim is None else args.dim
        asserts: list[Assertion] = []
        if args.which == "gap0":
            if args.all_defs:
                result, asserts = _all_defs(K, d, args.M, limits, args.threads)
            else:
                result = ch.h_sigma_d(K, d, limits, args.threads).to_dict()
        elif args.which == "gapd2":
            result = ch.h_k_sigma(K, d, args.k, limits, args.threads).to_dict()
        elif args.which == "down":
            result = ch.h_down(K, K.dim if args.dim is None else d, limits, threads=args.threads).to_dict()
        elif args.which == "z2":
            z = ch.z2_cheeger(K, d, limits)
            h = ch.h_sigma_d(K, d, limits, args.threads)
            result = {"z2": z.to_dict(), "gap0": h.to_dict(), "mismatch": z.value == 0 and h.value > 0}
        else:  # diam
            result = {"one_over_diam": ch.diameter_formula(K)}
        out.append((name, K, result, asserts))
    return out


def _cmd_plap(args, limits):
    out = []
    for name, K in _inputs(args):
        d = args.dim
        if args.op == "max":
            est = pl.max_eig_p(pl.PRayleighProblem(K, d, args.p, args.direction, not args.unnormalized),
                               args.restarts, args.seed, args.threads)
            out.append((name, K, est.to_dict(), []))
            continue
        if args.op == "gap":
            rep = pl.verify_gap_p(K, d, args.p, args.restarts, args.seed, limits, args.threads)
        elif args.op == "duality":
            rep = pl.verify_p_duality(K, d, args.p, args.restarts, args.seed, args.threads)
        else:
            rep = pl.verify_rough_cheeger_p(K, d, args.p, limits)
        out.append((name, K, {"data": jsonable(rep.data)}, rep.assertions))
    return out


def _cmd_verify(args, limits):
    sections = parse_sections(args.sections)
    out = []
    for name, K in _inputs(args):
        reports = run_sections(K, sections, limits, args.threads)
        asserts = [a for r in reports.values() for a in r.assertions]
        out.append((name, K, {s: jsonable(r.data) for s, r in reports.items()}, asserts))
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hodgecheeger", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=1, help="worker cap; results do not depend on it")
    parser.add_argument("--limit", action="append", metavar="NAME=VALUE", help="override a capacity limit")
    sub = parser.add_subparsers(dest="command", required=True)

    def source(p, suite=False):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--input", help="JSON file with a 'facets' list")
        g.add_argument("--gen", help="generator spec, e.g. boundary_simplex:3")
        if suite:
            g.add_argument("--suite", action="store_true", help="run over the built-in suite")

    p = sub.add_parser("gen", help="emit a generated complex as facet JSON")
    p.add_argument("gen")
    p.add_argument("--out")

    p = sub.add_parser("spectra", help="Laplacian spectrum with I_d and Betti cross-check")
    source(p)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--kind", choices=("up", "down", "full"), default="up")
    p.add_argument("--normalized", action="store_true")

    p = sub.add_parser("cheeger", help="Cheeger constants")
    source(p)
    p.add_argument("--dim", type=int)
    p.add_argument("--which", choices=("gap0", "gapd2", "down", "z2", "diam"), default="gap0")
    p.add_argument("--k", type=int, default=1, help="number of pairs for gapd2")
    p.add_argument("--all-defs", action="store_true", help="run every definition of gap0 and compare")
    p.add_argument("--M", type=int, default=3, help="largest grid bound for the --all-defs searches")

    p = sub.add_parser("plap", help="p-Laplacian estimates and checks")
    source(p)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--op", choices=("max", "gap", "duality", "rough"), default="max")
    p.add_argument("--direction", choices=("up", "down"), default="up")
    p.add_argument("--unnormalized", action="store_true")
    p.add_argument("--restarts", type=int, default=pl.DEFAULT_RESTARTS)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("verify", help="run assertion families")
    source(p, suite=True)
    p.add_argument("--sections", default="all", help=f"'all' or a comma list of {', '.join(SECTIONS)}")
    return parser


_COMMANDS = {"gen": _cmd_gen, "spectra": _cmd_spectra, "cheeger": _cmd_cheeger, "plap": _cmd_plap,
             "verify": _cmd_verify}


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        limits = _limits(args)
        runs = _COMMANDS[args.command](args, limits)
    except CapacityError as exc:
        print(f"capacity limit {exc.limit_name}={exc.limit} reached (requested {exc.requested}): {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (HodgeCheegerError, ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = {
        "command": argv,
        "runs": [
            {"input": name, "digest": K.digest(), "results": jsonable(result),
             "assertions": [a.to_dict() for a in asserts]}
            for name, K, result, asserts in runs
        ],
    }
    failed = [(name, a) for name, _, _, asserts in runs for a in asserts if a.status == FAIL]
    report["passed"] = not failed
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    total = sum(len(asserts) for *_, asserts in runs)
    print(f"{args.command}: {len(runs)} input(s), {total} assertion(s), {len(failed)} failed", file=sys.stderr)
    for name, a in failed:
        print(f"  FAIL {name}: {a.name} (lhs={jsonable(a.lhs)}, rhs={jsonable(a.rhs)})", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
