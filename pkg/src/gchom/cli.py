"""Command-line front end.

Subcommands: gen (slice bases), diff (differential matrices), rank
(prime-field ranks of SMS matrices), cohomology (dimension tables),
kneissler (top-degree bound reports), check (self-check suites).
"""

from __future__ import annotations

import argparse
import secrets
import sys
from pathlib import Path

from gchom.cache import resolve_cache
from gchom.checks import SUITES
from gchom.cohomology import cohomology_dims, render_text
from gchom.complexes import (
    ComplexSpec,
    Variant,
    differential_matrix,
    dump_basis,
    enumerate_basis,
)
from gchom.graphs import Parity
from gchom.kneissler import upper_bound
from gchom.linalg import PrimeField, gauss_rank, reduce_mod_p, wiedemann_rank
from gchom.sparse import dump_sms, load_sms


def _add_spec_flags(p: argparse.ArgumentParser, variant: bool = True):
    p.add_argument("--parity", required=True, choices=["even", "odd"])
    if variant:
        p.add_argument("--variant", required=True, choices=["full", "tri"])
    p.add_argument("--loops", required=True, type=int)


def _spec_from(args) -> ComplexSpec:
    return ComplexSpec(Parity.from_name(args.parity),
                       Variant.from_name(args.variant), args.loops)


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="gchom",
        description="Graph-complex bases, differentials, ranks, and bounds.",
    )
    top.add_argument("--threads", type=int, default=1,
                     help="worker cap (results never depend on it; the "
                          "current implementation is single-process)")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="enumerate a slice basis")
    _add_spec_flags(p)
    p.add_argument("--vertices", required=True, type=int)
    p.add_argument("--out", help="write the .gls basis file here")
    p.add_argument("--cache")

    p = sub.add_parser("diff", help="assemble one differential matrix")
    _add_spec_flags(p)
    p.add_argument("--vertices", required=True, type=int,
                   help="vertex count of the source slice")
    p.add_argument("--out", required=True, help="SMS output path")
    p.add_argument("--cache")

    p = sub.add_parser("rank", help="rank of an SMS matrix over F_p")
    p.add_argument("--matrix", required=True)
    p.add_argument("--prime", type=int, default=3323)
    p.add_argument("--method", choices=["gauss", "wiedemann"], default="gauss")
    p.add_argument("--block", type=int, default=1)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("cohomology", help="cohomology dimension table")
    _add_spec_flags(p)
    p.add_argument("--prime", type=int, default=3323)
    p.add_argument("--method", choices=["gauss", "wiedemann"], default="gauss")
    p.add_argument("--confirm-prime", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--cache")
    p.add_argument("--json", help="write the JSON table here ('-' for stdout)")

    p = sub.add_parser("kneissler", help="top-degree upper-bound report")
    _add_spec_flags(p, variant=False)
    p.add_argument("--prime", type=int, default=3323)
    p.add_argument("--method", choices=["gauss", "wiedemann"], default="gauss")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("check", help="run a self-check suite")
    p.add_argument("--suite", required=True,
                   choices=["d2", "tables", "kneissler", "linalg"])
    p.add_argument("--max-loops", type=int)
    p.add_argument("--prime", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cache")
    return top


def _pick_seed(given: int | None) -> int:
    if given is not None:
        return given
    return secrets.randbelow(2 ** 31)


def cmd_gen(args) -> int:
    spec = _spec_from(args)
    cache = resolve_cache(args.cache)
    if cache:
        basis = cache.basis(spec, args.vertices)
    else:
        basis = enumerate_basis(spec, args.vertices)
    if args.out:
        Path(args.out).write_text(dump_basis(basis))
    print(f"count={len(basis)}")
    return 0


def cmd_diff(args) -> int:
    spec = _spec_from(args)
    cache = resolve_cache(args.cache)
    if cache:
        matrix = cache.matrix(spec, args.vertices)
    else:
        src = enumerate_basis(spec, args.vertices)
        dst = enumerate_basis(spec, args.vertices - 1)
        matrix = differential_matrix(src, dst)
    Path(args.out).write_text(dump_sms(matrix))
    print(f"rows={matrix.nrows} cols={matrix.ncols} entries={matrix.num_entries}")
    return 0


def cmd_rank(args) -> int:
    matrix = load_sms(Path(args.matrix).read_text())
    fp = PrimeField(args.prime)
    mp = reduce_mod_p(matrix, fp)
    seed = _pick_seed(args.seed)
    if args.method == "gauss":
        result = gauss_rank(mp, seed=seed)
    else:
        result = wiedemann_rank(mp, args.block, seed=seed)
    print(result.report_line())
    return 0


def cmd_cohomology(args) -> int:
    spec = _spec_from(args)
    cache = resolve_cache(args.cache)
    seed = _pick_seed(args.seed)
    table = cohomology_dims(spec, prime=args.prime, method=args.method,
                            seed=seed, confirm_prime=args.confirm_prime,
                            cache=cache)
    if args.method == "wiedemann":
        print(f"seed={seed}")
    if args.json == "-":
        print(table.to_json())
    else:
        print(render_text(table))
        if args.json:
            Path(args.json).write_text(table.to_json() + "\n")
    return 0


def cmd_kneissler(args) -> int:
    seed = _pick_seed(args.seed)
    report = upper_bound(args.loops, Parity.from_name(args.parity),
                         prime=args.prime, method=args.method, seed=seed)
    print(report.to_json())
    return 0


def cmd_check(args) -> int:
    suite = SUITES[args.suite]
    kwargs = {}
    if args.suite == "d2":
        if args.max_loops:
            kwargs["max_loops"] = args.max_loops
        kwargs["cache"] = resolve_cache(args.cache)
    elif args.suite == "tables":
        if args.max_loops:
            kwargs["max_even"] = args.max_loops
            kwargs["max_odd"] = min(args.max_loops, 6)
        if args.prime:
            kwargs["primes"] = (args.prime, 10007 if args.prime != 10007 else 3323)
        kwargs["cache"] = resolve_cache(args.cache)
    elif args.suite == "kneissler":
        if args.max_loops:
            kwargs["max_loops"] = args.max_loops
        if args.prime:
            kwargs["prime"] = args.prime
    elif args.suite == "linalg":
        kwargs["seed"] = args.seed
    results = suite(**kwargs)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


_COMMANDS = {
    "gen": cmd_gen,
    "diff": cmd_diff,
    "rank": cmd_rank,
    "cohomology": cmd_cohomology,
    "kneissler": cmd_kneissler,
    "check": cmd_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"gchom: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
