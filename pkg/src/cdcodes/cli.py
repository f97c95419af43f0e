"""Command-line front end: ``cdcodes {bound,construct,verify,rankdist,table}``.

Exit status: 0 on success, 1 when a verification fails, 2 on usage or
parameter errors.  Results go to stdout, diagnostics and progress to stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time

from .bounds import (
    REGISTRY_ENV,
    KnownValueRegistry,
    bound_improved_linkage,
    bound_lifted_mrd,
    bound_parallel,
    bound_rrmc,
    best_bound,
)
from .constructions import (
    ParallelLinkageParams,
    ScRepresentation,
    build_parallel,
    lifted_mrd,
    linkage,
    singleton,
)
from .rankmetric import ENUMERATION_CAP, MrdCodeSpec, delsarte_rank_distribution, mrd_matrices
from .subspace import ConstantDimensionCode, Sample, verify_cdc

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

log = logging.getLogger("cdcodes")


class UsageError(Exception):
    pass


def _registry(args) -> KnownValueRegistry:
    reg = KnownValueRegistry() if args.bare else KnownValueRegistry.shipped()
    path = args.registry or os.environ.get(REGISTRY_ENV)
    if path:
        reg = reg.merged(KnownValueRegistry.load(path))
    return reg


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} needs {', '.join(missing)}")


# -- bound -------------------------------------------------------------------


def cmd_bound(args, out) -> int:
    reg = _registry(args)
    q, n, d, k = args.q, args.n, args.d, args.k
    rule = args.rule
    if rule == "best":
        cert = best_bound(q, n, d, k, reg)
    elif rule == "registry":
        cert = reg.lookup(q, n, d, k)
    elif rule == "lmrd":
        cert = bound_lifted_mrd(q, n, d, k)
    elif rule == "improved":
        _need(args, "n1")
        cert = bound_improved_linkage(q, n, d, k, args.n1, reg)
    elif rule == "parallel":
        _need(args, "n1")
        cert = bound_parallel(q, n, d, k, args.n1, args.t, args.orientation, reg)
    else:
        _need(args, "n1")
        cert = bound_rrmc(q, n, d, k, args.n1, args.t, reg)
    out.write(f"{cert.value}\n")
    if args.cert == "text":
        out.write(cert.render() + "\n")
    elif args.cert == "structured":
        out.write(cert.to_json() + "\n")
    return EXIT_OK


# -- construct ---------------------------------------------------------------


def _base(args, idx: int, q: int, n: int, k: int) -> ScRepresentation:
    if args.base and len(args.base) > idx:
        code = ConstantDimensionCode.read(args.base[idx], allow_duplicates=False)
        if code.q != q or code.k != k or code.n != n:
            raise ValueError(
                f"base code {args.base[idx]} is q={code.q} n={code.n} k={code.k}, expected q={q} n={n} k={k}"
            )
        return ScRepresentation(code)
    return singleton(q, n, k)


def cmd_construct(args, out) -> int:
    m = args.method
    if m == "lmrd":
        _need(args, "q", "n", "k", "d")
        code = lifted_mrd(args.q, args.n, args.k, args.d, args.cap)
    elif m == "linkage":
        _need(args, "q", "n1", "n2", "k")
        d2 = args.d2 if args.d2 is not None else (args.d // 2 if args.d is not None else None)
        if d2 is None:
            raise UsageError("linkage needs --d2 (rank distance) or --d")
        U = _base(args, 0, args.q, args.n1, args.k)
        code = linkage(U, mrd_matrices(args.q, args.k, args.n2, d2, args.cap), d2)
    else:
        _need(args, "q", "n1", "n2", "k", "d")
        t = args.t if m == "parallel-t" else 0
        if m == "parallel" and args.t:
            raise UsageError("--t needs --method parallel-t")
        params = ParallelLinkageParams(args.q, args.k, args.d, args.n1, args.n2, t)
        params.validate()
        U = _base(args, 0, args.q, args.n1, args.k)
        V = _base(args, 1, args.q, args.n2 - t, args.k)
        code = build_parallel(params, U, V, args.cap)
    code.write(args.out)
    d = "-" if code.claimed_min_distance is None else code.claimed_min_distance
    out.write(f"M={len(code)} d_claimed={d}\n")
    return EXIT_OK


# -- verify ------------------------------------------------------------------


def cmd_verify(args, out) -> int:
    code = ConstantDimensionCode.read(args.file, allow_duplicates=True)
    d = args.d if args.d is not None else code.claimed_min_distance
    if d is None:
        raise UsageError("code file claims no distance; pass --d")
    sampling = Sample(args.sample, args.seed) if args.sample is not None else None
    M = len(code)
    started = time.monotonic()
    if sampling is None:
        log.info("checking %d pairs of %d codewords", M * (M - 1) // 2, M)
    else:
        log.info("sampling %d pairs (refutation only, not a certificate)", sampling.count)
    report = verify_cdc(code, d, sampling=sampling, workers=args.threads, force=args.full)
    log.info("done in %.1fs", time.monotonic() - started)
    out.write(report.summary() + "\n")
    return EXIT_OK if report.ok else EXIT_FAIL


# -- rankdist ----------------------------------------------------------------


def cmd_rankdist(args, out) -> int:
    spec = MrdCodeSpec(args.q, args.m, args.n, args.d)
    dist = delsarte_rank_distribution(spec)
    for r in sorted(dist.counts):
        if r:
            out.write(f"r {r} {dist.counts[r]}\n")
    out.write(f"total {dist.total}\n")
    return EXIT_OK


# -- table -------------------------------------------------------------------


def _parse_range(text: str) -> range:
    for sep in ("..", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            return range(int(lo), int(hi) + 1)
    return range(int(text), int(text) + 1)


def table_rows(qs, ns, d: int, k: int, reg: KnownValueRegistry) -> list[tuple]:
    rows = []
    for q in qs:
        for n in ns:
            cert = best_bound(q, n, d, k, reg)
            rows.append((q, n, d, k, cert.value, cert.rule))
    return rows


def cmd_table(args, out) -> int:
    qs = [int(x) for x in args.q.split(",") if x.strip()]
    ns = _parse_range(args.n)
    rows = table_rows(qs, ns, args.d, args.k, _registry(args))
    header = ("q", "n", "d", "k", "lower_bound", "rule")
    if args.format == "csv":
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(str(x) for x in row) + "\n")
    else:
        out.write("| " + " | ".join(header) + " |\n")
        out.write("|" + "|".join("---" for _ in header) + "|\n")
        for row in rows:
            out.write("| " + " | ".join(str(x) for x in row) + " |\n")
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdcodes",
        description="Constant dimension code constructions and lower bounds on A_q(n,d,k).",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def registry_flags(p):
        p.add_argument("--registry", metavar="FILE",
                       help=f"extra known values 'q n d k value tag' (default: ${REGISTRY_ENV})")
        p.add_argument("--bare", action="store_true", help="ignore the shipped registry")

    p = sub.add_parser("bound", help="lower bound on A_q(n,d,k) with a certificate")
    for name in ("q", "n", "d", "k"):
        p.add_argument(f"--{name}", type=int, required=True)
    registry_flags(p)
    p.add_argument("--rule", default="best",
                   choices=("best", "registry", "lmrd", "improved", "parallel", "rrmc"))
    p.add_argument("--n1", type=int, help="split point (m for the improved linkage)")
    p.add_argument("--t", type=int, default=0)
    p.add_argument("--orientation", default="normal", choices=("normal", "swapped"))
    p.add_argument("--cert", default="text", choices=("text", "structured", "none"))
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("construct", help="build an explicit code and write it to a file")
    p.add_argument("--method", required=True, choices=("lmrd", "linkage", "parallel", "parallel-t"))
    for name in ("q", "n", "k", "d", "n1", "n2", "d2"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--t", type=int, default=0)
    p.add_argument("--base", action="append", metavar="FILE",
                   help="base code file (first: U on n1, second: V on n2 - t); default singleton")
    p.add_argument("--cap", type=int, default=ENUMERATION_CAP, help="rank-metric enumeration cap")
    p.add_argument("--out", required=True, metavar="FILE")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check the minimum subspace distance of a code file")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--full", action="store_true", help="check every pair, whatever the size")
    mode.add_argument("--sample", type=int, metavar="N", help="check N seeded random pairs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--d", type=int, help="target distance (default: the file's claim)")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rankdist", help="rank distribution of an MRD code")
    for name in ("q", "m", "n", "d"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.set_defaults(func=cmd_rankdist)

    p = sub.add_parser("table", help="best bounds over a parameter range")
    p.add_argument("--q", required=True, help="comma-separated field sizes")
    p.add_argument("--n", required=True, help="range 'lo..hi' (inclusive) or a single value")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    registry_flags(p)
    p.add_argument("--format", default="csv", choices=("csv", "markdown"))
    p.set_defaults(func=cmd_table)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
