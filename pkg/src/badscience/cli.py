"""Command line front end.

Subcommands: construct, beta, analyze, sweep, gaussian.  Results go to
stdout as JSON (sweep writes a CSV file instead); warnings go to stderr.
Exit codes: 0 on success, 1 for I/O failures, 2 for domain guards (bad kind,
unsupported n, non-normalized input, sizes beyond the exact evaluators).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from typing import List, Optional

from .asymptotics import beta_expansion, jensen_upper
from .beta import beta_exact, beta_monte_carlo
from .cells import analyze, compute_cells
from .constructions import construct, smallest_constructible_order
from .errors import BadScienceError, TooLarge
from .gaussian import covariance, covariance_diagnostics, gaussian_max_expansion, gaussian_max_mc
from .matrix import ConstructionSpec, RowNormalizedMatrix, load_matrix, save_matrix

# CLI spelling (dashes) -> ConstructionSpec.kind (underscores).
_KIND_BY_FLAG = {
    "identity": "identity",
    "random-sign": "random_sign",
    "oah": "orthonormal_almost_hadamard",
    "tree": "tree",
    "known-optimal": "known_optimal",
    "hadamard": "hadamard",
}

_METHOD_BY_FLAG = {"exact": "exact", "monte-carlo": "monte_carlo"}


def _build_spec(kind_flag: str, n: int, seed: int) -> ConstructionSpec:
    return ConstructionSpec(kind=_KIND_BY_FLAG[kind_flag], n=n, seed=seed)


def _load_normalized(path: str) -> RowNormalizedMatrix:
    return RowNormalizedMatrix(load_matrix(path))


def cmd_construct(args: argparse.Namespace) -> int:
    spec = _build_spec(args.kind, args.n, args.seed)
    out = {"kind": args.kind, "n": args.n}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        matrix = construct(spec)
    if args.kind == "oah":
        m, _ = smallest_constructible_order(args.n)
        out["m"] = m
    flagged = [w for w in caught if issubclass(w.category, RuntimeWarning)]
    out["warning"] = bool(flagged)
    for w in flagged:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.out is not None:
        save_matrix(matrix.inner, args.out)
        out["path"] = args.out
    print(json.dumps(out))
    return 0


def cmd_beta(args: argparse.Namespace) -> int:
    a = _load_normalized(args.matrix)
    method = _METHOD_BY_FLAG[args.method]
    if method == "exact":
        if a.n > 26:
            raise TooLarge(
                f"n={a.n} is too large for exact evaluation; use --method monte-carlo"
            )
        est = beta_exact(a)
    else:
        est = beta_monte_carlo(a, samples=args.samples, seed=args.seed)
    print(
        json.dumps(
            {
                "n": a.n,
                "value": est.value,
                "method": est.method,
                "samples": est.samples,
                "stderr": est.stderr,
                "seed": est.seed,
            }
        )
    )
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    a = _load_normalized(args.matrix)
    partition = compute_cells(a)
    report = analyze(a, partition=partition)
    if partition.ties:
        print(f"ties detected: {partition.ties}", file=sys.stderr)
    out = report.to_dict()
    out["n"] = a.n
    out["sizes"] = [int(s) for s in partition.sizes]
    out["ties"] = partition.ties
    out["degenerate"] = partition.degenerate
    print(json.dumps(out, indent=2))
    return 0


def _parse_int_list(text: str) -> List[int]:
    items = [part.strip() for part in text.split(",")]
    return [int(part) for part in items if part]


def cmd_sweep(args: argparse.Namespace) -> int:
    kinds = [part.strip() for part in args.kinds.split(",") if part.strip()]
    for kind in kinds:
        if kind not in _KIND_BY_FLAG:
            raise BadScienceError(f"unknown construction kind {kind!r}")
    ns = _parse_int_list(args.ns)
    method = _METHOD_BY_FLAG[args.method]
    header = "construction,n,method,beta,stderr,samples,seed,beta_expansion,jensen_upper"
    handle = open(args.out, "w", encoding="utf-8")
    try:
        handle.write(header + "\n")
        for kind in kinds:
            for n in ns:
                spec = _build_spec(kind, n, args.seed)
                matrix = construct(spec)
                if method == "exact":
                    est = beta_exact(matrix)
                else:
                    est = beta_monte_carlo(matrix, samples=args.samples, seed=args.seed)
                expansion = beta_expansion(n) if n >= 3 else float("nan")
                handle.write(
                    f"{kind},{n},{est.method},{est.value:.17g},{est.stderr:.17g},"
                    f"{est.samples},{args.seed},{expansion:.17g},{jensen_upper(n):.17g}\n"
                )
    except BaseException:
        handle.close()
        os.unlink(args.out)
        raise
    handle.close()
    return 0


def cmd_gaussian(args: argparse.Namespace) -> int:
    a = _load_normalized(args.matrix)
    sigma = covariance(a)
    diag = covariance_diagnostics(sigma, seed=args.seed)
    est = gaussian_max_mc(sigma, samples=args.samples, seed=args.seed)
    out = diag.to_dict()
    out["gaussian_max"] = est.value
    out["stderr"] = est.stderr
    out["samples"] = est.samples
    out["seed"] = est.seed
    out["expansion"] = gaussian_max_expansion(a.n) if a.n >= 2 else None
    print(json.dumps(out, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="badscience",
        description="Construct and evaluate matrices for the bad science matrix problem.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a matrix and optionally save it")
    p.add_argument("--kind", required=True, choices=sorted(_KIND_BY_FLAG))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="path to save the matrix CSV")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("beta", help="evaluate beta for a saved matrix")
    p.add_argument("matrix", help="matrix CSV path")
    p.add_argument("--method", choices=sorted(_METHOD_BY_FLAG), default="exact")
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_beta)

    p = sub.add_parser("analyze", help="cell partition, bound chain, and diagnostics")
    p.add_argument("matrix", help="matrix CSV path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="beta across constructions and sizes, written as CSV")
    p.add_argument("--kinds", required=True, help="comma-separated construction kinds")
    p.add_argument("--ns", required=True, help="comma-separated sizes (may be empty)")
    p.add_argument("--method", choices=sorted(_METHOD_BY_FLAG), default="monte-carlo")
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gaussian", help="covariance diagnostics and E max |Z_i|")
    p.add_argument("matrix", help="matrix CSV path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100000)
    p.set_defaults(func=cmd_gaussian)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (BadScienceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
