"""Command line interface.

Subcommands:

* construct: build a code (and optionally its measurement matrix) from
  one of the named deterministic constructions.
* analyze: certify a code or matrix file (exact coherence, bounds,
  sparsity order).
* bounds: print size bounds or dimension calculator values.
* recover: run the seeded OMP experiment against a matrix file.

Exit codes: 0 success, 2 usage or file-format error, 3 enumeration
budget exceeded, 4 recovery guarantee violated.  Every randomized path
takes --seed (default 0); no command ever draws entropy from the
system, so identical invocations write identical files, with the single
exception of the wall-clock seconds column in recovery CSVs.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import codes, designs, matrices, recovery
from .errors import BudgetError, FormatError, ParameterError

CONSTRUCTIONS = ("greedy", "ternary-greedy", "graham-sloane", "sts",
                 "affine", "spread", "devore")


def _fmt_frac(x: Fraction) -> str:
    return str(x)


def _require(args: argparse.Namespace, names: list[str], ctor: str) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise ParameterError(
            f"construction {ctor!r} needs {' '.join(missing)}")


def _build_code(args: argparse.Namespace):
    name = args.construction
    if name == "greedy":
        _require(args, ["n", "d", "w"], name)
        return codes.greedy_binary(args.n, args.d, args.w)
    if name == "ternary-greedy":
        _require(args, ["n", "d", "w"], name)
        return codes.greedy_ternary(args.n, args.d, args.w)
    if name == "graham-sloane":
        _require(args, ["n", "d", "w"], name)
        return codes.graham_sloane_construct(args.n, args.d, args.w)
    if name == "sts":
        _require(args, ["n"], name)
        return designs.steiner_to_code(designs.make_sts(args.n))
    if name == "affine":
        _require(args, ["q"], name)
        return designs.affine_plane_code(args.q)
    if name == "spread":
        _require(args, ["q", "n", "k"], name)
        return designs.subspace_to_code(
            designs.spread_code(args.q, args.n, args.k))
    raise ParameterError(f"unknown construction {name!r}")


def _matrix_for(code, args: argparse.Namespace) -> matrices.MeasurementMatrix:
    if isinstance(code, codes.TernaryCWCode):
        if args.signed:
            raise ParameterError("--signed applies to binary codes only")
        return matrices.from_ternary_code(code)
    if args.signed:
        return matrices.from_binary_code_signed(code, seed=args.seed)
    return matrices.from_binary_code(code)


def _summary(matrix: matrices.MeasurementMatrix, construction: str,
             d: int) -> str:
    return (f"summary: construction={construction} n={matrix.n} N={matrix.N} "
            f"w={matrix.w} d={d} mu_bound={_fmt_frac(matrix.bound)}")


def cmd_construct(args: argparse.Namespace) -> int:
    if args.construction == "devore":
        _require(args, ["p", "r"], "devore")
        if args.signed:
            raise ParameterError("--signed does not apply to devore")
        matrix = matrices.devore(args.p, args.r)
        out = args.emit_matrix or f"devore_p{args.p}_r{args.r}.matrix"
        matrices.save_matrix(matrix, out, fmt=args.matrix_format)
        print(_summary(matrix, "devore", d=2 * (args.p - args.r + 1)))
        print(f"wrote matrix: {out}")
        return 0
    code = _build_code(args)
    matrix = _matrix_for(code, args)
    print(_summary(matrix, args.construction, d=code.d))
    if args.out:
        codes.save_code(code, args.out)
        print(f"wrote code: {args.out}")
    if args.emit_matrix is not None or args.matrix_out:
        path = args.matrix_out or args.emit_matrix
        if not path:
            safe = matrix.provenance.replace(" ", "_").replace("=", "")
            path = f"{safe}.matrix"
        matrices.save_matrix(matrix, path, fmt=args.matrix_format)
        print(f"wrote matrix: {path}")
    return 0


def _coherence_lines(matrix: matrices.MeasurementMatrix,
                     k: int | None) -> list[str]:
    report = matrices.coherence(matrix, k=k)
    bound = "n/a" if report.bound is None else _fmt_frac(report.bound)
    lines = [f"mu = {_fmt_frac(report.mu)}, bound = {bound}, "
             f"order k = {report.order}"]
    if report.welch.degenerate:
        lines.append("welch = 0 (degenerate: N <= n)")
    else:
        lines.append(f"welch = {report.welch.value:.6f} "
                     f"(alt form {report.welch.alt_value:.6f})")
    if report.k is not None:
        lines.append(f"delta_{report.k} = {_fmt_frac(report.delta_k)}")
    return lines


def _looks_like_matrix(text: str) -> bool:
    # Support-list matrices carry a '# n <n> w <w>' comment header and
    # dense CSV rows contain commas; code files have neither (their
    # header is a bare 'n d w' line and '#' lines only name provenance).
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line[1:].strip().startswith("n "):
                return True
            continue
        return "," in line
    return False


def cmd_analyze(args: argparse.Namespace) -> int:
    with open(args.file, "r", encoding="ascii") as fh:
        text = fh.read()
    if _looks_like_matrix(text):
        matrix = matrices.loads_matrix(text)
        print(f"matrix: {matrix.n}x{matrix.N} w={matrix.w} "
              f"provenance={matrix.provenance!r}")
    else:
        code = codes.loads_code(text)
        kind = "binary" if isinstance(code, codes.BinaryCWCode) else "ternary"
        print(f"code: {kind} n={code.n} w={code.w} d={code.d} "
              f"size={len(code)}")
        if isinstance(code, codes.BinaryCWCode):
            matrix = matrices.from_binary_code(code)
        else:
            matrix = matrices.from_ternary_code(code)
    for line in _coherence_lines(matrix, args.k):
        print(line)
    return 0


def cmd_bounds(args: argparse.Namespace) -> int:
    if args.dims:
        for name in ("n", "k", "t"):
            if getattr(args, name) is None:
                raise ParameterError(f"--dims needs --{name}")
        if args.ternary:
            value = codes.dimension_ternary_gilbert(args.n, args.k, args.t)
            print(f"dimension ternary-gilbert N(n={args.n},k={args.k},"
                  f"t={args.t}) = {value}")
        else:
            via_gilbert = codes.dimension_binary_gilbert(args.n, args.k, args.t)
            via_moments = codes.dimension_binary_gs(args.n, args.k, args.t)
            gs = codes.graham_sloane_bound(
                args.n, 2 * (args.k - 1) * args.t, args.k * args.t)
            print(f"dimension gilbert N(n={args.n},k={args.k},t={args.t}) "
                  f"= {via_gilbert}")
            print(f"dimension moment N(n={args.n},k={args.k},t={args.t}) "
                  f"= {via_moments} (denominator n^((k-1)t-1))")
            print(f"dimension moment-prime N(n={args.n},k={args.k},t={args.t}) "
                  f"= {gs.value} (denominator q^((k-1)t-1), q={gs.params['q']})")
        return 0
    for name in ("n", "d", "w"):
        if getattr(args, name) is None:
            raise ParameterError(f"bounds needs --{name}")
    if args.ternary:
        rep = codes.ternary_gilbert_bound(args.n, args.d, args.w)
        print(f"ternary-gilbert A3({args.n},{args.d},{args.w}) >= {rep.value}")
    else:
        gil = codes.gilbert_bound(args.n, args.d, args.w)
        gs = codes.graham_sloane_bound(args.n, args.d, args.w)
        print(f"gilbert A({args.n},{args.d},{args.w}) >= {gil.value}")
        print(f"graham-sloane A({args.n},{args.d},{args.w}) >= {gs.value} "
              f"(q={gs.params['q']})")
    return 0


def cmd_recover(args: argparse.Namespace) -> int:
    matrix = matrices.load_matrix(args.file)
    report = matrices.coherence(matrix)
    mu = report.mu
    ks = range(args.k_min, args.k_max + 1)
    results = recovery.run_experiment(matrix, ks, trials=args.trials,
                                      model=args.values, seed=args.seed)
    csv_text = recovery.reports_to_csv(results)
    if args.out:
        with open(args.out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(csv_text)
        print(f"wrote report: {args.out}")
    else:
        sys.stdout.write(csv_text)
    failed_guarantee = False
    for rep in results:
        guaranteed = (2 * rep.k - 1) * mu < 1
        status = "guaranteed" if guaranteed else "beyond guarantee"
        print(f"k={rep.k}: {rep.successes}/{rep.trials} exact ({status})")
        if guaranteed and rep.successes < rep.trials:
            failed_guarantee = True
    if failed_guarantee:
        print("guarantee violated: an exact-recovery trial failed inside "
              "the (2k-1) mu < 1 regime", file=sys.stderr)
        return 4
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cwsense",
        description="Deterministic compressed-sensing matrices from "
                    "constant-weight codes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_con = sub.add_parser("construct", help="build a code or matrix")
    p_con.add_argument("construction", choices=CONSTRUCTIONS)
    p_con.add_argument("--n", type=int)
    p_con.add_argument("--d", type=int)
    p_con.add_argument("--w", type=int)
    p_con.add_argument("--q", type=int)
    p_con.add_argument("--k", type=int)
    p_con.add_argument("--p", type=int)
    p_con.add_argument("--r", type=int)
    p_con.add_argument("--out", help="write the code file here")
    p_con.add_argument("--emit-matrix", nargs="?", const="", default=None,
                       metavar="PATH",
                       help="also write the measurement matrix (default "
                            "path derived from the provenance)")
    p_con.add_argument("--matrix-out", help="explicit matrix path")
    p_con.add_argument("--matrix-format", choices=matrices.FORMATS,
                       default="support-list")
    p_con.add_argument("--signed", action="store_true",
                       help="randomize column signs (binary codes)")
    p_con.add_argument("--seed", type=int, default=0)
    p_con.set_defaults(func=cmd_construct)

    p_an = sub.add_parser("analyze", help="certify a code or matrix file")
    p_an.add_argument("file")
    p_an.add_argument("--k", type=int, default=None,
                      help="report delta_k = (k-1) mu as well")
    p_an.set_defaults(func=cmd_analyze)

    p_bo = sub.add_parser("bounds", help="size bounds and dimension values")
    p_bo.add_argument("--n", type=int)
    p_bo.add_argument("--d", type=int)
    p_bo.add_argument("--w", type=int)
    p_bo.add_argument("--k", type=int)
    p_bo.add_argument("--t", type=int)
    p_bo.add_argument("--ternary", action="store_true")
    p_bo.add_argument("--dims", action="store_true",
                      help="dimension calculators instead of size bounds")
    p_bo.set_defaults(func=cmd_bounds)

    p_re = sub.add_parser("recover", help="seeded OMP recovery experiment")
    p_re.add_argument("file", help="matrix file (either text format)")
    p_re.add_argument("--k-min", type=int, default=1)
    p_re.add_argument("--k-max", type=int, required=True)
    p_re.add_argument("--trials", type=int, default=100)
    p_re.add_argument("--values", choices=recovery.VALUE_MODELS,
                      default="rademacher")
    p_re.add_argument("--seed", type=int, default=0)
    p_re.add_argument("--out", help="write the CSV report here")
    p_re.set_defaults(func=cmd_recover)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except (ParameterError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    raise SystemExit(main())
