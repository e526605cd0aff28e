"""Command-line interface.

Subcommands expose each layer of the library:

  mellin    transform values of a radial symbol
  op        shift algebra: apply, matrix, commutator, norm
  root      build and verify an operator root
  rational  Gamma-ratio rationality: criterion vs interpolation oracle
  scan      (m, l) feasibility sweep of the commutation identity

Symbol specifications use the mini grammar ``e<p>:<radial>`` where the
radial part is ``r^<n>`` or ``sum:<c>*r^<e>+<c>*r^<e>+...``; the ``mellin``
subcommand takes the radial part alone.

Exit codes: 0 success, 2 unparsable input, 3 evaluation or truncation
failure, 4 root verification failure, 5 criterion/oracle disagreement,
6 scan anomaly (a feasible off-target cell that is neither degenerate nor
flagged exceptional).

Outputs are deterministic: two identical invocations write byte-identical
CSV files and byte-identical JSON data sections.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .errors import BergshiftError, SymbolParseError
from .mellin import Monomial, MonomialSum, mellin_eval
from .operators import (
    apply as op_apply,
    commutator,
    matrix,
    operator_norm_estimate,
    shift_from_symbol,
    write_matrix_csv,
)
from .roots import RootSpec, verify_root
from .special import gamma_ratio, is_rational_criterion, rational_detect_oracle
from .commutant import scan as commutant_scan
from .report import (
    fmt17,
    plot_scan_residuals,
    render_json_report,
    scan_csv_rows,
    scan_data_payload,
    write_scan_csv,
)

_RADIAL_MONO = re.compile(r"^r\^(-?\d+(?:\.\d+)?)$")
_SUM_TERM = re.compile(r"^(-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)\*r\^(-?\d+(?:\.\d+)?)$")


def parse_radial(text: str):
    """Parse ``r^<n>`` or ``sum:<c>*r^<e>+...`` into a radial symbol."""
    text = text.strip()
    m = _RADIAL_MONO.match(text)
    if m:
        exp = float(m.group(1))
        if exp <= -1:
            raise SymbolParseError(f"exponent {exp} is not integrable on [0,1)")
        if exp == int(exp) and exp >= 0:
            return Monomial(int(exp))
        return MonomialSum(((1.0, exp),))
    if text.startswith("sum:"):
        terms = []
        for part in text[4:].split("+"):
            tm = _SUM_TERM.match(part.strip())
            if not tm:
                raise SymbolParseError(f"bad sum term {part!r}")
            c, e = float(tm.group(1)), float(tm.group(2))
            if e <= -1:
                raise SymbolParseError(f"exponent {e} is not integrable on [0,1)")
            terms.append((c, e))
        if not terms:
            raise SymbolParseError("empty sum")
        return MonomialSum(tuple(terms))
    raise SymbolParseError(f"unparsable radial spec {text!r}")


def parse_symbol(text: str):
    """Parse ``e<p>:<radial>`` into (degree, radial symbol)."""
    m = re.match(r"^e(\d+):(.+)$", text.strip())
    if not m:
        raise SymbolParseError(f"unparsable symbol spec {text!r} (want e<p>:<radial>)")
    return int(m.group(1)), parse_radial(m.group(2))


def _fmt_complex(v: complex) -> str:
    if v.imag == 0:
        return fmt17(v.real)
    return f"({fmt17(v.real)}{'+' if v.imag >= 0 else ''}{fmt17(v.imag)}j)"


def _print_or_write(lines: List[str], out: Optional[str]) -> None:
    blob = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(blob)
    else:
        sys.stdout.write(blob)


def _json_out(data: dict, argv: List[str], out: Optional[str]) -> None:
    blob = render_json_report(data, argv)
    if out:
        Path(out).write_text(blob)
    else:
        sys.stdout.write(blob)


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_mellin(args, argv) -> int:
    symbol = parse_radial(args.symbol)
    rows = []
    for ztext in args.z:
        z = complex(ztext)
        val = complex(mellin_eval(symbol, z, quad_tol=args.quad_tol))
        rows.append((z, val))
    if args.format == "json":
        data = {
            "symbol": args.symbol,
            "values": [
                {"z": [fmt17(z.real), fmt17(z.imag)],
                 "value": [fmt17(v.real), fmt17(v.imag)]}
                for z, v in rows
            ],
        }
        _json_out(data, argv, args.out)
    else:
        lines = ["z,value"]
        for z, v in rows:
            lines.append(f"{_fmt_complex(z)},{_fmt_complex(v)}")
        _print_or_write(lines, args.out)
    return 0


def _cmd_op(args, argv) -> int:
    deg_a, rad_a = parse_symbol(args.a)
    a = shift_from_symbol(deg_a, rad_a, args.K)
    if args.action == "norm":
        sys.stdout.write(fmt17(operator_norm_estimate(a)) + "\n")
        return 0
    if args.action == "matrix":
        m = matrix(a, args.K)
        if args.out:
            write_matrix_csv(m, args.out)
        else:
            write_matrix_csv(m, sys.stdout)
        return 0
    if args.action == "apply":
        if not args.coeffs:
            raise SymbolParseError("apply needs --coeffs c0,c1,...")
        coeffs = [complex(c) for c in args.coeffs.split(",")]
        out_vec = op_apply(a, coeffs)
        lines = ["k,coefficient"]
        for k, v in enumerate(out_vec):
            lines.append(f"{k},{_fmt_complex(v)}")
        _print_or_write(lines, args.out)
        return 0
    # commutator
    if not args.b:
        raise SymbolParseError("commutator needs --b")
    deg_b, rad_b = parse_symbol(args.b)
    b = shift_from_symbol(deg_b, rad_b, args.K)
    c = commutator(a, b)
    ks = [args.k] if args.k is not None else list(range(c.k_max + 1))
    lines = ["k,weight"]
    for k in ks:
        w = c.weight(k)
        lines.append(f"{k},{_fmt_complex(w)}")
    _print_or_write(lines, args.out)
    return 0


def _cmd_root(args, argv) -> int:
    spec = RootSpec(args.p, args.n, k_max=args.K + args.p)
    rep = verify_root(spec, args.K, tol=args.tol)
    data = {
        "p": rep.p,
        "n": rep.n,
        "K": rep.k_checked,
        "tol": fmt17(rep.tol),
        "calibration": fmt17(rep.calibration),
        "max_rel_deviation": fmt17(rep.max_rel_deviation),
        "passed": rep.passed,
    }
    _json_out(data, argv, args.out)
    return 0 if rep.passed else 4


def _cmd_rational(args, argv) -> int:
    if args.delta < 1:
        raise SymbolParseError("delta must be a positive integer")
    a, b, c, d = args.offsets
    ratio = gamma_ratio((a, b), (c, d), 2 * args.delta)
    criterion = is_rational_criterion(ratio)
    found = rational_detect_oracle(ratio, args.max_degree, args.samples)
    oracle = found is not None
    agree = criterion == oracle
    data = {
        "delta": args.delta,
        "offsets": [a, b, c, d],
        "criterion_rational": criterion,
        "oracle_rational": oracle,
        "agree": agree,
        "rational_fn": str(found) if found is not None else None,
    }
    _json_out(data, argv, args.out)
    return 0 if agree else 5


def _cmd_scan(args, argv) -> int:
    from .commutant import CommutantConfig, commutator_residual

    result = commutant_scan(args.p, args.s, args.n, args.d,
                            m_max=args.m_max, K=args.K, tol=args.tol)
    per_k = {}
    for cell in result.cells:
        if cell.error is not None:
            continue
        cfg = CommutantConfig(args.p, args.s, args.n, args.d,
                              cell.m, cell.l, K=args.K)
        rep = commutator_residual(cfg, cell.best_c1, cell.best_c2)
        per_k[(cell.m, cell.l)] = rep.per_k
    data = scan_data_payload(result, per_k=per_k)
    summary = (
        f"feasible set: {sorted(result.feasible_set())}"
        + (" (all cells degenerate)" if result.all_degenerate() else "")
    )
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_scan_csv(result, out / "scan.csv")
        (out / "scan.json").write_text(render_json_report(data, argv))
        if args.plot:
            plot_scan_residuals(result, per_k, out / "plots")
    else:
        for row in scan_csv_rows(result):
            sys.stdout.write(",".join(row) + "\n")
    sys.stdout.write(summary + "\n")
    return 6 if result.anomalies() else 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bergshift", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"bergshift {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_mel = sub.add_parser("mellin", help="transform values of a radial symbol")
    p_mel.add_argument("--symbol", required=True, help="r^<n> or sum:<c>*r^<e>+...")
    p_mel.add_argument("--z", action="append", required=True, help="evaluation point (repeatable)")
    p_mel.add_argument("--quad-tol", type=float, default=1e-12, dest="quad_tol")
    p_mel.add_argument("--format", choices=["csv", "json"], default="csv")
    p_mel.add_argument("--out")
    p_mel.set_defaults(handler=_cmd_mellin)

    p_op = sub.add_parser("op", help="shift algebra on symbol operators")
    p_op.add_argument("action", choices=["apply", "matrix", "commutator", "norm"])
    p_op.add_argument("--a", required=True, help="symbol spec e<p>:<radial>")
    p_op.add_argument("--b", help="second symbol spec (commutator)")
    p_op.add_argument("--K", type=int, default=64)
    p_op.add_argument("--k", type=int, help="single weight index to print")
    p_op.add_argument("--coeffs", help="comma-separated coefficients (apply)")
    p_op.add_argument("--out")
    p_op.set_defaults(handler=_cmd_op)

    p_root = sub.add_parser("root", help="build and verify an operator root")
    p_root.add_argument("--p", type=int, required=True)
    p_root.add_argument("--n", type=int, required=True)
    p_root.add_argument("--K", type=int, default=200)
    p_root.add_argument("--tol", type=float, default=1e-10)
    p_root.add_argument("--out")
    p_root.set_defaults(handler=_cmd_root)

    p_rat = sub.add_parser("rational", help="Gamma-ratio rationality check")
    p_rat.add_argument("--delta", type=int, required=True)
    p_rat.add_argument("--offsets", type=int, nargs=4, required=True,
                       metavar=("A", "B", "C", "D"))
    p_rat.add_argument("--max-degree", type=int, default=12, dest="max_degree")
    p_rat.add_argument("--samples", type=int, default=40)
    p_rat.add_argument("--out")
    p_rat.set_defaults(handler=_cmd_rational)

    p_scan = sub.add_parser("scan", help="(m, l) feasibility sweep")
    p_scan.add_argument("--p", type=int, required=True)
    p_scan.add_argument("--s", type=int, required=True)
    p_scan.add_argument("--n", type=int, required=True)
    p_scan.add_argument("--d", type=int, required=True)
    p_scan.add_argument("--m-max", type=int, default=None, dest="m_max")
    p_scan.add_argument("--K", type=int, default=50)
    p_scan.add_argument("--tol", type=float, default=1e-8)
    p_scan.add_argument("--out", help="output directory for scan.csv / scan.json")
    p_scan.add_argument("--plot", action="store_true", help="render residual SVGs")
    p_scan.set_defaults(handler=_cmd_scan)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports its own message
        return int(exc.code or 0)
    try:
        return args.handler(args, argv)
    except SymbolParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        # covers complex()/float() parse failures on user input
        if isinstance(exc, BergshiftError):
            sys.stderr.write(f"error: {exc}\n")
            return 3
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except BergshiftError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
