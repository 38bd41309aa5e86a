"""Command-line front end.

Exit codes: 0 success, 1 numerical failure or a violated inequality,
2 usage, parse or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .atoms import load_atomic_table, shipped_path, validate_records
from .bounds import (ProductSpec, maxent_bound, maxtent_lower_bound, maxtent_upper_bound,
                     mininf_bound, optimize_tsallis_t)
from .errors import DomainError, NonConvergence, ParseError
from .tables import TABLE_IDS, build_table, format_number, fraction, render

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _emit(record: dict, fmt: str, digits: int) -> str:
    """Render a flat mapping in the requested format."""
    if fmt == "json":
        clean = {k: (float(format_number(v, digits)) if isinstance(v, float) else v)
                 for k, v in record.items()}
        return json.dumps(clean, indent=2) + "\n"
    cells = {k: format_number(v, digits) for k, v in record.items()}
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(cells.keys())
        writer.writerow(cells.values())
        return out.getvalue()
    width = max(len(k) for k in cells)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in cells.items())


def _law_record(law, N, q):
    return {
        "family": law.family if law.t is None else f"{law.family}(t={format_number(law.t, 12)})",
        "product": law.product.label,
        "direction": law.direction,
        "coefficient": law.coefficient_at(q),
        "coefficient_q_free": law.coefficient,
        "exponent_N": fraction(law.exponent_N),
        "exponent_q": fraction(law.exponent_q),
        "d": law.d,
        "q": q,
        "N": N,
        "value": float(law.evaluate(N, q)),
        "validity": "; ".join(f"{k} {v}" for k, v in law.validity.items()),
    }


def cmd_bound(args) -> int:
    family = args.family
    if family == "maxent":
        if args.alpha is None:
            raise DomainError("--alpha is required for the maxent family")
        law = maxent_bound(args.d, args.k, args.alpha, args.q)
    elif family == "mininf":
        law = mininf_bound(args.d, args.k, args.q)
    else:
        if args.t is None or args.alpha is None:
            raise DomainError("--t and --alpha are required for the maxtent family")
        if args.d != 3:
            raise DomainError("MaxTent bounds are available for d = 3 only")
        if args.t > 1:
            law = maxtent_lower_bound(args.t, args.alpha, args.k, args.q)
        else:
            law = maxtent_upper_bound(args.t, args.alpha, args.k, args.q)
    sys.stdout.write(_emit(_law_record(law, args.N, args.q), args.format, args.digits))
    return EXIT_OK


def cmd_table(args) -> int:
    sys.stdout.write(render(build_table(args.table_id), args.format, args.digits))
    return EXIT_OK


def cmd_optimize(args) -> int:
    t_star, law = optimize_tsallis_t(ProductSpec(args.alpha, args.k), args.q, branch=args.branch,
                                     criterion=args.criterion, resolution=args.resolution or None)
    record = {"t_star": t_star, "branch": "compact" if law.direction == "lower" else "subcritical",
              "criterion": args.criterion}
    record.update(_law_record(law, args.N, args.q))
    if args.alpha > 0:
        ref = maxent_bound(3, args.k, args.alpha, args.q) if args.k > 0 else None
        if ref is not None:
            record["maxent_coefficient"] = ref.coefficient_at(args.q)
            record["ratio_to_maxent"] = law.coefficient_at(args.q) / ref.coefficient_at(args.q)
    sys.stdout.write(_emit(record, args.format, args.digits))
    return EXIT_OK


def cmd_validate(args) -> int:
    if args.data is None:
        with shipped_path("table6_hf.csv").open("rb") as fh:
            records = load_atomic_table(fh)
    else:
        records = load_atomic_table(args.data)
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    report = validate_records(records, families, args.q)
    digits = args.digits
    if args.format == "json":
        entries = []
        for e in report.entries:
            entry = {"symbol": e.record.symbol, "N": e.record.N, "alpha": e.record.alpha,
                     "k": e.record.k, "family": e.family, "hf_value": e.record.hf_value}
            if e.skipped:
                entry.update(status="skipped", reason=e.skip_reason)
            else:
                entry.update(status="pass" if e.passed else "FAIL", direction=e.direction,
                             bound=float(format_number(e.bound_value, digits)),
                             margin=float(format_number(e.margin, digits)))
            entries.append(entry)
        summary = report.summary()
        if summary["worst_margin"] is not None:
            summary["worst_margin"] = float(format_number(summary["worst_margin"], digits))
        sys.stdout.write(json.dumps({"summary": summary, "entries": entries}, indent=2) + "\n")
    else:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n") if args.format == "csv" else None
        header = ["symbol", "N", "alpha", "k", "family", "status", "bound", "hf_value", "margin"]
        lines = []
        for e in report.entries:
            status = "skipped" if e.skipped else ("pass" if e.passed else "FAIL")
            lines.append([e.record.symbol, str(e.record.N), format_number(e.record.alpha, digits),
                          format_number(e.record.k, digits), e.family, status,
                          format_number(e.bound_value, digits),
                          format_number(e.record.hf_value, digits),
                          format_number(e.margin, digits) if not e.skipped else e.skip_reason])
        if writer:
            writer.writerow(header)
            writer.writerows(lines)
            sys.stdout.write(out.getvalue())
        else:
            widths = [max(len(h), *(len(l[i]) for l in lines)) if lines else len(h)
                      for i, h in enumerate(header)]
            sys.stdout.write("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip() + "\n")
            for l in lines:
                sys.stdout.write("  ".join(v.ljust(w) for v, w in zip(l, widths)).rstrip() + "\n")
            s = report.summary()
            sys.stdout.write(f"passed {s['passed']}, failed {s['failed']}, skipped {s['skipped']}; "
                             f"worst margin {format_number(s['worst_margin'], digits)} "
                             f"({s['worst_record']})\n")
    for e in report.failures:
        sys.stderr.write(f"bound violated: {e.record.symbol} ({e.family}) "
                         f"hf={e.record.hf_value} bound={e.bound_value}\n")
    return EXIT_OK if report.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--digits", type=int, default=6, help="significant digits (default 6)")

    parser = argparse.ArgumentParser(
        prog="extremum-bounds",
        description="Heisenberg-like uncertainty bounds from entropy-extremizing densities.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common], help="evaluate one bound family")
    p.add_argument("--family", choices=("maxent", "mininf", "maxtent"), required=True)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--alpha", type=float)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--N", type=float, default=1.0)
    p.add_argument("--t", type=float, help="Tsallis parameter (maxtent only)")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("table", parents=[common], help="regenerate a reference table")
    p.add_argument("table_id", type=str.upper, choices=TABLE_IDS)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("optimize", parents=[common], help="choose the Tsallis parameter t")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--N", type=float, default=1.0)
    p.add_argument("--branch", choices=("compact", "subcritical"))
    p.add_argument("--criterion", choices=("maxent-crossing", "extremum"), default="maxent-crossing")
    p.add_argument("--resolution", type=float, default=0.1,
                   help="snap t to this grid (0 disables)")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("validate", parents=[common], help="check bounds against an HF dataset")
    p.add_argument("--data", help="CSV dataset (default: bundled near-HF table)")
    p.add_argument("--families", default="maxent,maxtent-optimal",
                   help="comma-separated: maxent, mininf, maxtent-optimal, maxtent:t=<t>")
    p.add_argument("--q", type=int, default=2)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DomainError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (NonConvergence, ArithmeticError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
