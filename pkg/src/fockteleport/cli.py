"""Command-line front end.

Subcommands::

    fockteleport teleport     [--n N] [--alpha-re ..] [--mode exact|sample] ...
    fockteleport event-ready  [...]
    fockteleport compare-swap [...]

Exit codes: 0 success, 1 configuration error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from typing import Sequence

from .errors import ConfigurationError, InvalidStateError, InvariantViolation
from .protocol import (
    EXACT,
    SAMPLE,
    SEQUENTIAL_SWAP,
    ProtocolConfig,
    RunReport,
    run,
    run_sequential_swap,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INVARIANT = 2

NORMALIZATION_TOL = 1e-6
CSV_COLUMNS = ["pattern", "probability", "labels", "parity", "fidelity"]

def detector_names(n: int) -> dict[str, str]:
    """Map canonical detector ids onto the conventional D-labels.

    N=1 uses D11, D12, D21, D22; N=2 uses D1..D6; larger N keeps ``det.k.j``.
    Heralding detectors are always D_G1, D_G2, D_H1, D_H2.
    """
    names = {f"det.{s}.{j}": f"D_{s}{j}" for s in "GH" for j in (1, 2)}
    if n == 1:
        names.update({f"det.{k}.{j}": f"D{k + 1}{j}" for k in range(2) for j in (1, 2)})
    elif n == 2:
        names.update({f"det.{k}.{j}": f"D{2 * k + j}" for k in range(3) for j in (1, 2)})
    return names


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=1, help="number of entangled particles in the input (default 1)")
    p.add_argument("--alpha-re", type=float, default=None)
    p.add_argument("--alpha-im", type=float, default=0.0)
    p.add_argument("--beta-re", type=float, default=None)
    p.add_argument("--beta-im", type=float, default=0.0)
    p.add_argument("--alpha", dest="alpha_re", type=float, help="shorthand for --alpha-re")
    p.add_argument("--beta", dest="beta_re", type=float, help="shorthand for --beta-re")
    p.add_argument("--mode", choices=[EXACT, SAMPLE], default=EXACT)
    p.add_argument("--shots", type=int, default=10000, help="Monte Carlo shots (sample mode)")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fockteleport", description="Total teleportation of dual-rail entangled photon states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_ in [
        ("teleport", "run the N-particle teleportation protocol"),
        ("event-ready", "herald the channel with the two-source swapping station first (N = 1)"),
        ("compare-swap", "compare against two sequential single-pair Bell measurements (N = 1)"),
    ]:
        _add_common(sub.add_parser(name, help=help_))
    return parser


def _amplitudes(args: argparse.Namespace) -> tuple[complex, complex, list[str]]:
    default = 1.0 / math.sqrt(2.0)
    if args.alpha_re is None and args.beta_re is None and not args.alpha_im and not args.beta_im:
        return complex(default), complex(default), []
    alpha = complex(args.alpha_re or 0.0, args.alpha_im)
    beta = complex(args.beta_re or 0.0, args.beta_im)
    norm2 = abs(alpha) ** 2 + abs(beta) ** 2
    if norm2 == 0.0 or not math.isfinite(norm2):
        raise ConfigurationError("alpha and beta cannot both vanish")
    warnings = []
    if abs(norm2 - 1.0) > NORMALIZATION_TOL:
        warnings.append(f"|alpha|^2 + |beta|^2 = {norm2!r}; amplitudes were normalized")
    scale = 1.0 / math.sqrt(norm2)
    return alpha * scale, beta * scale, warnings


def config_from_args(args: argparse.Namespace) -> tuple[ProtocolConfig, list[str]]:
    alpha, beta, warnings = _amplitudes(args)
    if args.command in ("event-ready", "compare-swap") and args.n != 1:
        raise ConfigurationError(f"{args.command} is defined for --n 1 only")
    config = ProtocolConfig(
        n=args.n,
        alpha=alpha,
        beta=beta,
        mode=args.mode,
        shots=args.shots,
        event_ready=args.command == "event-ready",
        seed=args.seed,
    )
    return config, warnings


# --------------------------------------------------------------------------- rendering


def _pattern_text(row: dict) -> str:
    return ";".join(f"{d}={c}" for d, c in row["pattern"].items())


def _csv(rows: Sequence[dict], extra: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS + list(extra))
    for r in rows:
        prob = r.get("probability", r.get("frequency"))
        writer.writerow(
            [
                _pattern_text(r),
                repr(prob),
                "|".join(r["labels"]),
                r["parity"] or "",
                "" if r["fidelity"] is None else repr(r["fidelity"]),
            ]
            + [r[k] for k in extra]
        )
    return buf.getvalue()


def _fmt(x: object) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def summary_table(doc: dict) -> str:
    """Human-readable table of rows followed by the aggregates."""
    lines = []
    rows = doc.get("rows", [])
    if rows:
        prob_key = "probability" if "probability" in rows[0] else "frequency"
        lines.append(f"{'fired':<22} {prob_key:>14}  {'labels':<24} {'parity':<6} fidelity")
        for r in rows:
            fired = ",".join(r["fired"]) or "(none)"
            scheme = f"[{r['scheme']}] " if "scheme" in r else ""
            lines.append(
                f"{scheme + fired:<22} {_fmt(r[prob_key]):>14}  {' '.join(r['labels']):<24} "
                f"{_fmt(r['parity']):<6} {_fmt(r['fidelity'])}"
            )
        groups: dict[str, list[str]] = {}
        for r in rows:
            if r["parity"] and "scheme" not in r:
                groups.setdefault(r["parity"], []).append("(" + ",".join(r["fired"]) + ")")
        for parity, members in groups.items():
            total = math.fsum(r[prob_key] for r in rows if r["parity"] == parity and "scheme" not in r)
            lines.append(f"{parity} group {' '.join(members)}: total {_fmt(total)}")
    for r in doc.get("heralding", []):
        lines.append(
            f"herald {','.join(r['fired']) or '(none)':<15} {_fmt(r.get('probability', r.get('frequency'))):>14}  "
            f"{r['labels'][0]:<24} source fidelity {_fmt(r['fidelity'])}"
        )
    for key, value in doc["aggregates"].items():
        if isinstance(value, dict):
            value = ", ".join(f"{k}={_fmt(v)}" for k, v in value.items() if k != "rows")
        lines.append(f"{key}: {_fmt(value)}")
    for w in doc.get("warnings", []):
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"


def render(doc: dict, fmt: str, csv_rows_key: str = "rows", extra: Sequence[str] = ()) -> str:
    if fmt == "csv":
        return _csv(doc[csv_rows_key], extra)
    return json.dumps(doc, indent=2) + "\n"


# --------------------------------------------------------------------------- commands


def _emit(text: str, table: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        sys.stdout.write(table)
    else:
        sys.stderr.write(table)
        sys.stdout.write(text)


def cmd_teleport(args: argparse.Namespace) -> int:
    config, warnings = config_from_args(args)
    report = run(config)
    report.warnings.extend(warnings)
    doc = report.to_dict(detector_names(config.n))
    _emit(render(doc, args.format), summary_table(doc), args.out)
    return EXIT_OK


def cmd_event_ready(args: argparse.Namespace) -> int:
    config, warnings = config_from_args(args)
    report = run(config)
    report.warnings.extend(warnings)
    doc = report.to_dict(detector_names(1))
    _emit(render(doc, args.format, csv_rows_key="heralding"), summary_table(doc), args.out)
    return EXIT_OK


def _scheme_rows(report: RunReport, scheme: str, rename: dict[str, str]) -> list[dict]:
    rows = []
    for r in report.rows:
        d = r.to_dict(rename)
        d["scheme"] = scheme
        rows.append(d)
    return rows


def cmd_compare_swap(args: argparse.Namespace) -> int:
    config, warnings = config_from_args(args)
    total = run(config)
    swap = run_sequential_swap(config)
    key = "success_probability" if config.mode == EXACT else "success_rate"
    rename = detector_names(1)
    doc = {
        "scheme": "comparison",
        "config": config.echo() | {"comparison": SEQUENTIAL_SWAP},
        "rows": _scheme_rows(total, "total_scheme", rename) + _scheme_rows(swap, SEQUENTIAL_SWAP, rename),
        "aggregates": {
            "total_scheme": total.aggregates[key],
            SEQUENTIAL_SWAP: swap.aggregates[key],
            "total_scheme_mean_fidelity": total.aggregates["mean_success_fidelity"],
            "sequential_swap_mean_fidelity": swap.aggregates["mean_success_fidelity"],
        },
        "warnings": warnings,
    }
    _emit(render(doc, args.format, extra=("scheme",)), summary_table(doc), args.out)
    return EXIT_OK


COMMANDS = {
    "teleport": cmd_teleport,
    "event-ready": cmd_event_ready,
    "compare-swap": cmd_compare_swap,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ConfigurationError, InvalidStateError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
