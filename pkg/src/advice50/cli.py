"""Command-line entry point.

    advice50 run --kind simon --n 3 --seed 7 --iterations 9
    advice50 verify-histories --kind deutsch
    advice50 verify-50 --kind grover --n 2
    advice50 report --format text

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from advice50 import algorithms
from advice50.advice import speedup_summary, verify_50_rule
from advice50.families import Kind, enumerate_family
from advice50.histories import Mode, verify_history_equivalence

CAP_ENV = "ADVICE50_CAP_OVERRIDE"

KIND_NAMES = [k.value for k in Kind]

# max n per (command, kind)
CAPS = {
    "run": {Kind.DEUTSCH: 1, Kind.DJ: 3, Kind.SIMON: 3, Kind.GROVER: 10},
    "verify-histories": {Kind.DEUTSCH: 1, Kind.DJ: 3, Kind.SIMON: 3, Kind.GROVER: 10},
    "verify-50": {Kind.DEUTSCH: 1, Kind.DJ: 3, Kind.SIMON: 3, Kind.GROVER: 6},
    "report": {Kind.DEUTSCH: 1, Kind.DJ: 3, Kind.SIMON: 3, Kind.GROVER: 6},
}
DEFAULT_N = {Kind.DEUTSCH: 1, Kind.DJ: 2, Kind.SIMON: 2, Kind.GROVER: 2}
LITERAL_KINDS = (Kind.DEUTSCH, Kind.DJ, Kind.SIMON)


class UsageError(Exception):
    pass


def _uint64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed must be a 64-bit unsigned integer: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="advice50",
        description="Extended quantum oracle algorithms and the 50%% advice rule.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("run", "run an extended algorithm and measure K and X"),
        ("verify-histories", "check that the history sum equals the oracle stage"),
        ("verify-50", "compare classical query counts with the quantum count"),
        ("report", "tabulate no-advice / with-advice / quantum counts"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--kind", choices=KIND_NAMES, required=name != "report")
        p.add_argument("--n", type=int)
        p.add_argument("--seed", type=_uint64, default=0)
        p.add_argument("--iterations", type=int)
        p.add_argument("--tolerance", type=float, default=1e-12)
        p.add_argument("--format", choices=["json", "text"], default=None)
        p.add_argument("--out")
    return parser


def _resolve_n(command: str, kind: Kind, n: int | None) -> int:
    if n is None:
        n = DEFAULT_N[kind]
    cap = CAPS[command][kind]
    override = os.environ.get(CAP_ENV)
    if override:
        try:
            cap = max(cap, int(override))
        except ValueError:
            raise UsageError(f"{CAP_ENV} must be an integer, got {override!r}") from None
    if kind is Kind.DEUTSCH and n != 1:
        raise UsageError("deutsch takes n = 1 only")
    lower = 2 if kind is Kind.SIMON else 1
    if not lower <= n <= cap:
        raise UsageError(f"--n {n} out of range for {kind.value} {command} ({lower}..{cap})")
    return n


def _round(obj):
    """Round floats to 15 significant digits for stable output."""
    if isinstance(obj, float):
        if math.isfinite(obj):
            return float(f"{obj:.15g}") + 0.0
        return obj
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def _text(payload) -> str:
    if isinstance(payload, dict) and "table" in payload:
        return payload["table"]
    lines = []

    def walk(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                walk(f"{prefix}{k}.", v)
        elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
            for i, v in enumerate(value):
                walk(f"{prefix}{i}.", v)
        else:
            if isinstance(value, list):
                value = " ".join(str(v) for v in value)
            elif isinstance(value, bool):
                value = str(value).lower()
            lines.append(f"{prefix[:-1]}: {value}")

    walk("", payload)
    return "\n".join(lines) + "\n"


def emit_report(results, fmt: str | None = None, path: str | None = None) -> None:
    """Write results as JSON or text to ``path`` (stdout when None)."""
    if results is None or results == [] or results == {}:
        raise ValueError("nothing to report")
    fmt = fmt or "text"
    data = _round(results)
    if fmt == "json":
        if isinstance(data, dict) and "table" in data:
            data = {k: v for k, v in data.items() if k != "table"}
        body = json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    else:
        body = _text(data)
    if path is None:
        sys.stdout.write(body)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(body)


def _cmd_run(args) -> tuple[dict, bool]:
    kind = Kind(args.kind)
    n = _resolve_n("run", kind, args.n)
    if kind is Kind.DEUTSCH:
        result = algorithms.run_deutsch(args.seed)
    elif kind is Kind.DJ:
        result = algorithms.run_deutsch_jozsa(n, args.seed)
    elif kind is Kind.SIMON:
        budget = args.iterations if args.iterations is not None else 3 * n
        result = algorithms.run_simon_full(n, budget, args.seed)
    else:
        result = algorithms.run_grover(n, args.iterations, args.seed)
    payload = result.to_dict()
    ok = result.success is not False
    return payload, ok


def _cmd_verify_histories(args) -> tuple[dict, bool]:
    kind = Kind(args.kind)
    n = _resolve_n("verify-histories", kind, args.n)
    family = enumerate_family(kind, n)
    modes = [Mode.SHORTCUT] + ([Mode.LITERAL] if kind in LITERAL_KINDS else [])
    reports = [verify_history_equivalence(family, m, args.tolerance).to_dict() for m in modes]
    passed = all(r["passed"] for r in reports)
    return {"kind": kind.value, "n": n, "passed": passed, "reports": reports}, passed


def _cmd_verify_50(args) -> tuple[dict, bool]:
    kind = Kind(args.kind)
    n = _resolve_n("verify-50", kind, args.n)
    report = verify_50_rule(kind, n)
    return report.to_dict(), report.rule_holds


def _cmd_report(args) -> tuple[dict, bool]:
    if args.kind is None:
        jobs = [(kind, DEFAULT_N[kind]) for kind in Kind]
    else:
        kind = Kind(args.kind)
        jobs = [(kind, _resolve_n("report", kind, args.n))]
    reports = [verify_50_rule(kind, n) for kind, n in jobs]
    table = speedup_summary(reports)
    payload = {**table.to_dict(), "table": table.to_text()}
    return payload, all(r.rule_holds for r in reports)


COMMANDS = {
    "run": _cmd_run,
    "verify-histories": _cmd_verify_histories,
    "verify-50": _cmd_verify_50,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    fmt = args.format or ("text" if args.command == "report" else "json")
    try:
        payload, ok = COMMANDS[args.command](args)
        emit_report(payload, fmt, args.out)
    except UsageError as exc:
        print(f"advice50: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"advice50: error: cannot write output: {exc}", file=sys.stderr)
        return 2
    except (ValueError, MemoryError) as exc:
        # only reachable past the default caps
        print(f"advice50: error: {exc}", file=sys.stderr)
        return 2
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
