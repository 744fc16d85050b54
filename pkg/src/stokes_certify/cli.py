"""Command-line driver: ``stokes-certify <command> [options]``.

Exit codes: 0 success, 2 a certification or oracle check failed, 64 usage
error, 74 I/O error.  Output is a pure function of the arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .certifier import A1, A2, B_MODES, b_constants, certify_lemma2, enclose_limit
from .errors import CertificateError, DomainError, HypothesisError
from .numerics import format_rational, parse_rational, to_decimal
from .oracle import run_oracle_checks
from .recurrence import CoefficientTable
from .stokes import check_reflection, large_order_estimate, phase_label, stokes_constants

EXIT_OK = 0
EXIT_CHECK = 2
EXIT_USAGE = 64
EXIT_IO = 74

MAX_ORACLE_ORDER = 200
CONVERGENCE_HEADER = ["n", "b_n", "enclosure_lo", "enclosure_hi", "estimate_lo", "estimate_hi"]


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    n_max: int = 1000
    precision_bits: int = 128
    a1: Fraction = Fraction(A1)
    a2: Fraction = A2
    b_mode: str = "both"
    output_format: str = "json"
    output_path: str | None = None
    digits: int = 20
    order: int = 50
    corrupt: bool = False

    def validate(self) -> None:
        if self.n_max < 0:
            raise UsageError("--n-max must be nonnegative")
        if self.command in ("certify", "stokes", "convergence") and self.n_max < 8:
            raise UsageError(f"{self.command} needs --n-max >= 8 (got {self.n_max})")
        if self.precision_bits < 16:
            raise UsageError("--precision-bits must be at least 16")
        if not 0 < self.a1 < self.a2:
            raise UsageError("need 0 < a1 < a2")
        if self.digits < 1:
            raise UsageError("--digits must be positive")
        if self.command == "oracle" and not 2 <= self.order <= MAX_ORACLE_ORDER:
            raise UsageError(f"--order must lie in [2, {MAX_ORACLE_ORDER}]")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n-max", type=int, default=1000, help="largest coefficient index (default 1000)")
    common.add_argument("--precision-bits", type=int, default=128, help="enclosure precision in bits (default 128)")
    common.add_argument("--a1", type=_rational_arg, default=Fraction(A1), help="lower bound A1 (default 1)")
    common.add_argument("--a2", type=_rational_arg, default=A2, help="upper bound A2 (default 331/250)")
    common.add_argument("--b-mode", choices=B_MODES, default="both", help="which B constant(s) to certify with")
    common.add_argument("--format", choices=("json", "csv", "human"), default=None, dest="output_format")
    common.add_argument("--out", default=None, help="write output to PATH instead of stdout")
    common.add_argument("--digits", type=int, default=20, help="digits in decimal renderings")

    parser = _Parser(prog="stokes-certify", description="Certified Stokes constants of 2v'' - t + 1/v^2 = 0.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("coeffs", parents=[common], help="exact table of c_n, d_n, b_n, Q_n")
    sub.add_parser("certify", parents=[common], help="certify the bounds on b_n and enclose b")
    sub.add_parser("stokes", parents=[common], help="full pipeline: enclosures of S1 and S2")
    sub.add_parser("convergence", parents=[common], help="CSV of b_n, enclosures and large-order estimates")
    oracle = sub.add_parser("oracle", parents=[common], help="series cross-checks of the recurrence")
    oracle.add_argument("--order", type=int, default=50, help=f"series order in 1/x (2..{MAX_ORACLE_ORDER})")
    oracle.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    return parser


def parse_config(argv: list[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    default_format = "csv" if ns.command in ("coeffs", "convergence") else "json"
    config = RunConfig(
        command=ns.command,
        n_max=ns.n_max,
        precision_bits=ns.precision_bits,
        a1=ns.a1,
        a2=ns.a2,
        b_mode=ns.b_mode,
        output_format=ns.output_format or default_format,
        output_path=ns.out,
        digits=ns.digits,
        order=getattr(ns, "order", 50),
        corrupt=getattr(ns, "corrupt", False),
    )
    config.validate()
    return config


# rendering


def _dump_json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _human_pairs(pairs: list[tuple[str, object]]) -> str:
    width = max(len(k) for k, _ in pairs)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in pairs)


def _flat_render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return _dump_json(payload)
    if fmt == "csv":
        return _csv_text(["key", "value"], [[k, v] for k, v in payload.items()])
    return _human_pairs(list(payload.items()))


# commands


def cmd_coeffs(config: RunConfig) -> tuple[int, str]:
    table = CoefficientTable(config.n_max)
    rows = []
    for n in range(config.n_max + 1):
        q = format_rational(table.q(n)) if n else None
        rows.append(
            {
                "n": n,
                "c": format_rational(table.c[n]),
                "d": format_rational(table.d[n]),
                "b": format_rational(table.b[n]),
                "Q": q,
                "b_decimal": to_decimal(table.b[n], config.digits),
            }
        )
    if config.output_format == "json":
        return EXIT_OK, _dump_json(rows)
    header = ["n", "c", "d", "b", "Q", "b_decimal"]
    if config.output_format == "csv":
        return EXIT_OK, _csv_text(header, [[r[k] if r[k] is not None else "" for k in header] for r in rows])
    lines = [f"{r['n']:>6}  b = {r['b_decimal']}  ({r['b']})\n" for r in rows]
    return EXIT_OK, "".join(lines)


def _failure_payload(exc: Exception) -> dict:
    return {
        "ok": False,
        "check": getattr(exc, "check", None) or "hypothesis",
        "index": getattr(exc, "index", None),
        "message": str(exc),
    }


def cmd_certify(config: RunConfig) -> tuple[int, str]:
    table = CoefficientTable(config.n_max)
    try:
        cert = certify_lemma2(table, config.n_max, config.a1, config.a2, config.b_mode)
    except (CertificateError, HypothesisError) as exc:
        return EXIT_CHECK, _flat_render(_failure_payload(exc), config.output_format)
    payload = {"ok": cert.all_ok, **cert.to_json()}
    return (EXIT_OK if cert.all_ok else EXIT_CHECK), _flat_render(payload, config.output_format)


def cmd_stokes(config: RunConfig) -> tuple[int, str]:
    table = CoefficientTable(config.n_max)
    try:
        cert = certify_lemma2(table, config.n_max, config.a1, config.a2, config.b_mode)
    except (CertificateError, HypothesisError) as exc:
        payload = {"stage": "certify", **_failure_payload(exc)}
        return EXIT_CHECK, _flat_render(payload, config.output_format)
    result = stokes_constants(cert.limit_enclosure, config.precision_bits)
    reflection = check_reflection(result.s1, result.s2)
    status = EXIT_OK if (result.nonzero_certified and reflection) else EXIT_CHECK
    digits = config.digits
    if config.output_format == "json":
        payload = {
            **result.to_json(digits),
            "reflection_ok": reflection,
            "n_max": config.n_max,
            "precision_bits": config.precision_bits,
            "certificate": cert.to_json(),
        }
        return status, _dump_json(payload)

    def rng(iv):
        return f"[{to_decimal(iv.lo, digits, 'floor')}, {to_decimal(iv.hi, digits, 'ceil')}]"

    pairs = [
        ("b", rng(result.b_enclosure)),
        ("K", rng(result.k_enclosure)),
        ("|S1| = |S2|", rng(result.s1.modulus)),
        ("arg S1", phase_label(result.s1.phase_over_pi)),
        ("arg S2", phase_label(result.s2.phase_over_pi)),
        ("nonzero_certified", str(result.nonzero_certified).lower()),
        ("reflection_ok", str(reflection).lower()),
        ("n_max", config.n_max),
        ("precision_bits", config.precision_bits),
    ]
    if config.output_format == "csv":
        return status, _csv_text(["key", "value"], [list(p) for p in pairs])
    return status, _human_pairs(pairs)


def convergence_rows(table: CoefficientTable, n_max: int, b_const, precision: int, digits: int) -> list[list[str]]:
    """Rows of (n, b_n, enclosure, large-order estimate) at n = 8, 16, 32, ... <= n_max."""
    rows = []
    n = 8
    while n <= n_max:
        enc = enclose_limit(table, n, b_const)
        est = large_order_estimate(table, n, precision).estimate_at_n
        rows.append(
            [
                str(n),
                to_decimal(table.b[n], digits),
                to_decimal(enc.lo, digits, "floor"),
                to_decimal(enc.hi, digits, "ceil"),
                to_decimal(est.lo, digits, "floor"),
                to_decimal(est.hi, digits, "ceil"),
            ]
        )
        n *= 2
    return rows


def cmd_convergence(config: RunConfig) -> tuple[int, str]:
    table = CoefficientTable(config.n_max)
    constants = b_constants(config.a2, config.b_mode)
    b_const = constants.get("defB", constants.get("paper"))
    try:
        rows = convergence_rows(table, config.n_max, b_const, config.precision_bits, config.digits)
    except HypothesisError as exc:
        return EXIT_CHECK, _flat_render(_failure_payload(exc), config.output_format)
    if config.output_format == "json":
        return EXIT_OK, _dump_json([dict(zip(CONVERGENCE_HEADER, r)) for r in rows])
    return EXIT_OK, _csv_text(CONVERGENCE_HEADER, rows)


def cmd_oracle(config: RunConfig) -> tuple[int, str]:
    n_max = max(1, config.order // 2)
    checks = run_oracle_checks(n_max, corrupt=config.corrupt)
    failed = [name for name, ok in checks if not ok]
    payload = {
        "order": config.order,
        "ok": not failed,
        "first_failure": failed[0] if failed else None,
        **{name: ok for name, ok in checks},
    }
    return (EXIT_CHECK if failed else EXIT_OK), _flat_render(payload, config.output_format)


COMMANDS = {
    "coeffs": cmd_coeffs,
    "certify": cmd_certify,
    "stokes": cmd_stokes,
    "convergence": cmd_convergence,
    "oracle": cmd_oracle,
}


def run(config: RunConfig) -> tuple[int, str]:
    return COMMANDS[config.command](config)


def main(argv: list[str] | None = None) -> int:
    try:
        config = parse_config(argv)
    except UsageError as exc:
        print(f"stokes-certify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    status, text = run(config)
    try:
        if config.output_path:
            with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
    except OSError as exc:
        print(f"stokes-certify: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    if status == EXIT_CHECK:
        print("stokes-certify: check failed", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
