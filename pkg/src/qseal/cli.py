"""Command-line front end.

Subcommands mirror the protocol roles: seal writes a package and a secret
record, open reads a package, respond answers a return challenge, verify
judges a response, and simulate/curve run the Monte Carlo experiments.

Exit codes: 0 success (verify: accept), 1 verify reject, 2 usage or
unsupported combination, 3 unreadable or corrupt documents and other IO
failures.  All randomness flows from --seed; reruns with equal arguments
produce byte-identical files.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from random import Random
from typing import Any

from . import documents
from .errors import (
    CapacityError,
    DocumentError,
    InvalidInputError,
    ProtocolCorruptionError,
    QsealError,
    UnsupportedModeError,
)
from .experiment import (
    CSV_HEADER,
    DEFAULT_BIT_LEN,
    TrialConfig,
    curve_csv,
    fig1_curve,
    mixture_diagnostic,
    run_trials,
)
from .seal import (
    BinaryTcf,
    CheatStrategy,
    ClassicalReturn,
    NarySymmetric,
    ReturnKind,
    VerifyMethod,
    alice_seal_binary,
    alice_seal_nary,
    alice_verify_classical,
    alice_verify_quantum,
    bob_open,
    bob_respond,
    branch_count,
)
from .tcf import TcfParams


class CLIError(Exception):
    """Failure with a chosen process exit code."""

    def __init__(self, message: str, exit_code: int = 2) -> None:
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code


# ---------------------------------------------------------------------------
# small helpers
# ---------------------------------------------------------------------------


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc}", exit_code=3) from exc


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CLIError(f"cannot write {path}: {exc}", exit_code=3) from exc


def _secret_bytes(text: str) -> bytes:
    try:
        value = bytes.fromhex(text)
    except ValueError as exc:
        raise CLIError(f"--secret must be hex, got {text!r}") from exc
    if not value:
        raise CLIError("--secret must be nonempty")
    return value


def _format_report(report: Any) -> str:
    theory = "none" if report.p_theory is None else f"{report.p_theory:.6f}"
    return (
        f"statistic={report.statistic} p_hat={report.p_hat:.6f} "
        f"ci95_low={report.ci_low:.6f} ci95_high={report.ci_high:.6f} "
        f"trials={report.trials} p_theory={theory}"
    )


def _report_csv(k: int, report: Any) -> str:
    theory = 0.0 if report.p_theory is None else report.p_theory
    return (
        CSV_HEADER + "\n"
        f"{k},{theory:.6f},{report.p_hat:.6f},"
        f"{report.ci_low:.6f},{report.ci_high:.6f},{report.trials}\n"
    )


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------


def cmd_seal(args: argparse.Namespace) -> int:
    rng = Random(args.seed)
    if args.mode == "binary":
        if args.secret is not None:
            raise CLIError("binary mode derives its secret; --secret is not allowed")
        if args.k is not None:
            raise CLIError("binary mode always has 2 branches; --k is not allowed")
        package, record = alice_seal_binary(TcfParams(args.bits), rng)
    else:
        if args.secret is None:
            raise CLIError("nary mode needs --secret")
        if args.k is None:
            raise CLIError("nary mode needs --k")
        package, record = alice_seal_nary(
            args.k, _secret_bytes(args.secret), args.bits, rng
        )
    _write_text(args.out_package, documents.package_to_document(package))
    _write_text(args.out_secret, documents.secret_to_document(record))
    return 0


def cmd_open(args: argparse.Namespace) -> int:
    payload = documents.parse_document(
        _read_text(args.package), documents.KIND_PACKAGE
    )
    package = documents.package_from_payload(payload)
    print(bob_open(package, Random(args.seed)).hex())
    return 0


def cmd_respond(args: argparse.Namespace) -> int:
    payload = documents.parse_document(
        _read_text(args.package), documents.KIND_PACKAGE
    )
    package = documents.package_from_payload(payload)
    message = bob_respond(
        package,
        CheatStrategy(args.strategy),
        ReturnKind(args.kind),
        Random(args.seed),
    )
    _write_text(args.out, documents.return_to_document(message))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    record = documents.secret_from_payload(
        documents.parse_document(_read_text(args.secret), documents.KIND_SECRET)
    )
    message = documents.return_from_payload(
        documents.parse_document(_read_text(args.return_path), documents.KIND_RETURN)
    )
    if isinstance(message, ClassicalReturn):
        accepted = alice_verify_classical(record, message.mask)
    else:
        accepted = alice_verify_quantum(
            record, message.state, VerifyMethod(args.method), Random(args.seed)
        )
    print("accept" if accepted else "reject")
    return 0 if accepted else 1


def _simulate_config(args: argparse.Namespace) -> TrialConfig:
    if args.mode == "binary":
        if args.k is not None:
            raise CLIError("binary mode always has 2 branches; --k is not allowed")
        mode: BinaryTcf | NarySymmetric = BinaryTcf()
    else:
        if args.k is None:
            raise CLIError("nary mode needs --k")
        mode = NarySymmetric(args.k)
    kind = ReturnKind(args.kind)
    method = VerifyMethod(args.method) if kind is ReturnKind.QUANTUM else None
    return TrialConfig(
        mode=mode,
        bit_len=args.bits,
        strategy=CheatStrategy(args.strategy),
        return_kind=kind,
        verify_method=method,
        trials=args.trials,
        seed=args.seed,
    )


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.workers < 1:
        raise CLIError("--workers must be >= 1")
    if args.trials < 1:
        raise CLIError("--trials must be >= 1")
    if args.mixture:
        report = mixture_diagnostic(args.bits, args.trials, args.seed)
        k = 2
        context: dict[str, Any] = {"experiment": "mixture_diagnostic"}
    else:
        config = _simulate_config(args)
        report = run_trials(config, workers=args.workers)
        k = branch_count(config.mode)
        context = {
            "experiment": "run_trials",
            "mode": args.mode,
            "strategy": args.strategy,
            "return_kind": args.kind,
        }
    print(_format_report(report))
    if args.csv is not None:
        _write_text(args.csv, _report_csv(k, report))
    if args.out_report is not None:
        _write_text(
            args.out_report,
            documents.report_to_document(
                report, {**context, "bit_len": args.bits, "seed": args.seed}
            ),
        )
    return 0


def cmd_curve(args: argparse.Namespace) -> int:
    if args.workers < 1:
        raise CLIError("--workers must be >= 1")
    if args.trials < 1:
        raise CLIError("--trials must be >= 1")
    if not 2 <= args.k_max <= 64:
        raise CLIError(f"--k-max must be in [2, 64], got {args.k_max}")
    points = fig1_curve(
        k_max=args.k_max,
        trials_per_point=args.trials,
        bit_len=args.bits,
        seed=args.seed,
        workers=args.workers,
    )
    text = curve_csv(points)
    if args.out is None:
        sys.stdout.write(text)
    else:
        _write_text(args.out, text)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qseal",
        description="Quantum seal protocol simulator: seal, open, and verify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_seal = sub.add_parser("seal", help="seal a secret; write package and record")
    p_seal.add_argument("--mode", choices=["binary", "nary"], required=True)
    p_seal.add_argument("--bits", type=int, required=True, help="branch width")
    p_seal.add_argument("--k", type=int, help="branch count (nary only)")
    p_seal.add_argument("--secret", help="hex secret to seal (nary only)")
    p_seal.add_argument("--seed", type=int, default=0)
    p_seal.add_argument("--out-package", required=True)
    p_seal.add_argument("--out-secret", required=True)
    p_seal.set_defaults(handler=cmd_seal)

    p_open = sub.add_parser("open", help="measure a package and print the secret")
    p_open.add_argument("--package", required=True)
    p_open.add_argument("--seed", type=int, default=0)
    p_open.set_defaults(handler=cmd_open)

    p_respond = sub.add_parser("respond", help="answer a return challenge")
    p_respond.add_argument("--package", required=True)
    p_respond.add_argument(
        "--strategy",
        choices=[s.value for s in CheatStrategy],
        default=CheatStrategy.HONEST.value,
    )
    p_respond.add_argument(
        "--kind", choices=[k.value for k in ReturnKind], required=True
    )
    p_respond.add_argument("--seed", type=int, default=0)
    p_respond.add_argument("--out", required=True)
    p_respond.set_defaults(handler=cmd_respond)

    p_verify = sub.add_parser("verify", help="judge a response against a record")
    p_verify.add_argument("--secret", required=True, help="secret record path")
    p_verify.add_argument("--return", dest="return_path", required=True)
    p_verify.add_argument(
        "--method",
        choices=[m.value for m in VerifyMethod],
        default=VerifyMethod.PROJECTIVE.value,
        help="quantum returns only; classical returns have a fixed check",
    )
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.set_defaults(handler=cmd_verify)

    p_sim = sub.add_parser("simulate", help="Monte Carlo rate estimate")
    p_sim.add_argument("--mode", choices=["binary", "nary"], default="binary")
    p_sim.add_argument("--bits", type=int, default=DEFAULT_BIT_LEN)
    p_sim.add_argument("--k", type=int)
    p_sim.add_argument(
        "--strategy",
        choices=[s.value for s in CheatStrategy],
        default=CheatStrategy.HONEST.value,
    )
    p_sim.add_argument(
        "--kind",
        choices=[k.value for k in ReturnKind],
        default=ReturnKind.QUANTUM.value,
    )
    p_sim.add_argument(
        "--method",
        choices=[m.value for m in VerifyMethod],
        default=VerifyMethod.PROJECTIVE.value,
    )
    p_sim.add_argument("--trials", type=int, default=10_000)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--workers", type=int, default=1)
    p_sim.add_argument(
        "--mixture",
        action="store_true",
        help="run the unlabeled-branch diagnostic instead of a strategy",
    )
    p_sim.add_argument("--csv", help="also write a one-row CSV")
    p_sim.add_argument("--out-report", help="also write a report document")
    p_sim.set_defaults(handler=cmd_simulate)

    p_curve = sub.add_parser(
        "curve", help="detection rate versus branch count, as CSV"
    )
    p_curve.add_argument("--k-max", type=int, required=True)
    p_curve.add_argument("--trials", type=int, default=20_000, help="per point")
    p_curve.add_argument("--bits", type=int, default=DEFAULT_BIT_LEN)
    p_curve.add_argument("--seed", type=int, default=0)
    p_curve.add_argument("--workers", type=int, default=1)
    p_curve.add_argument("--out", help="CSV path; stdout when omitted")
    p_curve.set_defaults(handler=cmd_curve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, int):
            return exc.code
        return 0 if exc.code is None else 2
    try:
        return args.handler(args)
    except CLIError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.exit_code
    except (DocumentError, ProtocolCorruptionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InvalidInputError, UnsupportedModeError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QsealError as exc:
        # Remaining package errors signal inconsistent protocol material.
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def console_entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_entry()
