"""qcma-rewind command-line entry point.

Subcommands:
    prob       exact acceptance probability of one witness
    transform  build and simulate the perfect-completeness verifier for (w, k)
    verify     exhaustive completeness / soundness check against (c, s)
    sweep      every k passing the threshold check for one witness
"""

import argparse
import sys
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path
from typing import Optional

from app.controller import CommandController
from app.core.constants import EXIT_USAGE
from app.core.exact import ExactFormatError, parse_rational
from app.core.model import CliConfig, Command, LMode, OutputFormat, Semantics


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ExactFormatError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _witness(text: str) -> str:
    if set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError(f"witness must be a bit string, got {text!r}")
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcma-rewind",
        description="Exact {H, X, CCX} simulation of the rewinding perfect-completeness transform.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--circuit", type=Path, required=True, help="verifier circuit file")
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--log-file", type=Path, default=None, help="append debug log to this file")
    common.add_argument("--verbose", action="store_true", help="echo log entries to stderr")

    modes = argparse.ArgumentParser(add_help=False)
    modes.add_argument(
        "--l-mode",
        choices=[m.value for m in LMode],
        default=LMode.HADAMARD.value,
        help="S-register width: Hadamard count or gate count of the hardcoded verifier",
    )
    modes.add_argument(
        "--semantics",
        choices=[s.value for s in Semantics],
        default=Semantics.BRANCHING.value,
        help="measurement semantics for the transformed verifier",
    )
    modes.add_argument("--workers", type=int, default=1, help="processes for (w, k) sweeps")

    prob = sub.add_parser(Command.PROB.value, parents=[common], help="acceptance probability")
    prob.add_argument("--witness", type=_witness, default="", help="witness bits")

    transform = sub.add_parser(
        Command.TRANSFORM.value, parents=[common, modes], help="simulate the transformed verifier"
    )
    transform.add_argument("--witness", type=_witness, default="", help="witness bits")
    transform.add_argument("--k", type=int, required=True, help="claimed count in [1, 2^l]")
    transform.add_argument("--c", type=_rational, required=True, help="completeness threshold N/D")
    transform.add_argument("--emit", type=Path, default=None, help="write the deferred-measurement circuit")

    verify = sub.add_parser(Command.VERIFY.value, parents=[common, modes], help="check the theorem exhaustively")
    verify.add_argument("--c", type=_rational, required=True, help="completeness threshold N/D")
    verify.add_argument("--s", type=_rational, required=True, help="soundness threshold N/D")
    verify.add_argument("--m", type=int, default=None, help="witness length (defaults to circuit arity)")

    sweep = sub.add_parser(Command.SWEEP.value, parents=[common, modes], help="all k passing the threshold")
    sweep.add_argument("--witness", type=_witness, default="", help="witness bits")
    sweep.add_argument("--c", type=_rational, required=True, help="completeness threshold N/D")

    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> CliConfig:
    """Parse arguments into a CliConfig; argparse exits on usage errors."""
    args = build_parser().parse_args(argv)
    return CliConfig(
        command=Command(args.command),
        circuit_path=args.circuit,
        witness=getattr(args, "witness", None),
        k=getattr(args, "k", None),
        c=getattr(args, "c", None),
        s=getattr(args, "s", None),
        m=getattr(args, "m", None),
        l_mode=LMode(getattr(args, "l_mode", LMode.HADAMARD.value)),
        semantics=Semantics(getattr(args, "semantics", Semantics.BRANCHING.value)),
        output_format=OutputFormat.JSON if args.json else OutputFormat.TABLE,
        emit_path=getattr(args, "emit", None),
        log_path=args.log_file,
        verbose=args.verbose,
        workers=getattr(args, "workers", 1),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Application entry point.

    Returns:
        Exit code (0 pass, 1 usage or parse error, 2 certificate failure or promise violation).
    """
    try:
        config = parse_config(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage; usage errors are 1 here
        return EXIT_USAGE if e.code else 0
    return CommandController(config).run()


if __name__ == "__main__":
    sys.exit(main())
