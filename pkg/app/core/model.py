"""Shared enums and configuration records.

Circuit, state and report types live next to the code that builds them;
this module only holds the vocabulary that crosses module boundaries.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .constants import DEFAULT_L_MODE


class LMode(Enum):
    """How the S-register width l is derived from the original verifier."""

    HADAMARD = "hadamard"
    """l = Hadamard count (the exact denominator exponent)"""

    GATE_COUNT = "gatecount"
    """l = gate count of the witness-hardcoded circuit"""


class Semantics(Enum):
    """Measurement semantics used when running a protocol."""

    BRANCHING = "branching"
    DEFERRED = "deferred"
    BOTH = "both"


class OutputFormat(Enum):
    """CLI output format."""

    TABLE = "table"
    JSON = "json"


class Verdict(Enum):
    """Outcome of a classical decision step."""

    ACCEPT = "accept"
    REJECT = "reject"
    CONTINUE = "continue"


class CertificateStatus(Enum):
    """Result of one theorem-level certificate."""

    PASS = "PASS"
    FAIL = "FAIL"
    NOT_APPLICABLE = "N/A"


class PromiseStatus(Enum):
    """Which side of the (c, s) promise an instance falls on."""

    YES = "yes"
    """Some witness is accepted with probability at least c"""

    NO = "no"
    """Every witness is accepted with probability at most s"""

    VIOLATED = "violated"
    """Best witness probability lies strictly between s and c"""


class Command(Enum):
    """CLI subcommands."""

    PROB = "prob"
    TRANSFORM = "transform"
    VERIFY = "verify"
    SWEEP = "sweep"


@dataclass
class CliConfig:
    """Parsed command-line configuration for a single run.

    Attributes:
        command: Subcommand to execute
        circuit_path: Verifier circuit file
        witness: Witness bit string (prob, transform, sweep)
        k: Claimed acceptance count (transform)
        c: Completeness threshold
        s: Soundness threshold (verify)
        m: Witness length to enumerate (verify); defaults to circuit arity
        l_mode: S-register width convention
        semantics: Measurement semantics for transform
        output_format: Table or JSON
        emit_path: Where to write the deferred-measurement circuit
        log_path: Optional debug log file
        verbose: Echo log entries to stderr as they are recorded
        workers: Process count for sweeps
    """

    command: Command
    circuit_path: Optional[Path] = None
    witness: Optional[str] = None
    k: Optional[int] = None
    c: Optional[Fraction] = None
    s: Optional[Fraction] = None
    m: Optional[int] = None
    l_mode: LMode = LMode(DEFAULT_L_MODE)
    semantics: Semantics = Semantics.BRANCHING
    output_format: OutputFormat = OutputFormat.TABLE
    emit_path: Optional[Path] = None
    log_path: Optional[Path] = None
    verbose: bool = False
    workers: int = 1
