"""Input validation for witnesses, transform parameters and CLI runs.

Validators collect every problem instead of stopping at the first one, so a
single run reports all bad flags together.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .constants import MAX_WITNESS_BITS
from .model import CliConfig, Command


@dataclass
class ValidationResult:
    """Result of a validation check.

    Attributes:
        valid: True if validation passed
        errors: List of error messages if validation failed
    """

    valid: bool
    errors: list[str]

    @classmethod
    def success(cls) -> "ValidationResult":
        """Create a successful validation result."""
        return cls(valid=True, errors=[])

    @classmethod
    def failure(cls, *errors: str) -> "ValidationResult":
        """Create a failed validation result with error messages."""
        return cls(valid=False, errors=list(errors))

    @classmethod
    def collect(cls, errors: list[str]) -> "ValidationResult":
        return cls.failure(*errors) if errors else cls.success()

    def __bool__(self) -> bool:
        """Allow using result in boolean context."""
        return self.valid


def validate_witness(bits: str, arity: int) -> ValidationResult:
    """Witness is a bit string whose length matches the circuit's witness arity."""
    errors: list[str] = []
    if set(bits) - {"0", "1"}:
        errors.append(f"witness must contain only 0 and 1, got {bits!r}")
    if len(bits) != arity:
        errors.append(f"witness has {len(bits)} bit(s), circuit expects {arity}")
    return ValidationResult.collect(errors)


def validate_threshold(value: Fraction, name: str) -> ValidationResult:
    if not 0 <= value <= 1:
        return ValidationResult.failure(f"{name}={value} must lie in [0, 1]")
    return ValidationResult.success()


def validate_transform_params(k: int, l: int, c: Fraction) -> ValidationResult:
    """Checks:
    - l >= 1
    - 1 <= k <= 2^l
    - 0 <= c <= 1
    """
    errors: list[str] = []
    if l < 1:
        errors.append(f"l must be positive, got {l}")
    elif not 1 <= k <= 1 << l:
        errors.append(f"k={k} outside [1, 2^{l}] = [1, {1 << l}]")
    errors.extend(validate_threshold(c, "c").errors)
    return ValidationResult.collect(errors)


def validate_bound_params(c: Fraction, s: Fraction) -> ValidationResult:
    """Both thresholds in [0, 1] with a positive gap c - s."""
    errors = [*validate_threshold(c, "c").errors, *validate_threshold(s, "s").errors]
    if not errors and s >= c:
        errors.append(f"soundness s={s} must be strictly below completeness c={c}")
    return ValidationResult.collect(errors)


def validate_cli_config(config: CliConfig, arity: Optional[int] = None) -> ValidationResult:
    """Required flags per subcommand, plus ranges that do not need the circuit.

    Args:
        config: Parsed configuration
        arity: Witness arity of the loaded circuit, when already known

    Returns:
        ValidationResult with all validation errors
    """
    errors: list[str] = []
    command = config.command

    if config.circuit_path is None:
        errors.append("--circuit is required")
    elif not config.circuit_path.is_file():
        errors.append(f"circuit file not found: {config.circuit_path}")

    if command is Command.TRANSFORM and config.k is None:
        errors.append("--k is required for transform")
    if command in (Command.TRANSFORM, Command.VERIFY, Command.SWEEP) and config.c is None:
        errors.append(f"--c is required for {command.value}")
    if command is Command.VERIFY and config.s is None:
        errors.append("--s is required for verify")
    if config.emit_path is not None and command is not Command.TRANSFORM:
        errors.append("--emit only applies to transform")
    if config.workers < 1:
        errors.append(f"--workers must be at least 1, got {config.workers}")

    if config.c is not None:
        errors.extend(validate_threshold(config.c, "c").errors)
    if config.s is not None:
        errors.extend(validate_threshold(config.s, "s").errors)
    if command is Command.VERIFY and config.c is not None and config.s is not None:
        errors.extend(e for e in validate_bound_params(config.c, config.s).errors if e not in errors)

    if config.m is not None:
        if config.m > MAX_WITNESS_BITS:
            errors.append(f"--m={config.m} exceeds the enumeration limit {MAX_WITNESS_BITS}")
        if arity is not None and config.m != arity:
            errors.append(f"--m={config.m} does not match circuit witness arity {arity}")

    if arity is not None and command is not Command.VERIFY:
        errors.extend(validate_witness(config.witness or "", arity).errors)

    return ValidationResult.collect(errors)
