"""Circuit representation over {H, X, CCX} and its textual format.

Text format (one directive per line, ``#`` comments, 0-indexed qubits)::

    qubits 3
    witness 0 1
    ccx 0 1 2
    output 2

Directives: ``qubits <n>``, ``h <q>``, ``x <q>``, ``ccx <c1> <c2> <t>``,
``output <q>``, ``witness <q...>``, ``ancilla <q...>``. ``qubits`` must come
before any directive that names a qubit.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Optional, Union

import numpy as np


class CircuitError(ValueError):
    """Structural violation in a gate or circuit."""


class CircuitParseError(CircuitError):
    """Malformed circuit text."""

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class GateKind(Enum):
    H = "h"
    X = "x"
    CCX = "ccx"


_ARITY = {GateKind.H: 1, GateKind.X: 1, GateKind.CCX: 3}
_DIRECTIVES = frozenset({"qubits", "h", "x", "ccx", "output", "witness", "ancilla"})


@dataclass(frozen=True)
class Gate:
    """One gate. For CCX the qubits are (control1, control2, target)."""

    kind: GateKind
    qubits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.qubits) != _ARITY[self.kind]:
            raise CircuitError(f"{self.kind.value} takes {_ARITY[self.kind]} qubit(s), got {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise CircuitError(f"negative qubit index in {self}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"ccx indices must be pairwise distinct, got {self.qubits}")

    @classmethod
    def h(cls, q: int) -> Gate:
        return cls(GateKind.H, (q,))

    @classmethod
    def x(cls, q: int) -> Gate:
        return cls(GateKind.X, (q,))

    @classmethod
    def ccx(cls, c1: int, c2: int, target: int) -> Gate:
        return cls(GateKind.CCX, (c1, c2, target))

    @property
    def target(self) -> int:
        return self.qubits[-1]

    def remap(self, mapping: Sequence[int]) -> Gate:
        """Rename qubit q to mapping[q]."""
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits))

    def __str__(self) -> str:
        return " ".join([self.kind.value, *map(str, self.qubits)])


@dataclass(frozen=True)
class Circuit:
    """Immutable circuit: register width, gate list and qubit designations.

    Attributes:
        width: Qubit count
        gates: Ordered gates
        output_qubit: Qubit measured for acceptance
        witness_qubits: Qubits that receive the classical witness, in order
        ancilla_qubits: Qubits that start and end in |0>
    """

    width: int
    gates: tuple[Gate, ...] = ()
    output_qubit: int = 0
    witness_qubits: tuple[int, ...] = ()
    ancilla_qubits: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "witness_qubits", tuple(self.witness_qubits))
        object.__setattr__(self, "ancilla_qubits", frozenset(self.ancilla_qubits))

        if self.width < 1:
            raise CircuitError(f"width must be at least 1, got {self.width}")
        if not 0 <= self.output_qubit < self.width:
            raise CircuitError(f"output qubit {self.output_qubit} out of range for width {self.width}")
        for q in (*self.witness_qubits, *self.ancilla_qubits):
            if not 0 <= q < self.width:
                raise CircuitError(f"qubit {q} out of range for width {self.width}")
        if len(set(self.witness_qubits)) != len(self.witness_qubits):
            raise CircuitError(f"witness qubits must be distinct, got {self.witness_qubits}")
        for gate in self.gates:
            if max(gate.qubits) >= self.width:
                raise CircuitError(f"gate '{gate}' out of range for width {self.width}")

    @property
    def witness_arity(self) -> int:
        return len(self.witness_qubits)

    def with_gates(self, gates: Iterable[Gate]) -> Circuit:
        return replace(self, gates=tuple(gates))


def gate_count(c: Circuit) -> int:
    """Circuit size: number of gates."""
    return len(c.gates)


def hadamard_count(c: Circuit) -> int:
    """Number of H gates; bounds the denominator exponent of any probability."""
    return sum(1 for g in c.gates if g.kind is GateKind.H)


def hardcode_witness(template: Circuit, w: str) -> Circuit:
    """Prepend an X on witness_qubits[i] for every w[i] == '1'.

    Raises:
        CircuitError: If len(w) differs from the witness arity or w is not binary
    """
    if len(w) != template.witness_arity:
        raise CircuitError(
            f"witness length {len(w)} does not match circuit witness arity {template.witness_arity}"
        )
    if set(w) - {"0", "1"}:
        raise CircuitError(f"witness must be a bit string, got {w!r}")
    prefix = [Gate.x(q) for q, bit in zip(template.witness_qubits, w) if bit == "1"]
    return template.with_gates([*prefix, *template.gates])


def inverse(c: Circuit) -> Circuit:
    """Reverse gate order; every gate in the set is self-inverse."""
    return c.with_gates(reversed(c.gates))


def relocate(c: Circuit, mapping: Sequence[int], width: int, output_qubit: Optional[int] = None) -> Circuit:
    """Embed c into a wider register, qubit q going to mapping[q]."""
    return Circuit(
        width=width,
        gates=tuple(g.remap(mapping) for g in c.gates),
        output_qubit=mapping[c.output_qubit] if output_qubit is None else output_qubit,
        witness_qubits=tuple(mapping[q] for q in c.witness_qubits),
        ancilla_qubits=frozenset(mapping[q] for q in c.ancilla_qubits),
    )


# Text format


def _parse_ints(tokens: list[str], line_no: int) -> list[int]:
    try:
        values = [int(t) for t in tokens]
    except ValueError:
        raise CircuitParseError(line_no, f"expected integers, got {' '.join(tokens)!r}") from None
    if any(v < 0 for v in values):
        raise CircuitParseError(line_no, "indices must be nonnegative")
    return values


def parse_circuit(text: str) -> Circuit:
    """Parse the textual circuit format.

    Raises:
        CircuitParseError: Unknown directive, bad arity, out-of-range index,
            duplicate ``qubits``/``output``/``witness``/``ancilla``, or missing
            ``qubits``/``output``
    """
    width: Optional[int] = None
    output: Optional[int] = None
    witness: Optional[list[int]] = None
    ancilla: Optional[list[int]] = None
    gates: list[Gate] = []

    def check_range(values: list[int], line_no: int) -> None:
        if width is None:
            raise CircuitParseError(line_no, "'qubits' must be declared first")
        for v in values:
            if v >= width:
                raise CircuitParseError(line_no, f"qubit {v} out of range for width {width}")

    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        directive, args = tokens[0].lower(), tokens[1:]
        if directive not in _DIRECTIVES:
            raise CircuitParseError(line_no, f"unknown directive '{tokens[0]}'")
        values = _parse_ints(args, line_no)

        if directive == "qubits":
            if width is not None:
                raise CircuitParseError(line_no, "duplicate 'qubits'")
            if len(values) != 1 or values[0] < 1:
                raise CircuitParseError(line_no, "'qubits' takes one positive integer")
            width = values[0]
        elif directive in ("h", "x", "ccx"):
            kind = GateKind(directive)
            if len(values) != _ARITY[kind]:
                raise CircuitParseError(line_no, f"'{directive}' takes {_ARITY[kind]} qubit(s)")
            check_range(values, line_no)
            try:
                gates.append(Gate(kind, tuple(values)))
            except CircuitError as e:
                raise CircuitParseError(line_no, str(e)) from None
        elif directive == "output":
            if output is not None:
                raise CircuitParseError(line_no, "duplicate 'output'")
            if len(values) != 1:
                raise CircuitParseError(line_no, "'output' takes one qubit")
            check_range(values, line_no)
            output = values[0]
        elif directive == "witness":
            if witness is not None:
                raise CircuitParseError(line_no, "duplicate 'witness'")
            check_range(values, line_no)
            if len(set(values)) != len(values):
                raise CircuitParseError(line_no, "witness qubits must be distinct")
            witness = values
        elif directive == "ancilla":
            if ancilla is not None:
                raise CircuitParseError(line_no, "duplicate 'ancilla'")
            check_range(values, line_no)
            ancilla = values

    last_line = len(text.splitlines())
    if width is None:
        raise CircuitParseError(last_line, "missing 'qubits'")
    if output is None:
        raise CircuitParseError(last_line, "missing 'output'")

    return Circuit(
        width=width,
        gates=tuple(gates),
        output_qubit=output,
        witness_qubits=tuple(witness or ()),
        ancilla_qubits=frozenset(ancilla or ()),
    )


def format_circuit(c: Circuit, header: Optional[str] = None) -> str:
    """Serialize to the textual format; parse_circuit(format_circuit(c)) == c."""
    lines: list[str] = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    lines.append(f"qubits {c.width}")
    if c.witness_qubits:
        lines.append("witness " + " ".join(map(str, c.witness_qubits)))
    if c.ancilla_qubits:
        lines.append("ancilla " + " ".join(map(str, sorted(c.ancilla_qubits))))
    lines.extend(str(g) for g in c.gates)
    lines.append(f"output {c.output_qubit}")
    return "\n".join(lines) + "\n"


def load_circuit(path: Union[str, Path]) -> Circuit:
    return parse_circuit(Path(path).read_text(encoding="utf-8"))


def save_circuit(c: Circuit, path: Union[str, Path], header: Optional[str] = None) -> None:
    Path(path).write_text(format_circuit(c, header), encoding="utf-8")


def random_circuit(rng: np.random.Generator, width: int, n_gates: int) -> Circuit:
    """Uniformly mixed H / X / CCX gates on random qubits; output is the last qubit.

    Widths below 3 draw only H and X.
    """
    kinds = [GateKind.H, GateKind.X] + ([GateKind.CCX] if width >= 3 else [])
    gates: list[Gate] = []
    for _ in range(n_gates):
        kind = kinds[int(rng.integers(len(kinds)))]
        qubits = rng.choice(width, size=_ARITY[kind], replace=False)
        gates.append(Gate(kind, tuple(int(q) for q in qubits)))
    return Circuit(width=width, gates=tuple(gates), output_qubit=width - 1)
