"""Measured protocols: unitary segments, basis measurements and classical decisions.

A protocol is a straight-line program. Decisions turn measurement labels
into accept / reject / continue. When every decision condition is a
Boolean formula over labels the whole protocol has a Boolean acceptance
predicate (``acceptance_formula``), which is what lets the measurements be
deferred to the end of a single unitary circuit.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from typing import Union

from .circuit import Circuit
from .model import Verdict


class ProtocolError(ValueError):
    """Malformed protocol (duplicate labels, forward references, width mismatch)."""


class NonBooleanControlError(ValueError):
    """A decision uses an opaque predicate where a Boolean formula is required."""


# Boolean formulas over measurement labels


class BoolExpr(ABC):
    @abstractmethod
    def evaluate(self, assignment: Mapping[str, bool]) -> bool: ...

    @abstractmethod
    def variables(self) -> frozenset[str]: ...


@dataclass(frozen=True)
class Const(BoolExpr):
    value: bool

    def evaluate(self, assignment: Mapping[str, bool]) -> bool:
        return self.value

    def variables(self) -> frozenset[str]:
        return frozenset()

    def __str__(self) -> str:
        return "1" if self.value else "0"


@dataclass(frozen=True)
class Var(BoolExpr):
    label: str

    def evaluate(self, assignment: Mapping[str, bool]) -> bool:
        return assignment[self.label]

    def variables(self) -> frozenset[str]:
        return frozenset({self.label})

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Not(BoolExpr):
    operand: BoolExpr

    def evaluate(self, assignment: Mapping[str, bool]) -> bool:
        return not self.operand.evaluate(assignment)

    def variables(self) -> frozenset[str]:
        return self.operand.variables()

    def __str__(self) -> str:
        return f"~{self.operand}"


@dataclass(frozen=True)
class And(BoolExpr):
    left: BoolExpr
    right: BoolExpr

    def evaluate(self, assignment: Mapping[str, bool]) -> bool:
        return self.left.evaluate(assignment) and self.right.evaluate(assignment)

    def variables(self) -> frozenset[str]:
        return self.left.variables() | self.right.variables()

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or(BoolExpr):
    left: BoolExpr
    right: BoolExpr

    def evaluate(self, assignment: Mapping[str, bool]) -> bool:
        return self.left.evaluate(assignment) or self.right.evaluate(assignment)

    def variables(self) -> frozenset[str]:
        return self.left.variables() | self.right.variables()

    def __str__(self) -> str:
        return f"({self.left} | {self.right})"


TRUE = Const(True)
FALSE = Const(False)


def not_(e: BoolExpr) -> BoolExpr:
    if isinstance(e, Const):
        return Const(not e.value)
    if isinstance(e, Not):
        return e.operand
    return Not(e)


def and_(a: BoolExpr, b: BoolExpr) -> BoolExpr:
    if isinstance(a, Const):
        return b if a.value else FALSE
    if isinstance(b, Const):
        return a if b.value else FALSE
    return And(a, b)


def or_(a: BoolExpr, b: BoolExpr) -> BoolExpr:
    if isinstance(a, Const):
        return TRUE if a.value else b
    if isinstance(b, Const):
        return TRUE if b.value else a
    return Or(a, b)


# Protocol steps

Predicate = Callable[[Mapping[str, bool]], bool]


@dataclass(frozen=True)
class Unitary:
    """Apply a circuit to the protocol register."""

    name: str
    circuit: Circuit


@dataclass(frozen=True)
class Measure:
    """Computational-basis measurement of one qubit, recorded under ``label``."""

    qubit: int
    label: str


@dataclass(frozen=True)
class Decision:
    """Route each branch by a condition over earlier labels.

    ``condition`` is a BoolExpr, or an opaque predicate (branching semantics only).
    """

    name: str
    condition: Union[BoolExpr, Predicate]
    on_true: Verdict
    on_false: Verdict

    def route(self, labels: Mapping[str, bool]) -> Verdict:
        if isinstance(self.condition, BoolExpr):
            hit = self.condition.evaluate(labels)
        else:
            hit = bool(self.condition(labels))
        return self.on_true if hit else self.on_false


Step = Union[Unitary, Measure, Decision]


@dataclass(frozen=True)
class Protocol:
    """Ordered steps over a fixed-width register starting in |0...0>.

    Branches still alive after the last step are rejected.
    """

    width: int
    steps: tuple[Step, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))
        seen: list[str] = []
        for step in self.steps:
            if isinstance(step, Unitary):
                if step.circuit.width != self.width:
                    raise ProtocolError(
                        f"segment '{step.name}' has width {step.circuit.width}, protocol has {self.width}"
                    )
            elif isinstance(step, Measure):
                if not 0 <= step.qubit < self.width:
                    raise ProtocolError(f"measured qubit {step.qubit} out of range")
                if step.label in seen:
                    raise ProtocolError(f"duplicate measurement label '{step.label}'")
                seen.append(step.label)
            elif isinstance(step.condition, BoolExpr):
                unknown = step.condition.variables() - set(seen)
                if unknown:
                    raise ProtocolError(
                        f"decision '{step.name}' references labels not yet measured: {sorted(unknown)}"
                    )

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.steps if isinstance(s, Measure)]

    @property
    def ancilla_qubits(self) -> frozenset[int]:
        out: set[int] = set()
        for s in self.steps:
            if isinstance(s, Unitary):
                out |= s.circuit.ancilla_qubits
        return frozenset(out)


def acceptance_formula(p: Protocol) -> BoolExpr:
    """Boolean acceptance predicate of the whole protocol.

    Walks the decisions keeping "still running" and "accepted" as formulas.

    Raises:
        NonBooleanControlError: If any decision uses an opaque predicate
    """
    alive: BoolExpr = TRUE
    accepted: BoolExpr = FALSE
    for step in p.steps:
        if not isinstance(step, Decision):
            continue
        if not isinstance(step.condition, BoolExpr):
            raise NonBooleanControlError(f"decision '{step.name}' is not a Boolean formula")
        still: BoolExpr = FALSE
        for branch, verdict in ((step.condition, step.on_true), (not_(step.condition), step.on_false)):
            here = and_(alive, branch)
            if verdict is Verdict.ACCEPT:
                accepted = or_(accepted, here)
            elif verdict is Verdict.CONTINUE:
                still = or_(still, here)
        alive = still
    return accepted


def ordered_variables(formula: BoolExpr, labels: Sequence[str]) -> list[str]:
    """Formula variables in measurement order."""
    used = formula.variables()
    return [label for label in labels if label in used]
