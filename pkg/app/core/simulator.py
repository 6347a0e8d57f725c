"""Exact sparse state-vector simulation over {H, X, CCX}.

A state is a map basis-index -> integer numerator sharing one half-exponent
t, so every amplitude is num / sqrt(2)^t. Qubit q is bit ``1 << q`` of the
basis index. Protocols run in two semantics:

- branching: every measurement splits the state into two sub-normalized
  branches (no renormalization), and decisions are applied per branch
- deferred: measurements become copies onto fresh record qubits and the
  acceptance formula is evaluated by a Toffoli network at the end

Both give the same exact verdict distribution.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from .circuit import Circuit, Gate, GateKind
from .constants import MAX_DEFERRED_LABELS
from .exact import ZERO, Amp, Dyadic, ParityMismatchError
from .gadgets import Control, compile_mcx, mcx_ancillas_required
from .logging import Logger, get_logger
from .model import Verdict
from .protocol import (
    Decision,
    Measure,
    NonBooleanControlError,
    Protocol,
    Unitary,
    acceptance_formula,
    ordered_variables,
)


class SimulationError(RuntimeError):
    """A simulator invariant (normalization, sparsity, total probability) failed."""


class UnnormalizedStateError(SimulationError):
    """measure_prob was called on a sub-normalized state."""


class StateVector:
    """Sparse exact state. Mutable while one simulation owns it.

    Attributes:
        width: Qubit count
        half_exp: Shared exponent t; amplitude of index i is entries[i] / sqrt(2)^t
        entries: Nonzero numerators keyed by basis index
        hadamards: H gates applied so far (bounds the support size)
        checked: Assert norm and sparsity after every gate
    """

    __slots__ = ("width", "half_exp", "entries", "hadamards", "checked", "_norm")

    def __init__(
        self,
        width: int,
        entries: Optional[Mapping[int, int]] = None,
        half_exp: int = 0,
        hadamards: int = 0,
        checked: bool = False,
    ) -> None:
        if width < 1:
            raise SimulationError(f"width must be at least 1, got {width}")
        self.width = width
        self.half_exp = half_exp
        self.entries: dict[int, int] = {i: a for i, a in (entries or {}).items() if a}
        self.hadamards = hadamards
        self.checked = checked
        self._norm = self.norm_sq() if checked else ZERO

    def copy(self) -> StateVector:
        return StateVector(self.width, self.entries, self.half_exp, self.hadamards, self.checked)

    def sum_sq(self) -> int:
        return sum(a * a for a in self.entries.values())

    def norm_sq(self) -> Dyadic:
        """Squared norm as an exact dyadic."""
        return Dyadic(self.sum_sq(), self.half_exp)

    def is_normalized(self) -> bool:
        return self.sum_sq() == 1 << self.half_exp

    def amplitude(self, index: int) -> Amp:
        return Amp(self.entries.get(index, 0), self.half_exp)

    def project(self, qubit: int, value: int) -> StateVector:
        """Sub-normalized projection onto qubit == value."""
        mask = 1 << qubit
        want = mask if value else 0
        kept = {i: a for i, a in self.entries.items() if i & mask == want}
        return StateVector(self.width, kept, self.half_exp, self.hadamards, checked=False)

    def project_where(self, assignment: Mapping[int, int]) -> StateVector:
        """Sub-normalized projection onto several qubits at once."""
        mask = sum(1 << q for q in assignment)
        want = sum(1 << q for q, v in assignment.items() if v)
        kept = {i: a for i, a in self.entries.items() if i & mask == want}
        return StateVector(self.width, kept, self.half_exp, self.hadamards, checked=False)

    def scaled(self, factor: Amp) -> StateVector:
        """Multiply every amplitude by an exact factor."""
        return StateVector(
            self.width,
            {i: a * factor.num for i, a in self.entries.items()},
            self.half_exp + factor.half_exp,
            self.hadamards,
        )

    def reduced(self) -> StateVector:
        """Equivalent state with the smallest shared half-exponent."""
        entries, t = dict(self.entries), self.half_exp
        while t >= 2 and entries and all(a % 2 == 0 for a in entries.values()):
            entries = {i: a // 2 for i, a in entries.items()}
            t -= 2
        if not entries:
            t = 0
        return StateVector(self.width, entries, t, self.hadamards)

    def __add__(self, other: StateVector) -> StateVector:
        if not self.entries:
            return other.copy()
        if not other.entries:
            return self.copy()
        if (self.half_exp - other.half_exp) % 2:
            raise ParityMismatchError("cannot add states whose half-exponents differ in parity")
        t = max(self.half_exp, other.half_exp)
        left = (t - self.half_exp) // 2
        right = (t - other.half_exp) // 2
        out = {i: a << left for i, a in self.entries.items()}
        for i, a in other.entries.items():
            out[i] = out.get(i, 0) + (a << right)
        return StateVector(self.width, out, t, max(self.hadamards, other.hadamards))

    def __neg__(self) -> StateVector:
        return StateVector(self.width, {i: -a for i, a in self.entries.items()}, self.half_exp, self.hadamards)

    def __sub__(self, other: StateVector) -> StateVector:
        return self + (-other)

    def __repr__(self) -> str:
        terms = ", ".join(f"{i:0{self.width}b}:{a}" for i, a in sorted(self.entries.items()))
        return f"StateVector(width={self.width}, t={self.half_exp}, {{{terms}}})"

    def _verify(self, gate: Gate) -> None:
        if self.norm_sq() != self._norm:
            raise SimulationError(f"norm changed after '{gate}'")
        if len(self.entries) > 1 << self.hadamards:
            raise SimulationError(
                f"support {len(self.entries)} exceeds 2^{self.hadamards} after '{gate}'"
            )


def states_equal(a: StateVector, b: StateVector) -> bool:
    """Exact vector equality, independent of the shared half-exponent."""
    if a.width != b.width:
        return False
    if (a.half_exp - b.half_exp) % 2 and (a.entries or b.entries):
        return False
    return not (a - b).entries


def init_state(width: int, checked: bool = False) -> StateVector:
    """|0...0> on ``width`` qubits."""
    return StateVector(width, {0: 1}, checked=checked)


def apply_gate(s: StateVector, g: Gate) -> StateVector:
    """Apply one gate in place and return the same state.

    Raises:
        SimulationError: If the gate touches a qubit outside the state
    """
    if max(g.qubits) >= s.width:
        raise SimulationError(f"'{g}' touches a qubit outside width {s.width}")
    if g.kind is GateKind.X:
        mask = 1 << g.qubits[0]
        s.entries = {i ^ mask: a for i, a in s.entries.items()}
    elif g.kind is GateKind.CCX:
        c1, c2, t = g.qubits
        cmask = (1 << c1) | (1 << c2)
        tmask = 1 << t
        s.entries = {(i ^ tmask if i & cmask == cmask else i): a for i, a in s.entries.items()}
    else:
        mask = 1 << g.qubits[0]
        out: dict[int, int] = {}
        for i, a in s.entries.items():
            lo, hi = i & ~mask, i | mask
            out[lo] = out.get(lo, 0) + a
            out[hi] = out.get(hi, 0) + (-a if i & mask else a)
        s.entries = {i: a for i, a in out.items() if a}
        s.half_exp += 1
        s.hadamards += 1
    if s.checked:
        s._verify(g)
    return s


def apply_gates(s: StateVector, gates: Iterable[Gate]) -> StateVector:
    for g in gates:
        apply_gate(s, g)
    return s


def apply_circuit(s: StateVector, c: Circuit) -> StateVector:
    if c.width != s.width:
        raise SimulationError(f"circuit width {c.width} does not match state width {s.width}")
    return apply_gates(s, c.gates)


def run_circuit(c: Circuit, checked: bool = False) -> StateVector:
    """Fresh |0...0> evolved by c."""
    return apply_circuit(init_state(c.width, checked=checked), c)


def measure_prob(s: StateVector, qubit: int) -> Dyadic:
    """Exact P(qubit = 1) on a normalized state.

    Raises:
        UnnormalizedStateError: If the state is sub-normalized
    """
    if not s.is_normalized():
        raise UnnormalizedStateError(
            f"measure_prob needs a normalized state, got norm^2 = {s.norm_sq()}"
        )
    mask = 1 << qubit
    return Dyadic(sum(a * a for i, a in s.entries.items() if i & mask), s.half_exp)


def circuit_acceptance(c: Circuit, checked: bool = False) -> Dyadic:
    """P(output qubit = 1) for c run on |0...0>."""
    return measure_prob(run_circuit(c, checked=checked), c.output_qubit)


@dataclass(frozen=True)
class BranchOutcome:
    """One measurement outcome: its probability and the unrenormalized post-state."""

    probability: Dyadic
    post_state: StateVector


def branch_measure(s: StateVector, qubit: int) -> tuple[BranchOutcome, BranchOutcome]:
    """Split s on qubit into (outcome 0, outcome 1) without renormalizing."""
    zero, one = s.project(qubit, 0), s.project(qubit, 1)
    zero.checked = one.checked = s.checked
    zero._norm, one._norm = zero.norm_sq(), one.norm_sq()
    return BranchOutcome(zero._norm, zero), BranchOutcome(one._norm, one)


# Protocols


@dataclass
class _Branch:
    state: StateVector
    labels: dict[str, bool]


@dataclass
class ProtocolTrace:
    """Everything one branching run observed.

    Attributes:
        verdicts: P(accept) and P(reject); they sum to exactly 1
        accepted_at: Probability mass accepted by each decision, by name
        rejected_at: Probability mass rejected by each decision (``"end"``
            for branches that outlive the last step)
        before_measure: Pre-measurement branch states per label
    """

    verdicts: dict[Verdict, Dyadic]
    accepted_at: dict[str, Dyadic] = field(default_factory=dict)
    rejected_at: dict[str, Dyadic] = field(default_factory=dict)
    before_measure: dict[str, list[StateVector]] = field(default_factory=dict)

    @property
    def p_accept(self) -> Dyadic:
        return self.verdicts[Verdict.ACCEPT]


def trace_protocol(
    p: Protocol,
    checked: bool = False,
    keep_states: bool = False,
    logger: Optional[Logger] = None,
) -> ProtocolTrace:
    """Run a protocol with branching measurement semantics.

    Args:
        p: Protocol to execute from |0...0>
        checked: Assert state invariants after every gate
        keep_states: Record each branch state right before each measurement
        logger: Logger instance (uses global if None)

    Raises:
        SimulationError: If accept and reject mass do not sum to 1
    """
    log = logger or get_logger()
    branches = [_Branch(init_state(p.width, checked=checked), {})]
    trace = ProtocolTrace(verdicts={})

    for step in p.steps:
        if isinstance(step, Unitary):
            for b in branches:
                apply_circuit(b.state, step.circuit)
        elif isinstance(step, Measure):
            if keep_states:
                trace.before_measure[step.label] = [b.state.copy() for b in branches]
            split: list[_Branch] = []
            for b in branches:
                for value, outcome in enumerate(branch_measure(b.state, step.qubit)):
                    if outcome.post_state.entries:
                        split.append(_Branch(outcome.post_state, {**b.labels, step.label: bool(value)}))
            branches = split
        elif isinstance(step, Decision):
            survivors: list[_Branch] = []
            for b in branches:
                verdict = step.route(b.labels)
                if verdict is Verdict.CONTINUE:
                    survivors.append(b)
                    continue
                bucket = trace.accepted_at if verdict is Verdict.ACCEPT else trace.rejected_at
                bucket[step.name] = bucket.get(step.name, ZERO) + b.state.norm_sq()
            branches = survivors
            log.debug("decision", name=step.name, branches=len(branches))

    leftover = sum((b.state.norm_sq() for b in branches), ZERO)
    if leftover != 0:
        trace.rejected_at["end"] = leftover

    accept = sum(trace.accepted_at.values(), ZERO)
    reject = sum(trace.rejected_at.values(), ZERO)
    if accept + reject != 1:
        raise SimulationError(f"verdict mass {accept} + {reject} is not 1")
    trace.verdicts = {Verdict.ACCEPT: accept, Verdict.REJECT: reject}
    return trace


def run_protocol(p: Protocol, checked: bool = False) -> dict[Verdict, Dyadic]:
    """Exact P(accept) and P(reject) under branching semantics."""
    return trace_protocol(p, checked=checked).verdicts


def defer_measurements(p: Protocol) -> Circuit:
    """Compile a protocol into one unitary circuit with a verdict output qubit.

    Layout: protocol qubits, one record qubit per measurement label, the
    verdict qubit, then scratch ancillas shared by every copy and by the
    final network. Each measurement becomes a copy onto its record qubit;
    later segments run unconditionally. The acceptance formula is then
    written into the verdict qubit with one mcx per satisfying assignment
    of its variables; the assignments are mutually exclusive, so the flips
    add up to the formula's value.

    Raises:
        NonBooleanControlError: If a decision is an opaque predicate, or the
            formula uses more than MAX_DEFERRED_LABELS labels
    """
    formula = acceptance_formula(p)
    labels = p.labels
    variables = ordered_variables(formula, labels)
    if len(variables) > MAX_DEFERRED_LABELS:
        raise NonBooleanControlError(
            f"acceptance formula uses {len(variables)} labels, limit is {MAX_DEFERRED_LABELS}"
        )

    record = {label: p.width + i for i, label in enumerate(labels)}
    verdict = p.width + len(labels)
    n_scratch = max(1 if labels else 0, mcx_ancillas_required(len(variables)) if variables else 0)
    scratch = [verdict + 1 + i for i in range(n_scratch)]
    width = verdict + 1 + n_scratch

    gates: list[Gate] = []
    for step in p.steps:
        if isinstance(step, Unitary):
            gates.extend(step.circuit.gates)
        elif isinstance(step, Measure):
            gates.extend(compile_mcx([Control(step.qubit)], record[step.label], scratch))

    for values in product((False, True), repeat=len(variables)):
        if formula.evaluate(dict(zip(variables, values))):
            controls = [Control(record[v], positive=val) for v, val in zip(variables, values)]
            gates.extend(compile_mcx(controls, verdict, scratch))

    return Circuit(
        width=width,
        gates=tuple(gates),
        output_qubit=verdict,
        ancilla_qubits=p.ancilla_qubits | frozenset(scratch),
    )


def run_deferred(p: Protocol, checked: bool = False) -> dict[Verdict, Dyadic]:
    """Exact verdict distribution of the deferred-measurement circuit."""
    accept = circuit_acceptance(defer_measurements(p), checked=checked)
    return {Verdict.ACCEPT: accept, Verdict.REJECT: 1 - accept}
