"""Closed-form predictions, the brute-force witness oracle and theorem reports.

Simulated probabilities are exact Dyadics; thresholds are Fractions. Every
comparison between them goes through exact rational arithmetic, so a
reported PASS is an exact statement, not a tolerance check.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Optional, Union

from .circuit import Circuit, CircuitError, gate_count, hadamard_count, hardcode_witness, inverse
from .constants import DEFAULT_GRID_EXP, MAX_WITNESS_BITS, SCHEMA_VERSION
from .exact import ONE, ZERO, Dyadic, format_exact, to_rational
from .logging import Logger, get_logger
from .model import CertificateStatus, LMode, PromiseStatus, Semantics, Verdict
from .protocol import acceptance_formula
from .rewind import (
    LABEL_FIRST,
    LABEL_SECOND,
    TransformedProtocol,
    TransformParamsError,
    build_protocol,
    s_register_width,
)
from .simulator import (
    StateVector,
    apply_circuit,
    circuit_acceptance,
    init_state,
    run_circuit,
    run_deferred,
    states_equal,
    trace_protocol,
)

Prob = Union[Dyadic, Fraction]


class GapHypothesisError(ValueError):
    """Thresholds violate 0 <= s < c <= 1."""


class WitnessSpaceTooLargeError(ValueError):
    """Witness enumeration beyond MAX_WITNESS_BITS."""

    def __init__(self, m: int) -> None:
        super().__init__(f"cannot enumerate 2^{m} witnesses (limit m <= {MAX_WITNESS_BITS})")
        self.m = m


# Formulas


def predicted_p(k: int, k_xw: int, l: int) -> Dyadic:
    """P(accept at the first measurement): 1/2 - (k - k_xw) / 2^(l+1)."""
    return Dyadic((1 << l) - k + k_xw, l + 1)


def p_acc_formula(p: Prob) -> Prob:
    """Total acceptance p + 4p(1 - p)^2. Dyadic in, Dyadic out."""
    q = 1 - p
    return p + 4 * p * q * q


def second_stage_formula(p: Prob) -> Prob:
    """Unconditional acceptance mass of the second measurement, 4p(1 - p)^2."""
    q = 1 - p
    return 4 * p * q * q


def conditional_second_stage(p: Prob) -> Optional[Prob]:
    """P(accept at the second measurement | first rejected) = 4p(1 - p); None at p = 1."""
    if p == 1:
        return None
    return 4 * p * (1 - p)


def validate_gap(c: Fraction, s: Fraction) -> None:
    if not 0 <= s < c <= 1:
        raise GapHypothesisError(f"need 0 <= s < c <= 1, got c={c}, s={s}")


def soundness_bound(c: Fraction, s: Fraction) -> Fraction:
    """s' = (1 - (c - s)) (1 + (1 + c - s)^2) / 2.

    Raises:
        GapHypothesisError: If s >= c or either threshold is outside [0, 1]
    """
    validate_gap(c, s)
    gap = Fraction(c) - Fraction(s)
    bound = (1 - gap) * (1 + (1 + gap) ** 2) / 2
    if bound >= 1:
        raise GapHypothesisError(f"bound {bound} is not below 1 for gap {gap}")
    return bound


def soundness_ceiling_p(c: Fraction, s: Fraction) -> Fraction:
    """Largest first-measurement probability a no-instance can reach: 1/2 - (c - s)/2."""
    validate_gap(c, s)
    return Fraction(1, 2) - (Fraction(c) - Fraction(s)) / 2


def f_monotone_check(grid_exp: int = DEFAULT_GRID_EXP) -> bool:
    """p + 4p(1 - p)^2 is nondecreasing on {i / 2^e <= 1/2} and hits 1 at 1/2."""
    if grid_exp < 1:
        raise ValueError(f"grid exponent must be at least 1, got {grid_exp}")
    previous = None
    for i in range((1 << (grid_exp - 1)) + 1):
        value = p_acc_formula(Dyadic(i, grid_exp))
        if previous is not None and value < previous:
            return False
        previous = value
    return previous == 1


def in_units_of(p: Dyadic, l: int) -> int:
    """k with p = k / 2^l.

    Raises:
        TransformParamsError: If 2^l is not a multiple of p's denominator
    """
    if p.exp > l:
        raise TransformParamsError(f"probability {p} is not a multiple of 1/2^{l}")
    return p.numerator_at(l)


def first_passing_k(c: Fraction, l: int) -> int:
    """Smallest k in [1, 2^l] with k / 2^l >= c."""
    return max(1, math.ceil(Fraction(c) * (1 << l)))


# Oracle


def exact_acceptance_prob(v_template: Circuit, w: str) -> Dyadic:
    """Exact P(output = 1) of the verifier with w hardcoded."""
    return circuit_acceptance(hardcode_witness(v_template, w))


def witness_probabilities(v_template: Circuit, m: Optional[int] = None) -> list[tuple[str, Dyadic]]:
    """Acceptance probability of every witness, in lexicographic order.

    Raises:
        CircuitError: If m differs from the witness arity
        WitnessSpaceTooLargeError: If m > MAX_WITNESS_BITS
    """
    m = v_template.witness_arity if m is None else m
    if m != v_template.witness_arity:
        raise CircuitError(f"m={m} does not match circuit witness arity {v_template.witness_arity}")
    if m > MAX_WITNESS_BITS:
        raise WitnessSpaceTooLargeError(m)
    witnesses = ("".join(bits) for bits in product("01", repeat=m))
    return [(w, exact_acceptance_prob(v_template, w)) for w in witnesses]


def best_of(witnesses: Sequence[tuple[str, Dyadic]]) -> tuple[str, Dyadic]:
    """First maximum of a lexicographically ordered witness table."""
    best_w, best_p = "", ZERO
    for i, (w, p) in enumerate(witnesses):
        if i == 0 or p > best_p:
            best_w, best_p = w, p
    return best_w, best_p


def brute_force_best_witness(v_template: Circuit, m: Optional[int] = None) -> tuple[str, Dyadic]:
    """argmax and max over all witnesses; ties go to the lexicographically smallest."""
    return best_of(witness_probabilities(v_template, m))


# Instances


@dataclass(frozen=True)
class InstanceRow:
    """One simulated (w, k) instance of the transformed verifier.

    Attributes:
        w: Witness
        k: Claimed count
        l: S-register width
        k_xw: True count, acceptance probability times 2^l
        passes_step1: Whether k / 2^l >= c
        p_measured: Acceptance mass at the first measurement (None when rejected at step 1)
        p_predicted: predicted_p(k, k_xw, l) (None when rejected at step 1)
        second_measured: Acceptance mass at the second measurement
        p_acc_measured: Total acceptance under the primary semantics
        p_acc_deferred: Total acceptance of the deferred-measurement circuit, if run
        p_acc_predicted: p_acc_formula(p_predicted), or 0 when rejected at step 1
    """

    w: str
    k: int
    l: int
    k_xw: int
    passes_step1: bool
    p_measured: Optional[Dyadic]
    p_predicted: Optional[Dyadic]
    second_measured: Optional[Dyadic]
    p_acc_measured: Dyadic
    p_acc_deferred: Optional[Dyadic]
    p_acc_predicted: Dyadic

    @property
    def p_equal(self) -> bool:
        return self.p_measured == self.p_predicted

    @property
    def p_acc_equal(self) -> bool:
        return self.p_acc_measured == self.p_acc_predicted

    @property
    def semantics_equal(self) -> bool:
        return self.p_acc_deferred is None or self.p_acc_deferred == self.p_acc_measured

    @property
    def second_equal(self) -> bool:
        if self.second_measured is None or self.p_predicted is None:
            return True
        return self.second_measured == second_stage_formula(self.p_predicted)

    @property
    def equal(self) -> bool:
        return self.p_equal and self.p_acc_equal and self.semantics_equal and self.second_equal

    @property
    def perfect(self) -> bool:
        return self.p_acc_measured == 1

    @property
    def conditional_second(self) -> Optional[Prob]:
        return None if self.p_predicted is None else conditional_second_stage(self.p_predicted)

    def to_dict(self) -> dict[str, Any]:
        def exact(value: Optional[Prob]) -> Optional[str]:
            return None if value is None else format_exact(value)

        return {
            "w": self.w,
            "k": self.k,
            "l": self.l,
            "k_xw": self.k_xw,
            "passes_step1": self.passes_step1,
            "p_measured": exact(self.p_measured),
            "p_predicted": exact(self.p_predicted),
            "second_measured": exact(self.second_measured),
            "conditional_second": exact(self.conditional_second),
            "p_acc_measured": exact(self.p_acc_measured),
            "p_acc_deferred": exact(self.p_acc_deferred),
            "p_acc_predicted": exact(self.p_acc_predicted),
            "equal": self.equal,
            "perfect": self.perfect,
        }


def simulate_transformed(
    tp: TransformedProtocol,
    k_xw: int,
    semantics: Semantics = Semantics.BRANCHING,
) -> InstanceRow:
    """Run an already built transformed verifier and compare against the formulas."""
    params = tp.params
    p_measured: Optional[Dyadic] = None
    second: Optional[Dyadic] = None
    deferred: Optional[Dyadic] = None
    p_acc = ZERO
    if semantics is not Semantics.DEFERRED:
        trace = trace_protocol(tp.protocol)
        p_acc = trace.p_accept
        if tp.passes_step1:
            p_measured = trace.accepted_at.get("step3.1", ZERO)
            second = trace.accepted_at.get("step3.5", ZERO)
    if semantics is not Semantics.BRANCHING:
        deferred = run_deferred(tp.protocol)[Verdict.ACCEPT]
        if semantics is Semantics.DEFERRED:
            p_acc = deferred
            if tp.passes_step1:
                p_measured = circuit_acceptance(tp.q_circuit)

    p_predicted = predicted_p(params.k, k_xw, params.l) if tp.passes_step1 else None
    p_acc_predicted = p_acc_formula(p_predicted) if p_predicted is not None else ZERO
    return InstanceRow(
        w=params.w,
        k=params.k,
        l=params.l,
        k_xw=k_xw,
        passes_step1=tp.passes_step1,
        p_measured=p_measured,
        p_predicted=p_predicted,
        second_measured=second,
        p_acc_measured=p_acc,
        p_acc_deferred=deferred,
        p_acc_predicted=p_acc_predicted,
    )


def simulate_instance(
    v_template: Circuit,
    w: str,
    k: int,
    c: Fraction,
    l_mode: LMode = LMode.HADAMARD,
    semantics: Semantics = Semantics.BRANCHING,
    l: Optional[int] = None,
) -> InstanceRow:
    """Build and simulate the transformed verifier for one (w, k)."""
    tp = build_protocol(v_template, w, k, c, l_mode=l_mode, l=l)
    k_xw = in_units_of(circuit_acceptance(tp.verifier), tp.params.l)
    return simulate_transformed(tp, k_xw, semantics)


_Task = tuple[Circuit, str, int, Fraction, LMode, Semantics, Optional[int]]


def _run_task(task: _Task) -> InstanceRow:
    return simulate_instance(*task)


def _run_tasks(tasks: Sequence[_Task], workers: int, logger: Logger) -> list[InstanceRow]:
    """Simulate tasks in order; results come back in task order either way."""
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_task, tasks))
    else:
        rows = []
        for i, task in enumerate(tasks, start=1):
            logger.set_progress(i, len(tasks))
            rows.append(_run_task(task))
    for row in rows:
        p = row.p_measured if row.p_measured is not None else ZERO
        logger.instance_result(row.w, row.k, format_exact(p), format_exact(row.p_acc_measured), row.equal)
    return rows


def l_for_witness(v_template: Circuit, w: str, l_mode: LMode) -> int:
    return s_register_width(hardcode_witness(v_template, w), l_mode)


# Sweeps and reports


@dataclass
class SweepReport:
    """Every k passing step 1 for one witness."""

    w: str
    c: Fraction
    l: int
    acceptance: Dyadic
    k_xw: int
    rows: list[InstanceRow] = field(default_factory=list)

    @property
    def all_equal(self) -> bool:
        return all(row.equal for row in self.rows)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "sweep",
            "w": self.w,
            "c": format_exact(self.c),
            "l": self.l,
            "acceptance": format_exact(self.acceptance),
            "k_xw": self.k_xw,
            "all_equal": self.all_equal,
            "rows": [row.to_dict() for row in self.rows],
        }


def sweep_k(
    v_template: Circuit,
    w: str,
    c: Fraction,
    l_mode: LMode = LMode.HADAMARD,
    semantics: Semantics = Semantics.BRANCHING,
    workers: int = 1,
    l: Optional[int] = None,
    logger: Optional[Logger] = None,
) -> SweepReport:
    """Simulate every k in [max(1, ceil(c 2^l)), 2^l] for one witness."""
    log = logger or get_logger()
    log.stage_change(None, "sweep")
    l = l_for_witness(v_template, w, l_mode) if l is None else l
    acceptance = exact_acceptance_prob(v_template, w)
    k_xw = in_units_of(acceptance, l)
    c = Fraction(c)
    tasks: list[_Task] = [
        (v_template, w, k, c, l_mode, semantics, l) for k in range(first_passing_k(c, l), (1 << l) + 1)
    ]
    rows = _run_tasks(tasks, workers, log)
    log.clear_context()
    return SweepReport(w=w, c=c, l=l, acceptance=acceptance, k_xw=k_xw, rows=rows)


@dataclass
class InstanceReport:
    """Theorem-level verification of one verifier circuit against (c, s).

    Certificates:
        completeness: every witness with probability >= c reaches p_acc = 1 at its true k
        honest_k_only: for the best witness, every other passing k stays below 1
        soundness: every (w, k) passing step 1 on a no-instance has p_acc <= s'
        soundness_p: the same rows have first-measurement probability <= 1/2 - (c - s)/2
        formulas: every simulated row matches the closed forms exactly
    """

    c: Fraction
    s: Fraction
    s_prime: Fraction
    p_ceiling: Fraction
    l_mode: LMode
    semantics: Semantics
    width: int
    gates: int
    hadamards: int
    m: int
    witnesses: list[tuple[str, Dyadic]]
    best_witness: str
    best_probability: Dyadic
    promise: PromiseStatus
    rows: list[InstanceRow] = field(default_factory=list)
    completeness: CertificateStatus = CertificateStatus.NOT_APPLICABLE
    honest_k_only: CertificateStatus = CertificateStatus.NOT_APPLICABLE
    soundness: CertificateStatus = CertificateStatus.NOT_APPLICABLE
    soundness_p: CertificateStatus = CertificateStatus.NOT_APPLICABLE
    formulas: CertificateStatus = CertificateStatus.NOT_APPLICABLE

    @property
    def certificates(self) -> dict[str, CertificateStatus]:
        return {
            "completeness": self.completeness,
            "honest_k_only": self.honest_k_only,
            "soundness": self.soundness,
            "soundness_p": self.soundness_p,
            "formulas": self.formulas,
        }

    @property
    def passed(self) -> bool:
        """Promise holds and no applicable certificate failed."""
        if self.promise is PromiseStatus.VIOLATED:
            return False
        return all(status is not CertificateStatus.FAIL for status in self.certificates.values())

    @property
    def max_p_acc(self) -> Optional[Dyadic]:
        values = [row.p_acc_measured for row in self.rows if row.passes_step1]
        return max(values) if values else None

    def to_dict(self) -> dict[str, Any]:
        max_p_acc = self.max_p_acc
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "verify",
            "c": format_exact(self.c),
            "s": format_exact(self.s),
            "s_prime": format_exact(self.s_prime),
            "p_ceiling": format_exact(self.p_ceiling),
            "l_mode": self.l_mode.value,
            "semantics": self.semantics.value,
            "circuit": {"width": self.width, "gates": self.gates, "hadamards": self.hadamards, "m": self.m},
            "witnesses": [{"w": w, "p": format_exact(p)} for w, p in self.witnesses],
            "best_witness": self.best_witness,
            "best_probability": format_exact(self.best_probability),
            "promise": self.promise.value,
            "certificates": {name: status.value for name, status in self.certificates.items()},
            "max_p_acc": None if max_p_acc is None else format_exact(max_p_acc),
            "passed": self.passed,
            "rows": [row.to_dict() for row in self.rows],
        }


def _status(ok: bool) -> CertificateStatus:
    return CertificateStatus.PASS if ok else CertificateStatus.FAIL


def classify_promise(best: Dyadic, c: Fraction, s: Fraction) -> PromiseStatus:
    if to_rational(best) >= c:
        return PromiseStatus.YES
    if to_rational(best) <= s:
        return PromiseStatus.NO
    return PromiseStatus.VIOLATED


def verify_theorem(
    v_template: Circuit,
    m: Optional[int],
    c: Fraction,
    s: Fraction,
    l_mode: LMode = LMode.HADAMARD,
    semantics: Semantics = Semantics.BRANCHING,
    workers: int = 1,
    logger: Optional[Logger] = None,
) -> InstanceReport:
    """Check completeness or soundness of the transformed verifier exhaustively.

    Yes-instances: every witness reaching c is simulated at every passing k;
    p_acc must be exactly 1 at k = k_xw and below 1 elsewhere. No-instances:
    every (w, k) passing step 1 must stay within s' and the first-measurement
    ceiling. Promise-violating instances get the witness table and no verdict.

    Raises:
        GapHypothesisError: If not 0 <= s < c <= 1
        WitnessSpaceTooLargeError: If m > MAX_WITNESS_BITS
    """
    log = logger or get_logger()
    c, s = Fraction(c), Fraction(s)
    s_prime = soundness_bound(c, s)
    p_ceiling = soundness_ceiling_p(c, s)

    log.stage_change(None, "oracle")
    witnesses = witness_probabilities(v_template, m)
    best_w, best_p = best_of(witnesses)
    promise = classify_promise(best_p, c, s)
    log.info("promise", best_w=best_w or "-", best_p=format_exact(best_p), promise=promise.value)

    report = InstanceReport(
        c=c,
        s=s,
        s_prime=s_prime,
        p_ceiling=p_ceiling,
        l_mode=l_mode,
        semantics=semantics,
        width=v_template.width,
        gates=gate_count(v_template),
        hadamards=hadamard_count(v_template),
        m=v_template.witness_arity,
        witnesses=witnesses,
        best_witness=best_w,
        best_probability=best_p,
        promise=promise,
    )
    if promise is PromiseStatus.VIOLATED:
        log.warning("promise violated, no verdict", best_p=format_exact(best_p))
        log.clear_context()
        return report

    if promise is PromiseStatus.YES:
        selected = [w for w, p in witnesses if to_rational(p) >= c]
    else:
        selected = [w for w, _ in witnesses]

    tasks: list[_Task] = []
    for w in selected:
        l = l_for_witness(v_template, w, l_mode)
        for k in range(first_passing_k(c, l), (1 << l) + 1):
            tasks.append((v_template, w, k, c, l_mode, semantics, l))

    log.stage_change("oracle", "verify")
    report.rows = _run_tasks(tasks, workers, log)
    report.formulas = _status(all(row.equal for row in report.rows))

    if promise is PromiseStatus.YES:
        honest = [row for row in report.rows if row.k == row.k_xw]
        others = [row for row in report.rows if row.k != row.k_xw and row.w == best_w]
        report.completeness = _status(bool(honest) and all(row.perfect for row in honest))
        report.honest_k_only = _status(all(row.p_acc_measured < 1 for row in others))
    else:
        passing = [row for row in report.rows if row.passes_step1]
        report.soundness = _status(all(to_rational(row.p_acc_measured) <= s_prime for row in passing))
        report.soundness_p = _status(
            all(row.p_measured is not None and to_rational(row.p_measured) <= p_ceiling for row in passing)
        )

    log.info("certificates", **{name: status.value for name, status in report.certificates.items()})
    log.clear_context()
    return report


# Rewinding internals


@dataclass(frozen=True)
class RewindingCheck:
    """Exact checks on the intermediate states of one transformed verifier.

    Attributes:
        p: Norm^2 of the accepting part of Q|0>
        sectors: Norm^2 of Q|0> projected onto each (B, O) value
        sectors_ok: (B=0, O=1) and (B=1, O=1) carry k_xw/2^(l+1) and (2^l - k)/2^(l+1)
        overlap_ok: The all-zero component of Q^-1 applied to the accepting part is p|0>
        after_inverse_ok: Q^-1 applied to the rejecting part equals
            ((1 - p)/p) psi0 - psi1 (None when p = 0)
        entering_second_ok: The state before the second measurement equals
            -(2 - 2p) phi0 - (1 - 2p) phi1
        ancillas_clean: Ancillas hold |0> at both measurement points
    """

    p: Dyadic
    sectors: dict[tuple[int, int], Dyadic]
    sectors_ok: bool
    overlap_ok: bool
    after_inverse_ok: Optional[bool]
    entering_second_ok: bool
    ancillas_clean: bool

    @property
    def ok(self) -> bool:
        return (
            self.sectors_ok
            and self.overlap_ok
            and self.after_inverse_ok is not False
            and self.entering_second_ok
            and self.ancillas_clean
        )


def _clean(states: Sequence[StateVector], ancillas: Sequence[int]) -> bool:
    mask = sum(1 << q for q in ancillas)
    return all(not (i & mask) for s in states for i in s.entries)


def rewinding_check(tp: TransformedProtocol) -> RewindingCheck:
    """Compare simulated intermediate states with the rewinding algebra.

    Raises:
        TransformParamsError: If the instance is rejected at step 1
    """
    if not tp.passes_step1:
        raise TransformParamsError("instance is rejected at step 1; nothing to rewind")
    params, layout = tp.params, tp.layout
    k_xw = in_units_of(circuit_acceptance(tp.verifier), params.l)

    start = run_circuit(tp.q_circuit)
    phi0 = start.project(layout.o, 1)
    phi1 = start.project(layout.o, 0)
    p = phi0.norm_sq()

    sectors = {
        (b, o): start.project_where({layout.b: b, layout.o: o}).norm_sq() for b in (0, 1) for o in (0, 1)
    }
    sectors_ok = (
        sectors[(0, 1)] == Dyadic(k_xw, params.l + 1)
        and sectors[(1, 1)] == Dyadic((1 << params.l) - params.k, params.l + 1)
    )

    inverse_q = inverse(tp.q_circuit)
    pulled_back = apply_circuit(phi0.copy(), inverse_q)
    psi0 = StateVector(pulled_back.width, {0: pulled_back.entries.get(0, 0)}, pulled_back.half_exp)
    psi1 = pulled_back - psi0
    overlap_ok = states_equal(psi0, init_state(layout.width).scaled(p.to_amp()))

    after_inverse_ok: Optional[bool] = None
    if p != 0:
        after = apply_circuit(phi1.copy(), inverse_q)
        # p * after == (1 - p) psi0 - p psi1, cleared of the 1/p factor
        lhs = after.scaled(p.to_amp())
        rhs = psi0.scaled((ONE - p).to_amp()) - psi1.scaled(p.to_amp())
        after_inverse_ok = states_equal(lhs, rhs)

    trace = trace_protocol(tp.protocol, keep_states=True)
    entering = trace.before_measure.get(LABEL_SECOND, [])
    observed = StateVector(layout.width)
    for state in entering:
        observed = observed + state
    expected = phi0.scaled((-(2 - 2 * p)).to_amp()) + phi1.scaled((-(1 - 2 * p)).to_amp())

    snapshots = [*trace.before_measure.get(LABEL_FIRST, []), *entering]
    return RewindingCheck(
        p=p,
        sectors=sectors,
        sectors_ok=sectors_ok,
        overlap_ok=overlap_ok,
        after_inverse_ok=after_inverse_ok,
        entering_second_ok=states_equal(observed, expected),
        ancillas_clean=_clean(snapshots, layout.anc),
    )


# Single-instance reports


@dataclass(frozen=True)
class ProbReport:
    """Acceptance probability of one witness under both l conventions."""

    w: str
    width: int
    gates: int
    hadamards: int
    probability: Dyadic
    l_by_mode: dict[LMode, int]

    def k_xw(self, l_mode: LMode) -> int:
        return in_units_of(self.probability, self.l_by_mode[l_mode])

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "prob",
            "w": self.w,
            "circuit": {"width": self.width, "gates": self.gates, "hadamards": self.hadamards},
            "probability": format_exact(self.probability),
            "conventions": {
                mode.value: {"l": l, "k_xw": self.k_xw(mode)} for mode, l in self.l_by_mode.items()
            },
        }


def witness_report(v_template: Circuit, w: str) -> ProbReport:
    """Exact acceptance probability of w, with l and k_xw for each convention."""
    v = hardcode_witness(v_template, w)
    return ProbReport(
        w=w,
        width=v.width,
        gates=gate_count(v),
        hadamards=hadamard_count(v),
        probability=circuit_acceptance(v),
        l_by_mode={mode: s_register_width(v, mode) for mode in LMode},
    )


@dataclass(frozen=True)
class TransformReport:
    """One transformed verifier: its size, acceptance formula and simulated row."""

    c: Fraction
    l_mode: LMode
    semantics: Semantics
    width: int
    q_gates: int
    formula: str
    row: InstanceRow

    @property
    def step1_reason(self) -> Optional[str]:
        if self.row.passes_step1:
            return None
        return f"rejected at step 1: {self.row.k}/2^{self.row.l} < {format_exact(self.c)}"

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "transform",
            "c": format_exact(self.c),
            "l_mode": self.l_mode.value,
            "semantics": self.semantics.value,
            "width": self.width,
            "q_gates": self.q_gates,
            "acceptance_formula": self.formula,
            "step1": "proceed" if self.row.passes_step1 else "reject",
            "step1_reason": self.step1_reason,
            "row": self.row.to_dict(),
        }


def transform_instance(
    tp: TransformedProtocol,
    semantics: Semantics = Semantics.BRANCHING,
    l_mode: LMode = LMode.HADAMARD,
) -> TransformReport:
    """Simulate a built transformed verifier and package the result."""
    k_xw = in_units_of(circuit_acceptance(tp.verifier), tp.params.l)
    return TransformReport(
        c=tp.params.c,
        l_mode=l_mode,
        semantics=semantics,
        width=tp.layout.width,
        q_gates=gate_count(tp.q_circuit),
        formula=str(acceptance_formula(tp.protocol)),
        row=simulate_transformed(tp, k_xw, semantics),
    )
