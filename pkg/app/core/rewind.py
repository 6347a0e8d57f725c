"""Perfect-completeness verifier built by quantum rewinding.

Given an original verifier V (witness hardcoded), a claimed count k and the
completeness threshold c, the transformed verifier:

1. rejects outright if k / 2^l < c
2. applies Q: H on B and on every S qubit, V on R, then flips O when
   (B = 0 and V accepts) or (B = 1 and int(S) > k)
3. measures O and accepts on 1; otherwise applies Q^-1, reflects
   (B, O, R, S) about |0...0>, applies Q again, measures O and accepts
   on 1 or rejects

With k equal to the true count, P(O = 1 after Q) is exactly 1/2 and the
rewinding step makes the total acceptance exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .circuit import Circuit, Gate, gate_count, hadamard_count, hardcode_witness, inverse, relocate
from .exact import Dyadic, Ordering, dyadic_cmp
from .gadgets import (
    Control,
    comparator_ancillas_required,
    compile_comparator_gt_const,
    compile_mcx,
    compile_phase_flip_all_zero,
    phase_flip_ancillas_required,
)
from .logging import Logger, get_logger
from .model import LMode, Verdict
from .protocol import Const, Decision, Measure, Protocol, Unitary, Var
from .validation import validate_transform_params

LABEL_FIRST = "b31"
"""Label of the first measurement of O"""

LABEL_SECOND = "b35"
"""Label of the measurement of O after rewinding"""


class TransformParamsError(ValueError):
    """Out-of-range transform parameters."""


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit assignment of the transformed verifier.

    Order: B, O, R (the original verifier's qubits), S (b1 first, most
    significant), then one ancilla pool shared by every gadget. Gadgets run
    one after another and leave the pool clean, so sharing is safe.
    """

    b: int
    o: int
    r: tuple[int, ...]
    s: tuple[int, ...]
    anc: tuple[int, ...]

    @classmethod
    def for_instance(cls, n_r: int, l: int) -> RegisterLayout:
        reflected = 2 + n_r + l
        pool = max(comparator_ancillas_required(l, extra_controls=1), phase_flip_ancillas_required(reflected))
        r = tuple(range(2, 2 + n_r))
        s = tuple(range(2 + n_r, reflected))
        anc = tuple(range(reflected, reflected + pool))
        return cls(b=0, o=1, r=r, s=s, anc=anc)

    @property
    def width(self) -> int:
        return 2 + len(self.r) + len(self.s) + len(self.anc)

    @property
    def reflected(self) -> tuple[int, ...]:
        """Qubits the all-zero reflection acts on."""
        return (self.b, self.o, *self.r, *self.s)


@dataclass(frozen=True)
class TransformParams:
    """Classical inputs of the transform.

    Attributes:
        l: S-register width; probabilities are read as counts over 2^l
        c: Completeness threshold
        k: Claimed acceptance count in [1, 2^l]
        w: Witness bit string
    """

    l: int
    c: Fraction
    k: int
    w: str = ""

    def __post_init__(self) -> None:
        result = validate_transform_params(self.k, self.l, self.c)
        if not result:
            raise TransformParamsError("; ".join(result.errors))
        if set(self.w) - {"0", "1"}:
            raise TransformParamsError(f"witness must be a bit string, got {self.w!r}")


@dataclass(frozen=True)
class TransformedProtocol:
    """The transformed verifier and the pieces it was assembled from."""

    params: TransformParams
    layout: RegisterLayout
    verifier: Circuit
    q_circuit: Circuit
    reflection: Circuit
    protocol: Protocol

    @property
    def passes_step1(self) -> bool:
        return step1_check(self.params.k, self.params.l, self.params.c) is Verdict.CONTINUE


def step1_check(k: int, l: int, c: Fraction) -> Verdict:
    """REJECT iff k / 2^l < c (exact), CONTINUE otherwise."""
    if dyadic_cmp(Dyadic(k, l), c) is Ordering.LESS:
        return Verdict.REJECT
    return Verdict.CONTINUE


def s_register_width(v: Circuit, l_mode: LMode) -> int:
    """l for a witness-hardcoded verifier; never below 1."""
    count = hadamard_count(v) if l_mode is LMode.HADAMARD else gate_count(v)
    return max(1, count)


def build_q(v: Circuit, k: int, l: int, layout: RegisterLayout) -> Circuit:
    """The step-2 unitary Q on the transformed register.

    Raises:
        TransformParamsError: If v or the layout do not fit
        AncillaShortfallError: If the layout's pool is too small
    """
    if v.width != len(layout.r):
        raise TransformParamsError(f"verifier width {v.width} does not match R width {len(layout.r)}")
    if len(layout.s) != l:
        raise TransformParamsError(f"S width {len(layout.s)} does not match l={l}")

    placed = relocate(v, layout.r, layout.width, output_qubit=layout.o)
    gates: list[Gate] = [Gate.h(layout.b), *(Gate.h(q) for q in layout.s), *placed.gates]
    # B = 0 branch: copy V's verdict
    gates += compile_mcx([Control.neg(layout.b), Control(layout.r[v.output_qubit])], layout.o, layout.anc)
    # B = 1 branch: S > k
    gates += compile_comparator_gt_const(layout.s, k, layout.o, layout.anc, extra_controls=[Control(layout.b)])

    return Circuit(
        width=layout.width,
        gates=tuple(gates),
        output_qubit=layout.o,
        ancilla_qubits=frozenset(layout.anc) | placed.ancilla_qubits,
    )


def build_reflection(layout: RegisterLayout) -> Circuit:
    """-1 on |0...0> of (B, O, R, S), identity elsewhere."""
    gates = compile_phase_flip_all_zero(layout.reflected, layout.anc[0], layout.anc[1:])
    return Circuit(width=layout.width, gates=tuple(gates), output_qubit=layout.o, ancilla_qubits=frozenset(layout.anc))


def build_protocol(
    v_template: Circuit,
    w: str,
    k: int,
    c: Fraction,
    l_mode: LMode = LMode.HADAMARD,
    l: Optional[int] = None,
    logger: Optional[Logger] = None,
) -> TransformedProtocol:
    """Assemble the transformed verifier for (V, w, k, c).

    Args:
        v_template: Original verifier with designated witness qubits
        w: Witness, hardcoded with X gates
        k: Claimed count
        c: Completeness threshold
        l_mode: How l is derived when not given
        l: Explicit S-register width, overriding l_mode
        logger: Logger instance (uses global if None)

    Raises:
        CircuitError: If w does not match the witness arity
        TransformParamsError: If k or c are out of range
    """
    log = logger or get_logger()
    v = hardcode_witness(v_template, w)
    if l is None:
        l = s_register_width(v, l_mode)
    params = TransformParams(l=l, c=Fraction(c), k=k, w=w)
    layout = RegisterLayout.for_instance(v.width, l)

    q = build_q(v, k, l, layout)
    reflection = build_reflection(layout)
    rejected = step1_check(k, l, params.c) is Verdict.REJECT

    protocol = Protocol(
        width=layout.width,
        steps=(
            Decision("step1", Const(rejected), on_true=Verdict.REJECT, on_false=Verdict.CONTINUE),
            Unitary("Q", q),
            Measure(layout.o, LABEL_FIRST),
            Decision("step3.1", Var(LABEL_FIRST), on_true=Verdict.ACCEPT, on_false=Verdict.CONTINUE),
            Unitary("Q_inverse", inverse(q)),
            Unitary("reflect", reflection),
            Unitary("Q_again", q),
            Measure(layout.o, LABEL_SECOND),
            Decision("step3.5", Var(LABEL_SECOND), on_true=Verdict.ACCEPT, on_false=Verdict.REJECT),
        ),
    )
    log.debug(
        "built transformed verifier",
        w=w or "-",
        k=k,
        l=l,
        width=layout.width,
        q_gates=gate_count(q),
        step1="reject" if rejected else "proceed",
    )
    return TransformedProtocol(params, layout, v, q, reflection, protocol)
