"""Reversible gadgets lowered to {H, X, CCX}.

All gadgets assume their ancillas start in |0> and return them to |0>
on every computational-basis input.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .circuit import Gate
from .constants import S_REGISTER_ENDIANNESS


class GadgetError(ValueError):
    """Invalid gadget request (overlapping qubits, constant out of range)."""


class AncillaShortfallError(GadgetError):
    """Not enough clean ancillas for the requested decomposition."""

    def __init__(self, gadget: str, required: int, given: int) -> None:
        super().__init__(
            f"{gadget} needs {required} clean ancilla(s), got {given} (short by {required - given})"
        )
        self.required = required
        self.given = given


@dataclass(frozen=True)
class Control:
    """A control qubit and the value it must hold for the gadget to fire."""

    qubit: int
    positive: bool = True

    @classmethod
    def neg(cls, qubit: int) -> Control:
        return cls(qubit, positive=False)


def mcx_ancillas_required(n_controls: int) -> int:
    """Clean ancillas compile_mcx needs for n controls.

    Two or more controls use a V-chain with n - 2 ancillas. A single control
    has no CCX partner in the gate set, so it borrows one ancilla set to |1>.
    """
    if n_controls == 1:
        return 1
    return max(0, n_controls - 2)


def _check_distinct(qubits: Sequence[int], gadget: str) -> None:
    if len(set(qubits)) != len(qubits):
        raise GadgetError(f"{gadget}: qubits must be distinct, got {list(qubits)}")


def compile_mcx(controls: Sequence[Control], target: int, ancillas: Sequence[int] = ()) -> list[Gate]:
    """X on target iff every control matches its polarity.

    Negative controls are conjugated with X. Three or more controls use the
    compute-copy-uncompute V-chain over ``ancillas[: n - 2]``.

    Raises:
        AncillaShortfallError: If fewer ancillas than mcx_ancillas_required(n)
        GadgetError: If controls, target and used ancillas overlap
    """
    n = len(controls)
    required = mcx_ancillas_required(n)
    if len(ancillas) < required:
        raise AncillaShortfallError(f"mcx with {n} controls", required, len(ancillas))
    used = list(ancillas[:required])
    cq = [c.qubit for c in controls]
    _check_distinct([*cq, target, *used], "mcx")

    flips = [Gate.x(c.qubit) for c in controls if not c.positive]
    body: list[Gate]

    if n == 0:
        body = [Gate.x(target)]
    elif n == 1:
        one = used[0]
        body = [Gate.x(one), Gate.ccx(cq[0], one, target), Gate.x(one)]
    elif n == 2:
        body = [Gate.ccx(cq[0], cq[1], target)]
    else:
        compute = [Gate.ccx(cq[0], cq[1], used[0])]
        for i in range(2, n - 1):
            compute.append(Gate.ccx(used[i - 2], cq[i], used[i - 1]))
        body = [*compute, Gate.ccx(used[n - 3], cq[n - 1], target), *reversed(compute)]

    return [*flips, *body, *flips]


def comparator_ancillas_required(l: int, extra_controls: int = 0) -> int:
    """Worst-case ancilla demand of compile_comparator_gt_const.

    The shortest mcx (top bit only) may need more than the widest one when it
    has a single control.
    """
    return max(mcx_ancillas_required(extra_controls + 1), mcx_ancillas_required(l + extra_controls))


def compile_comparator_gt_const(
    s_register: Sequence[int],
    k: int,
    target: int,
    ancillas: Sequence[int] = (),
    extra_controls: Sequence[Control] = (),
) -> list[Gate]:
    """Flip target iff the integer encoded by S is greater than the constant k.

    S = b1..bl (b1 most significant) encodes int(b) + 1, so "S > k" is
    "int(b) > k - 1". With K = k - 1, int(b) > K holds for exactly one prefix
    position i: b agrees with K above i, b_i = 1 and K_i = 0. One mcx per zero
    bit of K covers these disjoint cases. ``extra_controls`` are folded into
    every mcx, so the flip is additionally conditioned on them.

    Raises:
        GadgetError: If k is outside [1, 2^l] or qubits overlap
        AncillaShortfallError: If ancillas cannot cover the widest mcx
    """
    l = len(s_register)
    if l < 1:
        raise GadgetError("comparator needs at least one S qubit")
    if not 1 <= k <= (1 << l):
        raise GadgetError(f"comparator constant k={k} outside [1, {1 << l}]")
    _check_distinct([*s_register, target, *(c.qubit for c in extra_controls)], "comparator")

    if S_REGISTER_ENDIANNESS != "big":
        s_register = list(reversed(s_register))
    bound = k - 1
    bits = [(bound >> (l - 1 - i)) & 1 for i in range(l)]
    gates: list[Gate] = []
    for i, bit in enumerate(bits):
        if bit:
            continue
        prefix = [Control(s_register[j], positive=bool(bits[j])) for j in range(i)]
        controls = [*extra_controls, *prefix, Control(s_register[i])]
        gates.extend(compile_mcx(controls, target, ancillas))
    return gates


def phase_flip_ancillas_required(n_qubits: int) -> int:
    """Flag qubit plus the mcx demand over all reflected qubits."""
    return 1 + mcx_ancillas_required(n_qubits)


def compile_phase_flip_all_zero(
    qubits: Sequence[int],
    flag_ancilla: int,
    mcx_ancillas: Sequence[int] = (),
) -> list[Gate]:
    """Multiply the all-zero state of ``qubits`` by -1, identity elsewhere.

    The flag is prepared in (|0> - |1>)/sqrt2 by X then H, flipped by an mcx
    with every qubit as a negative control, then returned to |0>.

    Raises:
        GadgetError: If qubits overlap the flag or the mcx ancillas
    """
    overlap = set(qubits) & {flag_ancilla, *mcx_ancillas}
    if overlap:
        raise GadgetError(f"phase flip: ancillas overlap reflected qubits {sorted(overlap)}")
    controls = [Control.neg(q) for q in qubits]
    prepare = [Gate.x(flag_ancilla), Gate.h(flag_ancilla)]
    return [
        *prepare,
        *compile_mcx(controls, flag_ancilla, mcx_ancillas),
        *reversed(prepare),
    ]
