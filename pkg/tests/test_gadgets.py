"""Exhaustive truth-table tests for the reversible gadgets.

Every gadget is run on every computational basis input with clean
ancillas; the output must be the expected basis state (or its negation for
the phase flip) with every ancilla back at |0>.
"""

import pytest

from app.core.circuit import GateKind
from app.core.constants import S_REGISTER_ENDIANNESS
from app.core.gadgets import (
    AncillaShortfallError,
    Control,
    GadgetError,
    comparator_ancillas_required,
    compile_comparator_gt_const,
    compile_mcx,
    compile_phase_flip_all_zero,
    mcx_ancillas_required,
    phase_flip_ancillas_required,
)
from app.core.simulator import StateVector, states_equal

from .helpers import run_basis


class TestAncillaDemand:
    """Ancilla counts per gadget."""

    @pytest.mark.parametrize(("n", "expected"), [(0, 0), (1, 1), (2, 0), (3, 1), (5, 3), (8, 6)])
    def test_mcx(self, n: int, expected: int) -> None:
        assert mcx_ancillas_required(n) == expected

    def test_comparator_counts_extra_controls(self) -> None:
        assert comparator_ancillas_required(4) == 2
        assert comparator_ancillas_required(4, extra_controls=1) == 3

    @pytest.mark.parametrize(("l", "extra", "expected"), [(1, 0, 1), (2, 0, 1), (3, 0, 1), (2, 1, 1), (1, 1, 0)])
    def test_comparator_covers_single_control_prefix(self, l: int, extra: int, expected: int) -> None:
        assert comparator_ancillas_required(l, extra_controls=extra) == expected

    @pytest.mark.parametrize("k", [1, 2])
    def test_comparator_builds_with_exact_demand(self, k: int) -> None:
        ancillas = list(range(3, 3 + comparator_ancillas_required(2)))
        gates = compile_comparator_gt_const([0, 1], k, 2, ancillas)
        assert gates

    def test_phase_flip_adds_flag(self) -> None:
        assert phase_flip_ancillas_required(6) == 5


class TestMcx:
    """compile_mcx flips the target iff every control matches its polarity."""

    @pytest.mark.parametrize("n", range(0, 9))
    @pytest.mark.parametrize("pattern", ["positive", "alternating"])
    def test_truth_table(self, n: int, pattern: str) -> None:
        controls = [Control(q, positive=(pattern == "positive" or q % 2 == 0)) for q in range(n)]
        target = n
        ancillas = list(range(n + 1, n + 1 + mcx_ancillas_required(n)))
        width = n + 1 + len(ancillas)
        gates = compile_mcx(controls, target, ancillas)

        for index in range(1 << (n + 1)):
            fires = all(bool(index >> c.qubit & 1) == c.positive for c in controls)
            expected = index ^ (1 << target) if fires else index
            assert run_basis(gates, width, index).entries == {expected: 1}

    def test_only_ccx_and_x(self) -> None:
        gates = compile_mcx([Control(q) for q in range(6)], 6, range(7, 11))
        assert {g.kind for g in gates} <= {GateKind.X, GateKind.CCX}

    def test_shortfall_names_the_deficit(self) -> None:
        with pytest.raises(AncillaShortfallError) as info:
            compile_mcx([Control(q) for q in range(4)], 4, [5])
        assert info.value.required == 2
        assert info.value.given == 1
        assert "short by 1" in str(info.value)

    def test_single_control_needs_one_ancilla(self) -> None:
        with pytest.raises(AncillaShortfallError):
            compile_mcx([Control(0)], 1)

    def test_overlap_rejected(self) -> None:
        with pytest.raises(GadgetError):
            compile_mcx([Control(0), Control(1), Control(2)], 3, [2])


def _s_index(value: int, l: int) -> int:
    """Basis index with S = qubits 0..l-1 holding value big-endian (qubit 0 most significant)."""
    return sum(1 << i for i in range(l) if value >> (l - 1 - i) & 1)


class TestComparator:
    """compile_comparator_gt_const flips iff int(b) + 1 > k."""

    @pytest.mark.parametrize("l", range(1, 7))
    def test_all_constants(self, l: int) -> None:
        target = l
        ancillas = list(range(l + 1, l + 1 + comparator_ancillas_required(l)))
        width = l + 1 + len(ancillas)
        for k in range(1, (1 << l) + 1):
            gates = compile_comparator_gt_const(range(l), k, target, ancillas)
            for value in range(1 << l):
                index = _s_index(value, l)
                expected = index ^ (1 << target) if value + 1 > k else index
                assert run_basis(gates, width, index).entries == {expected: 1}, (l, k, value)

    def test_extra_control_gates_the_flip(self) -> None:
        l, extra, target = 3, 3, 4
        ancillas = list(range(5, 5 + comparator_ancillas_required(l, extra_controls=1)))
        width = 5 + len(ancillas)
        for k in range(1, 9):
            gates = compile_comparator_gt_const(range(l), k, target, ancillas, extra_controls=[Control(extra)])
            for value in range(8):
                for b in (0, 1):
                    index = _s_index(value, l) | (b << extra)
                    expected = index ^ (1 << target) if b and value + 1 > k else index
                    assert run_basis(gates, width, index).entries == {expected: 1}

    def test_first_qubit_is_most_significant(self) -> None:
        assert S_REGISTER_ENDIANNESS == "big"
        gates = compile_comparator_gt_const([0, 1], 2, 2, [3])
        assert run_basis(gates, 4, 0b01).entries == {0b101: 1}
        assert run_basis(gates, 4, 0b10).entries == {0b10: 1}

    def test_k_at_top_never_flips(self) -> None:
        assert compile_comparator_gt_const(range(3), 8, 3, [4]) == []

    @pytest.mark.parametrize("k", [0, 9])
    def test_k_out_of_range(self, k: int) -> None:
        with pytest.raises(GadgetError):
            compile_comparator_gt_const(range(3), k, 3, [4])


class TestPhaseFlip:
    """compile_phase_flip_all_zero negates |0...0> only."""

    @pytest.mark.parametrize("n", range(1, 9))
    def test_phase_on_every_basis_state(self, n: int) -> None:
        qubits = list(range(n))
        flag = n
        mcx_ancillas = list(range(n + 1, n + phase_flip_ancillas_required(n)))
        width = n + phase_flip_ancillas_required(n)
        gates = compile_phase_flip_all_zero(qubits, flag, mcx_ancillas)

        for index in range(1 << n):
            expected = StateVector(width, {index: -1 if index == 0 else 1})
            assert states_equal(run_basis(gates, width, index), expected), (n, index)

    def test_overlap_rejected(self) -> None:
        with pytest.raises(GadgetError):
            compile_phase_flip_all_zero([0, 1, 2], 2)
