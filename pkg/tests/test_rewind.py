"""Tests for the perfect-completeness transform.

Verifies that:
- Step 1 compares k / 2^l against c exactly
- Q puts exactly 1/2 - (k - k_xw)/2^(l+1) on O = 1 and leaves ancillas clean
- Honest instances are accepted with probability exactly 1
- The intermediate states follow the rewinding algebra
"""

from fractions import Fraction

import pytest

from app.core.analysis import rewinding_check
from app.core.circuit import Circuit, CircuitError, hardcode_witness, inverse
from app.core.exact import HALF, ONE, ZERO, Dyadic
from app.core.model import LMode, Verdict
from app.core.protocol import acceptance_formula
from app.core.rewind import (
    LABEL_FIRST,
    LABEL_SECOND,
    RegisterLayout,
    TransformParams,
    TransformParamsError,
    build_protocol,
    build_q,
    build_reflection,
    s_register_width,
    step1_check,
)
from app.core.simulator import (
    apply_circuit,
    circuit_acceptance,
    init_state,
    run_circuit,
    run_deferred,
    run_protocol,
    states_equal,
)


def _q_for(v_template: Circuit, w: str, k: int, l: int) -> tuple[Circuit, RegisterLayout]:
    v = hardcode_witness(v_template, w)
    layout = RegisterLayout.for_instance(v.width, l)
    return build_q(v, k, l, layout), layout


class TestStep1:
    """step1_check."""

    @pytest.mark.parametrize(
        ("k", "l", "c", "expected"),
        [
            (1, 2, Fraction(1, 2), Verdict.REJECT),
            (2, 2, Fraction(1, 2), Verdict.CONTINUE),
            (3, 2, Fraction(2, 3), Verdict.CONTINUE),
            (2, 2, Fraction(2, 3), Verdict.REJECT),
            (1, 1, Fraction(0), Verdict.CONTINUE),
        ],
    )
    def test_threshold(self, k: int, l: int, c: Fraction, expected: Verdict) -> None:
        assert step1_check(k, l, c) is expected


class TestParams:
    """TransformParams range checks."""

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"l": 0, "c": Fraction(1, 2), "k": 1},
            {"l": 2, "c": Fraction(1, 2), "k": 0},
            {"l": 2, "c": Fraction(1, 2), "k": 5},
            {"l": 2, "c": Fraction(3, 2), "k": 1},
            {"l": 2, "c": Fraction(1, 2), "k": 1, "w": "2"},
        ],
    )
    def test_rejected(self, kwargs: dict) -> None:
        with pytest.raises(TransformParamsError):
            TransformParams(**kwargs)

    def test_accepted(self) -> None:
        params = TransformParams(l=2, c=Fraction(1, 2), k=4, w="01")
        assert params.k == 4

    def test_reports_every_problem(self) -> None:
        with pytest.raises(TransformParamsError) as info:
            TransformParams(l=2, c=Fraction(3, 2), k=5)
        assert "k=5 outside [1, 2^2]" in str(info.value)
        assert "c=3/2 must lie in [0, 1]" in str(info.value)


class TestLayout:
    """RegisterLayout.for_instance."""

    def test_three_by_two(self) -> None:
        layout = RegisterLayout.for_instance(3, 2)
        assert (layout.b, layout.o) == (0, 1)
        assert layout.r == (2, 3, 4)
        assert layout.s == (5, 6)
        assert layout.anc == tuple(range(7, 13))
        assert layout.width == 13
        assert layout.reflected == tuple(range(7))

    def test_s_register_width(self, quarter_verifier: Circuit, empty_verifier: Circuit) -> None:
        v = hardcode_witness(quarter_verifier, "1")
        assert s_register_width(v, LMode.HADAMARD) == 2
        assert s_register_width(v, LMode.GATE_COUNT) == 5
        assert s_register_width(empty_verifier, LMode.HADAMARD) == 1
        assert s_register_width(empty_verifier, LMode.GATE_COUNT) == 1


class TestQ:
    """build_q and the reflection."""

    def test_honest_hadamard_verifier(self, hadamard_verifier: Circuit) -> None:
        q, _ = _q_for(hadamard_verifier, "0", k=1, l=1)
        assert circuit_acceptance(q, checked=True) == HALF

    def test_certain_verifier(self, x_verifier: Circuit) -> None:
        q, _ = _q_for(x_verifier, "", k=2, l=1)
        assert circuit_acceptance(q) == HALF

    def test_rejecting_verifier_at_top_k(self, empty_verifier: Circuit) -> None:
        q, _ = _q_for(empty_verifier, "0", k=2, l=1)
        assert circuit_acceptance(q) == ZERO

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_matches_closed_form(self, quarter_verifier: Circuit, k: int) -> None:
        q, _ = _q_for(quarter_verifier, "1", k=k, l=2)
        assert circuit_acceptance(q) == Dyadic(4 - k + 1, 3)

    def test_ancillas_return_clean(self, quarter_verifier: Circuit) -> None:
        q, layout = _q_for(quarter_verifier, "1", k=2, l=2)
        mask = sum(1 << a for a in layout.anc)
        state = run_circuit(q, checked=True)
        assert all(not i & mask for i in state.entries)
        apply_circuit(state, build_reflection(layout))
        assert all(not i & mask for i in state.entries)

    def test_inverse_undoes_q(self, quarter_verifier: Circuit) -> None:
        q, layout = _q_for(quarter_verifier, "1", k=3, l=2)
        state = apply_circuit(run_circuit(q), inverse(q))
        assert states_equal(state, init_state(layout.width))

    def test_reflection_negates_only_zero(self, hadamard_verifier: Circuit) -> None:
        _, layout = _q_for(hadamard_verifier, "0", k=1, l=1)
        reflection = build_reflection(layout)
        zero = apply_circuit(init_state(layout.width), reflection)
        assert states_equal(zero, -init_state(layout.width))

    def test_width_mismatch(self, hadamard_verifier: Circuit) -> None:
        layout = RegisterLayout.for_instance(3, 1)
        with pytest.raises(TransformParamsError):
            build_q(hadamard_verifier, 1, 1, layout)
        with pytest.raises(TransformParamsError):
            build_q(hadamard_verifier, 1, 2, RegisterLayout.for_instance(2, 1))


class TestBuildProtocol:
    """Structure of the assembled verifier."""

    def test_step_order(self, hadamard_verifier: Circuit) -> None:
        tp = build_protocol(hadamard_verifier, "0", 1, Fraction(1, 2))
        names = [getattr(step, "name", getattr(step, "label", None)) for step in tp.protocol.steps]
        assert names == ["step1", "Q", LABEL_FIRST, "step3.1", "Q_inverse", "reflect", "Q_again", LABEL_SECOND, "step3.5"]

    def test_formula_when_step1_passes(self, hadamard_verifier: Circuit) -> None:
        tp = build_protocol(hadamard_verifier, "0", 1, Fraction(1, 2))
        assert tp.passes_step1
        assert str(acceptance_formula(tp.protocol)) == "(b31 | (~b31 & b35))"

    def test_formula_when_step1_rejects(self, quarter_verifier: Circuit) -> None:
        tp = build_protocol(quarter_verifier, "1", 1, Fraction(1, 2))
        assert not tp.passes_step1
        assert str(acceptance_formula(tp.protocol)) == "0"

    def test_witness_arity_checked(self, and_verifier: Circuit) -> None:
        with pytest.raises(CircuitError):
            build_protocol(and_verifier, "1", 1, Fraction(1, 2))

    def test_k_range_checked(self, hadamard_verifier: Circuit) -> None:
        with pytest.raises(TransformParamsError):
            build_protocol(hadamard_verifier, "0", 3, Fraction(1, 2))

    def test_explicit_l_overrides_mode(self, hadamard_verifier: Circuit) -> None:
        tp = build_protocol(hadamard_verifier, "0", 2, Fraction(1, 2), l=2)
        assert tp.params.l == 2
        assert len(tp.layout.s) == 2


class TestPerfectCompleteness:
    """Honest k gives acceptance exactly 1."""

    @pytest.mark.parametrize(
        ("fixture", "w", "k", "c", "l_mode"),
        [
            ("and_verifier", "11", 2, Fraction(1, 2), LMode.HADAMARD),
            ("hadamard_verifier", "0", 1, Fraction(1, 2), LMode.HADAMARD),
            ("quarter_verifier", "1", 1, Fraction(1, 4), LMode.HADAMARD),
            ("quarter_verifier", "1", 8, Fraction(1, 4), LMode.GATE_COUNT),
            ("and_verifier", "11", 8, Fraction(1, 2), LMode.GATE_COUNT),
        ],
    )
    def test_honest_k(
        self, request: pytest.FixtureRequest, fixture: str, w: str, k: int, c: Fraction, l_mode: LMode
    ) -> None:
        tp = build_protocol(request.getfixturevalue(fixture), w, k, c, l_mode=l_mode)
        assert run_protocol(tp.protocol, checked=True)[Verdict.ACCEPT] == ONE

    def test_honest_k_deferred(self, hadamard_verifier: Circuit) -> None:
        tp = build_protocol(hadamard_verifier, "0", 1, Fraction(1, 2))
        assert run_deferred(tp.protocol)[Verdict.ACCEPT] == ONE

    def test_dishonest_k_falls_short(self, hadamard_verifier: Circuit) -> None:
        tp = build_protocol(hadamard_verifier, "0", 2, Fraction(1, 2))
        # p = 1/4, so p + 4p(1 - p)^2 = 13/16
        assert run_protocol(tp.protocol)[Verdict.ACCEPT] == Dyadic(13, 4)

    def test_step1_rejection_is_total(self, quarter_verifier: Circuit) -> None:
        tp = build_protocol(quarter_verifier, "1", 1, Fraction(1, 2))
        verdicts = run_protocol(tp.protocol)
        assert verdicts == {Verdict.ACCEPT: ZERO, Verdict.REJECT: ONE}
        assert run_deferred(tp.protocol)[Verdict.ACCEPT] == ZERO

    def test_l_modes_agree_on_equivalent_k(self, quarter_verifier: Circuit) -> None:
        by_hadamards = build_protocol(quarter_verifier, "1", 2, Fraction(1, 2), l_mode=LMode.HADAMARD)
        by_gates = build_protocol(quarter_verifier, "1", 16, Fraction(1, 2), l_mode=LMode.GATE_COUNT)
        assert (by_hadamards.params.l, by_gates.params.l) == (2, 5)
        assert circuit_acceptance(by_hadamards.q_circuit) == circuit_acceptance(by_gates.q_circuit) == Dyadic(3, 3)
        assert run_protocol(by_hadamards.protocol) == run_protocol(by_gates.protocol)


class TestRewindingAlgebra:
    """rewinding_check on instances across the range of p."""

    @pytest.mark.parametrize(
        ("fixture", "w", "k", "c", "p"),
        [
            ("hadamard_verifier", "0", 1, Fraction(1, 2), HALF),
            ("hadamard_verifier", "0", 2, Fraction(1, 2), Dyadic(1, 2)),
            ("empty_verifier", "0", 2, Fraction(1, 2), ZERO),
            ("quarter_verifier", "1", 2, Fraction(1, 2), Dyadic(3, 3)),
            ("quarter_verifier", "0", 4, Fraction(1, 2), ZERO),
            ("and_verifier", "10", 1, Fraction(1, 2), Dyadic(1, 2)),
            ("x_verifier", "", 2, Fraction(1, 2), HALF),
        ],
    )
    def test_intermediate_states(
        self, request: pytest.FixtureRequest, fixture: str, w: str, k: int, c: Fraction, p: Dyadic
    ) -> None:
        tp = build_protocol(request.getfixturevalue(fixture), w, k, c)
        check = rewinding_check(tp)
        assert check.p == p
        assert check.ok, check

    def test_sectors(self, quarter_verifier: Circuit) -> None:
        check = rewinding_check(build_protocol(quarter_verifier, "1", 2, Fraction(1, 2)))
        assert check.sectors[(0, 1)] == Dyadic(1, 3)
        assert check.sectors[(1, 1)] == Dyadic(1, 2)
        assert sum(check.sectors.values(), ZERO) == ONE

    def test_p_zero_skips_inverse_identity(self, empty_verifier: Circuit) -> None:
        check = rewinding_check(build_protocol(empty_verifier, "0", 2, Fraction(1, 2)))
        assert check.after_inverse_ok is None

    def test_step1_rejection_has_nothing_to_rewind(self, quarter_verifier: Circuit) -> None:
        with pytest.raises(TransformParamsError):
            rewinding_check(build_protocol(quarter_verifier, "1", 1, Fraction(1, 2)))
