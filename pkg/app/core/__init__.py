"""Exact simulator and rewinding transform.

This package provides the core functionality for qcma-rewind:
- Exact amplitudes (m / sqrt2^t) and dyadic probabilities
- {H, X, CCX} circuits, their text format and reversible gadgets
- Sparse exact simulation of circuits and measured protocols
- The perfect-completeness transform and its closed-form analysis
- Logging with circular buffer
"""

from .analysis import (
    InstanceReport,
    InstanceRow,
    brute_force_best_witness,
    exact_acceptance_prob,
    f_monotone_check,
    p_acc_formula,
    predicted_p,
    rewinding_check,
    soundness_bound,
    sweep_k,
    verify_theorem,
)
from .circuit import (
    Circuit,
    Gate,
    GateKind,
    format_circuit,
    gate_count,
    hadamard_count,
    hardcode_witness,
    inverse,
    load_circuit,
    parse_circuit,
)
from .constants import LOG_BUFFER_SIZE, MAX_DEFERRED_LABELS, MAX_WITNESS_BITS, SCHEMA_VERSION
from .exact import Amp, Dyadic, Rational, amp_add, amp_mul, amp_norm_sq, dyadic_cmp, to_rational
from .gadgets import Control, compile_comparator_gt_const, compile_mcx, compile_phase_flip_all_zero
from .model import CertificateStatus, LMode, PromiseStatus, Semantics, Verdict
from .protocol import Decision, Measure, Protocol, Unitary, acceptance_formula
from .rewind import TransformedProtocol, TransformParams, build_protocol, build_q, step1_check
from .simulator import (
    StateVector,
    apply_gate,
    branch_measure,
    defer_measurements,
    init_state,
    measure_prob,
    run_protocol,
)

__all__ = [
    # Constants
    "LOG_BUFFER_SIZE",
    "MAX_DEFERRED_LABELS",
    "MAX_WITNESS_BITS",
    "SCHEMA_VERSION",
    # Exact arithmetic
    "Amp",
    "Dyadic",
    "Rational",
    "amp_add",
    "amp_mul",
    "amp_norm_sq",
    "dyadic_cmp",
    "to_rational",
    # Circuits
    "Circuit",
    "Gate",
    "GateKind",
    "format_circuit",
    "gate_count",
    "hadamard_count",
    "hardcode_witness",
    "inverse",
    "load_circuit",
    "parse_circuit",
    # Gadgets
    "Control",
    "compile_comparator_gt_const",
    "compile_mcx",
    "compile_phase_flip_all_zero",
    # Simulation
    "StateVector",
    "apply_gate",
    "branch_measure",
    "defer_measurements",
    "init_state",
    "measure_prob",
    "run_protocol",
    "Decision",
    "Measure",
    "Protocol",
    "Unitary",
    "acceptance_formula",
    # Transform
    "TransformParams",
    "TransformedProtocol",
    "build_protocol",
    "build_q",
    "step1_check",
    # Analysis
    "InstanceReport",
    "InstanceRow",
    "brute_force_best_witness",
    "exact_acceptance_prob",
    "f_monotone_check",
    "p_acc_formula",
    "predicted_p",
    "rewinding_check",
    "soundness_bound",
    "sweep_k",
    "verify_theorem",
    # Models
    "CertificateStatus",
    "LMode",
    "PromiseStatus",
    "Semantics",
    "Verdict",
]
