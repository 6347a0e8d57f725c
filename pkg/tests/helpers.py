"""Simulation helpers shared by test modules."""

from app.core.circuit import Gate
from app.core.simulator import StateVector, apply_gates


def run_basis(gates: list[Gate], width: int, index: int) -> StateVector:
    """Apply gates to the computational basis state |index>."""
    return apply_gates(StateVector(width, {index: 1}), gates)
