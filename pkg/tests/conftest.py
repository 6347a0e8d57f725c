"""Shared verifier circuits."""

from pathlib import Path

import pytest

from app.core.circuit import Circuit, Gate, parse_circuit

CIRCUITS_DIR = Path(__file__).resolve().parent.parent / "circuits"


@pytest.fixture
def circuits_dir() -> Path:
    """Directory of the shipped sample circuits."""
    return CIRCUITS_DIR


@pytest.fixture
def and_verifier() -> Circuit:
    """Accepts iff both witness bits are 1."""
    return parse_circuit("qubits 3\nwitness 0 1\nccx 0 1 2\noutput 2\n")


@pytest.fixture
def hadamard_verifier() -> Circuit:
    """Ignores its one-bit witness and accepts with probability 1/2."""
    return parse_circuit("qubits 2\nwitness 0\nh 1\noutput 1\n")


@pytest.fixture
def empty_verifier() -> Circuit:
    """Never accepts."""
    return parse_circuit("qubits 2\nwitness 0\noutput 1\n")


@pytest.fixture
def quarter_verifier() -> Circuit:
    """Accepts with probability 1/4 on witness 1, never on witness 0."""
    return parse_circuit("qubits 5\nwitness 0\nh 1\nh 2\nccx 1 2 3\nccx 0 3 4\noutput 4\n")


@pytest.fixture
def x_verifier() -> Circuit:
    """Single X on the output: accepts with certainty."""
    return Circuit(width=1, gates=(Gate.x(0),), output_qubit=0)
