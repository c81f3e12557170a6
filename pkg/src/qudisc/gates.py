"""Gate vocabulary: matrices and the Gate record used by circuits.

The named kinds mirror a hardware-native set: ``x``, ``sx``, ``rz``,
``h``, ``cx``, ``ecr``.  Two escape hatches, ``u1q`` and ``u2q``, carry
an explicit unitary matrix for gates with no native name; they simulate
fine but cannot be exported to the textual circuit format.

Two-qubit matrices are written in the basis |q_first q_second> where the
first listed qubit is the most significant bit of the 4-dimensional
index, i.e. ``kron(A, B)`` puts A on the first listed qubit.  ECR is the
echoed cross-resonance gate (X (x) I - Y (x) X)/sqrt(2); note ECR^2 = I
and SX^2 = X exactly, which the inverse rules below rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotUnitaryError, UnsupportedGateError

IDENT2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
SQRT_X = np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex) / 2.0
CNOT_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
ECR_MATRIX = (np.kron(PAULI_X, IDENT2) - np.kron(PAULI_Y, PAULI_X)) / np.sqrt(2.0)

PAULIS_1Q = (PAULI_X, PAULI_Y, PAULI_Z)

ONE_QUBIT_KINDS = ("x", "sx", "rz", "h", "u1q")
TWO_QUBIT_KINDS = ("cx", "ecr", "u2q")
NAMED_KINDS = ("x", "sx", "rz", "h", "cx", "ecr")


def rz_matrix(phi: float) -> np.ndarray:
    """diag(e^{-i phi/2}, e^{+i phi/2})."""
    return np.array(
        [[np.exp(-0.5j * phi), 0.0], [0.0, np.exp(0.5j * phi)]], dtype=complex
    )


@dataclass(frozen=True)
class Gate:
    """One gate application: a kind, target qubits, and optional payload."""

    kind: str
    qubits: tuple[int, ...]
    phi: float | None = None
    matrix: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.kind not in ONE_QUBIT_KINDS + TWO_QUBIT_KINDS:
            raise UnsupportedGateError(f"unknown gate kind {self.kind!r}")
        arity = 1 if self.kind in ONE_QUBIT_KINDS else 2
        if len(self.qubits) != arity:
            raise UnsupportedGateError(
                f"{self.kind} takes {arity} qubit(s), got {self.qubits}"
            )
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise UnsupportedGateError(f"{self.kind} qubits must be distinct")
        if self.kind == "rz" and self.phi is None:
            raise UnsupportedGateError("rz requires an angle")
        if self.kind in ("u1q", "u2q") and self.matrix is None:
            raise UnsupportedGateError(f"{self.kind} requires an explicit matrix")

    @property
    def arity(self) -> int:
        return len(self.qubits)


def gate_matrix(gate: Gate) -> np.ndarray:
    """The unitary matrix of a gate (2x2 or 4x4).

    Raw-matrix gates are unitarity-checked here (tolerance 1e-12) so a
    bad payload fails loudly before it ever touches a statevector.
    """
    if gate.kind == "x":
        return PAULI_X
    if gate.kind == "sx":
        return SQRT_X
    if gate.kind == "h":
        return HADAMARD
    if gate.kind == "rz":
        return rz_matrix(gate.phi)
    if gate.kind == "cx":
        return CNOT_MATRIX
    if gate.kind == "ecr":
        return ECR_MATRIX
    m = np.asarray(gate.matrix, dtype=complex)
    want = 2 if gate.kind == "u1q" else 4
    if m.shape != (want, want):
        raise UnsupportedGateError(
            f"{gate.kind} matrix must be {want}x{want}, got {m.shape}"
        )
    if np.max(np.abs(m.conj().T @ m - np.eye(want))) > 1e-12:
        raise NotUnitaryError(f"{gate.kind} payload is not unitary within 1e-12")
    return m


def inverse_gates(gate: Gate) -> tuple[Gate, ...]:
    """Gate sequence (in time order) applying the inverse of ``gate``.

    Self-inverse kinds map to themselves; rz negates its angle; sx needs
    two gates since SX^dag = SX * X (apply x first, then sx).
    """
    if gate.kind in ("x", "h", "cx", "ecr"):
        return (gate,)
    if gate.kind == "rz":
        return (Gate("rz", gate.qubits, phi=-gate.phi),)
    if gate.kind == "sx":
        return (Gate("x", gate.qubits), Gate("sx", gate.qubits))
    return (Gate(gate.kind, gate.qubits, matrix=gate_matrix(gate).conj().T),)
