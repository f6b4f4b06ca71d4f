"""Dense statevector simulator for few-qubit circuits.

Bit convention: qubit 0 is the most significant bit of the basis index,
so for two qubits the amplitude order is |00>, |01>, |10>, |11> with the
leading bit belonging to qubit 0. Every operation is value-semantic: it
returns a fresh state and never mutates its input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 20

_SQRT1_2 = 1.0 / math.sqrt(2.0)


@dataclass
class QuantumState:
    """Amplitude vector of a pure n-qubit state (length 2**n_qubits)."""

    n_qubits: int
    amplitudes: np.ndarray

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


def zero_state(n_qubits: int) -> QuantumState:
    """All-zeros computational basis state on ``n_qubits`` wires."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return QuantumState(n_qubits, amps)


def _check_qubit(state: QuantumState, qubit: int) -> None:
    if not 0 <= qubit < state.n_qubits:
        raise ValueError(
            f"qubit index {qubit} out of range for a {state.n_qubits}-qubit state"
        )


def _check_angle(angle: float) -> None:
    if not math.isfinite(angle):
        raise ValueError(f"rotation angle must be finite, got {angle!r}")


def _apply_single(state: QuantumState, qubit: int, gate: np.ndarray) -> QuantumState:
    """Apply a 2x2 unitary on one wire; qubit k maps to tensor axis k."""
    psi = state.amplitudes.reshape([2] * state.n_qubits)
    psi = np.moveaxis(psi, qubit, 0)
    out = np.tensordot(gate, psi, axes=([1], [0]))
    out = np.moveaxis(out, 0, qubit).reshape(-1)
    return QuantumState(state.n_qubits, np.ascontiguousarray(out))


def apply_hadamard(state: QuantumState, qubit: int) -> QuantumState:
    _check_qubit(state, qubit)
    gate = np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]], dtype=np.complex128)
    return _apply_single(state, qubit, gate)


def apply_ry(state: QuantumState, qubit: int, angle: float) -> QuantumState:
    """RY(t) = exp(-i t Y / 2)."""
    _check_qubit(state, qubit)
    _check_angle(angle)
    c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
    gate = np.array([[c, -s], [s, c]], dtype=np.complex128)
    return _apply_single(state, qubit, gate)


def apply_rz(state: QuantumState, qubit: int, angle: float) -> QuantumState:
    """RZ(t) = exp(-i t Z / 2)."""
    _check_qubit(state, qubit)
    _check_angle(angle)
    phase = np.exp(-0.5j * angle)
    gate = np.array([[phase, 0.0], [0.0, np.conj(phase)]], dtype=np.complex128)
    return _apply_single(state, qubit, gate)


def apply_cnot(state: QuantumState, control: int, target: int) -> QuantumState:
    _check_qubit(state, control)
    _check_qubit(state, target)
    if control == target:
        raise ValueError("control and target qubits must differ")
    n = state.n_qubits
    idx = np.arange(2**n)
    control_mask = 1 << (n - 1 - control)
    target_mask = 1 << (n - 1 - target)
    src = np.where(idx & control_mask != 0, idx ^ target_mask, idx)
    return QuantumState(n, state.amplitudes[src])


def inner_product(a: QuantumState, b: QuantumState) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(
            f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}"
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def prob_all_zero(state: QuantumState) -> float:
    """Probability of measuring every qubit in |0>."""
    return float(np.abs(state.amplitudes[0]) ** 2)
