"""Fidelity kernel over a rotation-encoding feature map.

The feature map acts on n qubits: a Hadamard on every wire, then
RY(theta_k) followed by RZ(phi_k) on wire k, then a linear CNOT chain
(k, k+1). The 2n angles come from a trainable linear projection of the
classical input vector, interleaved as (theta_1, phi_1, ..., theta_n,
phi_n). The kernel of two inputs is the squared overlap of their feature
states, evaluated by running the second circuit inverted after the first
and reading the all-zeros probability.

Angle gradients use the shift rule for half-angle rotation generators:
d k / d a = (k[a + pi/2] - k[a - pi/2]) / 2.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .statevector import (
    QuantumState,
    apply_cnot,
    apply_hadamard,
    apply_ry,
    apply_rz,
    prob_all_zero,
    zero_state,
)

SHIFT = math.pi / 2.0


@dataclass
class FeatureMapParams:
    """Circuit width plus the linear map from inputs to rotation angles."""

    n_qubits: int
    input_dim: int
    proj_weights: np.ndarray  # (2 * n_qubits, input_dim)

    def __post_init__(self):
        expected = (2 * self.n_qubits, self.input_dim)
        if self.proj_weights.shape != expected:
            raise ValueError(
                f"proj_weights shape {self.proj_weights.shape}, expected {expected}"
            )
        if not np.all(np.isfinite(self.proj_weights)):
            raise ValueError("proj_weights entries must be finite")


@dataclass
class KernelGradients:
    d_proj: np.ndarray  # same shape as proj_weights
    d_va: np.ndarray  # (input_dim,)
    d_vb: np.ndarray  # (input_dim,)


def init_feature_map(n_qubits: int, input_dim: int, rng: np.random.Generator) -> FeatureMapParams:
    """Projection entries uniform in [-0.5, 0.5] scaled by 1/sqrt(input_dim)."""
    scale = 1.0 / math.sqrt(input_dim)
    proj = rng.uniform(-0.5, 0.5, size=(2 * n_qubits, input_dim)) * scale
    return FeatureMapParams(n_qubits, input_dim, proj)


def encode_angles(v: np.ndarray, params: FeatureMapParams) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (params.input_dim,):
        raise ValueError(f"input has shape {v.shape}, expected ({params.input_dim},)")
    return params.proj_weights @ v


def _apply_feature_circuit(state: QuantumState, angles: np.ndarray) -> QuantumState:
    n = state.n_qubits
    for q in range(n):
        state = apply_hadamard(state, q)
    for q in range(n):
        state = apply_ry(state, q, angles[2 * q])
        state = apply_rz(state, q, angles[2 * q + 1])
    for q in range(n - 1):
        state = apply_cnot(state, q, q + 1)
    return state


def _apply_feature_circuit_inverse(state: QuantumState, angles: np.ndarray) -> QuantumState:
    n = state.n_qubits
    for q in reversed(range(n - 1)):
        state = apply_cnot(state, q, q + 1)
    for q in range(n):
        state = apply_rz(state, q, -angles[2 * q + 1])
        state = apply_ry(state, q, -angles[2 * q])
    for q in range(n):
        state = apply_hadamard(state, q)
    return state


def _state_from_angles(angles: np.ndarray, n_qubits: int) -> QuantumState:
    return _apply_feature_circuit(zero_state(n_qubits), angles)


def prepare_feature_state(v: np.ndarray, params: FeatureMapParams) -> QuantumState:
    """Feature state of ``v``: CNOT chain after per-wire RY, RZ after Hadamards."""
    return _state_from_angles(encode_angles(v, params), params.n_qubits)


def _kernel_from_angles(angles_a: np.ndarray, angles_b: np.ndarray, n_qubits: int) -> float:
    state = _state_from_angles(angles_a, n_qubits)
    state = _apply_feature_circuit_inverse(state, angles_b)
    return min(prob_all_zero(state), 1.0)


def kernel(v_a: np.ndarray, v_b: np.ndarray, params: FeatureMapParams) -> float:
    """Squared feature-state overlap of ``v_a`` and ``v_b``, in [0, 1]."""
    angles_a = encode_angles(v_a, params)
    angles_b = encode_angles(v_b, params)
    return _kernel_from_angles(angles_a, angles_b, params.n_qubits)


def gram_matrix(vs, params: FeatureMapParams, threads: int = 1) -> np.ndarray:
    """Symmetric matrix of pairwise kernel values.

    ``threads`` > 1 fans row computations out to a thread pool; 0 means one
    worker per CPU. Entries are identical regardless of thread count.
    """
    vs = [np.asarray(v, dtype=np.float64) for v in vs]
    m = len(vs)
    gram = np.zeros((m, m))

    def fill_row(i: int) -> None:
        for j in range(i, m):
            gram[i, j] = kernel(vs[i], vs[j], params)

    if threads == 0:
        threads = os.cpu_count() or 1
    if threads > 1 and m > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill_row, range(m)))
    else:
        for i in range(m):
            fill_row(i)

    for i in range(m):
        for j in range(i + 1, m):
            gram[j, i] = gram[i, j]
    return gram


def kernel_grad(v_a: np.ndarray, v_b: np.ndarray, params: FeatureMapParams) -> KernelGradients:
    """Shift-rule kernel gradients, chained through the angle projection.

    Gradients w.r.t. the angles of both circuits are obtained from the
    +-pi/2 shifts (with the 1/2 factor of half-angle generators); the
    overlap with the unshifted opposite state is reused across shifts.
    """
    angles_a = encode_angles(v_a, params)
    angles_b = encode_angles(v_b, params)
    n = params.n_qubits
    state_a = _state_from_angles(angles_a, n)
    state_b = _state_from_angles(angles_b, n)

    def shift_grads(angles: np.ndarray, other: QuantumState) -> np.ndarray:
        out = np.zeros(2 * n)
        for m in range(2 * n):
            shifted = angles.copy()
            shifted[m] = angles[m] + SHIFT
            k_plus = _overlap_sq(other, _state_from_angles(shifted, n))
            shifted[m] = angles[m] - SHIFT
            k_minus = _overlap_sq(other, _state_from_angles(shifted, n))
            out[m] = 0.5 * (k_plus - k_minus)
        return out

    d_angles_a = shift_grads(angles_a, state_b)
    d_angles_b = shift_grads(angles_b, state_a)

    v_a = np.asarray(v_a, dtype=np.float64)
    v_b = np.asarray(v_b, dtype=np.float64)
    d_proj = np.outer(d_angles_a, v_a) + np.outer(d_angles_b, v_b)
    d_va = params.proj_weights.T @ d_angles_a
    d_vb = params.proj_weights.T @ d_angles_b
    return KernelGradients(d_proj=d_proj, d_va=d_va, d_vb=d_vb)


def _overlap_sq(a: QuantumState, b: QuantumState) -> float:
    return float(np.abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)
