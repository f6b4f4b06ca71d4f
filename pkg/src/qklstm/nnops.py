"""Shared activation and loss primitives (float64 throughout)."""

from __future__ import annotations

import numpy as np


def sigmoid(x):
    """Numerically stable logistic function; accepts scalars or arrays."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out if out.ndim else float(out)


def softmax(logits: np.ndarray) -> np.ndarray:
    z = np.asarray(logits, dtype=np.float64)
    z = z - np.max(z)
    e = np.exp(z)
    return e / np.sum(e)


def cross_entropy(logits: np.ndarray, true_index: int) -> tuple[float, np.ndarray]:
    """Softmax cross-entropy and its gradient w.r.t. the logits."""
    logits = np.asarray(logits, dtype=np.float64)
    if not 0 <= true_index < logits.shape[0]:
        raise ValueError(
            f"class index {true_index} out of range for {logits.shape[0]} logits"
        )
    z = logits - np.max(logits)
    log_norm = np.log(np.sum(np.exp(z)))
    loss = float(log_norm - z[true_index])
    grad = np.exp(z - log_norm)
    grad[true_index] -= 1.0
    return loss, grad
