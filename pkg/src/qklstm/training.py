"""Loss, optimizers, the training loop, and the finite-difference audit."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import TaggedCorpus, tag_ids, token_ids
from .model import TaggerModel, tagger_loss_and_grads
from .nnops import cross_entropy

# Relative errors in the gradient audit use max(|analytic|, |numeric|, FLOOR)
# as denominator; the floor keeps the central-difference noise floor
# (~1e-9 at eps=1e-5) four decades under the tightest tolerance.
AUDIT_DENOM_FLOOR = 1e-2


@dataclass
class TrainingConfig:
    epochs: int = 100
    learning_rate: float = 0.1
    optimizer: str = "sgd"  # "sgd" | "adam"
    seed: int = 0
    model_kind: str = "qk"
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.optimizer not in ("sgd", "adam"):
            raise ValueError(f"optimizer must be 'sgd' or 'adam', got {self.optimizer!r}")


@dataclass
class EpochMetrics:
    epoch: int
    mean_loss: float
    token_accuracy: float


def nll_loss(logits: np.ndarray, true_tag: int) -> float:
    """Cross-entropy of softmax(logits) against the true tag index."""
    return cross_entropy(logits, true_tag)[0]


def sgd_update(param: np.ndarray, grad: np.ndarray, lr: float) -> np.ndarray:
    if np.shape(param) != np.shape(grad):
        raise ValueError(f"shape mismatch: param {np.shape(param)} vs grad {np.shape(grad)}")
    return param - lr * grad


def init_adam_state(param: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    """Per-parameter Adam state: (first moment, second moment, step count)."""
    return np.zeros_like(param), np.zeros_like(param), 0


def adam_update(
    state: tuple[np.ndarray, np.ndarray, int] | None,
    param: np.ndarray,
    grad: np.ndarray,
    lr: float,
    betas: tuple[float, float] = (0.9, 0.999),
    eps: float = 1e-8,
):
    """One bias-corrected Adam step for a single parameter array."""
    if state is None:
        raise ValueError("Adam state must be initialized with init_adam_state first")
    if np.shape(param) != np.shape(grad):
        raise ValueError(f"shape mismatch: param {np.shape(param)} vs grad {np.shape(grad)}")
    m, v, t = state
    b1, b2 = betas
    t = t + 1
    m = b1 * m + (1.0 - b1) * grad
    v = b2 * v + (1.0 - b2) * grad**2
    m_hat = m / (1.0 - b1**t)
    v_hat = v / (1.0 - b2**t)
    new_param = param - lr * m_hat / (np.sqrt(v_hat) + eps)
    return (m, v, t), new_param


def _encode_corpus(corpus: TaggedCorpus) -> list[tuple[list[int], list[int]]]:
    return [
        (token_ids(corpus, tokens), tag_ids(corpus, tags))
        for tokens, tags in corpus.sentences
    ]


def fit(model: TaggerModel, corpus: TaggedCorpus, config: TrainingConfig) -> list[EpochMetrics]:
    """Per-sentence updates in fixed corpus order; one metrics row per epoch.

    Mean loss averages the per-sentence losses seen during the epoch (each
    already a mean over time steps); accuracy counts the argmax predictions
    from those same forward passes.
    """
    if not corpus.sentences:
        raise ValueError("corpus is empty")
    encoded = _encode_corpus(corpus)
    params = model.named_params()
    adam_states = {name: init_adam_state(arr) for name, arr in params.items()}
    betas = (config.adam_beta1, config.adam_beta2)

    metrics = []
    for epoch in range(1, config.epochs + 1):
        losses = []
        correct = 0
        total = 0
        for toks, tags in encoded:
            loss, grads, n_correct = tagger_loss_and_grads(model, toks, tags)
            losses.append(loss)
            correct += n_correct
            total += len(toks)
            for name, arr in params.items():
                if config.optimizer == "sgd":
                    arr[...] = sgd_update(arr, grads[name], config.learning_rate)
                else:
                    adam_states[name], new = adam_update(
                        adam_states[name], arr, grads[name],
                        config.learning_rate, betas, config.adam_eps,
                    )
                    arr[...] = new
        metrics.append(
            EpochMetrics(
                epoch=epoch,
                mean_loss=float(np.mean(losses)),
                token_accuracy=correct / total,
            )
        )
    return metrics


def _audit_rel_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), AUDIT_DENOM_FLOOR)


def grad_audit(
    model: TaggerModel,
    token_indices: list[int],
    tag_indices: list[int],
    epsilon: float = 1e-5,
) -> dict[str, float]:
    """Worst relative error of analytic vs central-difference gradients,
    per parameter group. Perturbs every scalar in the model in place and
    restores it afterwards."""
    _, analytic, _ = tagger_loss_and_grads(model, token_indices, tag_indices)

    def loss_only() -> float:
        return tagger_loss_and_grads(model, token_indices, tag_indices)[0]

    report = {}
    for name, arr in model.named_params().items():
        worst = 0.0
        a_flat = analytic[name].reshape(-1)
        for k in range(arr.size):
            original = arr.flat[k]
            arr.flat[k] = original + epsilon
            loss_plus = loss_only()
            arr.flat[k] = original - epsilon
            loss_minus = loss_only()
            arr.flat[k] = original
            numeric = (loss_plus - loss_minus) / (2.0 * epsilon)
            worst = max(worst, _audit_rel_error(float(a_flat[k]), numeric))
        report[name] = worst
    return report
