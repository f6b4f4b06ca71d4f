"""Sequence tagger: embedding lookup, recurrent cell, linear tag head.

The same wrapper drives both cell kinds ("qk" and "classical"); gradients
for every trainable array, embeddings and head included, come back in one
flat dict keyed like ``named_params()``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lstm, qk_cell
from .data import EmbeddingTable, TagHead, embed, embed_backward, init_embedding, init_tag_head, tag_logits
from .lstm import LstmParams
from .nnops import cross_entropy
from .qk_cell import QkLstmParams

MODEL_KINDS = ("qk", "classical")


@dataclass
class TaggerModel:
    kind: str  # "qk" | "classical"
    embedding: EmbeddingTable
    cell: QkLstmParams | LstmParams
    head: TagHead

    def named_params(self) -> dict[str, np.ndarray]:
        out = {"embedding": self.embedding.table}
        out.update(self.cell.named_params())
        out["tag_weight"] = self.head.weight
        out["tag_bias"] = self.head.bias
        return out


def param_count(obj) -> int:
    """Number of trainable scalars in anything exposing ``named_params``."""
    return sum(arr.size for arr in obj.named_params().values())


def param_breakdown(model: TaggerModel) -> dict[str, int]:
    """Trainable scalar count per component."""
    return {
        "embedding": model.embedding.table.size,
        "cell": param_count(model.cell),
        "tag_head": model.head.weight.size + model.head.bias.size,
        "total": param_count(model),
    }


def init_tagger(
    kind: str,
    vocab_size: int,
    num_tags: int,
    embedding_dim: int,
    hidden_dim: int,
    rng: np.random.Generator,
    n_qubits: int = 4,
    n_refs: int = 4,
    per_gate: bool = False,
) -> TaggerModel:
    """Draw order: embedding table, cell parameters, tag head."""
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r}, expected one of {MODEL_KINDS}")
    embedding = init_embedding(vocab_size, embedding_dim, rng)
    if kind == "qk":
        cell = qk_cell.init_qk_params(
            hidden_dim, embedding_dim, n_refs, n_qubits, rng, per_gate=per_gate
        )
    else:
        cell = lstm.init_lstm_params(hidden_dim, embedding_dim, rng)
    head = init_tag_head(num_tags, hidden_dim, rng)
    return TaggerModel(kind=kind, embedding=embedding, cell=cell, head=head)


def _run_cell(model: TaggerModel, xs):
    if model.kind == "qk":
        return qk_cell.forward_sequence(xs, model.cell)
    return lstm.lstm_forward_sequence(xs, model.cell)


def tagger_forward(model: TaggerModel, token_indices: list[int]):
    """Per-token logits plus the cell states and traces behind them."""
    xs = [embed(idx, model.embedding) for idx in token_indices]
    states, traces = _run_cell(model, xs)
    logits = [tag_logits(st.h, model.head) for st in states]
    return logits, states, traces


def predict_tags(model: TaggerModel, token_indices: list[int]) -> list[int]:
    logits, _, _ = tagger_forward(model, token_indices)
    return [int(np.argmax(lg)) for lg in logits]


def tagger_loss_and_grads(
    model: TaggerModel,
    token_indices: list[int],
    tag_indices: list[int],
) -> tuple[float, dict[str, np.ndarray], int]:
    """Mean per-token cross-entropy, full gradient dict, and correct count."""
    if len(token_indices) != len(tag_indices):
        raise ValueError("token and tag sequences differ in length")
    n_steps = len(token_indices)
    logits, states, traces = tagger_forward(model, token_indices)

    grads = {name: np.zeros_like(arr) for name, arr in model.named_params().items()}
    loss = 0.0
    correct = 0
    grad_h = []
    for t in range(n_steps):
        step_loss, dlogits = cross_entropy(logits[t], tag_indices[t])
        loss += step_loss / n_steps
        dlogits = dlogits / n_steps
        if int(np.argmax(logits[t])) == tag_indices[t]:
            correct += 1
        grads["tag_weight"] += np.outer(dlogits, states[t].h)
        grads["tag_bias"] += dlogits
        grad_h.append(model.head.weight.T @ dlogits)

    if model.kind == "qk":
        cell_grads, d_xs = qk_cell.backward_sequence(traces, grad_h, model.cell)
    else:
        cell_grads, d_xs = lstm.lstm_backward_sequence(traces, grad_h, model.cell)
    for name, g in cell_grads.items():
        grads[name] += g
    for t, idx in enumerate(token_indices):
        embed_backward(idx, d_xs[t], grads["embedding"])
    return loss, grads, correct
