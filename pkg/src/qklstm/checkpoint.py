"""Flat text checkpoints for tagger models.

Layout: a header line, ``meta key value`` lines, the vocabulary and tag
inventories in index order, then one ``array name dim...`` line followed
by a line of row-major values per parameter. Floats are written with 17
significant digits, so save/load round-trips float64 bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import EmbeddingTable, TagHead
from .errors import ParseError
from .kernel import FeatureMapParams
from .lstm import LstmParams
from .model import TaggerModel
from .qk_cell import GATES, QkLstmParams

HEADER = "qklstm-checkpoint v1"


@dataclass
class Checkpoint:
    model: TaggerModel
    vocab: dict[str, int]
    tag_map: dict[str, int]


def _format_values(arr: np.ndarray) -> str:
    return " ".join(format(x, ".17g") for x in arr.reshape(-1))


def save_checkpoint(path: str, model: TaggerModel, vocab: dict[str, int], tag_map: dict[str, int]) -> None:
    cell = model.cell
    lines = [HEADER]
    lines.append(f"meta kind {model.kind}")
    lines.append(f"meta embedding_dim {model.embedding.embedding_dim}")
    lines.append(f"meta hidden_dim {cell.hidden_dim}")
    if isinstance(cell, QkLstmParams):
        lines.append(f"meta n_qubits {cell.feature_maps[0].n_qubits}")
        lines.append(f"meta n_refs {cell.n_refs}")
        lines.append(f"meta per_gate {int(cell.per_gate)}")
    lines.append("vocab " + " ".join(_by_index(vocab)))
    lines.append("tags " + " ".join(_by_index(tag_map)))
    for name, arr in model.named_params().items():
        dims = " ".join(str(d) for d in arr.shape)
        lines.append(f"array {name} {dims}".rstrip())
        lines.append(_format_values(arr))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _by_index(mapping: dict[str, int]) -> list[str]:
    return [key for key, _ in sorted(mapping.items(), key=lambda kv: kv[1])]


def load_checkpoint(path: str) -> Checkpoint:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read checkpoint {path}: {exc}") from exc
    if not lines or lines[0] != HEADER:
        raise ParseError(f"not a checkpoint file (missing header {HEADER!r})", line=1)

    meta: dict[str, str] = {}
    vocab_tokens: list[str] | None = None
    tag_tokens: list[str] | None = None
    arrays: dict[str, np.ndarray] = {}
    idx = 1
    while idx < len(lines):
        line = lines[idx]
        if line.startswith("meta "):
            _, key, value = line.split(" ", 2)
            meta[key] = value
        elif line.startswith("vocab "):
            vocab_tokens = line.split(" ")[1:]
        elif line.startswith("tags "):
            tag_tokens = line.split(" ")[1:]
        elif line.startswith("array "):
            parts = line.split(" ")
            name = parts[1]
            shape = tuple(int(d) for d in parts[2:])
            idx += 1
            if idx >= len(lines):
                raise ParseError(f"missing values for array {name}", line=idx)
            values = np.array([float(x) for x in lines[idx].split()], dtype=np.float64)
            expected = int(np.prod(shape)) if shape else 1
            if values.size != expected:
                raise ParseError(
                    f"array {name} has {values.size} values, expected {expected}",
                    line=idx + 1,
                )
            arrays[name] = values.reshape(shape)
        elif line.strip():
            raise ParseError(f"unrecognized checkpoint line {line!r}", line=idx + 1)
        idx += 1

    for key in ("kind", "embedding_dim", "hidden_dim"):
        if key not in meta:
            raise ParseError(f"checkpoint missing meta {key}")
    if vocab_tokens is None or tag_tokens is None:
        raise ParseError("checkpoint missing vocab or tags line")

    kind = meta["kind"]
    hidden_dim = int(meta["hidden_dim"])
    embedding_dim = int(meta["embedding_dim"])
    vocab = {tok: i for i, tok in enumerate(vocab_tokens)}
    tag_map = {tag: i for i, tag in enumerate(tag_tokens)}

    try:
        embedding = EmbeddingTable(arrays["embedding"])
        head = TagHead(weight=arrays["tag_weight"], bias=arrays["tag_bias"])
        if kind == "qk":
            cell = _build_qk_cell(meta, arrays, hidden_dim, embedding_dim)
        elif kind == "classical":
            cell = LstmParams(
                hidden_dim=hidden_dim,
                input_dim=embedding_dim,
                w_f=arrays["w_f"], w_i=arrays["w_i"], w_c=arrays["w_c"], w_o=arrays["w_o"],
                b_f=arrays["b_f"], b_i=arrays["b_i"], b_c=arrays["b_c"], b_o=arrays["b_o"],
            )
        else:
            raise ParseError(f"unknown model kind {kind!r}")
    except KeyError as exc:
        raise ParseError(f"checkpoint missing array {exc.args[0]}") from exc
    model = TaggerModel(kind=kind, embedding=embedding, cell=cell, head=head)
    return Checkpoint(model=model, vocab=vocab, tag_map=tag_map)


def _build_qk_cell(meta, arrays, hidden_dim: int, embedding_dim: int) -> QkLstmParams:
    n_qubits = int(meta["n_qubits"])
    per_gate = bool(int(meta.get("per_gate", "0")))
    d = hidden_dim + embedding_dim
    if per_gate:
        maps = tuple(
            FeatureMapParams(n_qubits, d, arrays[f"proj_{g}"]) for g in GATES
        )
    else:
        maps = (FeatureMapParams(n_qubits, d, arrays["proj"]),)
    return QkLstmParams(
        hidden_dim=hidden_dim,
        input_dim=embedding_dim,
        ref_vectors=arrays["ref_vectors"],
        alpha_f=arrays["alpha_f"], alpha_i=arrays["alpha_i"],
        alpha_c=arrays["alpha_c"], alpha_o=arrays["alpha_o"],
        b_f=arrays["b_f"], b_i=arrays["b_i"], b_c=arrays["b_c"], b_o=arrays["b_o"],
        feature_maps=maps,
    )
