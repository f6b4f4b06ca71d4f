"""Corpus handling, vocabulary/tag indexing, embeddings, and the tag head.

Corpus file format: one sentence per line, tokens written as ``word/TAG``
and separated by single spaces. Vocabulary keys are case-folded tokens in
first-appearance order; tag indices likewise follow first appearance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParseError

Sentence = tuple[list[str], list[str]]


@dataclass
class TaggedCorpus:
    sentences: list[Sentence]
    vocab: dict[str, int]
    tag_map: dict[str, int]

    @property
    def num_tokens(self) -> int:
        return sum(len(tokens) for tokens, _ in self.sentences)


def build_vocab(sentences: list[Sentence]) -> dict[str, int]:
    vocab: dict[str, int] = {}
    for tokens, _ in sentences:
        for tok in tokens:
            folded = tok.casefold()
            if folded not in vocab:
                vocab[folded] = len(vocab)
    return vocab


def build_tag_map(sentences: list[Sentence]) -> dict[str, int]:
    tag_map: dict[str, int] = {}
    for _, tags in sentences:
        for tag in tags:
            if tag not in tag_map:
                tag_map[tag] = len(tag_map)
    return tag_map


def make_corpus(sentences: list[Sentence]) -> TaggedCorpus:
    for tokens, tags in sentences:
        if len(tokens) != len(tags):
            raise ValueError(
                f"sentence has {len(tokens)} tokens but {len(tags)} tags"
            )
    return TaggedCorpus(
        sentences=sentences,
        vocab=build_vocab(sentences),
        tag_map=build_tag_map(sentences),
    )


def builtin_corpus() -> TaggedCorpus:
    """Two hand-tagged example sentences over the tag set {DET, NN, V}."""
    sentences = [
        (["The", "dog", "eat", "the", "ice"], ["DET", "NN", "V", "DET", "NN"]),
        (["Everybody", "read", "that", "book"], ["NN", "V", "DET", "NN"]),
    ]
    return make_corpus(sentences)


def token_ids(corpus: TaggedCorpus, tokens: list[str]) -> list[int]:
    ids = []
    for tok in tokens:
        folded = tok.casefold()
        if folded not in corpus.vocab:
            raise ValueError(f"token {tok!r} not in vocabulary")
        ids.append(corpus.vocab[folded])
    return ids


def tag_ids(corpus: TaggedCorpus, tags: list[str]) -> list[int]:
    ids = []
    for tag in tags:
        if tag not in corpus.tag_map:
            raise ValueError(f"tag {tag!r} not in tag set")
        ids.append(corpus.tag_map[tag])
    return ids


def load_corpus_file(path: str) -> TaggedCorpus:
    """Parse a ``word/TAG`` corpus file; errors carry the 1-based line number."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read corpus file {path}: {exc}") from exc

    sentences: list[Sentence] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            raise ParseError("empty line in corpus", line=lineno)
        tokens, tags = [], []
        for item in line.split(" "):
            if not item:
                raise ParseError("tokens must be separated by single spaces", line=lineno)
            word, sep, tag = item.rpartition("/")
            if not sep or not word or not tag:
                raise ParseError(f"malformed token {item!r}, expected word/TAG", line=lineno)
            tokens.append(word)
            tags.append(tag)
        sentences.append((tokens, tags))
    if not sentences:
        raise ParseError("corpus file is empty")
    return make_corpus(sentences)


def save_corpus_file(corpus: TaggedCorpus, path: str) -> None:
    lines = [
        " ".join(f"{tok}/{tag}" for tok, tag in zip(tokens, tags))
        for tokens, tags in corpus.sentences
    ]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


@dataclass
class EmbeddingTable:
    table: np.ndarray  # (vocab_size, embedding_dim)

    @property
    def vocab_size(self) -> int:
        return self.table.shape[0]

    @property
    def embedding_dim(self) -> int:
        return self.table.shape[1]


def init_embedding(vocab_size: int, embedding_dim: int, rng: np.random.Generator) -> EmbeddingTable:
    """Rows drawn from the standard normal distribution."""
    return EmbeddingTable(rng.standard_normal((vocab_size, embedding_dim)))


def embed(token_index: int, table: EmbeddingTable) -> np.ndarray:
    if not 0 <= token_index < table.vocab_size:
        raise ValueError(
            f"token index {token_index} out of range for vocabulary of {table.vocab_size}"
        )
    return table.table[token_index].copy()


def embed_backward(token_index: int, upstream: np.ndarray, grad_table: np.ndarray) -> None:
    """Accumulate the upstream gradient into the looked-up row."""
    grad_table[token_index] += upstream


@dataclass
class TagHead:
    weight: np.ndarray  # (num_tags, hidden_dim)
    bias: np.ndarray  # (num_tags,)

    @property
    def num_tags(self) -> int:
        return self.weight.shape[0]


def init_tag_head(num_tags: int, hidden_dim: int, rng: np.random.Generator) -> TagHead:
    bound = 1.0 / np.sqrt(hidden_dim)
    return TagHead(
        weight=rng.uniform(-bound, bound, size=(num_tags, hidden_dim)),
        bias=np.zeros(num_tags),
    )


def tag_logits(h_t: np.ndarray, head: TagHead) -> np.ndarray:
    h_t = np.asarray(h_t, dtype=np.float64)
    if h_t.shape != (head.weight.shape[1],):
        raise ValueError(
            f"hidden state has shape {h_t.shape}, head expects ({head.weight.shape[1]},)"
        )
    return head.weight @ h_t + head.bias
