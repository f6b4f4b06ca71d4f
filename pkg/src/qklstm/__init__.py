"""Quantum-kernel LSTM sequence tagger and classical LSTM baseline."""

from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .data import (
    EmbeddingTable,
    TaggedCorpus,
    TagHead,
    build_tag_map,
    build_vocab,
    builtin_corpus,
    embed,
    load_corpus_file,
    make_corpus,
    save_corpus_file,
    tag_logits,
)
from .errors import ParseError
from .kernel import (
    FeatureMapParams,
    KernelGradients,
    encode_angles,
    gram_matrix,
    init_feature_map,
    kernel,
    kernel_grad,
    prepare_feature_state,
)
from .lstm import LstmParams, init_lstm_params, lstm_backward_sequence, lstm_forward_sequence, lstm_step
from .model import TaggerModel, init_tagger, param_breakdown, param_count, predict_tags, tagger_loss_and_grads
from .qk_cell import (
    CellState,
    QkLstmParams,
    StepTrace,
    backward_sequence,
    concat_input,
    forward_sequence,
    gate_preactivation,
    init_qk_params,
    step,
)
from .statevector import (
    QuantumState,
    apply_cnot,
    apply_hadamard,
    apply_ry,
    apply_rz,
    inner_product,
    prob_all_zero,
    zero_state,
)
from .training import (
    EpochMetrics,
    TrainingConfig,
    adam_update,
    fit,
    grad_audit,
    init_adam_state,
    nll_loss,
    sgd_update,
)

__all__ = [name for name in dir() if not name.startswith("_")]
