"""Classical LSTM baseline with dense gate matrices and analytic BPTT."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .nnops import sigmoid
from .qk_cell import GATES, CellState, concat_input, zero_cell_state


@dataclass
class LstmParams:
    hidden_dim: int
    input_dim: int
    w_f: np.ndarray  # (hidden_dim, hidden_dim + input_dim)
    w_i: np.ndarray
    w_c: np.ndarray
    w_o: np.ndarray
    b_f: np.ndarray  # (hidden_dim,)
    b_i: np.ndarray
    b_c: np.ndarray
    b_o: np.ndarray

    def __post_init__(self):
        shape = (self.hidden_dim, self.hidden_dim + self.input_dim)
        for g in GATES:
            if self.weight(g).shape != shape:
                raise ValueError(f"w_{g} must have shape {shape}")
            if self.bias(g).shape != (self.hidden_dim,):
                raise ValueError(f"b_{g} must have shape ({self.hidden_dim},)")
            if not (np.all(np.isfinite(self.weight(g))) and np.all(np.isfinite(self.bias(g)))):
                raise ValueError(f"gate {g} parameters must be finite")

    def weight(self, gate: str) -> np.ndarray:
        return getattr(self, f"w_{gate}")

    def bias(self, gate: str) -> np.ndarray:
        return getattr(self, f"b_{gate}")

    def named_params(self) -> dict[str, np.ndarray]:
        out = {}
        for g in GATES:
            out[f"w_{g}"] = self.weight(g)
        for g in GATES:
            out[f"b_{g}"] = self.bias(g)
        return out


@dataclass
class LstmTrace:
    v_t: np.ndarray
    f: np.ndarray
    i: np.ndarray
    o: np.ndarray
    c_tilde: np.ndarray
    c_prev: np.ndarray
    c: np.ndarray
    tanh_c: np.ndarray
    h: np.ndarray


def init_lstm_params(hidden_dim: int, input_dim: int, rng: np.random.Generator) -> LstmParams:
    """Weights uniform in [-1/sqrt(hidden_dim), 1/sqrt(hidden_dim)];
    biases zero except forget bias +1. Draw order: w_f, w_i, w_c, w_o."""
    d = hidden_dim + input_dim
    bound = 1.0 / np.sqrt(hidden_dim)
    ws = {g: rng.uniform(-bound, bound, size=(hidden_dim, d)) for g in GATES}
    return LstmParams(
        hidden_dim=hidden_dim,
        input_dim=input_dim,
        w_f=ws["f"],
        w_i=ws["i"],
        w_c=ws["c"],
        w_o=ws["o"],
        b_f=np.ones(hidden_dim),
        b_i=np.zeros(hidden_dim),
        b_c=np.zeros(hidden_dim),
        b_o=np.zeros(hidden_dim),
    )


def lstm_step(x_t: np.ndarray, prev: CellState, params: LstmParams) -> tuple[CellState, LstmTrace]:
    x_t = np.asarray(x_t, dtype=np.float64)
    if x_t.shape != (params.input_dim,):
        raise ValueError(f"input has shape {x_t.shape}, expected ({params.input_dim},)")
    if prev.h.shape != (params.hidden_dim,) or prev.c.shape != (params.hidden_dim,):
        raise ValueError("previous cell state does not match hidden_dim")
    v_t = concat_input(prev.h, x_t)

    f = sigmoid(params.w_f @ v_t + params.b_f)
    i = sigmoid(params.w_i @ v_t + params.b_i)
    c_tilde = np.tanh(params.w_c @ v_t + params.b_c)
    o = sigmoid(params.w_o @ v_t + params.b_o)
    c = f * prev.c + i * c_tilde
    tanh_c = np.tanh(c)
    h = o * tanh_c
    trace = LstmTrace(
        v_t=v_t, f=f, i=i, o=o, c_tilde=c_tilde, c_prev=prev.c, c=c, tanh_c=tanh_c, h=h
    )
    return CellState(h=h, c=c), trace


def lstm_forward_sequence(xs, params: LstmParams) -> tuple[list[CellState], list[LstmTrace]]:
    if len(xs) == 0:
        raise ValueError("cannot run an empty sequence")
    state = zero_cell_state(params.hidden_dim)
    states, traces = [], []
    for x_t in xs:
        state, trace = lstm_step(x_t, state, params)
        states.append(state)
        traces.append(trace)
    return states, traces


def lstm_backward_sequence(
    traces: list[LstmTrace],
    grad_h_outputs,
    params: LstmParams,
) -> tuple[dict[str, np.ndarray], list[np.ndarray]]:
    if len(traces) != len(grad_h_outputs):
        raise ValueError(
            f"{len(grad_h_outputs)} upstream gradients for {len(traces)} steps"
        )
    grads = {name: np.zeros_like(arr) for name, arr in params.named_params().items()}
    d_xs: list[np.ndarray] = [np.zeros(params.input_dim) for _ in traces]

    dh_carry = np.zeros(params.hidden_dim)
    dc_carry = np.zeros(params.hidden_dim)
    for t in reversed(range(len(traces))):
        tr = traces[t]
        dh = np.asarray(grad_h_outputs[t], dtype=np.float64) + dh_carry
        dpre_o = dh * tr.tanh_c * tr.o * (1.0 - tr.o)
        dc = dc_carry + dh * tr.o * (1.0 - tr.tanh_c**2)
        dpre_f = dc * tr.c_prev * tr.f * (1.0 - tr.f)
        dpre_i = dc * tr.c_tilde * tr.i * (1.0 - tr.i)
        dpre_c = dc * tr.i * (1.0 - tr.c_tilde**2)
        dc_carry = dc * tr.f

        dv_t = np.zeros(params.hidden_dim + params.input_dim)
        for g, dpre in (("f", dpre_f), ("i", dpre_i), ("c", dpre_c), ("o", dpre_o)):
            grads[f"w_{g}"] += np.outer(dpre, tr.v_t)
            grads[f"b_{g}"] += dpre
            dv_t += params.weight(g).T @ dpre

        dh_carry = dv_t[: params.hidden_dim]
        d_xs[t] = dv_t[params.hidden_dim :]
    return grads, d_xs
