"""Recurrent cell whose gates are weighted sums of quantum kernels.

Each step concatenates the previous hidden state with the input,
evaluates its kernel against every reference vector, and forms scalar
forget/input/output gates from the weighted sums. The candidate gate
carries a per-dimension bias so the cell state stays vector-valued while
the gate weights remain scalar per reference.

Kernel evaluations per step: n_refs in shared mode (values reused by all
four gates), 4 * n_refs with per-gate feature maps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernel as qkernel
from .kernel import FeatureMapParams, init_feature_map
from .nnops import sigmoid

GATES = ("f", "i", "c", "o")


@dataclass
class CellState:
    h: np.ndarray  # (hidden_dim,)
    c: np.ndarray  # (hidden_dim,)


def zero_cell_state(hidden_dim: int) -> CellState:
    return CellState(h=np.zeros(hidden_dim), c=np.zeros(hidden_dim))


@dataclass
class QkLstmParams:
    hidden_dim: int
    input_dim: int
    ref_vectors: np.ndarray  # (n_refs, hidden_dim + input_dim)
    alpha_f: np.ndarray  # (n_refs,)
    alpha_i: np.ndarray
    alpha_c: np.ndarray
    alpha_o: np.ndarray
    b_f: np.ndarray  # shape ()
    b_i: np.ndarray  # shape ()
    b_c: np.ndarray  # (hidden_dim,)
    b_o: np.ndarray  # shape ()
    feature_maps: tuple[FeatureMapParams, ...]  # length 1 (shared) or 4 (per gate)

    def __post_init__(self):
        d = self.hidden_dim + self.input_dim
        if self.ref_vectors.ndim != 2 or self.ref_vectors.shape[1] != d:
            raise ValueError(f"ref_vectors must have shape (n_refs, {d})")
        n = self.ref_vectors.shape[0]
        for g in GATES:
            if self.alpha(g).shape != (n,):
                raise ValueError(f"alpha_{g} must have shape ({n},)")
        if self.b_c.shape != (self.hidden_dim,):
            raise ValueError(f"b_c must have shape ({self.hidden_dim},)")
        if len(self.feature_maps) not in (1, 4):
            raise ValueError("feature_maps must hold 1 (shared) or 4 (per-gate) maps")
        for fm in self.feature_maps:
            if fm.input_dim != d:
                raise ValueError(f"feature map input_dim {fm.input_dim} != {d}")

    @property
    def n_refs(self) -> int:
        return self.ref_vectors.shape[0]

    @property
    def per_gate(self) -> bool:
        return len(self.feature_maps) == 4

    def alpha(self, gate: str) -> np.ndarray:
        return getattr(self, f"alpha_{gate}")

    def bias(self, gate: str) -> np.ndarray:
        return getattr(self, f"b_{gate}")

    def feature_map_for(self, gate: str) -> FeatureMapParams:
        if self.per_gate:
            return self.feature_maps[GATES.index(gate)]
        return self.feature_maps[0]

    def named_params(self) -> dict[str, np.ndarray]:
        out = {"ref_vectors": self.ref_vectors}
        for g in GATES:
            out[f"alpha_{g}"] = self.alpha(g)
        for g in GATES:
            out[f"b_{g}"] = self.bias(g)
        if self.per_gate:
            for g, fm in zip(GATES, self.feature_maps):
                out[f"proj_{g}"] = fm.proj_weights
        else:
            out["proj"] = self.feature_maps[0].proj_weights
        return out


@dataclass
class StepTrace:
    """Forward-pass cache consumed by the backward pass."""

    v_t: np.ndarray
    kernels: dict[str, np.ndarray]  # gate -> (n_refs,) kernel values
    f: float
    i: float
    o: float
    c_tilde: np.ndarray
    c_prev: np.ndarray
    c: np.ndarray
    tanh_c: np.ndarray
    h: np.ndarray


def init_qk_params(
    hidden_dim: int,
    input_dim: int,
    n_refs: int,
    n_qubits: int,
    rng: np.random.Generator,
    per_gate: bool = False,
) -> QkLstmParams:
    """Reference vectors uniform in [-1, 1]; gate weights uniform in
    [-1/sqrt(n_refs), 1/sqrt(n_refs)]; biases zero except forget bias +1.

    Draw order: ref_vectors, alphas (f, i, c, o), feature map(s).
    """
    d = hidden_dim + input_dim
    refs = rng.uniform(-1.0, 1.0, size=(n_refs, d))
    bound = 1.0 / np.sqrt(n_refs)
    alphas = {g: rng.uniform(-bound, bound, size=n_refs) for g in GATES}
    n_maps = 4 if per_gate else 1
    maps = tuple(init_feature_map(n_qubits, d, rng) for _ in range(n_maps))
    return QkLstmParams(
        hidden_dim=hidden_dim,
        input_dim=input_dim,
        ref_vectors=refs,
        alpha_f=alphas["f"],
        alpha_i=alphas["i"],
        alpha_c=alphas["c"],
        alpha_o=alphas["o"],
        b_f=np.array(1.0),
        b_i=np.array(0.0),
        b_c=np.zeros(hidden_dim),
        b_o=np.array(0.0),
        feature_maps=maps,
    )


def concat_input(h_prev: np.ndarray, x_t: np.ndarray) -> np.ndarray:
    """[h_prev, x_t] with the hidden part first."""
    h_prev = np.asarray(h_prev, dtype=np.float64)
    x_t = np.asarray(x_t, dtype=np.float64)
    if h_prev.ndim != 1 or x_t.ndim != 1:
        raise ValueError("concat_input expects 1-d vectors")
    return np.concatenate([h_prev, x_t])


def _kernel_vector(v_t: np.ndarray, params: QkLstmParams, fm: FeatureMapParams) -> np.ndarray:
    return np.array([qkernel.kernel(v_t, params.ref_vectors[j], fm) for j in range(params.n_refs)])


def gate_preactivation(gate: str, v_t: np.ndarray, params: QkLstmParams):
    """Weighted kernel sum plus bias; scalar for f/i/o, vector for c."""
    if gate not in GATES:
        raise ValueError(f"unknown gate {gate!r}, expected one of {GATES}")
    ks = _kernel_vector(v_t, params, params.feature_map_for(gate))
    pre = params.alpha(gate) @ ks + params.bias(gate)
    return pre if gate == "c" else float(pre)


def step(x_t: np.ndarray, prev: CellState, params: QkLstmParams) -> tuple[CellState, StepTrace]:
    x_t = np.asarray(x_t, dtype=np.float64)
    if x_t.shape != (params.input_dim,):
        raise ValueError(f"input has shape {x_t.shape}, expected ({params.input_dim},)")
    if prev.h.shape != (params.hidden_dim,) or prev.c.shape != (params.hidden_dim,):
        raise ValueError("previous cell state does not match hidden_dim")
    v_t = concat_input(prev.h, x_t)

    if params.per_gate:
        kernels = {g: _kernel_vector(v_t, params, params.feature_map_for(g)) for g in GATES}
    else:
        shared = _kernel_vector(v_t, params, params.feature_maps[0])
        kernels = {g: shared for g in GATES}

    f = sigmoid(float(params.alpha_f @ kernels["f"] + params.b_f))
    i = sigmoid(float(params.alpha_i @ kernels["i"] + params.b_i))
    c_tilde = np.tanh(params.alpha_c @ kernels["c"] + params.b_c)
    o = sigmoid(float(params.alpha_o @ kernels["o"] + params.b_o))

    c = f * prev.c + i * c_tilde
    tanh_c = np.tanh(c)
    h = o * tanh_c
    trace = StepTrace(
        v_t=v_t,
        kernels=kernels,
        f=f,
        i=i,
        o=o,
        c_tilde=c_tilde,
        c_prev=prev.c,
        c=c,
        tanh_c=tanh_c,
        h=h,
    )
    return CellState(h=h, c=c), trace


def forward_sequence(xs, params: QkLstmParams) -> tuple[list[CellState], list[StepTrace]]:
    if len(xs) == 0:
        raise ValueError("cannot run an empty sequence")
    state = zero_cell_state(params.hidden_dim)
    states, traces = [], []
    for x_t in xs:
        state, trace = step(x_t, state, params)
        states.append(state)
        traces.append(trace)
    return states, traces


def backward_sequence(
    traces: list[StepTrace],
    grad_h_outputs,
    params: QkLstmParams,
) -> tuple[dict[str, np.ndarray], list[np.ndarray]]:
    """Reverse-mode pass over a forward trace.

    ``grad_h_outputs[t]`` is dL/dh_t from the layer above. Returns
    gradients keyed like ``named_params()`` plus dL/dx_t per step; the
    recurrent gradient flows through both the cell state and the hidden
    part of the concatenated kernel input.
    """
    if len(traces) != len(grad_h_outputs):
        raise ValueError(
            f"{len(grad_h_outputs)} upstream gradients for {len(traces)} steps"
        )
    grads = {name: np.zeros_like(arr) for name, arr in params.named_params().items()}
    d_xs: list[np.ndarray | None] = [None] * len(traces)

    dh_carry = np.zeros(params.hidden_dim)
    dc_carry = np.zeros(params.hidden_dim)
    for t in reversed(range(len(traces))):
        tr = traces[t]
        dh = np.asarray(grad_h_outputs[t], dtype=np.float64) + dh_carry
        d_o = float(dh @ tr.tanh_c)
        dc = dc_carry + dh * tr.o * (1.0 - tr.tanh_c**2)
        d_f = float(dc @ tr.c_prev)
        d_i = float(dc @ tr.c_tilde)
        d_c_tilde = dc * tr.i
        dc_carry = dc * tr.f

        dpre_c = d_c_tilde * (1.0 - tr.c_tilde**2)
        dpre = {
            "f": d_f * tr.f * (1.0 - tr.f),
            "i": d_i * tr.i * (1.0 - tr.i),
            "c": float(np.sum(dpre_c)),
            "o": d_o * tr.o * (1.0 - tr.o),
        }
        grads["b_f"] += dpre["f"]
        grads["b_i"] += dpre["i"]
        grads["b_c"] += dpre_c
        grads["b_o"] += dpre["o"]

        d_kernels = {}
        for g in GATES:
            grads[f"alpha_{g}"] += dpre[g] * tr.kernels[g]
            d_kernels[g] = params.alpha(g) * dpre[g]

        dv_t = np.zeros(params.hidden_dim + params.input_dim)
        if params.per_gate:
            for g in GATES:
                fm = params.feature_map_for(g)
                for j in range(params.n_refs):
                    dk = d_kernels[g][j]
                    if dk == 0.0:
                        continue
                    kg = qkernel.kernel_grad(tr.v_t, params.ref_vectors[j], fm)
                    dv_t += dk * kg.d_va
                    grads["ref_vectors"][j] += dk * kg.d_vb
                    grads[f"proj_{g}"] += dk * kg.d_proj
        else:
            fm = params.feature_maps[0]
            dk_total = d_kernels["f"] + d_kernels["i"] + d_kernels["c"] + d_kernels["o"]
            for j in range(params.n_refs):
                if dk_total[j] == 0.0:
                    continue
                kg = qkernel.kernel_grad(tr.v_t, params.ref_vectors[j], fm)
                dv_t += dk_total[j] * kg.d_va
                grads["ref_vectors"][j] += dk_total[j] * kg.d_vb
                grads["proj"] += dk_total[j] * kg.d_proj

        dh_carry = dv_t[: params.hidden_dim]
        d_xs[t] = dv_t[params.hidden_dim :]
    return grads, d_xs
