"""Fully connected networks with explicit forward and backward passes.

The trainer needs to inject an extra gradient at the latent layer (where
the divergence regularizer attaches), so the backward pass is written by
hand instead of relying on an autodiff framework: ``backward`` takes an
arbitrary gradient with respect to the network output and propagates it
to every weight, bias, and the input batch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .validation import check_samples

RELU = "relu"
TANH = "tanh"
IDENTITY = "identity"
SIGMOID = "sigmoid"
ACTIVATIONS = (RELU, TANH, IDENTITY, SIGMOID)

CHECKPOINT_FORMAT = "itl-autoencoder"
CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class LayerSpec:
    in_dim: int
    out_dim: int
    activation: str = RELU

    def __post_init__(self):
        if self.in_dim < 1 or self.out_dim < 1:
            raise ValueError(f"layer dims must be >= 1, got {self.in_dim} -> {self.out_dim}")
        if self.activation not in ACTIVATIONS:
            raise ValueError(
                f"unknown activation {self.activation!r}; expected one of {ACTIVATIONS}"
            )


def mlp_specs(in_dim: int, hidden: tuple[int, ...], out_dim: int,
              hidden_activation: str = RELU, out_activation: str = IDENTITY) -> list[LayerSpec]:
    """Layer chain in_dim -> hidden... -> out_dim with a linear (or chosen) output layer."""
    dims = [in_dim, *hidden, out_dim]
    specs = [LayerSpec(dims[i], dims[i + 1], hidden_activation) for i in range(len(dims) - 2)]
    specs.append(LayerSpec(dims[-2], dims[-1], out_activation))
    return specs


@dataclass
class NetworkParams:
    """Weights (out_dim x in_dim) and biases (out_dim,) for a LayerSpec chain."""

    specs: tuple[LayerSpec, ...]
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    @property
    def in_dim(self) -> int:
        return self.specs[0].in_dim

    @property
    def out_dim(self) -> int:
        return self.specs[-1].out_dim

    def arrays(self) -> list[np.ndarray]:
        """All parameter arrays in a fixed order (for optimizers)."""
        out: list[np.ndarray] = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            out.append(b)
        return out

    def copy(self) -> "NetworkParams":
        return NetworkParams(self.specs, [w.copy() for w in self.weights],
                             [b.copy() for b in self.biases])


@dataclass
class ForwardTrace:
    """Per-layer cache from a forward pass, consumed by backward."""

    x: np.ndarray
    pre: list[np.ndarray] = field(default_factory=list)
    post: list[np.ndarray] = field(default_factory=list)


def _check_chain(specs) -> tuple[LayerSpec, ...]:
    specs = tuple(specs)
    if not specs:
        raise ValueError("need at least one layer")
    for prev, nxt in zip(specs, specs[1:]):
        if prev.out_dim != nxt.in_dim:
            raise ValueError(
                f"broken layer chain: {prev.out_dim} outputs feed a layer "
                f"expecting {nxt.in_dim} inputs"
            )
    return specs


def init_params(specs, rng: np.random.Generator) -> NetworkParams:
    """He-style initialization: weight variance 2/in_dim for ReLU layers,
    1/in_dim otherwise; biases zero."""
    specs = _check_chain(specs)
    weights, biases = [], []
    for spec in specs:
        gain = 2.0 if spec.activation == RELU else 1.0
        std = np.sqrt(gain / spec.in_dim)
        weights.append(rng.normal(0.0, std, size=(spec.out_dim, spec.in_dim)))
        biases.append(np.zeros(spec.out_dim))
    return NetworkParams(specs, weights, biases)


def _activate(name: str, z: np.ndarray) -> np.ndarray:
    if name == RELU:
        return np.maximum(z, 0.0)
    if name == TANH:
        return np.tanh(z)
    if name == SIGMOID:
        # split by sign so exp never overflows
        out = np.empty_like(z)
        pos = z >= 0
        out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
        expz = np.exp(z[~pos])
        out[~pos] = expz / (1.0 + expz)
        return out
    return z


def _activate_grad(name: str, z: np.ndarray, a: np.ndarray) -> np.ndarray:
    if name == RELU:
        return (z > 0.0).astype(np.float64)
    if name == TANH:
        return 1.0 - a * a
    if name == SIGMOID:
        return a * (1.0 - a)
    return np.ones_like(z)


def forward(params: NetworkParams, x) -> tuple[np.ndarray, ForwardTrace]:
    """Run the network on a batch (rows are samples); returns output and trace."""
    x = check_samples(x, "x")
    if x.shape[1] != params.in_dim:
        raise ValueError(
            f"input dimension mismatch: x has shape {x.shape}, "
            f"first layer expects {params.in_dim} features"
        )
    trace = ForwardTrace(x=x)
    a = x
    for spec, w, b in zip(params.specs, params.weights, params.biases):
        z = a @ w.T + b
        a = _activate(spec.activation, z)
        trace.pre.append(z)
        trace.post.append(a)
    return a, trace


def backward(params: NetworkParams, trace: ForwardTrace,
             grad_output: np.ndarray) -> tuple[NetworkParams, np.ndarray]:
    """Reverse-mode gradients of sum(output * grad_output).

    Returns a NetworkParams-shaped container of weight/bias gradients and
    the gradient with respect to the input batch.
    """
    grad_output = np.asarray(grad_output, dtype=np.float64)
    out_shape = trace.post[-1].shape
    if grad_output.shape != out_shape:
        raise ValueError(
            f"grad_output shape {grad_output.shape} does not match output shape {out_shape}"
        )
    w_grads = [None] * len(params.specs)
    b_grads = [None] * len(params.specs)
    delta = grad_output
    for i in range(len(params.specs) - 1, -1, -1):
        spec = params.specs[i]
        delta = delta * _activate_grad(spec.activation, trace.pre[i], trace.post[i])
        a_prev = trace.x if i == 0 else trace.post[i - 1]
        w_grads[i] = delta.T @ a_prev
        b_grads[i] = delta.sum(axis=0)
        delta = delta @ params.weights[i]
    return NetworkParams(params.specs, w_grads, b_grads), delta


def mse_loss(x, x_recon) -> tuple[float, np.ndarray]:
    """Mean squared error over all entries and its gradient w.r.t. the
    reconstruction.

    Inputs are not finiteness-checked: a diverging model yields an inf
    loss, which callers treat as a measurement.
    """
    x = np.asarray(x, dtype=np.float64)
    x_recon = np.asarray(x_recon, dtype=np.float64)
    if x.shape != x_recon.shape:
        raise ValueError(
            f"shape mismatch: x has shape {x.shape}, x_recon has shape {x_recon.shape}"
        )
    diff = x_recon - x
    n_total = diff.size
    loss = float(np.sum(diff * diff)) / n_total
    grad = (2.0 / n_total) * diff
    return loss, grad


def _params_to_dict(params: NetworkParams) -> dict:
    return {
        "layers": [
            {"in_dim": s.in_dim, "out_dim": s.out_dim, "activation": s.activation}
            for s in params.specs
        ],
        "weights": [w.tolist() for w in params.weights],
        "biases": [b.tolist() for b in params.biases],
    }


def _params_from_dict(d: dict) -> NetworkParams:
    specs = tuple(
        LayerSpec(layer["in_dim"], layer["out_dim"], layer["activation"])
        for layer in d["layers"]
    )
    weights = [np.asarray(w, dtype=np.float64) for w in d["weights"]]
    biases = [np.asarray(b, dtype=np.float64) for b in d["biases"]]
    params = NetworkParams(_check_chain(specs), weights, biases)
    for spec, w, b in zip(specs, weights, biases):
        if w.shape != (spec.out_dim, spec.in_dim) or b.shape != (spec.out_dim,):
            raise ValueError(f"checkpoint arrays do not match layer {spec}")
    return params


def save_model(path, encoder: NetworkParams, decoder: NetworkParams,
               metadata: dict | None = None) -> None:
    """Write an encoder/decoder pair as a versioned JSON checkpoint.

    JSON floats are serialized via repr, so a save/load round trip is
    bit-exact.  ``metadata`` is an opaque JSON-serializable dict stored
    alongside the weights (e.g. the training prior).
    """
    doc = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "metadata": {} if metadata is None else metadata,
        "encoder": _params_to_dict(encoder),
        "decoder": _params_to_dict(decoder),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_model(path) -> tuple[NetworkParams, NetworkParams, dict]:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"{path}: not a model checkpoint (format={doc.get('format')!r})")
    if doc.get("version") != CHECKPOINT_VERSION:
        raise ValueError(
            f"{path}: unsupported checkpoint version {doc.get('version')!r}, "
            f"expected {CHECKPOINT_VERSION}"
        )
    return (_params_from_dict(doc["encoder"]), _params_from_dict(doc["decoder"]),
            doc.get("metadata", {}))
