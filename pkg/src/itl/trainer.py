"""Minibatch training loop for divergence-regularized autoencoders.

The objective is ``mse(x, decode(encode(x))) + reg_weight * D(codes, prior)``
where D is one of the two divergence estimators.  The divergence gradient
is injected at the latent layer and fused with the reconstruction-path
gradient before backpropagating through the encoder, so a step costs one
forward and one backward pass per network.

Randomness is split into three fixed streams derived from the master
seed (weight init, shuffling, prior sampling), which makes a
``reg_weight = 0`` run bit-identical to a plain autoencoder.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import estimators
from .network import NetworkParams, forward, backward, init_params, mse_loss
from .numerics import make_rng
from .priors import PriorSpec, sample_prior
from .validation import check_samples

STREAM_INIT = 0
STREAM_SHUFFLE = 1
STREAM_PRIOR = 2

SGD = "sgd"
ADAM = "adam"
OPTIMIZERS = (SGD, ADAM)


class NonFiniteError(RuntimeError):
    """Raised when a loss or gradient stops being finite during training."""


@dataclass
class TrainConfig:
    """Everything that determines a training run, apart from the data and
    the architecture."""

    prior: PriorSpec
    reg_weight: float = 1.0
    divergence: str = estimators.EUCLIDEAN
    sigma: float = 1.0
    batch_size: int = 64
    prior_batch_size: int | None = None
    epochs: int = 1
    optimizer: str = ADAM
    learning_rate: float = 1e-3
    momentum: float = 0.9
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.reg_weight < 0:
            raise ValueError(f"reg_weight must be >= 0, got {self.reg_weight}")
        if self.divergence not in estimators.DIVERGENCE_KINDS:
            raise ValueError(
                f"unknown divergence {self.divergence!r}; "
                f"expected one of {estimators.DIVERGENCE_KINDS}"
            )
        if self.sigma <= 0 or not np.isfinite(self.sigma):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.batch_size < 2 and self.reg_weight > 0:
            warnings.warn(
                "batch_size < 2 with an active regularizer: the divergence of a "
                "single-sample batch is degenerate",
                stacklevel=2,
            )
        if self.prior_batch_size is not None and self.prior_batch_size < 1:
            raise ValueError(f"prior_batch_size must be >= 1, got {self.prior_batch_size}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(
                f"unknown optimizer {self.optimizer!r}; expected one of {OPTIMIZERS}"
            )
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")

    @property
    def effective_prior_batch(self) -> int:
        return self.batch_size if self.prior_batch_size is None else self.prior_batch_size


@dataclass
class StepMetrics:
    recon_loss: float
    divergence: float
    cost: float


@dataclass
class EpochMetrics:
    epoch: int
    recon_loss: float
    divergence: float
    cost: float
    seconds: float

    def to_dict(self) -> dict:
        return {
            "epoch": self.epoch,
            "recon_loss": self.recon_loss,
            "divergence": self.divergence,
            "cost": self.cost,
            "seconds": self.seconds,
        }


class SgdOptimizer:
    def __init__(self, arrays: list[np.ndarray], lr: float, momentum: float):
        self.lr = lr
        self.momentum = momentum
        self.buffers = [np.zeros_like(a) for a in arrays]

    def step(self, arrays: list[np.ndarray], grads: list[np.ndarray]) -> None:
        for p, g, buf in zip(arrays, grads, self.buffers):
            buf *= self.momentum
            buf += g
            p -= self.lr * buf


class AdamOptimizer:
    def __init__(self, arrays: list[np.ndarray], lr: float, beta1: float,
                 beta2: float, eps: float):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = [np.zeros_like(a) for a in arrays]
        self.v = [np.zeros_like(a) for a in arrays]

    def step(self, arrays: list[np.ndarray], grads: list[np.ndarray]) -> None:
        self.t += 1
        c1 = 1.0 - self.beta1 ** self.t
        c2 = 1.0 - self.beta2 ** self.t
        for p, g, m, v in zip(arrays, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * (g * g)
            p -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


def make_optimizer(cfg: TrainConfig, arrays: list[np.ndarray]):
    if cfg.optimizer == SGD:
        return SgdOptimizer(arrays, cfg.learning_rate, cfg.momentum)
    return AdamOptimizer(arrays, cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.adam_eps)


def _check_finite(value: float, term: str) -> None:
    if not np.isfinite(value):
        raise NonFiniteError(f"non-finite {term} ({value}); aborting training")


def _check_finite_grads(grads: NetworkParams, term: str) -> None:
    for arr in grads.arrays():
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError(f"non-finite {term}; aborting training")


def train_step(enc: NetworkParams, dec: NetworkParams, x: np.ndarray,
               cfg: TrainConfig, prior_rng: np.random.Generator,
               opt) -> StepMetrics:
    """One fused optimizer update on a minibatch; mutates enc/dec in place.

    The decoder sees only the reconstruction gradient; the encoder sees the
    reconstruction path plus reg_weight times the divergence gradient of
    the code batch against a fresh prior batch.
    """
    z, enc_trace = forward(enc, x)
    if not np.all(np.isfinite(z)):
        raise NonFiniteError("non-finite latent codes; aborting training")
    x_recon, dec_trace = forward(dec, z)
    loss, grad_recon = mse_loss(x, x_recon)
    _check_finite(loss, "reconstruction loss")

    dec_grads, grad_z = backward(dec, dec_trace, grad_recon)

    div_value = 0.0
    if cfg.reg_weight > 0:
        prior_batch = sample_prior(cfg.prior, cfg.effective_prior_batch, prior_rng)
        report = estimators.divergence(cfg.divergence, z, prior_batch, cfg.sigma)
        div_value = report.value
        _check_finite(div_value, "divergence")
        grad_div = estimators.divergence_grad_x(cfg.divergence, z, prior_batch, cfg.sigma)
        grad_z = grad_z + cfg.reg_weight * grad_div

    enc_grads, _ = backward(enc, enc_trace, grad_z)
    _check_finite_grads(enc_grads, "encoder gradient")
    _check_finite_grads(dec_grads, "decoder gradient")

    opt.step(enc.arrays() + dec.arrays(), enc_grads.arrays() + dec_grads.arrays())
    cost = loss + cfg.reg_weight * div_value
    return StepMetrics(recon_loss=loss, divergence=div_value, cost=cost)


def train(data: np.ndarray, cfg: TrainConfig, encoder_specs, decoder_specs,
          epoch_callback=None) -> tuple[NetworkParams, NetworkParams, list[EpochMetrics]]:
    """Train for cfg.epochs passes over data with seed-deterministic shuffling.

    Every sample is used each epoch (the last short batch is kept).  If
    given, ``epoch_callback(metrics, enc, dec)`` runs after each epoch;
    checkpointing and metrics files hang off it.
    """
    data = check_samples(data, "data")
    init_rng = make_rng(cfg.seed, STREAM_INIT)
    shuffle_rng = make_rng(cfg.seed, STREAM_SHUFFLE)
    prior_rng = make_rng(cfg.seed, STREAM_PRIOR)

    enc = init_params(encoder_specs, init_rng)
    dec = init_params(decoder_specs, init_rng)
    if enc.in_dim != data.shape[1]:
        raise ValueError(
            f"data has {data.shape[1]} features but the encoder expects {enc.in_dim}"
        )
    if cfg.reg_weight > 0 and cfg.prior.dim != enc.out_dim:
        raise ValueError(
            f"prior dim {cfg.prior.dim} does not match latent dim {enc.out_dim}"
        )
    if enc.out_dim > 8 and cfg.batch_size < 256:
        warnings.warn(
            f"latent dim {enc.out_dim} with batch_size {cfg.batch_size}: divergence "
            "estimates in higher-dimensional code spaces need larger batches to be "
            "reliable",
            stacklevel=2,
        )

    opt = make_optimizer(cfg, enc.arrays() + dec.arrays())
    n = data.shape[0]
    history: list[EpochMetrics] = []
    for epoch in range(cfg.epochs):
        t0 = time.perf_counter()
        perm = shuffle_rng.permutation(n)
        losses, divs, costs = [], [], []
        for start in range(0, n, cfg.batch_size):
            batch = data[perm[start : start + cfg.batch_size]]
            step = train_step(enc, dec, batch, cfg, prior_rng, opt)
            losses.append(step.recon_loss)
            divs.append(step.divergence)
            costs.append(step.cost)
        metrics = EpochMetrics(
            epoch=epoch,
            recon_loss=float(np.mean(losses)),
            divergence=float(np.mean(divs)),
            cost=float(np.mean(costs)),
            seconds=time.perf_counter() - t0,
        )
        history.append(metrics)
        if epoch_callback is not None:
            epoch_callback(metrics, enc, dec)
    return enc, dec, history
