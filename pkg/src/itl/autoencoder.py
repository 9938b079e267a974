"""Scikit-learn style estimator wrapping the training loop.

``ItlAutoencoder`` follows the fit/transform convention: ``fit`` trains
encoder and decoder, ``transform`` maps data to latent codes,
``inverse_transform`` decodes codes back to data space, and ``sample``
draws from the imposed prior and decodes, which is what makes the model
generative once the code distribution matches the prior.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import estimators
from .network import IDENTITY, RELU, SIGMOID, forward, mlp_specs
from .numerics import make_rng
from .priors import default_prior, sample_prior
from .trainer import STREAM_PRIOR, TrainConfig, train
from .validation import check_samples


class ItlAutoencoder(BaseEstimator, TransformerMixin):
    """Autoencoder whose latent codes are pushed toward a chosen prior.

    Parameters mirror the training configuration: the divergence between
    the code batch and a prior batch is added to the reconstruction MSE
    with weight ``reg_weight``.  With ``reg_weight=0`` this is a plain
    multilayer autoencoder.

    Attributes set by fit: ``encoder_``, ``decoder_``, ``history_`` (one
    metrics record per epoch) and ``n_features_in_``.
    """

    def __init__(self, latent_dim: int = 2, hidden: tuple = (32, 32),
                 activation: str = RELU, sigmoid_output: bool = False,
                 divergence: str = estimators.EUCLIDEAN, reg_weight: float = 1.0,
                 sigma: float = 1.0, prior: str = "gaussian",
                 prior_loc: float = 0.0, prior_scale: float | None = None,
                 prior_turns: float = 1.5, prior_noise: float = 0.05,
                 optimizer: str = "adam", learning_rate: float = 1e-3,
                 momentum: float = 0.9, beta1: float = 0.9, beta2: float = 0.999,
                 adam_eps: float = 1e-8, batch_size: int = 64,
                 prior_batch_size: int | None = None, epochs: int = 50,
                 seed: int = 0):
        self.latent_dim = latent_dim
        self.hidden = hidden
        self.activation = activation
        self.sigmoid_output = sigmoid_output
        self.divergence = divergence
        self.reg_weight = reg_weight
        self.sigma = sigma
        self.prior = prior
        self.prior_loc = prior_loc
        self.prior_scale = prior_scale
        self.prior_turns = prior_turns
        self.prior_noise = prior_noise
        self.optimizer = optimizer
        self.learning_rate = learning_rate
        self.momentum = momentum
        self.beta1 = beta1
        self.beta2 = beta2
        self.adam_eps = adam_eps
        self.batch_size = batch_size
        self.prior_batch_size = prior_batch_size
        self.epochs = epochs
        self.seed = seed

    def _prior_spec(self):
        return default_prior(self.prior, self.latent_dim, location=self.prior_loc,
                             scale=self.prior_scale, turns=self.prior_turns,
                             noise_std=self.prior_noise)

    def _train_config(self) -> TrainConfig:
        return TrainConfig(
            prior=self._prior_spec(),
            reg_weight=self.reg_weight,
            divergence=self.divergence,
            sigma=self.sigma,
            batch_size=self.batch_size,
            prior_batch_size=self.prior_batch_size,
            epochs=self.epochs,
            optimizer=self.optimizer,
            learning_rate=self.learning_rate,
            momentum=self.momentum,
            beta1=self.beta1,
            beta2=self.beta2,
            adam_eps=self.adam_eps,
            seed=self.seed,
        )

    def fit(self, X, y=None, epoch_callback=None):
        X = check_samples(X, "X")
        if self.latent_dim < 1:
            raise ValueError(f"latent_dim must be >= 1, got {self.latent_dim}")
        hidden = tuple(int(h) for h in self.hidden)
        out_act = SIGMOID if self.sigmoid_output else IDENTITY
        enc_specs = mlp_specs(X.shape[1], hidden, self.latent_dim,
                              hidden_activation=self.activation,
                              out_activation=IDENTITY)
        dec_specs = mlp_specs(self.latent_dim, hidden[::-1], X.shape[1],
                              hidden_activation=self.activation,
                              out_activation=out_act)
        enc, dec, history = train(X, self._train_config(), enc_specs, dec_specs,
                                  epoch_callback=epoch_callback)
        self.encoder_ = enc
        self.decoder_ = dec
        self.history_ = history
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "encoder_")
        X = check_samples(X, "X")
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features but the model was fit with "
                f"{self.n_features_in_}"
            )
        codes, _ = forward(self.encoder_, X)
        return codes

    def inverse_transform(self, Z) -> np.ndarray:
        check_is_fitted(self, "decoder_")
        Z = check_samples(Z, "Z")
        if Z.shape[1] != self.decoder_.in_dim:
            raise ValueError(
                f"Z has {Z.shape[1]} dims but the latent space has "
                f"{self.decoder_.in_dim}"
            )
        recon, _ = forward(self.decoder_, Z)
        return recon

    def reconstruct(self, X) -> np.ndarray:
        return self.inverse_transform(self.transform(X))

    def sample(self, n: int, seed: int | None = None) -> np.ndarray:
        """Draw n prior codes and decode them into data space."""
        check_is_fitted(self, "decoder_")
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        rng = make_rng(self.seed if seed is None else seed, STREAM_PRIOR)
        codes = sample_prior(self._prior_spec(), n, rng)
        recon, _ = forward(self.decoder_, codes)
        return recon

    def score(self, X, y=None) -> float:
        """Negative reconstruction MSE, so larger is better."""
        X = check_samples(X, "X")
        recon = self.reconstruct(X)
        return -float(np.mean((X - recon) ** 2))
