"""Information theoretic learning estimators and prior-matching autoencoders.

Two sample-set divergences (Euclidean and Cauchy-Schwarz) built from
Parzen-window information potentials, their analytic gradients, and a
small autoencoder stack that uses them to pull latent codes toward an
imposed prior.  Everything is numpy, seeded, and deterministic.
"""

from .autoencoder import ItlAutoencoder
from .estimators import (
    CAUCHY_SCHWARZ,
    DIVERGENCE_KINDS,
    EUCLIDEAN,
    DivergenceReport,
    cauchy_schwarz_divergence,
    cross_information_potential,
    divergence,
    divergence_grad_x,
    euclidean_divergence,
    gaussian_kernel_matrix,
    information_potential,
    parzen_pdf,
    renyi_cross_entropy,
    renyi_quadratic_entropy,
)
from .evaluation import (
    LikelihoodReport,
    evaluate_log_likelihood,
    generate,
    latent_walk,
    parzen_log_likelihood,
    select_sigma,
    silverman_sigma,
)
from .network import (
    LayerSpec,
    NetworkParams,
    backward,
    forward,
    init_params,
    load_model,
    mlp_specs,
    mse_loss,
    save_model,
)
from .numerics import log_sum_exp, make_rng, pairwise_sq_dists
from .priors import PRIOR_KINDS, PriorSpec, default_prior, sample_prior
from .trainer import EpochMetrics, NonFiniteError, TrainConfig, train, train_step

__version__ = "0.1.0"

__all__ = [
    "CAUCHY_SCHWARZ",
    "DIVERGENCE_KINDS",
    "EUCLIDEAN",
    "PRIOR_KINDS",
    "DivergenceReport",
    "EpochMetrics",
    "ItlAutoencoder",
    "LayerSpec",
    "LikelihoodReport",
    "NetworkParams",
    "NonFiniteError",
    "PriorSpec",
    "TrainConfig",
    "backward",
    "cauchy_schwarz_divergence",
    "cross_information_potential",
    "default_prior",
    "divergence",
    "divergence_grad_x",
    "euclidean_divergence",
    "evaluate_log_likelihood",
    "forward",
    "gaussian_kernel_matrix",
    "generate",
    "information_potential",
    "init_params",
    "latent_walk",
    "load_model",
    "log_sum_exp",
    "make_rng",
    "mlp_specs",
    "mse_loss",
    "pairwise_sq_dists",
    "parzen_log_likelihood",
    "parzen_pdf",
    "renyi_cross_entropy",
    "renyi_quadratic_entropy",
    "sample_prior",
    "save_model",
    "select_sigma",
    "silverman_sigma",
    "train",
    "train_step",
]
