"""Generative evaluation: sample from the prior, decode, score held-out data.

The quality measure is the Parzen-window log-likelihood of held-out points
under a kernel density built on generated samples.  The kernel width is
picked on a validation split by grid search; everything runs in the log
domain so small densities do not underflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import NetworkParams, forward
from .numerics import log_sum_exp, pairwise_sq_dists
from .priors import PriorSpec, sample_prior
from .validation import check_kernel_size, check_same_dim, check_samples

STREAM_EVAL = 3

_BLOCK_ROWS = 1024


def generate(decoder: NetworkParams, spec: PriorSpec, n: int,
             rng: np.random.Generator) -> np.ndarray:
    """Decode n fresh prior draws into data space."""
    if spec.dim != decoder.in_dim:
        raise ValueError(
            f"prior dim {spec.dim} does not match decoder input dim {decoder.in_dim}"
        )
    codes = sample_prior(spec, n, rng)
    out, _ = forward(decoder, codes)
    return out


def latent_walk(decoder: NetworkParams, start, stop, steps: int) -> np.ndarray:
    """Decode a straight line of ``steps`` points from start to stop in code space."""
    if steps < 2:
        raise ValueError(f"need steps >= 2, got {steps}")
    start = np.asarray(start, dtype=np.float64).ravel()
    stop = np.asarray(stop, dtype=np.float64).ravel()
    if start.shape != (decoder.in_dim,) or stop.shape != (decoder.in_dim,):
        raise ValueError(
            f"walk endpoints must have {decoder.in_dim} dims, got "
            f"{start.shape[0]} and {stop.shape[0]}"
        )
    t = np.linspace(0.0, 1.0, steps)[:, None]
    codes = (1.0 - t) * start[None, :] + t * stop[None, :]
    out, _ = forward(decoder, codes)
    return out


def parzen_log_likelihood(test: np.ndarray, samples: np.ndarray,
                          sigma: float) -> np.ndarray:
    """Per-point log density of test under a Gaussian KDE on samples.

    log p(t) = logsumexp_i(-||t - g_i||^2 / (2 sigma^2))
               - log N - (d/2) log(2 pi) - d log sigma
    """
    test = check_samples(test, "test")
    samples = check_samples(samples, "samples")
    check_same_dim(test, samples, "test", "samples")
    check_kernel_size(sigma)
    n, d = samples.shape
    offset = -np.log(n) - 0.5 * d * np.log(2.0 * np.pi) - d * np.log(sigma)
    out = np.empty(test.shape[0])
    # blocked over test rows; a 1e4 x 1e4 distance matrix would not fit
    for start in range(0, test.shape[0], _BLOCK_ROWS):
        block = test[start : start + _BLOCK_ROWS]
        sq = pairwise_sq_dists(block, samples)
        out[start : start + _BLOCK_ROWS] = log_sum_exp(
            -sq / (2.0 * sigma * sigma), axis=1
        )
    return out + offset


@dataclass(frozen=True)
class LikelihoodReport:
    mean_log_likelihood: float
    std_error: float
    sigma: float
    n_generated: int
    n_test: int

    def to_dict(self) -> dict:
        return {
            "mean_log_likelihood": self.mean_log_likelihood,
            "std_error": self.std_error,
            "sigma": self.sigma,
            "n_generated": self.n_generated,
            "n_test": self.n_test,
        }


def evaluate_log_likelihood(test, samples, sigma: float) -> LikelihoodReport:
    """Score test points under a KDE on samples; the mean comes with the
    standard error of the per-point log-likelihoods."""
    lls = parzen_log_likelihood(test, samples, sigma)
    m = lls.shape[0]
    stderr = float(np.std(lls, ddof=1) / np.sqrt(m)) if m > 1 else 0.0
    return LikelihoodReport(
        mean_log_likelihood=float(np.mean(lls)),
        std_error=stderr,
        sigma=float(sigma),
        n_generated=np.asarray(samples).shape[0],
        n_test=m,
    )


def default_sigma_grid(lo: float = 0.05, hi: float = 1.0, num: int = 20) -> np.ndarray:
    # lo == hi gives a singleton grid (a fixed, not searched, kernel size)
    if lo <= 0 or hi < lo:
        raise ValueError(f"need 0 < lo <= hi, got lo={lo} hi={hi}")
    if num < 1:
        raise ValueError(f"need num >= 1, got {num}")
    return np.geomspace(lo, hi, num)


def silverman_sigma(samples: np.ndarray) -> float:
    """Rule-of-thumb kernel width; a sane center for a search grid."""
    samples = check_samples(samples, "samples")
    n, d = samples.shape
    spread = float(np.mean(np.std(samples, axis=0)))
    if spread == 0.0:
        raise ValueError("samples have zero spread; cannot pick a kernel width")
    return spread * (4.0 / ((d + 2.0) * n)) ** (1.0 / (d + 4.0))


def select_sigma(val: np.ndarray, samples: np.ndarray,
                 grid) -> tuple[LikelihoodReport, list[LikelihoodReport]]:
    """Grid-search the KDE width on a validation split.

    Returns the winning report and the whole curve.  Ties go to the
    smaller width, so the grid is sorted ascending first.
    """
    grid = np.sort(np.asarray(grid, dtype=np.float64))
    if grid.size == 0:
        raise ValueError("sigma grid is empty")
    curve = [evaluate_log_likelihood(val, samples, s) for s in grid]
    best = curve[0]
    for report in curve[1:]:
        if report.mean_log_likelihood > best.mean_log_likelihood:
            best = report
    return best, curve


def split_indices(n: int, val_fraction: float,
                  rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Shuffle 0..n-1 and split off a validation share; both parts non-empty."""
    if not 0.0 < val_fraction < 1.0:
        raise ValueError(f"val_fraction must be in (0, 1), got {val_fraction}")
    if n < 2:
        raise ValueError(f"need at least 2 points to split, got {n}")
    n_val = min(max(int(round(n * val_fraction)), 1), n - 1)
    perm = rng.permutation(n)
    return perm[:n_val], perm[n_val:]
