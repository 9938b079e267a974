"""Nonparametric information-theoretic descriptors and divergences.

All quantities are computed directly from sample batches with Gaussian
kernels.  The user-facing kernel size ``sigma`` is the Parzen bandwidth;
every pairwise potential internally uses the inflated width
``sigma * sqrt(2)``, which is what falls out of convolving two
``sigma``-kernels when squaring a Parzen density estimate.

Conventions:

* kernels are normalized densities in d dimensions,
  ``G_s(u) = (2*pi)**(-d/2) * s**(-d) * exp(-||u||^2 / (2 s^2))``;
* within-set potentials keep the i == j diagonal terms, so they are the
  plain double-sum estimators (biased by O(1/N), which vanishes with
  batch size);
* everything is evaluated in linear space.  That is safe for the low
  dimensional latent codes this package trains (d of a few); the
  evaluation module owns the log-domain path for data-space likelihoods.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import pairwise_sq_dists
from .validation import check_kernel_size, check_samples, check_same_dim

EUCLIDEAN = "euclidean"
CAUCHY_SCHWARZ = "cauchy_schwarz"
DIVERGENCE_KINDS = (EUCLIDEAN, CAUCHY_SCHWARZ)

# row-block size for kernel sums; keeps memory bounded for large batches
# without changing the summation order between runs
_BLOCK_ROWS = 4096


@dataclass(frozen=True)
class DivergenceReport:
    """A divergence value together with the three potentials behind it."""

    value: float
    v_x: float
    v_y: float
    v_xy: float

    def to_dict(self) -> dict:
        return {"value": self.value, "v_x": self.v_x, "v_y": self.v_y, "v_xy": self.v_xy}


def _gauss_norm(d: int, s: float) -> float:
    return (2.0 * np.pi) ** (-0.5 * d) * s ** (-float(d))


def gaussian_kernel_matrix(a, b, sigma: float) -> np.ndarray:
    """N x M matrix of Gaussian kernel evaluations G_sigma(a_i - b_j)."""
    a = check_samples(a, "a")
    b = check_samples(b, "b")
    check_same_dim(a, b, "a", "b")
    sigma = check_kernel_size(sigma)
    sq = pairwise_sq_dists(a, b)
    return _gauss_norm(a.shape[1], sigma) * np.exp(sq / (-2.0 * sigma * sigma))


def parzen_pdf(query, data, sigma: float) -> np.ndarray:
    """Parzen window density estimate at each query point.

    Entry m is ``mean_i G_sigma(query_m - data_i)``, the average of
    Gaussian kernels centered at the data samples.
    """
    k = gaussian_kernel_matrix(query, data, sigma)
    return k.mean(axis=1)


def _kernel_mean(a: np.ndarray, b: np.ndarray, s: float) -> float:
    """Mean of G_s over all row pairs of a and b, row-blocked for large inputs."""
    n, d = a.shape
    norm = _gauss_norm(d, s)
    inv = -1.0 / (2.0 * s * s)
    if a is b and n <= _BLOCK_ROWS:
        return norm * float(np.mean(np.exp(inv * pairwise_sq_dists(a, a))))
    total = 0.0
    for start in range(0, n, _BLOCK_ROWS):
        sq = pairwise_sq_dists(a[start : start + _BLOCK_ROWS], b)
        total += float(np.sum(np.exp(inv * sq)))
    return norm * total / (n * b.shape[0])


def information_potential(x, sigma: float) -> float:
    """Mean pairwise kernel value within one batch, at width sigma*sqrt(2).

    This is the argument of the log in the quadratic-entropy estimator;
    diagonal (i == j) terms are included.
    """
    x = check_samples(x, "x")
    sigma = check_kernel_size(sigma)
    return _kernel_mean(x, x, sigma * np.sqrt(2.0))


def cross_information_potential(x, y, sigma: float) -> float:
    """Mean pairwise kernel value between two batches, at width sigma*sqrt(2)."""
    x = check_samples(x, "x")
    y = check_samples(y, "y")
    check_same_dim(x, y)
    sigma = check_kernel_size(sigma)
    return _kernel_mean(x, y, sigma * np.sqrt(2.0))


def renyi_quadratic_entropy(x, sigma: float) -> float:
    """Quadratic (order-2) Renyi entropy estimate: -log of the information potential."""
    return -float(np.log(information_potential(x, sigma)))


def renyi_cross_entropy(x, y, sigma: float) -> float:
    """Order-2 cross-entropy estimate: -log of the cross-information potential."""
    return -float(np.log(cross_information_potential(x, y, sigma)))


def _potentials(x, y, sigma: float) -> tuple[float, float, float]:
    x = check_samples(x, "x")
    y = check_samples(y, "y")
    check_same_dim(x, y)
    sigma = check_kernel_size(sigma)
    s = sigma * np.sqrt(2.0)
    return _kernel_mean(x, x, s), _kernel_mean(y, y, s), _kernel_mean(x, y, s)


def euclidean_divergence(x, y, sigma: float) -> DivergenceReport:
    """Euclidean distance between the two Parzen densities, in potential form.

    ``V(X) + V(Y) - 2 V(X,Y)``; equals the biased squared maximum mean
    discrepancy with a Gaussian kernel of width sigma*sqrt(2).
    """
    v_x, v_y, v_xy = _potentials(x, y, sigma)
    return DivergenceReport(value=v_x + v_y - 2.0 * v_xy, v_x=v_x, v_y=v_y, v_xy=v_xy)


def cauchy_schwarz_divergence(x, y, sigma: float) -> DivergenceReport:
    """Cauchy-Schwarz divergence log(V(X) V(Y) / V(X,Y)^2) between two batches.

    Symmetric and zero only when the underlying densities agree; unlike
    the Euclidean form it does not obey the triangle inequality.
    """
    v_x, v_y, v_xy = _potentials(x, y, sigma)
    value = float(np.log(v_x) + np.log(v_y) - 2.0 * np.log(v_xy))
    return DivergenceReport(value=value, v_x=v_x, v_y=v_y, v_xy=v_xy)


def divergence(kind: str, x, y, sigma: float) -> DivergenceReport:
    """Dispatch to one of the two divergence estimators by name."""
    if kind == EUCLIDEAN:
        return euclidean_divergence(x, y, sigma)
    if kind == CAUCHY_SCHWARZ:
        return cauchy_schwarz_divergence(x, y, sigma)
    raise ValueError(f"unknown divergence kind {kind!r}; expected one of {DIVERGENCE_KINDS}")


def _potential_grads(x: np.ndarray, y: np.ndarray, sigma: float):
    """Gradients of V(X) and V(X,Y) with respect to the rows of x.

    With s = sigma*sqrt(2) and dG_s(u)/du = -G_s(u) u / s^2:

      dV(X)/dx_i   = -(2 / (N^2 s^2)) sum_j G_s(x_i - x_j) (x_i - x_j)
      dV(X,Y)/dx_i = -(1 / (N M s^2)) sum_j G_s(x_i - y_j) (x_i - y_j)
    """
    n, d = x.shape
    m = y.shape[0]
    s = sigma * np.sqrt(2.0)
    s2 = s * s
    norm = _gauss_norm(d, s)

    k_xx = norm * np.exp(pairwise_sq_dists(x, x) / (-2.0 * s2))
    k_xy = norm * np.exp(pairwise_sq_dists(x, y) / (-2.0 * s2))

    # sum_j K_ij (x_i - x_j) = rowsum_i x_i - K @ x, likewise for y
    gv_x = -(2.0 / (n * n * s2)) * (k_xx.sum(axis=1)[:, None] * x - k_xx @ x)
    gv_xy = -(1.0 / (n * m * s2)) * (k_xy.sum(axis=1)[:, None] * x - k_xy @ y)
    v_x = float(k_xx.mean())
    v_xy = float(k_xy.mean())
    return gv_x, gv_xy, v_x, v_xy


def divergence_grad_x(kind: str, x, y, sigma: float) -> np.ndarray:
    """Analytic gradient of the chosen divergence with respect to the rows of x.

    Returns an N x d matrix whose row i is dD/dx_i.
    """
    x = check_samples(x, "x")
    y = check_samples(y, "y")
    check_same_dim(x, y)
    sigma = check_kernel_size(sigma)
    gv_x, gv_xy, v_x, v_xy = _potential_grads(x, y, sigma)
    if kind == EUCLIDEAN:
        return gv_x - 2.0 * gv_xy
    if kind == CAUCHY_SCHWARZ:
        return gv_x / v_x - 2.0 * gv_xy / v_xy
    raise ValueError(f"unknown divergence kind {kind!r}; expected one of {DIVERGENCE_KINDS}")
