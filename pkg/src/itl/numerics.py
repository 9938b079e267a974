"""Dense-matrix helpers and seeded random number generation.

Everything downstream (kernels, networks, priors) is built on float64
arrays and the generators created here.  All randomness in the package
flows through :func:`make_rng` so that a single integer seed fully
determines a run.
"""

from __future__ import annotations

import numpy as np

from .validation import check_samples


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Create a deterministic PCG64 generator for (seed, stream).

    Distinct streams derived from the same seed are statistically
    independent; the mapping is fixed, so the same (seed, stream) pair
    always yields the same draw sequence.
    """
    if seed < 0 or seed > 0xFFFFFFFFFFFFFFFF:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if stream < 0:
        raise ValueError(f"stream must be nonnegative, got {stream}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream])))


def pairwise_sq_dists(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances between the rows of ``a`` (N x d) and ``b`` (M x d).

    Computed as ||a||^2 + ||b||^2 - 2 a.b with tiny negatives clamped to
    zero.  When ``a is b`` the result is forced exactly symmetric with an
    exactly-zero diagonal.
    """
    a = check_samples(a, "a")
    b = check_samples(b, "b")
    if a.shape[1] != b.shape[1]:
        raise ValueError(
            f"dimension mismatch: a has shape {a.shape}, b has shape {b.shape}"
        )
    same = a is b
    aa = np.einsum("ij,ij->i", a, a)
    bb = aa if same else np.einsum("ij,ij->i", b, b)
    sq = aa[:, None] + bb[None, :] - 2.0 * (a @ b.T)
    if same:
        sq = 0.5 * (sq + sq.T)
        np.fill_diagonal(sq, 0.0)
    np.maximum(sq, 0.0, out=sq)
    return sq


def log_sum_exp(v: np.ndarray, axis: int | None = None) -> np.ndarray | float:
    """log(sum(exp(v))) via max-shifting; finite whenever max(v) is finite."""
    v = np.asarray(v, dtype=np.float64)
    if v.size == 0:
        raise ValueError("log_sum_exp of an empty input is undefined")
    m = np.max(v, axis=axis, keepdims=True)
    out = m + np.log(np.sum(np.exp(v - m), axis=axis, keepdims=True))
    if axis is None:
        return out.item()
    return np.squeeze(out, axis=axis)


def normal_draws(
    rng: np.random.Generator, n: int, d: int, mean: float = 0.0, std: float = 1.0
) -> np.ndarray:
    """n x d matrix of i.i.d. normal draws, deterministic given the generator state."""
    if std <= 0 or not np.isfinite(std):
        raise ValueError(f"std must be positive and finite, got {std}")
    if n < 1 or d < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    return rng.normal(loc=mean, scale=std, size=(n, d))
