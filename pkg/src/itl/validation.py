"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np


def check_samples(x, name: str = "x") -> np.ndarray:
    """Coerce to a 2-D float64 sample matrix (N x d) with finite entries."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"{name} must be 2-D (N x d), got shape {x.shape}")
    if x.shape[0] < 1 or x.shape[1] < 1:
        raise ValueError(f"{name} must have N >= 1 and d >= 1, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite entries")
    return x


def check_same_dim(x: np.ndarray, y: np.ndarray, xname: str = "x", yname: str = "y") -> None:
    if x.shape[1] != y.shape[1]:
        raise ValueError(
            f"dimension mismatch: {xname} has shape {x.shape}, "
            f"{yname} has shape {y.shape}"
        )


def check_kernel_size(sigma: float) -> float:
    """Validate a Parzen kernel size: strictly positive, finite."""
    sigma = float(sigma)
    if not np.isfinite(sigma) or sigma <= 0:
        raise ValueError(f"kernel size sigma must be positive and finite, got {sigma}")
    return sigma
