"""Samplers for the imposed prior distributions used by the latent regularizer."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GAUSSIAN = "gaussian"
LAPLACIAN = "laplacian"
SWISS_ROLL = "swiss_roll"
PRIOR_KINDS = (GAUSSIAN, LAPLACIAN, SWISS_ROLL)

# std for the gaussian prior; diversity b for the laplacian; spiral scale
# for the swiss roll
DEFAULT_SCALE = {GAUSSIAN: 5.0, LAPLACIAN: 1.0, SWISS_ROLL: 1.0}


@dataclass(frozen=True)
class PriorSpec:
    """Description of an imposed prior over latent codes.

    ``turns`` and ``noise_std`` only apply to the swiss roll, which is an
    Archimedean spiral with angle range [0, turns * 2*pi] plus isotropic
    Gaussian jitter of std ``noise_std``.
    """

    kind: str
    dim: int
    location: float = 0.0
    scale: float = 1.0
    turns: float = 1.5
    noise_std: float = 0.05

    def __post_init__(self):
        if self.kind not in PRIOR_KINDS:
            raise ValueError(f"unknown prior kind {self.kind!r}; expected one of {PRIOR_KINDS}")
        if self.dim < 1:
            raise ValueError(f"prior dim must be >= 1, got {self.dim}")
        if not np.isfinite(self.scale) or self.scale <= 0:
            raise ValueError(f"prior scale must be positive and finite, got {self.scale}")
        if self.kind == SWISS_ROLL:
            if self.dim != 2:
                raise ValueError(f"swiss_roll prior requires dim = 2, got dim = {self.dim}")
            if self.turns <= 0:
                raise ValueError(f"swiss_roll turns must be positive, got {self.turns}")
            if self.noise_std < 0:
                raise ValueError(f"swiss_roll noise_std must be >= 0, got {self.noise_std}")


def default_prior(kind: str, dim: int, location: float = 0.0, scale: float | None = None,
                  turns: float = 1.5, noise_std: float = 0.05) -> PriorSpec:
    """Build a PriorSpec with the per-kind default scale when none is given."""
    if kind not in PRIOR_KINDS:
        raise ValueError(f"unknown prior kind {kind!r}; expected one of {PRIOR_KINDS}")
    if scale is None:
        scale = DEFAULT_SCALE[kind]
    return PriorSpec(kind=kind, dim=dim, location=location, scale=scale,
                     turns=turns, noise_std=noise_std)


def sample_prior(spec: PriorSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n i.i.d. samples from the prior; deterministic given the generator state."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if spec.kind == GAUSSIAN:
        return spec.location + spec.scale * rng.standard_normal((n, spec.dim))
    if spec.kind == LAPLACIAN:
        return rng.laplace(loc=spec.location, scale=spec.scale, size=(n, spec.dim))
    # swiss roll: points (scale*t*cos t, scale*t*sin t), t ~ U(0, turns*2*pi)
    t = rng.uniform(0.0, spec.turns * 2.0 * np.pi, size=n)
    pts = spec.scale * t[:, None] * np.column_stack([np.cos(t), np.sin(t)])
    pts += spec.location
    if spec.noise_std > 0:
        pts += spec.noise_std * rng.standard_normal((n, 2))
    return pts
