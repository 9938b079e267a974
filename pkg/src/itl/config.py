"""Flat key=value run configuration for the command line.

A config file is lines of ``key = value`` with ``#`` comments.  Unknown
keys are rejected, every value is validated before any work starts, and
the effective configuration hashes to a stable run-directory name so
reruns land in the same place.
"""

from __future__ import annotations

import dataclasses
import hashlib
from dataclasses import dataclass
from pathlib import Path

from . import estimators, priors
from .data_io import SYNTHETIC_NAMES, DatasetHandle, make_synthetic, read_csv_labels, \
    read_csv_samples, read_idx
from .network import ACTIVATIONS, IDENTITY, RELU, SIGMOID, mlp_specs
from .numerics import make_rng
from .priors import PriorSpec, default_prior
from .trainer import OPTIMIZERS, TrainConfig

STREAM_DATA = 4


class ConfigError(ValueError):
    """A config file problem; the message names the offending key."""


@dataclass
class RunConfig:
    data: str
    labels: str | None = None
    data_n: int = 2048
    data_noise: float = 0.25
    latent_dim: int = 2
    hidden: tuple[int, ...] = (32, 32)
    activation: str = RELU
    sigmoid_output: bool = False
    divergence: str = estimators.EUCLIDEAN
    reg_weight: float = 1.0
    sigma: float = 1.0
    prior: str = priors.GAUSSIAN
    prior_loc: float = 0.0
    prior_scale: float | None = None
    prior_turns: float = 1.5
    prior_noise: float = 0.05
    optimizer: str = "adam"
    learning_rate: float = 1e-3
    momentum: float = 0.9
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    batch_size: int = 64
    prior_batch_size: int | None = None
    epochs: int = 50
    seed: int = 0
    out_dir: str = "runs"
    checkpoint_every: int = 0

    def prior_spec(self) -> PriorSpec:
        return default_prior(self.prior, self.latent_dim, location=self.prior_loc,
                             scale=self.prior_scale, turns=self.prior_turns,
                             noise_std=self.prior_noise)

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            prior=self.prior_spec(),
            reg_weight=self.reg_weight,
            divergence=self.divergence,
            sigma=self.sigma,
            batch_size=self.batch_size,
            prior_batch_size=self.prior_batch_size,
            epochs=self.epochs,
            optimizer=self.optimizer,
            learning_rate=self.learning_rate,
            momentum=self.momentum,
            beta1=self.adam_beta1,
            beta2=self.adam_beta2,
            adam_eps=self.adam_eps,
            seed=self.seed,
        )

    def network_specs(self, data_dim: int):
        out_act = SIGMOID if self.sigmoid_output else IDENTITY
        enc = mlp_specs(data_dim, self.hidden, self.latent_dim,
                        hidden_activation=self.activation, out_activation=IDENTITY)
        dec = mlp_specs(self.latent_dim, self.hidden[::-1], data_dim,
                        hidden_activation=self.activation, out_activation=out_act)
        return enc, dec

    def load_dataset(self) -> DatasetHandle:
        return resolve_dataset(self.data, labels=self.labels, n=self.data_n,
                               noise=self.data_noise, seed=self.seed)

    def run_dir(self) -> Path:
        return Path(self.out_dir) / f"{config_hash(self)}-seed{self.seed}"

    def validate(self) -> None:
        """Construct every derived object so all invariants fire before any
        side effect; raises ConfigError on the first failure."""
        try:
            self.prior_spec()
            self.train_config()
            self.network_specs(data_dim=max(self.latent_dim, 1))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.activation not in ACTIVATIONS:
            raise ConfigError(
                f"activation: unknown value {self.activation!r}; expected one of "
                f"{ACTIVATIONS}"
            )
        if self.optimizer not in OPTIMIZERS:
            raise ConfigError(
                f"optimizer: unknown value {self.optimizer!r}; expected one of "
                f"{OPTIMIZERS}"
            )
        if self.data_n < 1:
            raise ConfigError(f"data_n: must be >= 1, got {self.data_n}")
        if self.data_noise < 0:
            raise ConfigError(f"data_noise: must be >= 0, got {self.data_noise}")
        if self.checkpoint_every < 0:
            raise ConfigError(f"checkpoint_every: must be >= 0, got {self.checkpoint_every}")
        if self.labels is not None and (self.data in SYNTHETIC_NAMES
                                        or self.data.endswith(".csv")):
            raise ConfigError("labels: only applies to IDX data files")


def resolve_dataset(data: str, labels: str | None = None, n: int = 2048,
                    noise: float = 0.25, seed: int = 0) -> DatasetHandle:
    """Turn a data spec (synthetic name, .csv path, or IDX path) into a handle."""
    if data in SYNTHETIC_NAMES:
        return make_synthetic(data, n, noise, make_rng(seed, STREAM_DATA))
    if data.endswith(".csv"):
        return DatasetHandle(data=read_csv_samples(data), labels=read_csv_labels(data))
    return read_idx(data, labels)


def _parse_bool(key: str, value: str) -> bool:
    low = value.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ConfigError(f"{key}: expected true/false, got {value!r}")


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {value!r}") from None


def _parse_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {value!r}") from None


def _parse_hidden(key: str, value: str) -> tuple[int, ...]:
    if value.strip() == "":
        return ()
    try:
        sizes = tuple(int(part) for part in value.split(","))
    except ValueError:
        raise ConfigError(
            f"{key}: expected comma-separated layer sizes, got {value!r}"
        ) from None
    if any(s < 1 for s in sizes):
        raise ConfigError(f"{key}: layer sizes must be >= 1, got {value!r}")
    return sizes


_PARSERS = {
    "data": lambda k, v: v,
    "labels": lambda k, v: v,
    "data_n": _parse_int,
    "data_noise": _parse_float,
    "latent_dim": _parse_int,
    "hidden": _parse_hidden,
    "activation": lambda k, v: v,
    "sigmoid_output": _parse_bool,
    "divergence": lambda k, v: v,
    "reg_weight": _parse_float,
    "sigma": _parse_float,
    "prior": lambda k, v: v,
    "prior_loc": _parse_float,
    "prior_scale": _parse_float,
    "prior_turns": _parse_float,
    "prior_noise": _parse_float,
    "optimizer": lambda k, v: v,
    "learning_rate": _parse_float,
    "momentum": _parse_float,
    "adam_beta1": _parse_float,
    "adam_beta2": _parse_float,
    "adam_eps": _parse_float,
    "batch_size": _parse_int,
    "prior_batch_size": _parse_int,
    "epochs": _parse_int,
    "seed": _parse_int,
    "out_dir": lambda k, v: v,
    "checkpoint_every": _parse_int,
}


def parse_run_config(text: str, source: str = "<config>") -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _PARSERS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = _PARSERS[key](key, value)
    if "data" not in values:
        raise ConfigError(f"{source}: missing required key 'data'")
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def read_run_config(path) -> RunConfig:
    return parse_run_config(Path(path).read_text(), source=str(path))


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    return str(value)


def canonical_text(cfg: RunConfig, exclude: tuple[str, ...] = ()) -> str:
    """One key = value line per set field, in declaration order.

    None-valued optional keys are omitted so the text parses back into an
    equal RunConfig.
    """
    lines = []
    for field in dataclasses.fields(RunConfig):
        value = getattr(cfg, field.name)
        if field.name in exclude or value is None:
            continue
        lines.append(f"{field.name} = {_format_value(value)}")
    return "\n".join(lines) + "\n"


def config_hash(cfg: RunConfig) -> str:
    """Stable 12-hex-digit id of everything that affects the run outputs.

    out_dir and seed are excluded: the former only relocates outputs, the
    latter is spelled out in the run-directory name itself.
    """
    text = canonical_text(cfg, exclude=("out_dir", "seed"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]
