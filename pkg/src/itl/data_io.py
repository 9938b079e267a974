"""Dataset ingestion and export: IDX binaries, CSV sample files, toy data.

IDX is the MNIST container format: a big-endian magic word (two zero
bytes, an element-type code, a dimension count), one 32-bit size per
dimension, then raw values.  Only unsigned-byte payloads (type 0x08) are
supported.  Pixels are scaled to [0, 1] at load time so reconstruction
losses stay comparable across datasets.

CSV files carry one sample per row under a ``c0,c1,...`` header, written
with full round-trip precision.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .validation import check_samples

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801
_UBYTE_CODE = 0x08

RING8 = "ring8"
TWO_MOONS = "two_moons"
GRID25 = "grid25"
SYNTHETIC_NAMES = (RING8, TWO_MOONS, GRID25)


class IdxFormatError(ValueError):
    """A file that is not well-formed IDX."""


class IdxBadMagicError(IdxFormatError):
    pass


class IdxUnsupportedTypeError(IdxFormatError):
    pass


class IdxTruncatedError(IdxFormatError):
    pass


@dataclass(frozen=True)
class IdxHeader:
    magic: int
    dims: tuple[int, ...]

    @property
    def n_items(self) -> int:
        return int(np.prod(self.dims)) if self.dims else 0


@dataclass(frozen=True)
class DatasetHandle:
    """Immutable loaded dataset: N x d data plus optional integer labels."""

    data: np.ndarray
    labels: np.ndarray | None = None

    def __post_init__(self):
        data = check_samples(self.data, "data")
        object.__setattr__(self, "data", data)
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64).ravel()
            if labels.shape[0] != data.shape[0]:
                raise ValueError(
                    f"{labels.shape[0]} labels for {data.shape[0]} samples"
                )
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]


def _parse_idx_header(raw: bytes, path) -> tuple[IdxHeader, int]:
    if len(raw) < 4:
        raise IdxTruncatedError(f"{path}: only {len(raw)} bytes, need 4 for the magic")
    magic = struct.unpack(">I", raw[:4])[0]
    if raw[0] != 0 or raw[1] != 0:
        raise IdxBadMagicError(
            f"{path}: bad magic 0x{magic:08x} (leading bytes must be zero)"
        )
    if raw[2] != _UBYTE_CODE:
        raise IdxUnsupportedTypeError(
            f"{path}: element type 0x{raw[2]:02x} unsupported (only unsigned "
            f"byte, 0x08)"
        )
    ndims = raw[3]
    if ndims < 1:
        raise IdxBadMagicError(f"{path}: magic 0x{magic:08x} declares zero dimensions")
    header_len = 4 + 4 * ndims
    if len(raw) < header_len:
        raise IdxTruncatedError(
            f"{path}: expected {header_len} header bytes, found {len(raw)}"
        )
    dims = struct.unpack(f">{ndims}I", raw[4:header_len])
    return IdxHeader(magic=magic, dims=tuple(int(s) for s in dims)), header_len


def read_idx_array(path) -> np.ndarray:
    """Read any well-formed unsigned-byte IDX file as a uint8 array."""
    raw = Path(path).read_bytes()
    header, offset = _parse_idx_header(raw, path)
    expected = offset + header.n_items
    if len(raw) != expected:
        raise IdxTruncatedError(
            f"{path}: expected {expected} bytes ({header.n_items} values after a "
            f"{offset}-byte header), found {len(raw)}"
        )
    values = np.frombuffer(raw, dtype=np.uint8, offset=offset)
    return values.reshape(header.dims)


def read_idx(images_path, labels_path=None) -> DatasetHandle:
    """Load an IDX image file (and optional label file) into a DatasetHandle.

    Images are flattened row-major to product-of-trailing-dims features and
    scaled into [0, 1].
    """
    images = read_idx_array(images_path)
    if images.ndim < 2:
        raise IdxFormatError(
            f"{images_path}: expected at least 2 dimensions for image data, "
            f"got {images.ndim}"
        )
    n = images.shape[0]
    data = images.reshape(n, -1).astype(np.float64) / 255.0
    labels = None
    if labels_path is not None:
        labels = read_idx_array(labels_path)
        if labels.ndim != 1:
            raise IdxFormatError(
                f"{labels_path}: expected a 1-dimensional label file, got "
                f"{labels.ndim} dimensions"
            )
        if labels.shape[0] != n:
            raise IdxFormatError(
                f"{labels_path}: {labels.shape[0]} labels for {n} images"
            )
        labels = labels.astype(np.int64)
    return DatasetHandle(data=data, labels=labels)


def _csv_header(d: int, with_label: bool) -> str:
    cols = [f"c{i}" for i in range(d)]
    if with_label:
        cols.append("label")
    return ",".join(cols)


def write_csv_samples(batch: np.ndarray, path, labels=None) -> None:
    """Write samples (optionally with a trailing label column) at full
    round-trip precision."""
    batch = check_samples(batch, "batch")
    if labels is not None:
        labels = np.asarray(labels, dtype=np.int64).ravel()
        if labels.shape[0] != batch.shape[0]:
            raise ValueError(f"{labels.shape[0]} labels for {batch.shape[0]} rows")
    lines = [_csv_header(batch.shape[1], labels is not None)]
    for i, row in enumerate(batch):
        cells = [repr(float(v)) for v in row]
        if labels is not None:
            cells.append(str(int(labels[i])))
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv_samples(path) -> np.ndarray:
    """Read a ``c0,c1,...`` CSV back into an N x d float64 matrix.

    A trailing label column, if present, is dropped; use read_csv_labels
    to get it.  Malformed rows are reported by their data-row number
    (header excluded, first data row is row 1).
    """
    matrix, _ = _read_csv(path)
    return matrix


def read_csv_labels(path) -> np.ndarray | None:
    _, labels = _read_csv(path)
    return labels


def _read_csv(path) -> tuple[np.ndarray, np.ndarray | None]:
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip() != ""]
    if not lines:
        raise ValueError(f"{path}: empty file")
    header = lines[0].split(",")
    with_label = header[-1].strip() == "label"
    d = len(header) - 1 if with_label else len(header)
    if d < 1 or [h.strip() for h in header[:d]] != [f"c{i}" for i in range(d)]:
        raise ValueError(
            f"{path}: header must be c0,c1,... (optionally ending in a label "
            f"column), got {lines[0]!r}"
        )
    if len(lines) == 1:
        raise ValueError(f"{path}: no data rows")
    rows = np.empty((len(lines) - 1, d))
    labels = np.empty(len(lines) - 1, dtype=np.int64) if with_label else None
    width = d + 1 if with_label else d
    for i, line in enumerate(lines[1:], start=1):
        cells = line.split(",")
        if len(cells) != width:
            raise ValueError(
                f"{path}: row {i} has {len(cells)} cells, expected {width}"
            )
        try:
            rows[i - 1] = [float(c) for c in cells[:d]]
            if with_label:
                labels[i - 1] = int(cells[d])
        except ValueError:
            raise ValueError(f"{path}: row {i} has a non-numeric cell") from None
        if not np.all(np.isfinite(rows[i - 1])):
            raise ValueError(f"{path}: row {i} has a non-finite value")
    return rows, labels


def _ring8_centers() -> np.ndarray:
    angles = np.arange(8) * (2.0 * np.pi / 8.0)
    return 4.0 * np.stack([np.cos(angles), np.sin(angles)], axis=1)


def _grid25_centers() -> np.ndarray:
    side = np.linspace(-4.0, 4.0, 5)
    xs, ys = np.meshgrid(side, side)
    return np.stack([xs.ravel(), ys.ravel()], axis=1)


def make_synthetic(name: str, n: int, noise: float,
                   rng: np.random.Generator) -> DatasetHandle:
    """Generate one of the 2-D toy datasets with round-robin component labels.

    ring8 and grid25 are isotropic Gaussian blobs (std = noise) on a
    radius-4 circle and a 5x5 grid; two_moons is the usual pair of
    interleaved half-circles with additive noise.
    """
    if name not in SYNTHETIC_NAMES:
        raise ValueError(
            f"unknown synthetic dataset {name!r}; expected one of {SYNTHETIC_NAMES}"
        )
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if noise < 0 or not np.isfinite(noise):
        raise ValueError(f"noise must be finite and >= 0, got {noise}")
    if name == TWO_MOONS:
        labels = np.arange(n) % 2
        t = rng.uniform(0.0, np.pi, n)
        upper = np.stack([np.cos(t), np.sin(t)], axis=1)
        lower = np.stack([1.0 - np.cos(t), 0.5 - np.sin(t)], axis=1)
        base = np.where(labels[:, None] == 0, upper, lower)
    else:
        centers = _ring8_centers() if name == RING8 else _grid25_centers()
        labels = np.arange(n) % centers.shape[0]
        base = centers[labels]
    data = base + noise * rng.standard_normal((n, 2))
    return DatasetHandle(data=data, labels=labels)
