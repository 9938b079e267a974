import struct

import numpy as np
import pytest

from itl.data_io import (
    GRID25,
    RING8,
    SYNTHETIC_NAMES,
    TWO_MOONS,
    DatasetHandle,
    IdxBadMagicError,
    IdxFormatError,
    IdxTruncatedError,
    IdxUnsupportedTypeError,
    make_synthetic,
    read_csv_labels,
    read_csv_samples,
    read_idx,
    read_idx_array,
    write_csv_samples,
)
from itl.numerics import make_rng


def idx_image_bytes() -> bytes:
    # 2 images of 2x2 pixels holding bytes 0..7
    return struct.pack(">IIII", 0x00000803, 2, 2, 2) + bytes(range(8))


def idx_label_bytes(labels) -> bytes:
    return struct.pack(">II", 0x00000801, len(labels)) + bytes(labels)


class TestIdx:
    def test_image_fixture_parses_bit_exact(self, tmp_path):
        path = tmp_path / "images.idx"
        path.write_bytes(idx_image_bytes())
        handle = read_idx(path)
        want = np.array([[0, 1, 2, 3], [4, 5, 6, 7]]) / 255.0
        assert handle.data.shape == (2, 4)
        assert np.array_equal(handle.data, want)
        assert handle.labels is None

    def test_label_fixture_round_trips(self, tmp_path):
        images = tmp_path / "images.idx"
        labels = tmp_path / "labels.idx"
        images.write_bytes(idx_image_bytes())
        labels.write_bytes(idx_label_bytes([3, 9]))
        handle = read_idx(images, labels)
        assert np.array_equal(handle.labels, [3, 9])

    def test_raw_array_keeps_shape(self, tmp_path):
        path = tmp_path / "images.idx"
        path.write_bytes(idx_image_bytes())
        arr = read_idx_array(path)
        assert arr.shape == (2, 2, 2)
        assert arr.dtype == np.uint8
        assert arr[1, 0, 1] == 5

    def test_truncated_names_byte_counts(self, tmp_path):
        path = tmp_path / "short.idx"
        path.write_bytes(idx_image_bytes()[:-3])
        with pytest.raises(IdxTruncatedError, match="expected 24 bytes.*found 21"):
            read_idx_array(path)

    def test_truncated_header(self, tmp_path):
        path = tmp_path / "tiny.idx"
        path.write_bytes(b"\x00\x00")
        with pytest.raises(IdxTruncatedError, match="magic"):
            read_idx_array(path)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.idx"
        path.write_bytes(struct.pack(">IIII", 0xDEAD0803, 2, 2, 2) + bytes(8))
        with pytest.raises(IdxBadMagicError, match="bad magic"):
            read_idx_array(path)

    def test_unsupported_element_type(self, tmp_path):
        path = tmp_path / "float.idx"
        # type code 0x0D is 32-bit float, which this reader does not handle
        path.write_bytes(struct.pack(">IIII", 0x00000D03, 2, 2, 2) + bytes(8))
        with pytest.raises(IdxUnsupportedTypeError, match="0x0d"):
            read_idx_array(path)

    def test_errors_are_distinct_types(self):
        assert issubclass(IdxBadMagicError, IdxFormatError)
        assert issubclass(IdxTruncatedError, IdxFormatError)
        assert issubclass(IdxUnsupportedTypeError, IdxFormatError)
        assert not issubclass(IdxBadMagicError, IdxTruncatedError)

    def test_label_count_mismatch(self, tmp_path):
        images = tmp_path / "images.idx"
        labels = tmp_path / "labels.idx"
        images.write_bytes(idx_image_bytes())
        labels.write_bytes(idx_label_bytes([1, 2, 3]))
        with pytest.raises(IdxFormatError, match="3 labels for 2 images"):
            read_idx(images, labels)

    def test_vector_file_rejected_as_images(self, tmp_path):
        path = tmp_path / "labels.idx"
        path.write_bytes(idx_label_bytes([1, 2]))
        with pytest.raises(IdxFormatError, match="2 dimensions"):
            read_idx(path)


class TestCsv:
    def test_round_trip_exact(self, tmp_path):
        batch = make_rng(1).standard_normal((10, 3)) * 1e3
        path = tmp_path / "samples.csv"
        write_csv_samples(batch, path)
        back = read_csv_samples(path)
        assert np.array_equal(back, batch)
        assert path.read_text().splitlines()[0] == "c0,c1,c2"

    def test_label_column_round_trip(self, tmp_path):
        batch = make_rng(2).standard_normal((5, 2))
        labels = np.array([0, 1, 2, 1, 0])
        path = tmp_path / "labeled.csv"
        write_csv_samples(batch, path, labels=labels)
        assert path.read_text().splitlines()[0] == "c0,c1,label"
        assert np.array_equal(read_csv_samples(path), batch)
        assert np.array_equal(read_csv_labels(path), labels)

    def test_no_label_column_returns_none(self, tmp_path):
        path = tmp_path / "plain.csv"
        write_csv_samples(np.zeros((2, 2)), path)
        assert read_csv_labels(path) is None

    def test_ragged_row_cites_row_number(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("c0,c1\n1,2\n3,4\n5,6\n7\n")
        with pytest.raises(ValueError, match="row 4"):
            read_csv_samples(path)

    def test_non_numeric_cell_cites_row(self, tmp_path):
        path = tmp_path / "text.csv"
        path.write_text("c0,c1\n1,2\nx,4\n")
        with pytest.raises(ValueError, match="row 2"):
            read_csv_samples(path)

    def test_empty_data_section_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("c0,c1\n")
        with pytest.raises(ValueError, match="no data rows"):
            read_csv_samples(path)

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "header.csv"
        path.write_text("x,y\n1,2\n")
        with pytest.raises(ValueError, match="header"):
            read_csv_samples(path)

    def test_non_finite_rejected(self, tmp_path):
        path = tmp_path / "inf.csv"
        path.write_text("c0\ninf\n")
        with pytest.raises(ValueError, match="row 1"):
            read_csv_samples(path)

    def test_label_count_checked_on_write(self, tmp_path):
        with pytest.raises(ValueError, match="labels"):
            write_csv_samples(np.zeros((3, 1)), tmp_path / "x.csv", labels=[1, 2])


class TestSynthetic:
    def test_ring8_noise_free_geometry(self):
        handle = make_synthetic(RING8, 8, 0.0, make_rng(0))
        radii = np.linalg.norm(handle.data, axis=1)
        assert np.allclose(radii, 4.0, atol=1e-12)
        angles = np.sort(np.arctan2(handle.data[:, 1], handle.data[:, 0]))
        spacing = np.diff(angles)
        assert np.allclose(spacing, np.pi / 4.0, atol=1e-12)
        assert np.array_equal(handle.labels, np.arange(8))

    def test_two_moons_means_separated(self):
        handle = make_synthetic(TWO_MOONS, 10000, 0.05, make_rng(1))
        upper = handle.data[handle.labels == 0]
        lower = handle.data[handle.labels == 1]
        assert abs(upper[:, 0].mean() - lower[:, 0].mean()) > 0.5
        assert abs(upper[:, 1].mean() - lower[:, 1].mean()) > 0.5

    def test_grid25_centers(self):
        handle = make_synthetic(GRID25, 25, 0.0, make_rng(2))
        xs = np.unique(handle.data[:, 0])
        ys = np.unique(handle.data[:, 1])
        assert np.allclose(xs, [-4, -2, 0, 2, 4])
        assert np.allclose(ys, [-4, -2, 0, 2, 4])
        assert len(np.unique(handle.data, axis=0)) == 25

    def test_deterministic(self):
        for name in SYNTHETIC_NAMES:
            a = make_synthetic(name, 64, 0.1, make_rng(3))
            b = make_synthetic(name, 64, 0.1, make_rng(3))
            assert np.array_equal(a.data, b.data)
            assert np.array_equal(a.labels, b.labels)

    def test_round_robin_labels(self):
        handle = make_synthetic(RING8, 20, 0.1, make_rng(4))
        assert np.array_equal(handle.labels, np.arange(20) % 8)

    def test_unknown_name_lists_choices(self):
        with pytest.raises(ValueError, match="ring8"):
            make_synthetic("spiral", 10, 0.1, make_rng(0))

    def test_validation(self):
        with pytest.raises(ValueError, match="n >= 1"):
            make_synthetic(RING8, 0, 0.1, make_rng(0))
        with pytest.raises(ValueError, match="noise"):
            make_synthetic(RING8, 10, -1.0, make_rng(0))


class TestDatasetHandle:
    def test_label_count_mismatch(self):
        with pytest.raises(ValueError, match="labels"):
            DatasetHandle(data=np.zeros((3, 2)), labels=np.array([1, 2]))

    def test_properties(self):
        handle = DatasetHandle(data=np.zeros((5, 3)))
        assert handle.n == 5
        assert handle.dim == 3

    def test_data_validated(self):
        with pytest.raises(ValueError, match="non-finite"):
            DatasetHandle(data=np.array([[np.nan, 1.0]]))
