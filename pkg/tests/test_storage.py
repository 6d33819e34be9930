import json

import numpy as np
import pytest

from mcwave.models.lpmatrix import MatrixSymbol
from mcwave.models.signals import VectorSignal
from mcwave.providers.storage import LocalFileStorageProvider
from mcwave.services.subdivision import cascade
from mcwave.services.transform import analyze
from mcwave.utils.exceptions import DimensionMismatch, StorageError


@pytest.fixture
def storage(tmp_path):
    """Storage provider rooted in a temporary directory"""
    return LocalFileStorageProvider(tmp_path)


class TestMaskFiles:
    """Test suite for JSON mask files"""

    def test_mask_round_trip_is_exact(self, storage, two_channel_a):
        """Test that a written mask reads back bit for bit"""
        storage.write_mask("a.json", two_channel_a, provenance="factor")

        restored = storage.read_mask("a.json")

        assert restored == two_channel_a

    def test_mask_document_layout(self, storage, tmp_path, haar_a):
        """Test the r, coeffs and metadata keys"""
        storage.write_mask("nested/haar.json", haar_a, provenance="example", shift=0)

        document = json.loads((tmp_path / "nested" / "haar.json").read_text())

        assert document["r"] == 1
        assert document["coeffs"] == [{"k": 0, "m": [[1.0]]}, {"k": 1, "m": [[1.0]]}]
        assert document["metadata"]["provenance"] == "example"
        assert document["metadata"]["shift"] == 0

    def test_extra_metadata_is_preserved(self, storage, tmp_path):
        """Test that unknown metadata keys are accepted"""
        (tmp_path / "m.json").write_text(
            json.dumps(
                {"r": 1, "coeffs": [{"k": -1, "m": [[2.0]]}], "metadata": {"source": "hand"}}
            )
        )

        assert storage.read_mask("m.json") == MatrixSymbol.constant([[2.0]]).shift(-1)

    def test_empty_mask_is_zero(self, storage, tmp_path):
        """Test that a mask without coefficients is the zero symbol"""
        (tmp_path / "zero.json").write_text(json.dumps({"r": 2, "coeffs": []}))

        mask = storage.read_mask("zero.json")

        assert mask.is_zero
        assert mask.shape == (2, 2)

    @pytest.mark.parametrize(
        "content",
        [
            "not json",
            json.dumps({"r": 2, "coeffs": [{"k": 0, "m": [[1.0, 0.0], [0.0]]}]}),
            json.dumps(
                {"r": 1, "coeffs": [{"k": 1, "m": [[1.0]]}, {"k": 0, "m": [[1.0]]}]}
            ),
            json.dumps({"coeffs": []}),
        ],
    )
    def test_malformed_mask_raises(self, storage, tmp_path, content):
        """Test ragged, unordered and incomplete mask files"""
        (tmp_path / "bad.json").write_text(content)

        with pytest.raises(StorageError):
            storage.read_mask("bad.json")

    def test_missing_file_raises(self, storage):
        """Test that an absent file is a storage error with exit code 2"""
        with pytest.raises(StorageError) as exc_info:
            storage.read_mask("absent.json")

        assert exc_info.value.exit_code == 2
        assert exc_info.value.path is not None

    def test_non_square_mask_is_rejected(self, storage):
        """Test that only square masks can be written"""
        with pytest.raises(DimensionMismatch):
            storage.write_mask("wide.json", MatrixSymbol(np.ones((1, 2, 3))))


class TestSignalFiles:
    """Test suite for CSV signal files"""

    def test_signal_round_trip(self, storage, tmp_path, rng):
        """Test header and exact values"""
        signal = VectorSignal(rng.normal(size=(8, 3)))

        storage.write_signal("x.csv", signal)

        assert (tmp_path / "x.csv").read_text().splitlines()[0] == "ch1,ch2,ch3"
        np.testing.assert_array_equal(storage.read_signal("x.csv").samples, signal.samples)

    def test_single_row_signal(self, storage, tmp_path):
        """Test a one-sample signal keeps its channel axis"""
        (tmp_path / "one.csv").write_text("ch1,ch2\n1.5,-2\n")

        signal = storage.read_signal("one.csv")

        assert signal.samples.shape == (1, 2)

    @pytest.mark.parametrize(
        "content",
        ["", "a,b\n1,2\n", "ch1,ch2\n1,x\n", "ch1,ch2\n1,2,3\n", "ch1\n"],
    )
    def test_malformed_signal_raises(self, storage, tmp_path, content):
        """Test empty, badly headed, non-numeric, ragged and sample-free files"""
        (tmp_path / "bad.csv").write_text(content)

        with pytest.raises(StorageError):
            storage.read_signal("bad.csv")


class TestPyramidAndCascadeFiles:
    """Test suite for pyramid JSON and cascade CSV output"""

    def test_pyramid_round_trip(self, storage, two_channel_bank, rng):
        """Test that a pyramid reads back exactly"""
        pyramid = analyze(two_channel_bank, VectorSignal(rng.normal(size=(32, 2))), 2)

        storage.write_pyramid("p.json", pyramid)
        restored = storage.read_pyramid("p.json")

        assert restored.levels == 2
        assert restored.normalization == pyramid.normalization
        np.testing.assert_array_equal(restored.coarse.samples, pyramid.coarse.samples)
        for ours, theirs in zip(restored.details, pyramid.details, strict=True):
            np.testing.assert_array_equal(ours.samples, theirs.samples)

    def test_inconsistent_pyramid_raises(self, storage, tmp_path):
        """Test that detail lengths must match the recorded signal length"""
        document = {
            "r": 1,
            "length": 4,
            "levels": 1,
            "coarse": [[1.0], [2.0]],
            "details": [[[1.0]]],
        }
        (tmp_path / "p.json").write_text(json.dumps(document))

        with pytest.raises(StorageError):
            storage.read_pyramid("p.json")

    def test_cascade_columns(self, storage, tmp_path, two_channel_a):
        """Test the x, f11, f12, f21, f22 layout"""
        samples = cascade(two_channel_a, 3)

        storage.write_cascade("f.csv", samples)

        lines = (tmp_path / "f.csv").read_text().splitlines()
        assert lines[0] == "x,f11,f12,f21,f22"
        table = np.loadtxt(lines[1:], delimiter=",")
        assert table.shape == (len(samples.values), 5)
        np.testing.assert_array_equal(table[:, 0], samples.x)
        np.testing.assert_array_equal(table[:, 2], samples.values[:, 0, 1])


class TestHealthCheck:
    """Test suite for the storage health check"""

    def test_writable_root(self, storage, tmp_path):
        """Test a writable directory passes and leaves no marker file behind"""
        assert storage.health_check() is True
        assert list(tmp_path.iterdir()) == []

    def test_missing_root(self, tmp_path):
        """Test that a missing root fails"""
        assert LocalFileStorageProvider(tmp_path / "missing").health_check() is False
