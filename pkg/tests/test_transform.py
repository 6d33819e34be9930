import numpy as np
import pytest

from mcwave.models.bank import FilterBank
from mcwave.models.signals import CoeffPyramid, VectorSignal
from mcwave.services.transform import NORMALIZATION, analyze, ensure_verified, synthesize
from mcwave.utils.exceptions import BankNotVerified, DimensionMismatch, LengthNotDivisible


class TestTransform:
    """Test suite for the periodic multilevel transform"""

    def test_haar_single_level(self, haar_bank):
        """Test (1, 3) -> coarse 4/sqrt(2), detail 2/sqrt(2)"""
        signal = VectorSignal(np.array([[1.0], [3.0]]))

        pyramid = analyze(haar_bank, signal, 1)

        assert pyramid.normalization == NORMALIZATION
        assert pyramid.coarse.samples[0, 0] == pytest.approx(2.828427, abs=1e-6)
        assert pyramid.details[0].samples[0, 0] == pytest.approx(1.414214, abs=1e-6)
        np.testing.assert_allclose(synthesize(haar_bank, pyramid).samples, signal.samples, atol=1e-14)

    def test_pyramid_shapes(self, two_channel_bank, rng):
        """Test that details are stored fine to coarse"""
        signal = VectorSignal(rng.normal(size=(64, 2)))

        pyramid = analyze(two_channel_bank, signal, 3)

        assert pyramid.levels == 3
        assert [len(d) for d in pyramid.details] == [32, 16, 8]
        assert len(pyramid.coarse) == 8
        assert pyramid.length == 64

    def test_zero_signal(self, two_channel_bank):
        """Test that a zero signal has a zero pyramid"""
        pyramid = analyze(two_channel_bank, VectorSignal(np.zeros((32, 2))), 2)

        assert pyramid.energy() == 0.0

    def test_constant_signal_has_no_details(self, two_channel_bank, three_channel_bank):
        """Test that the vanishing moment kills constant signals"""
        for bank in (two_channel_bank, three_channel_bank):
            signal = VectorSignal(np.tile(np.arange(1.0, bank.r + 1.0), (64, 1)))

            pyramid = analyze(bank, signal, 3)

            for detail in pyramid.details:
                assert np.abs(detail.samples).max() <= 1e-8

    @pytest.mark.parametrize(
        ("bank_name", "tol"),
        [("haar_bank", 1e-12), ("two_channel_bank", 1e-8), ("three_channel_bank", 1e-8)],
    )
    def test_perfect_reconstruction_and_energy(self, bank_name, tol, request, rng):
        """Test synthesize(analyze(x)) = x and energy preservation on random signals"""
        bank = request.getfixturevalue(bank_name)
        for _ in range(100):
            signal = VectorSignal(rng.normal(size=(256, bank.r)))

            pyramid = analyze(bank, signal, 3)
            restored = synthesize(bank, pyramid)

            assert np.abs(restored.samples - signal.samples).max() <= tol
            assert pyramid.energy() == pytest.approx(signal.energy(), rel=tol)

    def test_length_not_divisible(self, two_channel_bank):
        """Test that N must be a multiple of 2**levels"""
        with pytest.raises(LengthNotDivisible) as exc_info:
            analyze(two_channel_bank, VectorSignal(np.ones((12, 2))), 3)

        assert exc_info.value.exit_code == 2

    def test_channel_mismatch(self, two_channel_bank, three_channel_bank):
        """Test that channel counts must agree"""
        with pytest.raises(DimensionMismatch):
            analyze(two_channel_bank, VectorSignal(np.ones((16, 3))), 1)

        pyramid = analyze(three_channel_bank, VectorSignal(np.ones((16, 3))), 1)
        with pytest.raises(DimensionMismatch):
            synthesize(two_channel_bank, pyramid)

    def test_zero_levels_rejected(self, two_channel_bank):
        """Test that at least one level is required"""
        with pytest.raises(DimensionMismatch):
            analyze(two_channel_bank, VectorSignal(np.ones((16, 2))), 0)

    def test_unverified_bank_rejected(self, two_channel_a, rng):
        """Test that a bank failing the QMF equations cannot transform"""
        bank = FilterBank(two_channel_a, two_channel_a)
        signal = VectorSignal(rng.normal(size=(16, 2)))

        with pytest.raises(BankNotVerified):
            analyze(bank, signal, 1)
        with pytest.raises(BankNotVerified):
            synthesize(bank, CoeffPyramid(signal))

    def test_ensure_verified_computes_missing_report(self, two_channel_bank):
        """Test that a bank without a stored report is verified on demand"""
        bare = FilterBank(two_channel_bank.scaling, two_channel_bank.wavelet)

        report = ensure_verified(bare)

        assert report.passed(1e-8)
