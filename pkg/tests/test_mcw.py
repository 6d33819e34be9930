import numpy as np
import pytest

from mcwave.models.laurent import LaurentPoly
from mcwave.models.lpmatrix import MatrixSymbol
from mcwave.services.comparison import load_table
from mcwave.services.mcw import (
    alternating_flip,
    composition_identity_error,
    construct_wavelet,
    normalize_permutation,
    projector_distance,
    verify_qmf,
    wavelet_projector,
)
from mcwave.services.specfactor import canonical_factor
from mcwave.services.subdivision import TWO_CHANNEL_LAMBDA_BOUND, two_channel_symbol
from mcwave.utils.exceptions import DimensionMismatch, NotOrthogonal, QmfViolation


def rotation(theta: float) -> MatrixSymbol:
    c, s = np.cos(theta), np.sin(theta)
    return MatrixSymbol.constant([[c, -s], [s, c]])


class TestConstructWavelet:
    """Test suite for wavelet symbol construction"""

    def test_haar_wavelet(self, haar_bank):
        """Test that 1 + z yields z - 1 through the diagonal branch"""
        assert haar_bank.metadata.branch == "diagonal"
        assert haar_bank.wavelet.allclose(
            MatrixSymbol.from_entries([[LaurentPoly([-1.0, 1.0])]]), atol=1e-15
        )

    def test_haar_projector(self, haar_bank):
        """Test W(1) W♯(1) / 2 for the Haar wavelet"""
        projector = wavelet_projector(haar_bank.wavelet, 1.0)

        np.testing.assert_allclose(projector, [[0.5, -0.5], [-0.5, 0.5]], atol=1e-15)

    def test_two_channel_bank_is_qmf(self, two_channel_bank):
        """Test the QMF residuals and vanishing moment of the two-channel bank"""
        report = two_channel_bank.report

        assert report is not None
        assert report.passed(1e-8)
        assert report.vanishing_moment is not None
        assert report.vanishing_moment <= 1e-7

    def test_two_channel_general_branch_metadata(self, two_channel_bank):
        """Test the provenance of the general construction"""
        metadata = two_channel_bank.metadata

        assert metadata.branch == "general"
        assert metadata.completion_det_error is not None
        assert metadata.completion_det_error <= 1e-6
        assert metadata.factor is not None
        assert metadata.permuted is False

    def test_three_channel_bank_is_qmf(self, three_channel_bank):
        """Test the QMF residuals of the three-channel bank"""
        assert three_channel_bank.r == 3
        assert three_channel_bank.report is not None
        assert three_channel_bank.report.passed(1e-7)

    def test_composition_identity(self, two_channel_bank, haar_bank):
        """Test the coefficient form of perfect reconstruction"""
        assert composition_identity_error(haar_bank) <= 1e-15
        assert composition_identity_error(two_channel_bank) <= 1e-8

    def test_permuted_construction(self, two_channel_a):
        """Test that the signed permutation keeps the QMF equations"""
        bank = construct_wavelet(two_channel_a, permute=True)

        assert bank.metadata.permuted is True
        assert sorted(bank.metadata.permutation or []) == [0, 1]
        assert verify_qmf(bank.scaling, bank.wavelet).passed(1e-8)

    @pytest.mark.parametrize("lam", [-0.05, 0.03])
    def test_admissible_couplings(self, lam):
        """Test construction for couplings inside the positive definite range"""
        scaling, _ = canonical_factor(two_channel_symbol(lam))

        bank = construct_wavelet(scaling)

        assert bank.metadata.branch == "general"
        assert verify_qmf(bank.scaling, bank.wavelet).passed(1e-8)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_random_admissible_couplings(self, seed):
        """Test construction for random couplings within 80% of the bound"""
        lam = float(np.random.default_rng(seed).uniform(-0.8, 0.8)) * TWO_CHANNEL_LAMBDA_BOUND
        scaling, _ = canonical_factor(two_channel_symbol(lam))

        bank = construct_wavelet(scaling)

        report = verify_qmf(bank.scaling, bank.wavelet)
        assert report.passed(1e-8)
        assert report.vanishing_moment is not None
        assert report.vanishing_moment <= 1e-7

    def test_uncoupled_symbol_takes_diagonal_branch(self):
        """Test that lambda = 0 gives a block-diagonal wavelet symbol"""
        scaling, _ = canonical_factor(two_channel_symbol(0.0))

        bank = construct_wavelet(scaling)

        assert bank.metadata.branch == "diagonal"
        assert np.all(bank.wavelet.coeffs[:, 0, 1] == 0.0)
        assert np.all(bank.wavelet.coeffs[:, 1, 0] == 0.0)
        assert verify_qmf(bank.scaling, bank.wavelet).passed(1e-8)

    def test_non_orthogonal_scaling_raises(self, two_channel_c):
        """Test that an interpolatory symbol is not an orthogonal scaling symbol"""
        with pytest.raises(NotOrthogonal):
            construct_wavelet(two_channel_c)

    def test_non_square_scaling_raises(self):
        """Test that the scaling symbol must be square"""
        with pytest.raises(DimensionMismatch):
            construct_wavelet(MatrixSymbol(np.ones((2, 2, 3))))


class TestQmfVerification:
    """Test suite for QMF residuals and projector comparisons"""

    def test_published_two_channel_bank(self):
        """Test the printed two-channel coefficients up to rounding"""
        report = verify_qmf(load_table("paper-2ch-scaling"), load_table("paper-2ch-wavelet"))

        assert report.passed(1e-5)

    def test_published_three_channel_bank(self):
        """Test the printed three-channel coefficients up to rounding"""
        report = verify_qmf(load_table("paper-3ch-scaling"), load_table("paper-3ch-wavelet"))

        assert report.passed(5e-5)

    def test_projector_matches_published_wavelet(self, two_channel_bank, three_channel_bank):
        """Test that the wavelet spaces agree with the printed wavelets"""
        distance_2ch, _ = projector_distance(
            two_channel_bank.wavelet, load_table("paper-2ch-wavelet")
        )
        distance_3ch, _ = projector_distance(
            three_channel_bank.wavelet, load_table("paper-3ch-wavelet")
        )

        assert distance_2ch <= 5e-4
        assert distance_3ch <= 5e-4

    def test_sign_unitary_and_shift_invariance(self, two_channel_bank):
        """Test that -B, B U and z^2 B are wavelet symbols of the same space"""
        a, b = two_channel_bank.scaling, two_channel_bank.wavelet

        for variant in (-b, b @ rotation(0.7), b.shift(2)):
            assert verify_qmf(a, variant).passed(1e-8)
            distance, _ = projector_distance(variant, b)
            assert distance <= 1e-10

    def test_alternating_flip_is_not_a_wavelet(self, two_channel_a):
        """Test that z A♯(-z) fails for non-commuting subsymbols"""
        report = verify_qmf(two_channel_a, alternating_flip(two_channel_a))

        assert report.max_residual > 1e-2

    def test_scaling_as_wavelet_has_cross_residual_two(self, two_channel_a):
        """Test A0♯A0 + A1♯A1 = 2I shows up as the cross residual"""
        report = verify_qmf(two_channel_a, two_channel_a)

        assert report.cross_residual == pytest.approx(2.0, abs=1e-8)

    def test_verify_shape_mismatch(self, two_channel_a, haar_a):
        """Test that scaling and wavelet must have equal shapes"""
        with pytest.raises(DimensionMismatch):
            verify_qmf(two_channel_a, haar_a)

    def test_unnormalized_projector_raises(self, two_channel_bank):
        """Test that 2B is rejected by the projector"""
        with pytest.raises(QmfViolation):
            wavelet_projector(two_channel_bank.wavelet * 2.0, 1.0)

    def test_normalize_permutation(self):
        """Test moving the dominant entries to a positive diagonal"""
        b = MatrixSymbol.constant([[0.0, -2.0], [3.0, 0.0]])

        permuted, order = normalize_permutation(b)

        assert order == [1, 0]
        assert permuted.allclose(MatrixSymbol.constant([[2.0, 0.0], [0.0, 3.0]]), atol=0.0)
