import numpy as np
import pytest

from mcwave.models.laurent import (
    ONE_PLUS_Z,
    ONE_PLUS_Z_INV,
    LaurentPoly,
    lp_adjoint,
    lp_eval,
    lp_exact_div,
    lp_ring_ops,
)
from mcwave.models.lpmatrix import unit_circle
from mcwave.utils.exceptions import NotDivisible, ZeroArgument


def random_poly(rng: np.random.Generator, max_span: int = 6) -> LaurentPoly:
    span = int(rng.integers(1, max_span + 1))
    return LaurentPoly(rng.normal(size=span), int(rng.integers(-3, 4)))


class TestLaurentPoly:
    """Test suite for the LaurentPoly value type"""

    def test_trims_leading_and_trailing_zeros(self):
        """Test that zero end coefficients are dropped on construction"""
        p = LaurentPoly([0.0, 1.0, 2.0, 0.0], -2)

        assert p.lo == -1
        assert p.hi == 0
        assert p.coeffs.tolist() == [1.0, 2.0]

    def test_trimming_is_relative_to_largest_coefficient(self):
        """Test that tiny end coefficients are dropped relative to the largest"""
        p = LaurentPoly([1e-12, 5.0, 3.0, 1e-11])

        assert p.lo == 1
        assert p.span == 2

    def test_zero_polynomial_has_empty_coefficients(self):
        """Test the zero polynomial representation"""
        p = LaurentPoly([0.0, 0.0], 5)

        assert p.is_zero
        assert p.lo == 0
        assert p.coeffs.size == 0

    def test_coefficients_are_read_only(self):
        """Test that stored coefficients cannot be mutated"""
        p = LaurentPoly([1.0, 2.0])

        with pytest.raises(ValueError):
            p.coeffs[0] = 5.0

    def test_rejects_non_finite_coefficients(self):
        """Test that NaN coefficients are rejected"""
        with pytest.raises(ValueError, match="finite"):
            LaurentPoly([1.0, float("nan")])

    def test_from_terms_and_coefficient_lookup(self):
        """Test building from an exponent mapping"""
        p = LaurentPoly.from_terms({-1: 2.0, 2: -1.0})

        assert p.coefficient(-1) == 2.0
        assert p.coefficient(0) == 0.0
        assert p.coefficient(2) == -1.0
        assert p.coefficient(7) == 0.0

    def test_multiply_one_plus_z_by_adjoint(self):
        """Test (1+z)(1+1/z) = 1/z + 2 + z"""
        p = lp_ring_ops(ONE_PLUS_Z, ONE_PLUS_Z_INV, "mul")

        assert p == LaurentPoly([1.0, 2.0, 1.0], -1)

    def test_add_zero_is_identity(self):
        """Test that adding zero returns an equal polynomial"""
        p = LaurentPoly([3.0, -1.0], 2)

        assert lp_ring_ops(p, LaurentPoly(), "add") == p

    def test_multiply_by_zero_gives_zero(self):
        """Test that multiplying by zero annihilates"""
        p = LaurentPoly([2.0, 1.0])

        assert lp_ring_ops(p, LaurentPoly(), "mul").is_zero

    def test_subtract_and_scale(self):
        """Test subtraction and real scaling"""
        p = LaurentPoly([1.0, 2.0])
        q = LaurentPoly([1.0], 1)

        assert lp_ring_ops(p, q, "sub") == LaurentPoly([1.0, 1.0])
        assert lp_ring_ops(p, 2.0, "scale") == LaurentPoly([2.0, 4.0])

    def test_scale_rejects_polynomial_factor(self):
        """Test that scale only accepts real factors"""
        with pytest.raises(TypeError):
            lp_ring_ops(ONE_PLUS_Z, ONE_PLUS_Z, "scale")

    def test_cancellation_trims_to_zero(self):
        """Test that p - p is the zero polynomial"""
        p = LaurentPoly([0.3, -1.7, 2.2], -4)

        assert (p - p).is_zero

    def test_power_and_shift(self):
        """Test integer powers and monomial shifts"""
        assert ONE_PLUS_Z**2 == LaurentPoly([1.0, 2.0, 1.0])
        assert ONE_PLUS_Z.shift(-3) == LaurentPoly([1.0, 1.0], -3)
        with pytest.raises(ValueError):
            _ = ONE_PLUS_Z ** -1

    def test_adjoint_examples(self):
        """Test reflection of monomials and coefficient reversal"""
        assert lp_adjoint(LaurentPoly.monomial(1)) == LaurentPoly.monomial(-1)
        assert lp_adjoint(LaurentPoly([1.0, 2.0])) == LaurentPoly([2.0, 1.0], -1)
        assert abs(lp_eval(lp_adjoint(ONE_PLUS_Z), -1.0)) < 1e-15

    def test_adjoint_is_involution_and_anti_multiplicative(self, rng):
        """Test p♯♯ = p and (pq)♯ = p♯q♯ on random polynomials"""
        for _ in range(20):
            p, q = random_poly(rng), random_poly(rng)

            assert p.adjoint().adjoint() == p
            assert (p * q).adjoint().allclose(p.adjoint() * q.adjoint(), atol=1e-12)

    def test_modulate_and_upsample(self):
        """Test p(-z) and p(z^2)"""
        p = LaurentPoly([1.0, 2.0, 3.0], -1)

        assert p.modulate() == LaurentPoly([-1.0, 2.0, -3.0], -1)
        assert p.upsample() == LaurentPoly([1.0, 0.0, 2.0, 0.0, 3.0], -2)

    def test_evaluate_examples(self):
        """Test evaluation at the points used by the symbol checks"""
        linear_spline = LaurentPoly([0.5, 1.0, 0.5], -1)

        assert abs(lp_eval(ONE_PLUS_Z, -1.0)) == 0.0
        assert lp_eval(ONE_PLUS_Z, 1.0) == pytest.approx(2.0)
        assert lp_eval(linear_spline * 2.0, 1.0) == pytest.approx(4.0)
        assert linear_spline(1.0) == pytest.approx(2.0)

    def test_evaluate_at_zero_raises(self):
        """Test that z = 0 is rejected"""
        with pytest.raises(ZeroArgument):
            lp_eval(LaurentPoly([1.0, 1.0], -1), 0.0)

    def test_evaluation_is_multiplicative(self, rng):
        """Test (pq)(z) = p(z) q(z) on the unit circle"""
        z = unit_circle(32)
        for _ in range(10):
            p, q = random_poly(rng), random_poly(rng)
            expected = p.evaluate(z) * q.evaluate(z)

            np.testing.assert_allclose(
                (p * q).evaluate(z), expected, rtol=1e-12, atol=1e-12
            )

    def test_exact_division_examples(self):
        """Test exact quotients and the non-divisible case"""
        p = LaurentPoly([1.0, 2.0, 1.0], -1)

        assert lp_exact_div(p, ONE_PLUS_Z).allclose(LaurentPoly([1.0, 1.0], -1))
        assert lp_exact_div(ONE_PLUS_Z, ONE_PLUS_Z).allclose(1.0)
        with pytest.raises(NotDivisible):
            lp_exact_div(ONE_PLUS_Z, LaurentPoly([1.0, -1.0]))

    def test_exact_division_recovers_constructed_quotient(self, rng):
        """Test that (q*d)/d reproduces q"""
        for _ in range(20):
            q = random_poly(rng)
            d = LaurentPoly(rng.uniform(0.5, 2.0, size=3), int(rng.integers(-2, 3)))

            assert lp_exact_div(q * d, d).allclose(q, atol=1e-10)

    def test_unit_monomial(self):
        """Test recognition of c*z^k"""
        assert LaurentPoly.monomial(3, -2.0).unit_monomial() == (-2.0, 3)
        assert LaurentPoly([1e-12, 1.0], 0, trim_tol=0.0).unit_monomial() == (1.0, 1)
        assert ONE_PLUS_Z.unit_monomial() is None
        assert LaurentPoly().unit_monomial() is None

    @pytest.mark.parametrize("scale", [1.0, 1.2e6, 1e9, 1e12])
    def test_unit_monomial_with_large_scale(self, scale):
        """Test that a large term scale keeps 1 a unit and 1 + z not"""
        assert LaurentPoly.constant(1.0).unit_monomial(1e-6, scale) == (1.0, 0)
        assert LaurentPoly([1e-9, 0.5], -2, trim_tol=0.0).unit_monomial(1e-6, scale) == (0.5, -1)
        assert ONE_PLUS_Z.unit_monomial(1e-6, scale) is None
        assert LaurentPoly([1e-2, 1.0], trim_tol=0.0).unit_monomial(1e-6, scale) is None
