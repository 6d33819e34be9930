import numpy as np
import pytest

from mcwave.models.bank import FilterBank
from mcwave.models.laurent import LaurentPoly
from mcwave.models.lpmatrix import MatrixSymbol
from mcwave.services.mcw import construct_wavelet
from mcwave.services.specfactor import canonical_factor
from mcwave.services.subdivision import (
    haar_symbol,
    three_channel_symbol,
    two_channel_symbol,
)


@pytest.fixture(scope="session")
def two_channel_c() -> MatrixSymbol:
    """Interpolatory two-channel symbol with lambda = 1/20"""
    return two_channel_symbol()


@pytest.fixture(scope="session")
def three_channel_c() -> MatrixSymbol:
    """Interpolatory three-channel symbol with (1/20, 1/50, 1/64)"""
    return three_channel_symbol()


@pytest.fixture(scope="session")
def two_channel_a(two_channel_c) -> MatrixSymbol:
    """Canonical factor of the two-channel symbol"""
    a, _ = canonical_factor(two_channel_c)
    return a


@pytest.fixture(scope="session")
def three_channel_a(three_channel_c) -> MatrixSymbol:
    """Canonical factor of the three-channel symbol"""
    a, _ = canonical_factor(three_channel_c)
    return a


@pytest.fixture(scope="session")
def two_channel_bank(two_channel_a) -> FilterBank:
    """Constructed two-channel orthonormal filter bank"""
    return construct_wavelet(two_channel_a)


@pytest.fixture(scope="session")
def three_channel_bank(three_channel_a) -> FilterBank:
    """Constructed three-channel orthonormal filter bank"""
    return construct_wavelet(three_channel_a)


@pytest.fixture(scope="session")
def haar_a() -> MatrixSymbol:
    """Scalar Haar scaling symbol 1 + z"""
    return MatrixSymbol.from_entries([[LaurentPoly([1.0, 1.0])]])


@pytest.fixture(scope="session")
def haar_bank(haar_a) -> FilterBank:
    """Scalar Haar filter bank"""
    return construct_wavelet(haar_a)


@pytest.fixture(scope="session")
def haar_c() -> MatrixSymbol:
    """Scalar interpolatory symbol whose canonical factor is 1 + z"""
    return haar_symbol()


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded random generator"""
    return np.random.default_rng(20240607)


def _coprime_pair(rng: np.random.Generator) -> tuple[LaurentPoly, LaurentPoly]:
    def real_roots(count: int, avoid: list[float]) -> list[float]:
        roots: list[float] = []
        while len(roots) < count:
            candidate = float(rng.uniform(-3.0, 3.0))
            if abs(candidate) > 0.2 and all(
                abs(candidate - r) > 0.5 for r in avoid + roots
            ):
                roots.append(candidate)
        return roots

    roots1 = real_roots(int(rng.integers(1, 4)), [])
    roots2 = real_roots(int(rng.integers(1, 4)), roots1)
    a1 = LaurentPoly.from_roots(roots1).shift(int(rng.integers(-2, 3)))
    a2 = LaurentPoly.from_roots(roots2, scale=float(rng.uniform(0.5, 2.0)))
    return a1, a2.shift(int(rng.integers(-2, 3)))


@pytest.fixture
def coprime_pair(rng):
    """Factory of real Laurent polynomial pairs whose roots stay 0.5 apart"""
    return lambda: _coprime_pair(rng)
