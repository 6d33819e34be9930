import logging
from collections.abc import Mapping, Sequence
from typing import Literal

import numpy as np
import numpy.typing as npt
import scipy.linalg

from mcwave.config.settings import settings
from mcwave.models.laurent import LaurentPoly
from mcwave.models.lpmatrix import MatrixSymbol
from mcwave.models.signals import CascadeSamples, VectorSequence
from mcwave.services.specfactor import (
    is_interpolatory_symbol,
    min_unit_circle_eigenvalue,
    parahermitian_defect,
    reduce_unit_circle_zero,
)
from mcwave.utils.exceptions import (
    DimensionMismatch,
    NotDivisible,
    NotInterpolatory,
    NotPositiveDefinite,
)

logger = logging.getLogger(__name__)

TWO_CHANNEL_LAMBDA = 1.0 / 20.0
THREE_CHANNEL_LAMBDAS = (1.0 / 20.0, 1.0 / 50.0, 1.0 / 64.0)
TWO_CHANNEL_LAMBDA_BOUND = np.sqrt(3.0) / 32.0


def _refine(
    mask: MatrixSymbol, values: npt.NDArray[np.float64], lo: int
) -> tuple[npt.NDArray[np.float64], int]:
    """out[2k + i] += mask_i @ values[k] for r-vectors or r x s matrices."""
    if values.shape[1] != mask.cols:
        raise DimensionMismatch(
            f"Mask of shape {mask.shape} cannot act on {values.shape[1]}-vectors"
        )
    length = len(values)
    if mask.is_zero or length == 0:
        return np.zeros((0, mask.rows, *values.shape[2:])), 0
    out = np.zeros((2 * (length - 1) + mask.length, mask.rows, *values.shape[2:]))
    for i, coeff in enumerate(mask.coeffs):
        out[i : i + 2 * length - 1 : 2] += np.einsum("ab,kb...->ka...", coeff, values)
    return out, 2 * lo + mask.lo


def subdivide(mask: MatrixSymbol, c: VectorSequence) -> VectorSequence:
    """(S c)_j = sum_k mask_{j - 2k} c_k."""
    if not mask.is_square:
        raise DimensionMismatch(f"Subdivision mask must be square, got {mask.shape}")
    values, lo = _refine(mask, c.values, c.lo)
    return VectorSequence(values.reshape(-1, mask.rows), lo)


def cascade(mask: MatrixSymbol, n: int | None = None) -> CascadeSamples:
    """Samples of S^n applied to the matrix delta sequence, on the grid 2**-n Z."""
    n = settings.cascade_iters if n is None else n
    if n < 1:
        raise ValueError("cascade needs at least one iteration")
    if not mask.is_square:
        raise DimensionMismatch(f"Subdivision mask must be square, got {mask.shape}")
    values, lo = np.eye(mask.rows)[np.newaxis], 0
    for _ in range(n):
        values, lo = _refine(mask, values, lo)
    logger.debug(f"Cascade level {n}: {len(values)} samples from index {lo}")
    return CascadeSamples(values, lo, n)


def wavelet_cascade(
    scaling: MatrixSymbol, wavelet: MatrixSymbol, n: int | None = None
) -> CascadeSamples:
    """Samples of G(x) = sum_j F(2x - j) B_j on the grid 2**-n Z."""
    n = settings.cascade_iters if n is None else n
    if n < 1:
        raise ValueError("cascade needs at least one iteration")
    if scaling.shape != wavelet.shape:
        raise DimensionMismatch("Scaling and wavelet symbols must have equal shapes")
    values, lo = np.array(wavelet.coeffs), wavelet.lo
    for _ in range(n - 1):
        values, lo = _refine(scaling, values, lo)
    return CascadeSamples(values, lo, n)


def partition_of_identity_error(samples: CascadeSamples) -> float:
    """max over residues of ||sum_j F(x - j) - I||."""
    period = 1 << samples.level
    r = samples.r
    sums = np.zeros((period, r, r))
    residues = (samples.lo + np.arange(len(samples.values))) % period
    np.add.at(sums, residues, samples.values)
    return float(np.abs(sums - np.eye(r)).max())


def gram_matrices(
    samples: CascadeSamples, kmax: int = 3
) -> dict[int, npt.NDArray[np.float64]]:
    """Riemann sums of the integral of F(x)^T F(x + k) for |k| <= kmax."""
    period = 1 << samples.level
    vals = samples.values
    grams: dict[int, npt.NDArray[np.float64]] = {}
    for k in range(-kmax, kmax + 1):
        offset = k * period
        if offset >= 0:
            left, right = vals[: len(vals) - offset], vals[offset:]
        else:
            left, right = vals[-offset:], vals[: len(vals) + offset]
        if len(left):
            grams[k] = np.einsum("iab,iac->bc", left, right) / period
        else:
            grams[k] = np.zeros((samples.r, samples.r))
    return grams


def gram_error(samples: CascadeSamples, kmax: int = 3) -> float:
    eye = np.eye(samples.r)
    return max(
        float(np.abs(g - (eye if k == 0 else 0.0)).max())
        for k, g in gram_matrices(samples, kmax).items()
    )


def cardinal_error(samples: CascadeSamples) -> float:
    """max ||F(j) - delta_j0 I|| over integer grid points."""
    period = 1 << samples.level
    eye = np.eye(samples.r)
    worst = 0.0
    first = -(-samples.lo // period)
    last = (samples.lo + len(samples.values) - 1) // period
    for j in range(first, last + 1):
        target = eye if j == 0 else 0.0
        worst = max(worst, float(np.abs(samples.at(j * period) - target).max()))
    return worst


def rank_of(mask: MatrixSymbol, tol: float | None = None) -> int:
    """Dimension of {y : A0(1) y = A1(1) y = y}."""
    tol = settings.rank_tol if tol is None else tol
    even, odd = mask.subsymbols()
    eye = np.eye(mask.rows)
    stacked = np.vstack(
        [even.evaluate(1.0).real - eye, odd.evaluate(1.0).real - eye]
    )
    singular = scipy.linalg.svdvals(stacked)
    threshold = tol * max(1.0, float(singular.max(initial=0.0)))
    return int(mask.rows - np.count_nonzero(singular > threshold))


def is_full_rank(mask: MatrixSymbol, tol: float | None = None) -> bool:
    """A(1) = 2I and A(-1) = 0."""
    tol = settings.tol if tol is None else tol
    if not mask.is_square:
        return False
    eye = np.eye(mask.rows)
    at_one = np.abs(mask.evaluate(1.0) - 2.0 * eye).max()
    at_minus_one = np.abs(mask.evaluate(-1.0)).max()
    return bool(at_one <= tol and at_minus_one <= tol)


def is_interpolatory(mask: MatrixSymbol, tol: float | None = None) -> bool:
    """Even coefficients are delta_j0 I."""
    tol = settings.tol if tol is None else tol
    if not mask.is_square:
        return False
    even, _ = mask.subsymbols()
    return even.allclose(MatrixSymbol.identity(mask.rows), atol=tol)


def deslauriers_dubuc(order: Literal[2, 4]) -> LaurentPoly:
    """Interpolatory scalar symbol of order 2 (linear B-spline) or 4 (four-point)."""
    if order == 2:
        return LaurentPoly([0.5, 1.0, 0.5], -1)
    if order == 4:
        quad = LaurentPoly([1.0, -4.0, 1.0])
        return (quad * LaurentPoly([1.0, 1.0]) ** 4 * (-1.0 / 16.0)).shift(-3)
    raise ValueError(f"Deslauriers-Dubuc order must be 2 or 4, got {order}")


def odd_coupling(lam: float, power: int) -> LaurentPoly:
    """lam * z * (z**2 - 1)**power."""
    return (LaurentPoly([-1.0, 0.0, 1.0]) ** power * lam).shift(1)


def haar_symbol() -> MatrixSymbol:
    """Scalar interpolatory symbol 1 + (z + 1/z)/2."""
    return MatrixSymbol.from_entries([[LaurentPoly([0.5, 1.0, 0.5], -1)]])


def check_symbol(c: MatrixSymbol, pd_tol: float | None = None) -> float:
    """Validate an interpolatory, parahermitian, positive definite symbol.

    Returns the smallest unit-circle eigenvalue of the reduced symbol.
    """
    pd_tol = settings.pd_tol if pd_tol is None else pd_tol
    if parahermitian_defect(c) > settings.tol:
        raise NotInterpolatory("Symbol is not parahermitian")
    if not is_interpolatory_symbol(c):
        raise NotInterpolatory("Symbol is not interpolatory of full rank")
    try:
        reduced, _ = reduce_unit_circle_zero(c)
    except NotDivisible as e:
        raise NotPositiveDefinite(
            f"Symbol has the wrong zero structure at z = -1: {e.message}"
        ) from e
    min_eig = min_unit_circle_eigenvalue(reduced)
    if min_eig <= pd_tol:
        raise NotPositiveDefinite(
            f"Symbol is not positive definite on |z| = 1 (eigenvalue {min_eig:.3e})",
            min_eigenvalue=min_eig,
        )
    return min_eig


def interpolatory_symbol(
    diagonal_orders: Sequence[Literal[2, 4]],
    couplings: Mapping[tuple[int, int], tuple[float, int]] | None = None,
) -> MatrixSymbol:
    """Symbol with Deslauriers-Dubuc diagonal and lam * z (z^2 - 1)^k couplings.

    ``couplings`` maps an upper-triangular position (i, j) to (lam, k); the
    lower triangle is filled with the adjoint entries.
    """
    r = len(diagonal_orders)
    grid = [[LaurentPoly() for _ in range(r)] for _ in range(r)]
    for i, order in enumerate(diagonal_orders):
        grid[i][i] = deslauriers_dubuc(order)
    for (i, j), (lam, power) in (couplings or {}).items():
        if not 0 <= i < j < r:
            raise DimensionMismatch(f"Coupling position {(i, j)} is not upper triangular")
        entry = odd_coupling(lam, power)
        grid[i][j] = entry
        grid[j][i] = entry.adjoint()
    symbol = MatrixSymbol.from_entries(grid)
    check_symbol(symbol)
    return symbol


def two_channel_symbol(lam: float = TWO_CHANNEL_LAMBDA) -> MatrixSymbol:
    return interpolatory_symbol([2, 4], {(0, 1): (lam, 3)})


def three_channel_symbol(
    lams: tuple[float, float, float] = THREE_CHANNEL_LAMBDAS,
) -> MatrixSymbol:
    lam1, lam2, lam3 = lams
    return interpolatory_symbol(
        [2, 4, 2],
        {(0, 1): (lam1, 3), (0, 2): (lam2, 4), (1, 2): (lam3, 4)},
    )


def build_example_symbol(
    family: Literal["two_channel", "three_channel"],
    lams: Sequence[float] | None = None,
) -> MatrixSymbol:
    if family == "two_channel":
        return two_channel_symbol(*(lams or (TWO_CHANNEL_LAMBDA,)))
    if family == "three_channel":
        values = tuple(lams) if lams else THREE_CHANNEL_LAMBDAS
        if len(values) != 3:
            raise DimensionMismatch("three_channel needs exactly three couplings")
        return three_channel_symbol((values[0], values[1], values[2]))
    raise ValueError(f"Unknown symbol family: {family}")
