import logging
from collections.abc import Sequence

import numpy as np

from mcwave.config.settings import settings
from mcwave.models.laurent import LaurentPoly
from mcwave.models.lpmatrix import MatrixSymbol
from mcwave.services.bezout import lp_bezout
from mcwave.utils.exceptions import (
    BlockStructureViolation,
    DimensionMismatch,
    NotUnimodular,
)

logger = logging.getLogger(__name__)


def basic_completion(a: Sequence[LaurentPoly]) -> MatrixSymbol:
    """Square symbol with first row ``a`` and determinant 1.

    For two entries the Bezout pair (b1, b2) of (a1, a2) gives
    [[a1, a2], [-b2, b1]]. Longer rows embed the completion of the first
    n - 1 entries and put a_n in the top-right corner above a unit
    bottom-right entry.
    """
    n = len(a)
    if n < 2:
        raise DimensionMismatch(f"basic_completion needs at least 2 entries, got {n}")

    if n == 2:
        b1, b2 = lp_bezout(a[0], a[1])
        return MatrixSymbol.from_entries([[a[0], a[1]], [-b2, b1]])

    inner = basic_completion(a[:-1])
    corner = MatrixSymbol.from_entries(
        [[a[-1]]] + [[LaurentPoly()] for _ in range(n - 2)]
    )
    return MatrixSymbol.block(
        [
            [inner, corner],
            [MatrixSymbol.zeros(1, n - 1), MatrixSymbol.identity(1)],
        ]
    )


def _normalize_square(a: MatrixSymbol, unit_tol: float | None) -> MatrixSymbol:
    det = a.det()
    unit = det.unit_monomial(unit_tol, a.det_scale())
    if unit is None:
        raise NotUnimodular(
            f"Square input has determinant {det!r}, not a unit monomial",
            {"determinant_span": det.span},
        )
    value, power = unit
    if value == 1.0 and power == 0:
        return a
    logger.warning(
        f"Completion input is already square; dividing the last row by "
        f"{value:.6g}*z^{power} so that the determinant is 1"
    )
    last = (a[a.rows - 1 :, :] / value).shift(-power)
    if a.rows == 1:
        return last
    return MatrixSymbol.block([[a[: a.rows - 1, :]], [last]])


def completion(
    a: MatrixSymbol,
    *,
    block_tol: float | None = None,
    unit_tol: float | None = None,
) -> MatrixSymbol:
    """Complete the n x m symbol ``a`` (n < m) to an m x m symbol of determinant 1.

    The first n rows of the result are the rows of ``a``.

    Raises:
        CommonZero: an inner Bezout identity has no solution.
        NotUnimodular: an intermediate completion lost its unit determinant.
        BlockStructureViolation: a * inv(P_bar) deviates from [[I, 0], [c, d]].
    """
    block_tol = settings.block_tol if block_tol is None else block_tol
    n, m = a.shape
    if n > m:
        raise DimensionMismatch(f"Cannot complete a tall {a.shape} symbol")
    if n == m:
        return _normalize_square(a, unit_tol)
    if n == 1:
        return basic_completion(a.entries()[0])

    p_bar = completion(a[: n - 1, :], block_tol=block_tol, unit_tol=unit_tol)
    p_bar_inv = p_bar.inverse_unimodular(unit_tol)
    c = a @ p_bar_inv

    expected = MatrixSymbol.block(
        [[MatrixSymbol.identity(n - 1), MatrixSymbol.zeros(n - 1, m - n + 1)]]
    )
    deviation = c[: n - 1, :].max_coeff_distance(expected)
    scale = max(1.0, a.max_abs() * p_bar_inv.max_abs())
    if deviation > block_tol * scale:
        raise BlockStructureViolation(deviation, block_tol * scale)

    c_row = c[n - 1, : n - 1]
    d = c[n - 1, n - 1 :]
    d_completion = basic_completion(d.entries()[0])
    logger.debug(
        f"Completion of {n}x{m}: trailing row spans "
        f"{[p.span for p in d.entries()[0]]}, P_bar powers {p_bar.lo}..{p_bar.hi}"
    )

    lower_left = MatrixSymbol.block(
        [[c_row], [MatrixSymbol.zeros(m - n, n - 1)]]
    )
    v = MatrixSymbol.block(
        [
            [MatrixSymbol.identity(n - 1), MatrixSymbol.zeros(n - 1, m - n + 1)],
            [lower_left, d_completion],
        ]
    )
    p = v @ p_bar
    # first n rows are a's rows exactly, the rest from V * P_bar
    return MatrixSymbol.block([[a], [p[n:, :]]])


def completion_det_error(p: MatrixSymbol, samples: int | None = None) -> float:
    """max |det P(z) - 1| over unit-circle samples."""
    samples = settings.samples if samples is None else samples
    values = p.sample_unit_circle(samples)
    return float(np.abs(np.linalg.det(values) - 1.0).max())
