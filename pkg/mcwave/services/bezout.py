import logging

import numpy as np
import scipy.linalg

from mcwave.config.settings import settings
from mcwave.models.laurent import FloatArray, LaurentPoly
from mcwave.utils.exceptions import CommonZero

logger = logging.getLogger(__name__)


def _invert_monomial(p: LaurentPoly, tol: float) -> LaurentPoly:
    unit = p.unit_monomial(tol)
    if unit is None:
        raise CommonZero(
            f"{p!r} has zeros in C\\{{0}}, so the Bezout identity has no solution",
            {"operand": repr(p)},
        )
    value, power = unit
    return LaurentPoly.monomial(-power, 1.0 / value)


def sylvester_matrix(p1: FloatArray, p2: FloatArray) -> FloatArray:
    """Matrix of (q1, q2) -> p1*q1 + p2*q2 with deg q1 < deg p2, deg q2 < deg p1.

    Columns hold shifted copies of the ascending coefficient vectors.
    """
    n1, n2 = len(p1) - 1, len(p2) - 1
    size = n1 + n2
    mat = np.zeros((size, size))
    for j in range(n2):
        mat[j : j + n1 + 1, j] = p1
    for j in range(n1):
        mat[j : j + n2 + 1, n2 + j] = p2
    return mat


def _drop_smallest_end(
    a1: LaurentPoly, a2: LaurentPoly, clean_tol: float
) -> tuple[LaurentPoly, LaurentPoly, float] | None:
    """Remove the smallest end coefficient of two unit-scaled operands.

    Returns None when every end coefficient exceeds ``clean_tol``.
    """
    ends = []
    for idx, a in enumerate((a1, a2)):
        if a.span > 1:
            ends.append((abs(float(a.coeffs[0])), idx, True))
            ends.append((abs(float(a.coeffs[-1])), idx, False))
    if not ends:
        return None
    magnitude, idx, low_end = min(ends)
    if magnitude > clean_tol:
        return None
    a = (a1, a2)[idx]
    if low_end:
        trimmed = LaurentPoly(a.coeffs[1:], a.lo + 1)
    else:
        trimmed = LaurentPoly(a.coeffs[:-1], a.lo)
    return (trimmed, a2, magnitude) if idx == 0 else (a1, trimmed, magnitude)


def _solve_unit_scaled(
    a1: LaurentPoly, a2: LaurentPoly, rank_tol: float, clean_tol: float
) -> tuple[LaurentPoly, LaurentPoly, float]:
    """Minimal-degree Bezout pair of operands with max coefficient 1.

    While the Sylvester system is numerically singular, end coefficients
    below ``clean_tol`` are dropped. Returns (b1, b2, largest dropped).
    """
    dropped = 0.0
    while True:
        if a1.is_zero:
            return LaurentPoly(), _invert_monomial(a2, rank_tol), dropped
        if a2.is_zero or a1.span == 1:
            return _invert_monomial(a1, rank_tol), LaurentPoly(), dropped
        if a2.span == 1:
            return LaurentPoly(), _invert_monomial(a2, rank_tol), dropped

        # a = z**lo * P(z) with P(0) != 0 after trimming
        mat = sylvester_matrix(a1.coeffs, a2.coeffs)
        singular = scipy.linalg.svdvals(mat)
        ratio = float(singular[-1] / singular[0])
        if ratio >= rank_tol:
            break
        cleaned = _drop_smallest_end(a1, a2, clean_tol)
        if cleaned is None:
            raise CommonZero(
                "Bezout operands share a zero in C\\{0}",
                {"singular_ratio": ratio, "a1": repr(a1), "a2": repr(a2)},
            )
        a1, a2, magnitude = cleaned
        dropped = max(dropped, magnitude)
        logger.debug(
            f"Sylvester ratio {ratio:.3e}; dropped an end coefficient of size "
            f"{magnitude:.3e}"
        )

    rhs = np.zeros(mat.shape[0])
    rhs[0] = 1.0
    solution = scipy.linalg.solve(mat, rhs)
    n2 = a2.span - 1
    logger.debug(
        f"Bezout solved with spans ({a1.span}, {a2.span}), "
        f"singular ratio {ratio:.3e}"
    )
    return (
        LaurentPoly(solution[:n2], -a1.lo),
        LaurentPoly(solution[n2:], -a2.lo),
        dropped,
    )


def lp_bezout(
    a1: LaurentPoly,
    a2: LaurentPoly,
    p: LaurentPoly | None = None,
    *,
    rank_tol: float | None = None,
    bezout_tol: float | None = None,
    clean_tol: float | None = None,
) -> tuple[LaurentPoly, LaurentPoly]:
    """Solve a1*b1 + a2*b2 = 1 over Laurent polynomials.

    Returns the minimal-degree pair from the Sylvester system of the operands
    scaled to unit max coefficient; with ``p`` the pair (b1 + p*a2, b2 - p*a1)
    from the same solution family is returned. Round-off tails of relative
    size at most ``clean_tol`` are dropped when they make the system singular.

    Raises:
        CommonZero: a1 and a2 share a zero (numerically rank-deficient system)
            or the computed pair misses the identity by more than the residual
            gate.
    """
    rank_tol = settings.rank_tol if rank_tol is None else rank_tol
    bezout_tol = settings.bezout_tol if bezout_tol is None else bezout_tol
    clean_tol = settings.bezout_clean_tol if clean_tol is None else clean_tol

    if a1.is_zero and a2.is_zero:
        raise CommonZero("Both Bezout operands are zero")

    s1 = a1.max_abs() or 1.0
    s2 = a2.max_abs() or 1.0
    c1, c2, dropped = _solve_unit_scaled(a1 / s1, a2 / s2, rank_tol, clean_tol)
    b1, b2 = c1 / s1, c2 / s2

    if p is not None:
        b1, b2 = b1 + p * a2, b2 - p * a1

    residual = (a1 * b1 + a2 * b2 - 1.0).max_abs()
    scale = max(1.0, a1.max_abs() * b1.max_abs(), a2.max_abs() * b2.max_abs())
    gate = max(bezout_tol, 2.0 * dropped) * scale
    if residual > gate:
        raise CommonZero(
            f"Bezout residual {residual:.3e} exceeds tolerance",
            {"residual": residual, "tolerance": gate},
        )
    return b1, b2
