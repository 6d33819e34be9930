"""Spectral factorization of parahermitian symbols.

``bauer_factor`` computes the causal minimum-phase factor K of D = K K♯ from
the block Cholesky factor of the banded block-Toeplitz matrix [D_{i-j}]:
block row i of the Cholesky factor converges to (K_i, ..., K_1, K_0).
``canonical_factor`` removes the (1+z) factors of an interpolatory symbol
column by column, factors the remainder and renormalizes so that A(1) = 2I.
"""

import logging
from collections import deque

import numpy as np
import scipy.linalg

from mcwave.config.settings import settings
from mcwave.models.bank import FactorInfo, FactorizationConfig
from mcwave.models.laurent import LaurentPoly
from mcwave.models.lpmatrix import MatrixSymbol, unit_circle
from mcwave.utils.exceptions import (
    NoConvergence,
    NotDivisible,
    NotInterpolatory,
    NotParahermitian,
    NotPositiveDefinite,
)

logger = logging.getLogger(__name__)

# z**-1 * (1 + z)**2 = (1 + z)(1 + 1/z)
_UNIT_CIRCLE_ZERO = LaurentPoly([1.0, 2.0, 1.0], -1)


def min_unit_circle_eigenvalue(m: MatrixSymbol, n: int | None = None) -> float:
    """Smallest eigenvalue of the Hermitian part of M(z) over n samples of |z| = 1."""
    n = settings.samples if n is None else n
    values = m.sample_unit_circle(n)
    hermitian = 0.5 * (values + np.conj(np.swapaxes(values, -1, -2)))
    return float(np.linalg.eigvalsh(hermitian).min())


def parahermitian_defect(m: MatrixSymbol) -> float:
    return m.max_coeff_distance(m.adjoint())


def _triangular_normalize(k: MatrixSymbol) -> MatrixSymbol:
    """Right-multiply by an orthogonal U so that K(1) is lower triangular with positive diagonal."""
    k1 = k.evaluate(1.0).real
    q, r = np.linalg.qr(k1.T)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return k @ MatrixSymbol.constant(q * signs)


class _BauerState:
    """Last ``band`` block rows of the Cholesky factor, as (first column, blocks)."""

    def __init__(self, band: int) -> None:
        self.history: deque[tuple[int, list[np.ndarray]]] = deque(maxlen=band)
        self.count = 0
        self.last_diff = float("inf")


def _bauer_rows(
    blocks: list[np.ndarray], rows: int, state: _BauerState
) -> tuple[list[np.ndarray], float]:
    """Advance the banded block Cholesky recursion to ``rows`` block rows."""
    band = len(blocks) - 1
    while state.count < rows:
        i = state.count
        first = max(0, i - band)
        new_row: list[np.ndarray] = []
        for j in range(first, i):
            prev_first, prev = state.history[j - i]
            acc = blocks[i - j].copy()
            for col in range(max(first, prev_first), j):
                acc -= new_row[col - first] @ prev[col - prev_first].T
            new_row.append(
                scipy.linalg.solve_triangular(
                    prev[j - prev_first], acc.T, lower=True
                ).T
            )
        acc = blocks[0].copy()
        for entry in new_row:
            acc -= entry @ entry.T
        try:
            new_row.append(np.linalg.cholesky(0.5 * (acc + acc.T)))
        except np.linalg.LinAlgError as e:
            raise NotPositiveDefinite(
                f"Block Toeplitz Cholesky failed at block row {i}"
            ) from e
        if state.history and len(new_row) == len(state.history[-1][1]):
            state.last_diff = max(
                float(np.abs(new - old).max())
                for new, old in zip(new_row, state.history[-1][1], strict=True)
            )
        state.history.append((first, new_row))
        state.count += 1
    return state.history[-1][1], state.last_diff


def bauer_factor(
    d: MatrixSymbol,
    cfg: FactorizationConfig | None = None,
    *,
    normalize: bool = True,
    samples: int | None = None,
) -> tuple[MatrixSymbol, FactorInfo]:
    """Causal K with K(z) K♯(z) = D(z) for parahermitian, positive definite D.

    With ``normalize`` K(1) is made lower triangular with positive diagonal.

    Raises:
        NotParahermitian: D♯ differs from D.
        NotPositiveDefinite: D has a non-positive eigenvalue on |z| = 1 or the
            Cholesky recursion breaks down.
        NoConvergence: block rows have not stabilized after the allowed
            number of horizon doublings, or the residual gate fails.
    """
    cfg = cfg or FactorizationConfig()
    if not d.is_square:
        raise NotParahermitian(f"Symbol of shape {d.shape} is not square")
    scale = max(1.0, d.max_abs())
    defect = parahermitian_defect(d)
    if defect > cfg.fact_tol * scale:
        raise NotParahermitian(
            f"D♯ differs from D by {defect:.3e}", {"defect": defect}
        )
    min_eig = min_unit_circle_eigenvalue(d, samples)
    if min_eig <= cfg.pd_tol:
        raise NotPositiveDefinite(
            f"Smallest unit-circle eigenvalue {min_eig:.3e} is not above "
            f"{cfg.pd_tol:.1e}",
            min_eigenvalue=min_eig,
        )

    band = max(d.hi, 0)
    # symmetrize so that the recursion sees an exactly parahermitian input
    blocks = [
        0.5 * (d.coefficient(k) + d.coefficient(-k).T) for k in range(band + 1)
    ]
    if band == 0:
        k0 = np.linalg.cholesky(blocks[0])
        k = MatrixSymbol.constant(k0)
        k = _triangular_normalize(k) if normalize else k
        info = FactorInfo(
            rows=1,
            row_difference=0.0,
            residual=(k @ k.adjoint()).max_coeff_distance(d),
            min_eigenvalue=min_eig,
        )
        return k, info

    state = _BauerState(band)
    horizon = max(cfg.bauer_block_count, 2 * band + 2)
    row, diff = _bauer_rows(blocks, horizon, state)
    doublings = 0
    while diff > cfg.conv_tol * scale:
        if doublings >= cfg.max_doublings:
            raise NoConvergence(state.count, diff)
        horizon *= 2
        doublings += 1
        row, diff = _bauer_rows(blocks, horizon, state)

    # row holds L[i][i-band], ..., L[i][i]; K_k = L[i][i-k]
    k = MatrixSymbol(np.stack(row[::-1]), 0)
    if normalize:
        k = _triangular_normalize(k)
    residual = (k @ k.adjoint()).max_coeff_distance(d)
    if residual > cfg.fact_tol * scale:
        raise NoConvergence(state.count, residual)
    logger.info(
        f"Bauer factorization converged after {state.count} block rows "
        f"(row difference {diff:.2e}, residual {residual:.2e})"
    )
    return k, FactorInfo(
        rows=state.count,
        row_difference=diff,
        residual=residual,
        min_eigenvalue=min_eig,
    )


def is_interpolatory_symbol(c: MatrixSymbol, tol: float | None = None) -> bool:
    """C(1) = 2I and C(z) + C(-z) = 2I."""
    tol = settings.tol if tol is None else tol
    if not c.is_square:
        return False
    eye = np.eye(c.rows)
    at_one = np.abs(c.evaluate(1.0).real - 2.0 * eye).max()
    even_part = c + c.modulate()
    return bool(
        at_one <= tol and even_part.allclose(MatrixSymbol.constant(2.0 * eye), atol=tol)
    )


def zero_order_at_minus_one(p: LaurentPoly, tol: float | None = None) -> int:
    """How many times (1+z)(1+1/z) divides p exactly."""
    order = 0
    current = p
    while not current.is_zero:
        try:
            current = current.exact_div(_UNIT_CIRCLE_ZERO, tol)
        except NotDivisible:
            break
        order += 1
    return order


def reduce_unit_circle_zero(
    c: MatrixSymbol, tol: float | None = None
) -> tuple[MatrixSymbol, list[int]]:
    """Remove the unit-circle zero of 2C at z = -1 column by column.

    With mu_i the number of (1+z)(1+1/z) factors of 2c_ii, returns
    M with M_ij = 2c_ij / ((1 + 1/z)**mu_i (1+z)**mu_j) and the orders mu.

    Raises:
        NotDivisible: a diagonal entry has no such factor, or an entry lacks
            the factor its row and column orders require.
    """
    r = c.rows
    doubled = c * 2.0
    orders = [zero_order_at_minus_one(doubled.entry(i, i), tol) for i in range(r)]
    for i, mu in enumerate(orders):
        if mu < 1:
            raise NotDivisible(
                f"Entry ({i}, {i}) of 2C has no (1+z)(1+1/z) factor"
            )
    one_plus_z = LaurentPoly([1.0, 1.0])
    grid = []
    for i in range(r):
        row = []
        for j in range(r):
            divisor = (one_plus_z ** orders[i]).adjoint() * one_plus_z ** orders[j]
            row.append(doubled.entry(i, j).exact_div(divisor, tol))
        grid.append(row)
    return MatrixSymbol.from_entries(grid), orders


def canonical_factor(
    c: MatrixSymbol,
    cfg: FactorizationConfig | None = None,
    *,
    tol: float | None = None,
) -> tuple[MatrixSymbol, FactorInfo]:
    """Factor A with 2C = A♯A, A(1) = 2I and A(-1) = 0.

    A = Q K♯ diag((1+z)**mu) where M = K K♯ is the reduced symbol from
    ``reduce_unit_circle_zero`` and Q is the orthogonal matrix making A(1) = 2I.

    Raises:
        NotInterpolatory: C(1) != 2I or C(z) + C(-z) != 2I.
        NotDivisible: the (1+z) factors required at z = -1 are missing.
        NotPositiveDefinite: the reduced symbol is not positive definite.
    """
    cfg = cfg or FactorizationConfig()
    tol = settings.tol if tol is None else tol
    if not is_interpolatory_symbol(c, tol):
        raise NotInterpolatory("Symbol is not interpolatory of full rank")

    reduced, orders = reduce_unit_circle_zero(c)
    logger.debug(f"Extracted (1+z) orders {orders} from 2C")
    k, info = bauer_factor(reduced, cfg, normalize=False)

    delta = MatrixSymbol.diagonal([LaurentPoly([1.0, 1.0]) ** mu for mu in orders])
    raw = k.adjoint() @ delta
    q, _ = scipy.linalg.polar(raw.evaluate(1.0).real / 2.0)
    a = MatrixSymbol.constant(q.T) @ raw

    residual = (a.adjoint() @ a).max_coeff_distance(c * 2.0)
    if residual > cfg.fact_tol * max(1.0, c.max_abs()):
        raise NoConvergence(info.rows, residual)
    info = info.model_copy(update={"residual": residual, "zero_orders": orders})
    logger.info(
        f"Canonical factor of a {c.rows}-channel symbol: powers {a.lo}..{a.hi}, "
        f"residual {residual:.2e}"
    )
    return a, info


def factor_residual(a: MatrixSymbol, c: MatrixSymbol) -> float:
    """max coefficient of A♯A - 2C."""
    return (a.adjoint() @ a).max_coeff_distance(c * 2.0)


def first_qmf_residual(a: MatrixSymbol, n: int | None = None) -> float:
    n = settings.samples if n is None else n
    a0, a1 = a.subsymbols()
    z = unit_circle(n)
    v0, v1 = a0.evaluate(z), a1.evaluate(z)
    gram = np.conj(np.swapaxes(v0, -1, -2)) @ v0 + np.conj(np.swapaxes(v1, -1, -2)) @ v1
    return float(np.linalg.norm(gram - 2.0 * np.eye(a.rows), ord=2, axis=(-2, -1)).max())
