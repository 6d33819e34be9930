"""Wavelet symbol construction from an orthogonal full-rank scaling symbol.

Given A with A0♯A0 + A1♯A1 = 2I, ``construct_wavelet`` builds B with

    A0♯B0 + A1♯B1 = 0,    B0♯B0 + B1♯B1 = 2I

by completing (A0♯ | A1♯) to a unimodular 2r x 2r symbol, projecting the
completed rows onto the orthogonal complement of A and normalizing them with
a spectral factor.
"""

import logging

import numpy as np
import numpy.typing as npt
from scipy.optimize import linear_sum_assignment

from mcwave.config.settings import settings
from mcwave.models.bank import BankMetadata, FactorizationConfig, FilterBank, QmfReport
from mcwave.models.lpmatrix import ComplexArray, MatrixSymbol, unit_circle
from mcwave.services.completion import completion, completion_det_error
from mcwave.services.specfactor import bauer_factor, first_qmf_residual
from mcwave.utils.exceptions import (
    DimensionMismatch,
    NotOrthogonal,
    NotUnimodular,
    QmfViolation,
)

logger = logging.getLogger(__name__)

COMPLETION_DET_TOL = 1e-6


def _hermitian(values: ComplexArray) -> ComplexArray:
    return np.conj(np.swapaxes(values, -1, -2))


def _is_diagonal(m: MatrixSymbol, tol: float) -> bool:
    off = m.coeffs * (1.0 - np.eye(m.rows))
    return bool(np.abs(off).max(initial=0.0) <= tol)


def _diagonal_part(m: MatrixSymbol) -> MatrixSymbol:
    return MatrixSymbol(m.coeffs * np.eye(m.rows), m.lo)


def verify_qmf(
    scaling: MatrixSymbol, wavelet: MatrixSymbol, n_samples: int | None = None
) -> QmfReport:
    """Spectral-norm residuals of the three QMF equations on |z| = 1."""
    n_samples = settings.samples if n_samples is None else n_samples
    if not scaling.is_square or scaling.shape != wavelet.shape:
        raise DimensionMismatch(
            f"Cannot verify {scaling.shape} scaling with {wavelet.shape} wavelet"
        )
    z = unit_circle(n_samples)
    a0, a1 = (s.evaluate(z) for s in scaling.subsymbols())
    b0, b1 = (s.evaluate(z) for s in wavelet.subsymbols())
    eye = 2.0 * np.eye(scaling.rows)

    def worst(values: ComplexArray) -> float:
        return float(np.linalg.norm(values, ord=2, axis=(-2, -1)).max())

    return QmfReport(
        scaling_residual=worst(_hermitian(a0) @ a0 + _hermitian(a1) @ a1 - eye),
        cross_residual=worst(_hermitian(a0) @ b0 + _hermitian(a1) @ b1),
        wavelet_residual=worst(_hermitian(b0) @ b0 + _hermitian(b1) @ b1 - eye),
        vanishing_moment=float(np.linalg.norm(wavelet.evaluate(1.0), ord=2)),
        samples=n_samples,
    )


def _diagonal_branch(a0: MatrixSymbol, a1: MatrixSymbol) -> tuple[MatrixSymbol, MatrixSymbol]:
    # per-channel alternating flip: b0 = -a1♯, b1 = a0♯
    return -_diagonal_part(a1.adjoint()), _diagonal_part(a0.adjoint())


def _general_branch(
    a0: MatrixSymbol,
    a1: MatrixSymbol,
    cfg: FactorizationConfig,
    tol: float,
    scaling_residual: float,
    n_samples: int,
) -> tuple[MatrixSymbol, MatrixSymbol, BankMetadata]:
    r = a0.rows
    a0s, a1s = a0.adjoint(), a1.adjoint()
    completed = completion(MatrixSymbol.block([[a0s, a1s]]))
    det_error = completion_det_error(completed, n_samples)
    if det_error > COMPLETION_DET_TOL:
        raise NotUnimodular(
            f"Completion determinant deviates from 1 by {det_error:.3e}",
            {"det_error": det_error},
        )
    c0, c1 = completed[r:, :r], completed[r:, r:]

    rr = (a0s @ c0.adjoint() + a1s @ c1.adjoint()) * 0.5
    d0 = c0 - rr.adjoint() @ a0s
    d1 = c1 - rr.adjoint() @ a1s

    defect = (a0s @ d0.adjoint() + a1s @ d1.adjoint()).max_abs()
    gate = max(tol, 10.0 * scaling_residual) * max(1.0, rr.max_abs() * a0.max_abs())
    if defect > gate:
        raise QmfViolation(
            f"Projected rows are not orthogonal to the scaling symbol ({defect:.3e})",
            {"defect": defect, "tolerance": gate},
        )

    gram = (d0 @ d0.adjoint() + d1 @ d1.adjoint()) * 2.0
    det_gram = gram.det()
    if det_gram.unit_monomial(COMPLETION_DET_TOL, gram.det_scale()) is None:
        raise QmfViolation(
            f"Gram symbol determinant {det_gram!r} is not a unit monomial",
            {"determinant_span": det_gram.span},
        )
    k, info = bauer_factor(gram, cfg, samples=n_samples)
    e_adj = k.inverse_unimodular(COMPLETION_DET_TOL).adjoint()
    logger.debug(
        f"Completion powers {completed.lo}..{completed.hi}, "
        f"Gram powers {gram.lo}..{gram.hi}, factor rows {info.rows}"
    )
    metadata = BankMetadata(
        branch="general", completion_det_error=det_error, factor=info
    )
    return (d0.adjoint() @ e_adj) * 2.0, (d1.adjoint() @ e_adj) * 2.0, metadata


def normalize_permutation(b: MatrixSymbol) -> tuple[MatrixSymbol, list[int]]:
    """Signed column permutation of B maximizing its diagonal mass."""
    r = b.rows
    mass = np.sum(b.coeffs**2, axis=0)
    rows, cols = linear_sum_assignment(mass, maximize=True)
    perm = np.zeros((r, r))
    perm[cols, rows] = 1.0
    permuted = b @ MatrixSymbol.constant(perm)
    diag = permuted.coeffs[:, np.arange(r), np.arange(r)]
    peaks = diag[np.abs(diag).argmax(axis=0), np.arange(r)]
    signs = np.where(peaks < 0, -1.0, 1.0)
    return permuted @ MatrixSymbol.constant(np.diag(signs)), [int(c) for c in cols]


def construct_wavelet(
    scaling: MatrixSymbol,
    *,
    permute: bool = False,
    cfg: FactorizationConfig | None = None,
    tol: float | None = None,
    n_samples: int | None = None,
) -> FilterBank:
    """Build the wavelet symbol B of an orthogonal full-rank scaling symbol A.

    Diagonal subsymbols are handled channel by channel; otherwise
    (A0♯ | A1♯) is completed, the completed rows are projected onto the
    orthogonal complement of A and normalized by the spectral factor K of
    D = 2 (D0 D0♯ + D1 D1♯), giving B_i = 2 D_i♯ (K^-1)♯.

    Raises:
        NotOrthogonal: A0♯A0 + A1♯A1 differs from 2I by more than 10 * tol.
        CommonZero, NotUnimodular, NoConvergence: from completion or
            factorization.
        QmfViolation: the constructed bank fails verification.
    """
    tol = settings.tol if tol is None else tol
    n_samples = settings.samples if n_samples is None else n_samples
    cfg = cfg or FactorizationConfig()
    if not scaling.is_square:
        raise DimensionMismatch(f"Scaling symbol must be square, got {scaling.shape}")

    scaling_residual = first_qmf_residual(scaling, n_samples)
    if scaling_residual > 10.0 * tol:
        raise NotOrthogonal(scaling_residual, 10.0 * tol)

    a0, a1 = scaling.subsymbols()
    if _is_diagonal(a0, tol) and _is_diagonal(a1, tol):
        b0, b1 = _diagonal_branch(a0, a1)
        metadata = BankMetadata(branch="diagonal")
    else:
        b0, b1, metadata = _general_branch(
            a0, a1, cfg, tol, scaling_residual, n_samples
        )
    wavelet = MatrixSymbol.merge_subsymbols(b0, b1)

    if permute:
        wavelet, order = normalize_permutation(wavelet)
        metadata = metadata.model_copy(update={"permuted": True, "permutation": order})

    report = verify_qmf(scaling, wavelet, n_samples)
    if not report.passed(max(tol, 10.0 * scaling_residual)):
        raise QmfViolation(
            f"Constructed wavelet fails the QMF equations "
            f"(max residual {report.max_residual:.3e})",
            report.model_dump(),
        )
    logger.info(
        f"Constructed {scaling.rows}-channel wavelet via the {metadata.branch} "
        f"branch: powers {wavelet.lo}..{wavelet.hi}, "
        f"max QMF residual {report.max_residual:.2e}"
    )
    return FilterBank(scaling, wavelet, metadata, report)


def wavelet_projector(
    wavelet: MatrixSymbol, z: npt.ArrayLike, tol: float | None = None
) -> ComplexArray:
    """W(z) W♯(z) / 2 with W = (B0; B1) stacked.

    Raises:
        QmfViolation: B0♯B0 + B1♯B1 differs from 2I by more than ``tol``.
    """
    tol = settings.tol if tol is None else tol
    b0, b1 = wavelet.subsymbols()
    stacked = np.concatenate([b0.evaluate(z), b1.evaluate(z)], axis=-2)
    normal = _hermitian(stacked) @ stacked - 2.0 * np.eye(wavelet.cols)
    residual = float(np.abs(normal).max())
    if residual > tol:
        raise QmfViolation(
            f"Wavelet symbol is not normalized (residual {residual:.3e})",
            {"residual": residual, "tolerance": tol},
        )
    return 0.5 * stacked @ _hermitian(stacked)


def projector_distance(
    wavelet: MatrixSymbol,
    reference: MatrixSymbol,
    n_samples: int | None = None,
    max_shift: int = 2,
) -> tuple[float, int]:
    """Smallest max-entry distance of projectors over z**s shifts of ``reference``."""
    n_samples = settings.samples if n_samples is None else n_samples
    z = unit_circle(n_samples)
    ours = wavelet_projector(wavelet, z, tol=np.inf)
    best = (np.inf, 0)
    for shift in range(-max_shift, max_shift + 1):
        theirs = wavelet_projector(reference.shift(shift), z, tol=np.inf)
        distance = float(np.abs(ours - theirs).max())
        if distance < best[0]:
            best = (distance, shift)
    return best


def alternating_flip(scaling: MatrixSymbol) -> MatrixSymbol:
    """z * A♯(-z), a QMF wavelet only when A(z) and A(-z) commute."""
    return scaling.adjoint().modulate().shift(1)


def composition_identity_error(bank: FilterBank) -> float:
    """max || sum_n (A_{k-2n} A_{m-2n}^T + B_{k-2n} B_{m-2n}^T) / 2 - delta_km I ||."""
    a, b = bank.scaling, bank.wavelet
    lo = min(a.lo, b.lo)
    hi = max(a.hi, b.hi)
    width = hi - lo
    eye = np.eye(bank.r)
    worst = 0.0
    for k in (0, 1):
        n_range = range((k - hi) // 2 - 1, (k - lo) // 2 + 2)
        for m in range(k - width - 1, k + width + 2):
            total = np.zeros((bank.r, bank.r))
            for n in n_range:
                total += a.coefficient(k - 2 * n) @ a.coefficient(m - 2 * n).T
                total += b.coefficient(k - 2 * n) @ b.coefficient(m - 2 * n).T
            target = eye if k == m else 0.0
            worst = max(worst, float(np.abs(0.5 * total - target).max()))
    return worst
