import logging

import numpy as np
import numpy.typing as npt

from mcwave.config.settings import settings
from mcwave.models.bank import FilterBank, QmfReport
from mcwave.models.lpmatrix import MatrixSymbol
from mcwave.models.signals import CoeffPyramid, VectorSignal
from mcwave.services.mcw import verify_qmf
from mcwave.utils.exceptions import (
    BankNotVerified,
    DimensionMismatch,
    LengthNotDivisible,
)

logger = logging.getLogger(__name__)

NORMALIZATION = "orthonormal-1/sqrt2"
_SCALE = 1.0 / np.sqrt(2.0)


def ensure_verified(
    bank: FilterBank, tol: float | None = None, n_samples: int | None = None
) -> QmfReport:
    """Return the bank's QMF report, computing it if missing.

    Raises:
        BankNotVerified: a residual exceeds ``tol``.
    """
    tol = settings.tol if tol is None else tol
    report = bank.report or verify_qmf(bank.scaling, bank.wavelet, n_samples)
    if not report.passed(tol):
        raise BankNotVerified(
            f"Filter bank fails the QMF equations (max residual "
            f"{report.max_residual:.3e} > {tol:.1e})",
            report.model_dump(),
        )
    return report


def _analysis_step(
    mask: MatrixSymbol, c: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    """out_k = sum_i mask_i^T c_{(2k + i) mod N} / sqrt(2)."""
    n = len(c)
    half = np.arange(n // 2)
    out = np.zeros((n // 2, c.shape[1]))
    for power, coeff in zip(mask.powers(), mask.coeffs, strict=True):
        out += c[(2 * half + power) % n] @ coeff
    return out * _SCALE


def _synthesis_step(
    mask: MatrixSymbol, coarse: npt.NDArray[np.float64], out: npt.NDArray[np.float64]
) -> None:
    """out_{(2n + i) mod N} += mask_i coarse_n / sqrt(2), in place."""
    n = len(out)
    idx = 2 * np.arange(len(coarse))
    for power, coeff in zip(mask.powers(), mask.coeffs, strict=True):
        np.add.at(out, (idx + power) % n, (coarse @ coeff.T) * _SCALE)


def analyze(
    bank: FilterBank,
    signal: VectorSignal,
    levels: int,
    *,
    tol: float | None = None,
    n_samples: int | None = None,
) -> CoeffPyramid:
    """Periodic multilevel decomposition with orthonormal 1/sqrt(2) scaling.

    Raises:
        LengthNotDivisible: len(signal) is not a multiple of 2**levels.
        DimensionMismatch: channel counts differ.
        BankNotVerified: the bank fails the QMF equations.
    """
    if levels < 1:
        raise DimensionMismatch(f"At least one level is required, got {levels}")
    if signal.r != bank.r:
        raise DimensionMismatch(
            f"Signal has {signal.r} channels, filter bank has {bank.r}"
        )
    if len(signal) % (1 << levels):
        raise LengthNotDivisible(len(signal), levels)
    ensure_verified(bank, tol, n_samples)

    current = np.array(signal.samples)
    details = []
    for _ in range(levels):
        details.append(VectorSignal(_analysis_step(bank.wavelet, current)))
        current = _analysis_step(bank.scaling, current)
    logger.debug(f"Analyzed {len(signal)} x {signal.r} signal over {levels} levels")
    return CoeffPyramid(VectorSignal(current), tuple(details), NORMALIZATION)


def synthesize(
    bank: FilterBank,
    pyramid: CoeffPyramid,
    *,
    tol: float | None = None,
    n_samples: int | None = None,
) -> VectorSignal:
    """Inverse of ``analyze``.

    Raises:
        DimensionMismatch: pyramid and bank channel counts differ.
        BankNotVerified: the bank fails the QMF equations.
    """
    if pyramid.r != bank.r:
        raise DimensionMismatch(
            f"Pyramid has {pyramid.r} channels, filter bank has {bank.r}"
        )
    ensure_verified(bank, tol, n_samples)

    current = np.array(pyramid.coarse.samples)
    for detail in reversed(pyramid.details):
        out = np.zeros((2 * len(current), bank.r))
        _synthesis_step(bank.scaling, current, out)
        _synthesis_step(bank.wavelet, detail.samples, out)
        current = out
    return VectorSignal(current)
