from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

from pydantic import BaseModel, Field, field_validator

from mcwave.config.settings import Settings, settings
from mcwave.models.lpmatrix import MatrixSymbol
from mcwave.utils.exceptions import DimensionMismatch


class FactorizationConfig(BaseModel):
    """Bauer spectral factorization parameters"""

    bauer_block_count: int = Field(
        default_factory=lambda: settings.bauer_n,
        ge=2,
        description="Initial number of block rows of the Toeplitz Cholesky",
    )
    conv_tol: float = Field(
        default_factory=lambda: settings.bauer_conv_tol,
        gt=0,
        description="Successive block-row difference accepted as converged",
    )
    max_doublings: int = Field(
        default_factory=lambda: settings.bauer_max_doublings,
        ge=0,
        description="How often the block row horizon may double",
    )
    fact_tol: float = Field(
        default_factory=lambda: settings.fact_tol,
        gt=0,
        description="Residual gate on K K♯ - D in max coefficient norm",
    )
    pd_tol: float = Field(
        default_factory=lambda: settings.pd_tol,
        gt=0,
        description="Smallest admissible unit-circle eigenvalue",
    )

    @classmethod
    def from_settings(cls, settings_obj: Settings) -> FactorizationConfig:
        return cls(
            bauer_block_count=settings_obj.bauer_n,
            conv_tol=settings_obj.bauer_conv_tol,
            max_doublings=settings_obj.bauer_max_doublings,
            fact_tol=settings_obj.fact_tol,
            pd_tol=settings_obj.pd_tol,
        )


class FactorInfo(BaseModel):
    """Diagnostics of a spectral factorization"""

    rows: int = Field(..., description="Block rows of the Cholesky recursion")
    row_difference: float = Field(
        ..., description="Difference between the last two block rows"
    )
    residual: float = Field(..., description="max coefficient of K K♯ - D")
    min_eigenvalue: float = Field(
        ..., description="Smallest eigenvalue of D on the sampled unit circle"
    )
    zero_orders: list[int] | None = Field(
        None, description="Per-column order of the extracted (1+z) factor"
    )
    shift: int = Field(0, description="Integer shift applied to the factor")


class QmfReport(BaseModel):
    """Residuals of the three QMF equations on the sampled unit circle"""

    scaling_residual: float = Field(
        ..., description="max ||A0♯A0 + A1♯A1 - 2I||"
    )
    cross_residual: float = Field(..., description="max ||A0♯B0 + A1♯B1||")
    wavelet_residual: float = Field(
        ..., description="max ||B0♯B0 + B1♯B1 - 2I||"
    )
    vanishing_moment: float | None = Field(
        None, description="||B(1)||, zero for a wavelet with a vanishing moment"
    )
    samples: int = Field(..., gt=0, description="Number of unit-circle samples")

    @property
    def max_residual(self) -> float:
        return max(self.scaling_residual, self.cross_residual, self.wavelet_residual)

    def passed(self, tol: float) -> bool:
        return self.max_residual <= tol


class BankMetadata(BaseModel):
    """Provenance of a constructed filter bank"""

    branch: Literal["diagonal", "general", "external"] = Field(
        "external", description="Which construction path produced B"
    )
    permuted: bool = Field(False, description="Signed permutation applied to B")
    permutation: list[int] | None = Field(
        None, description="Source column of B for each output column"
    )
    normalization: str = Field(
        "orthonormal-1/sqrt2",
        description="Filter scaling used by the transform",
    )
    completion_det_error: float | None = Field(
        None, description="max |det L(z) - 1| of the completion"
    )
    factor: FactorInfo | None = Field(None, description="Step factorization info")

    @field_validator("permutation")
    @classmethod
    def _is_permutation(cls, value: list[int] | None) -> list[int] | None:
        if value is not None and sorted(value) != list(range(len(value))):
            raise ValueError("permutation must list each column exactly once")
        return value


@dataclass(frozen=True)
class FilterBank:
    """Scaling symbol A and wavelet symbol B for r channels"""

    scaling: MatrixSymbol
    wavelet: MatrixSymbol
    metadata: BankMetadata = field(default_factory=BankMetadata)
    report: QmfReport | None = None

    def __post_init__(self) -> None:
        if not self.scaling.is_square or self.scaling.shape != self.wavelet.shape:
            raise DimensionMismatch(
                f"Scaling {self.scaling.shape} and wavelet {self.wavelet.shape} "
                "symbols must be square and of equal size"
            )

    @property
    def r(self) -> int:
        return self.scaling.rows
