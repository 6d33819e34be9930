from __future__ import annotations

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from mcwave.models.lpmatrix import MatrixSymbol
from mcwave.models.signals import CoeffPyramid, VectorSignal


class MaskCoefficient(BaseModel):
    """One coefficient matrix of a mask, row-major"""

    k: int = Field(..., description="Exponent of z")
    m: list[list[float]] = Field(..., description="r x r real matrix, row-major")


class MaskMetadata(BaseModel):
    """Provenance of a stored mask; unknown keys are preserved"""

    model_config = ConfigDict(extra="allow")

    provenance: str | None = Field(None, description="Command or table that produced the mask")
    normalization: str | None = Field(None, description="Coefficient normalization")
    shift: int | None = Field(None, description="Exponent shift applied on output")


class MaskFile(BaseModel):
    """JSON schema of a stored MatrixSymbol"""

    r: int = Field(..., ge=1, description="Number of channels")
    coeffs: list[MaskCoefficient] = Field(
        default_factory=list, description="Coefficients by strictly increasing k"
    )
    metadata: MaskMetadata = Field(default_factory=MaskMetadata, description="Provenance")

    @field_validator("coeffs")
    @classmethod
    def validate_increasing(cls, v: list[MaskCoefficient]) -> list[MaskCoefficient]:
        ks = [c.k for c in v]
        if any(b <= a for a, b in zip(ks, ks[1:], strict=False)):
            raise ValueError(f"Coefficient indices must be strictly increasing, got {ks}")
        return v

    @model_validator(mode="after")
    def validate_square(self) -> MaskFile:
        for c in self.coeffs:
            if len(c.m) != self.r or any(len(row) != self.r for row in c.m):
                raise ValueError(f"Coefficient k={c.k} is not {self.r} x {self.r}")
            if not np.all(np.isfinite(c.m)):
                raise ValueError(f"Coefficient k={c.k} has non-finite entries")
        return self

    @classmethod
    def from_symbol(cls, symbol: MatrixSymbol, **metadata: Any) -> MaskFile:
        return cls(
            r=symbol.rows,
            coeffs=[
                MaskCoefficient(k=k, m=symbol.coefficient(k).tolist())
                for k in symbol.powers()
            ],
            metadata=MaskMetadata(**metadata),
        )

    def to_symbol(self) -> MatrixSymbol:
        if not self.coeffs:
            return MatrixSymbol.zeros(self.r)
        return MatrixSymbol.from_terms({c.k: c.m for c in self.coeffs})


class PyramidFile(BaseModel):
    """JSON schema of a CoeffPyramid; details are stored fine to coarse"""

    r: int = Field(..., ge=1, description="Number of channels")
    length: int = Field(..., ge=1, description="Length N of the analyzed signal")
    levels: int = Field(..., ge=0, description="Decomposition depth L")
    normalization: str = Field("orthonormal-1/sqrt2", description="Filter scaling")
    coarse: list[list[float]] = Field(..., description="N / 2**L coarse vectors")
    details: list[list[list[float]]] = Field(
        default_factory=list, description="Detail vectors, level 1 (length N/2) first"
    )

    @model_validator(mode="after")
    def validate_lengths(self) -> PyramidFile:
        if len(self.details) != self.levels:
            raise ValueError(f"Expected {self.levels} detail levels, got {len(self.details)}")
        if self.length % (1 << self.levels):
            raise ValueError(f"Length {self.length} is not divisible by 2**{self.levels}")
        if len(self.coarse) != self.length >> self.levels:
            raise ValueError("Coarse length does not match the recorded signal length")
        for j, detail in enumerate(self.details):
            if len(detail) != self.length >> (j + 1):
                raise ValueError(f"Detail level {j + 1} has the wrong length")
        rows = [row for block in (self.coarse, *self.details) for row in block]
        if any(len(row) != self.r for row in rows):
            raise ValueError(f"All coefficient vectors must have {self.r} entries")
        return self

    @classmethod
    def from_pyramid(cls, pyramid: CoeffPyramid) -> PyramidFile:
        return cls(
            r=pyramid.r,
            length=pyramid.length,
            levels=pyramid.levels,
            normalization=pyramid.normalization,
            coarse=pyramid.coarse.samples.tolist(),
            details=[d.samples.tolist() for d in pyramid.details],
        )

    def to_pyramid(self) -> CoeffPyramid:
        return CoeffPyramid(
            VectorSignal(np.array(self.coarse, dtype=np.float64)),
            tuple(VectorSignal(np.array(d, dtype=np.float64)) for d in self.details),
            self.normalization,
        )
