from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from mcwave.utils.exceptions import DimensionMismatch

FloatArray = npt.NDArray[np.float64]


def _frozen(values: npt.ArrayLike, ndim: int, name: str) -> FloatArray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != ndim:
        raise DimensionMismatch(f"{name} values must be {ndim}-dimensional, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class VectorSequence:
    """Finitely supported sequence of r-vectors, values[i] sits at index lo + i."""

    values: FloatArray
    lo: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _frozen(self.values, 2, "VectorSequence"))

    @classmethod
    def delta(cls, vector: npt.ArrayLike, index: int = 0) -> VectorSequence:
        return cls(np.atleast_2d(np.asarray(vector, dtype=np.float64)), index)

    @classmethod
    def constant(cls, vector: npt.ArrayLike, lo: int, length: int) -> VectorSequence:
        return cls(np.tile(np.asarray(vector, dtype=np.float64), (length, 1)), lo)

    @property
    def r(self) -> int:
        return int(self.values.shape[1])

    @property
    def hi(self) -> int:
        return self.lo + len(self.values) - 1

    def __len__(self) -> int:
        return len(self.values)

    def at(self, index: int) -> FloatArray:
        if self.lo <= index <= self.hi:
            return self.values[index - self.lo]
        return np.zeros(self.r)


@dataclass(frozen=True, eq=False)
class CascadeSamples:
    """Values of S^n applied to a matrix sequence, sample j at x = j * 2**-level."""

    values: FloatArray
    lo: int
    level: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _frozen(self.values, 3, "CascadeSamples"))

    @property
    def spacing(self) -> float:
        return 2.0**-self.level

    @property
    def x(self) -> FloatArray:
        return (self.lo + np.arange(len(self.values))) * self.spacing

    @property
    def r(self) -> int:
        return int(self.values.shape[1])

    def at(self, index: int) -> FloatArray:
        if 0 <= index - self.lo < len(self.values):
            return self.values[index - self.lo]
        return np.zeros(self.values.shape[1:])


@dataclass(frozen=True, eq=False)
class VectorSignal:
    """N multichannel samples, shape (N, r)."""

    samples: FloatArray

    def __post_init__(self) -> None:
        arr = _frozen(self.samples, 2, "VectorSignal")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionMismatch(f"Signal must be non-empty, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DimensionMismatch("Signal samples must be finite")
        object.__setattr__(self, "samples", arr)

    @property
    def r(self) -> int:
        return int(self.samples.shape[1])

    def __len__(self) -> int:
        return int(self.samples.shape[0])

    def energy(self) -> float:
        return float(np.sum(self.samples**2))


@dataclass(frozen=True, eq=False)
class CoeffPyramid:
    """Coarse coefficients plus per-level details, stored fine to coarse."""

    coarse: VectorSignal
    details: tuple[VectorSignal, ...] = field(default_factory=tuple)
    normalization: str = "orthonormal-1/sqrt2"

    def __post_init__(self) -> None:
        object.__setattr__(self, "details", tuple(self.details))
        levels = len(self.details)
        if levels == 0:
            return
        n = 2 * len(self.details[0])
        for j, detail in enumerate(self.details):
            if len(detail) != n >> (j + 1):
                raise DimensionMismatch(
                    f"Detail level {j + 1} has length {len(detail)}, "
                    f"expected {n >> (j + 1)}"
                )
            if detail.r != self.coarse.r:
                raise DimensionMismatch("Detail and coarse channel counts differ")
        if len(self.coarse) != n >> levels:
            raise DimensionMismatch(
                f"Coarse length {len(self.coarse)} does not match {n >> levels}"
            )

    @property
    def levels(self) -> int:
        return len(self.details)

    @property
    def r(self) -> int:
        return self.coarse.r

    @property
    def length(self) -> int:
        """Length N of the analyzed signal."""
        return len(self.coarse) << self.levels

    def energy(self) -> float:
        return self.coarse.energy() + sum(d.energy() for d in self.details)
