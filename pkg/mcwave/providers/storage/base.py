from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any

from mcwave.models.lpmatrix import MatrixSymbol
from mcwave.models.signals import CascadeSamples, CoeffPyramid, VectorSignal


class StorageProvider(ABC):
    """Abstract base class for mask, signal and pyramid persistence"""

    @abstractmethod
    def read_mask(self, path: Path) -> MatrixSymbol:
        """
        Load a mask file

        Args:
            path: Location of a MaskFile JSON document

        Returns:
            The stored symbol
        """

    @abstractmethod
    def write_mask(self, path: Path, symbol: MatrixSymbol, **metadata: Any) -> Path:
        """
        Store a symbol as a MaskFile JSON document

        Args:
            path: Destination file
            symbol: Square symbol to store
            metadata: Provenance entries recorded alongside the coefficients

        Returns:
            The path written
        """

    @abstractmethod
    def read_signal(self, path: Path) -> VectorSignal:
        """Load a CSV signal with a ch1,...,chr header"""

    @abstractmethod
    def write_signal(self, path: Path, signal: VectorSignal) -> Path:
        """Store a signal as CSV with a ch1,...,chr header"""

    @abstractmethod
    def read_pyramid(self, path: Path) -> CoeffPyramid:
        """Load a coefficient pyramid JSON document"""

    @abstractmethod
    def write_pyramid(self, path: Path, pyramid: CoeffPyramid) -> Path:
        """Store a coefficient pyramid as JSON"""

    @abstractmethod
    def write_cascade(self, path: Path, samples: CascadeSamples) -> Path:
        """
        Store cascade samples as CSV plot data

        Columns are x followed by the r*r matrix entries in row-major order.
        """

    @abstractmethod
    def health_check(self) -> bool:
        """
        Check if the storage location is accessible

        Returns:
            True if healthy, False otherwise
        """
