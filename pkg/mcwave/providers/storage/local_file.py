import logging
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from mcwave.models.files import MaskFile, PyramidFile
from mcwave.models.lpmatrix import MatrixSymbol
from mcwave.models.signals import CascadeSamples, CoeffPyramid, VectorSignal
from mcwave.providers.storage.base import StorageProvider
from mcwave.utils.exceptions import DimensionMismatch, StorageError

logger = logging.getLogger(__name__)

# %.17g round-trips every float64 exactly
_CSV_FORMAT = "%.17g"


def _signal_header(r: int) -> str:
    return ",".join(f"ch{i}" for i in range(1, r + 1))


class LocalFileStorageProvider(StorageProvider):
    """Local file system storage for masks, signals, pyramids and cascades"""

    def __init__(self, root: Path | str = ".") -> None:
        self.root = Path(root)

    def _resolve(self, path: Path | str) -> Path:
        return self.root / Path(path)

    def _write_text(self, path: Path | str, text: str) -> Path:
        target = self._resolve(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text, encoding="utf-8")
        except OSError as e:
            logger.error(f"Failed to write {target}: {e}")
            raise StorageError(f"Failed to write {target}: {e}", str(target)) from e
        logger.info(f"Wrote {target}")
        return target

    def _read_text(self, path: Path | str) -> str:
        target = self._resolve(path)
        try:
            return target.read_text(encoding="utf-8")
        except OSError as e:
            logger.error(f"Failed to read {target}: {e}")
            raise StorageError(f"Failed to read {target}: {e}", str(target)) from e

    def read_mask(self, path: Path) -> MatrixSymbol:
        text = self._read_text(path)
        try:
            return MaskFile.model_validate_json(text).to_symbol()
        except ValidationError as e:
            raise StorageError(f"Malformed mask file {path}: {e}", str(path)) from e

    def write_mask(self, path: Path, symbol: MatrixSymbol, **metadata: Any) -> Path:
        if not symbol.is_square:
            raise DimensionMismatch(f"Masks must be square, got {symbol.shape}")
        document = MaskFile.from_symbol(symbol, **metadata)
        return self._write_text(path, document.model_dump_json(indent=2) + "\n")

    def read_signal(self, path: Path) -> VectorSignal:
        text = self._read_text(path)
        lines = text.splitlines()
        if not lines:
            raise StorageError(f"Signal file {path} is empty", str(path))
        header = [h.strip() for h in lines[0].split(",")]
        if header != _signal_header(len(header)).split(","):
            raise StorageError(
                f"Signal file {path} must start with a ch1,...,chr header", str(path)
            )
        try:
            samples = np.loadtxt(lines[1:], delimiter=",", ndmin=2, dtype=np.float64)
            return VectorSignal(samples.reshape(-1, len(header)))
        except (ValueError, DimensionMismatch) as e:
            raise StorageError(f"Malformed signal file {path}: {e}", str(path)) from e

    def write_signal(self, path: Path, signal: VectorSignal) -> Path:
        return self._write_csv(path, signal.samples, _signal_header(signal.r))

    def read_pyramid(self, path: Path) -> CoeffPyramid:
        text = self._read_text(path)
        try:
            return PyramidFile.model_validate_json(text).to_pyramid()
        except (ValidationError, DimensionMismatch) as e:
            raise StorageError(f"Malformed pyramid file {path}: {e}", str(path)) from e

    def write_pyramid(self, path: Path, pyramid: CoeffPyramid) -> Path:
        document = PyramidFile.from_pyramid(pyramid)
        return self._write_text(path, document.model_dump_json(indent=2) + "\n")

    def write_cascade(self, path: Path, samples: CascadeSamples) -> Path:
        r = samples.r
        entries = samples.values.reshape(len(samples.values), -1)
        columns = ["x"] + [f"f{i}{j}" for i in range(1, r + 1) for j in range(1, r + 1)]
        table = np.column_stack([samples.x, entries])
        return self._write_csv(path, table, ",".join(columns))

    def _write_csv(self, path: Path, table: np.ndarray, header: str) -> Path:
        target = self._resolve(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            np.savetxt(
                target, table, fmt=_CSV_FORMAT, delimiter=",", header=header, comments=""
            )
        except OSError as e:
            logger.error(f"Failed to write {target}: {e}")
            raise StorageError(f"Failed to write {target}: {e}", str(target)) from e
        logger.info(f"Wrote {len(table)} rows to {target}")
        return target

    def health_check(self) -> bool:
        """Check that the storage root is a writable directory"""
        if not self.root.is_dir():
            logger.error(f"Storage root is not a directory: {self.root}")
            return False
        marker = self.root / ".mcwave_health_check"
        try:
            marker.write_text("ok", encoding="utf-8")
            marker.unlink()
        except OSError as e:
            logger.error(f"Storage root is not writable: {e}")
            return False
        return True
