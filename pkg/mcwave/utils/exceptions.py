from typing import Any


class McwaveError(Exception):
    """Base exception for filter bank construction and transform errors"""

    error_code = "MCWAVE_ERROR"
    exit_code = 1

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> dict[str, Any]:
        return {
            "error": self.error_code,
            "message": self.message,
            "details": self.details or None,
        }


class InternalError(McwaveError):
    """Exception reported for unexpected failures outside the hierarchy"""

    error_code = "INTERNAL_ERROR"
    exit_code = 1


class NumericError(McwaveError):
    """Exception raised when a numeric or algorithmic step fails"""

    error_code = "NUMERIC_ERROR"
    exit_code = 1


class UsageError(McwaveError):
    """Exception raised for malformed input shapes, files or options"""

    error_code = "USAGE_ERROR"
    exit_code = 2


class ZeroArgument(NumericError):
    """Exception raised when a Laurent polynomial is evaluated at z = 0"""

    error_code = "ZeroArgument"

    def __init__(self, message: str = "Laurent polynomials are undefined at z = 0"):
        super().__init__(message)


class CommonZero(NumericError):
    """Exception raised when a Bezout identity has no Laurent solution"""

    error_code = "CommonZero"


class NotDivisible(NumericError):
    """Exception raised when an exact division leaves a remainder"""

    error_code = "NotDivisible"

    def __init__(self, message: str, remainder: float | None = None):
        super().__init__(message, {"remainder": remainder} if remainder else None)
        self.remainder = remainder


class NotUnimodular(NumericError):
    """Exception raised when a determinant is not a unit monomial"""

    error_code = "NotUnimodular"


class BlockStructureViolation(NumericError):
    """Exception raised when the completion block structure is lost"""

    error_code = "BlockStructureViolation"

    def __init__(self, deviation: float, tolerance: float):
        super().__init__(
            f"Completion block structure deviates by {deviation:.3e} "
            f"(tolerance {tolerance:.1e})",
            {"deviation": deviation, "tolerance": tolerance},
        )
        self.deviation = deviation


class NotParahermitian(NumericError):
    """Exception raised when M♯ differs from M"""

    error_code = "NotParahermitian"


class NotPositiveDefinite(NumericError):
    """Exception raised when a symbol is not positive definite on |z| = 1"""

    error_code = "NotPositiveDefinite"

    def __init__(self, message: str, min_eigenvalue: float | None = None):
        super().__init__(
            message,
            {"min_eigenvalue": min_eigenvalue} if min_eigenvalue is not None else None,
        )
        self.min_eigenvalue = min_eigenvalue


class NoConvergence(NumericError):
    """Exception raised when the Bauer iteration does not stabilize"""

    error_code = "NoConvergence"

    def __init__(self, rows: int, difference: float):
        super().__init__(
            f"Bauer factorization did not converge after {rows} block rows "
            f"(last row difference {difference:.3e})",
            {"rows": rows, "difference": difference},
        )
        self.rows = rows


class NotInterpolatory(NumericError):
    """Exception raised when a symbol is not interpolatory of full rank"""

    error_code = "NotInterpolatory"


class NotOrthogonal(NumericError):
    """Exception raised when A0♯A0 + A1♯A1 differs from 2I"""

    error_code = "NotOrthogonal"

    def __init__(self, residual: float, tolerance: float):
        super().__init__(
            f"Scaling symbol is not orthogonal: residual {residual:.3e} "
            f"exceeds {tolerance:.1e}",
            {"residual": residual, "tolerance": tolerance},
        )
        self.residual = residual


class QmfViolation(NumericError):
    """Exception raised when a constructed bank fails the QMF equations"""

    error_code = "QmfViolation"


class BankNotVerified(NumericError):
    """Exception raised when a transform is requested with a non-QMF bank"""

    error_code = "BankNotVerified"


class DimensionMismatch(UsageError):
    """Exception raised when symbol or signal shapes are incompatible"""

    error_code = "DimensionMismatch"


class LengthNotDivisible(UsageError):
    """Exception raised when a signal length does not allow the requested depth"""

    error_code = "LengthNotDivisible"

    def __init__(self, length: int, levels: int):
        super().__init__(
            f"Signal length {length} is not divisible by 2**{levels}",
            {"length": length, "levels": levels},
        )
        self.length = length
        self.levels = levels


class StorageError(UsageError):
    """Exception raised when reading or writing a file fails"""

    error_code = "StorageError"

    def __init__(self, message: str, path: str | None = None):
        super().__init__(message, {"path": path} if path else None)
        self.path = path


class ConfigurationError(UsageError):
    """Exception raised when configuration is invalid"""

    error_code = "ConfigurationError"


class CommandLineError(UsageError):
    """Exception raised when the command line cannot be parsed"""

    error_code = "CommandLineError"

    def __init__(self, message: str, usage: str | None = None):
        super().__init__(message, {"usage": usage} if usage else None)
        self.usage = usage
