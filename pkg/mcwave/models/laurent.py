"""Scalar Laurent polynomials with real coefficients."""

from __future__ import annotations

from collections.abc import Iterable
from typing import Literal

import numpy as np
import numpy.typing as npt
from numpy.polynomial import polynomial as npoly

from mcwave.config.settings import settings
from mcwave.utils.exceptions import NotDivisible, ZeroArgument

ArrayLike = npt.ArrayLike
FloatArray = npt.NDArray[np.float64]


def _trim(coeffs: FloatArray, lo: int, tol: float) -> tuple[FloatArray, int]:
    if coeffs.size == 0:
        return coeffs, 0
    threshold = tol * max(1.0, float(np.abs(coeffs).max()))
    keep = np.flatnonzero(np.abs(coeffs) > threshold)
    if keep.size == 0:
        return np.zeros(0), 0
    first, last = int(keep[0]), int(keep[-1])
    return coeffs[first : last + 1].copy(), lo + first


class LaurentPoly:
    """Finite sum of coeffs[i] * z**(lo + i).

    Coefficients at either end whose magnitude is at most ``trim_tol`` times
    the largest coefficient (or ``trim_tol`` itself for small polynomials) are
    dropped on construction, so every result of an arithmetic operation is
    trimmed. The zero polynomial has empty ``coeffs`` and ``lo == 0``.
    """

    __slots__ = ("_coeffs", "_lo")

    def __init__(
        self,
        coeffs: ArrayLike = (),
        lo: int = 0,
        *,
        trim_tol: float | None = None,
    ) -> None:
        tol = settings.trim_tol if trim_tol is None else trim_tol
        arr = np.asarray(coeffs, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(arr)):
            raise ValueError("Laurent polynomial coefficients must be finite")
        self._coeffs, self._lo = _trim(arr, int(lo), tol)
        self._coeffs.setflags(write=False)

    @classmethod
    def zero(cls) -> LaurentPoly:
        return cls()

    @classmethod
    def constant(cls, value: float) -> LaurentPoly:
        return cls([value])

    @classmethod
    def monomial(cls, power: int, value: float = 1.0) -> LaurentPoly:
        return cls([value], power)

    @classmethod
    def from_terms(cls, terms: dict[int, float]) -> LaurentPoly:
        """Build from an {exponent: coefficient} mapping."""
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        coeffs = np.zeros(hi - lo + 1)
        for power, value in terms.items():
            coeffs[power - lo] += value
        return cls(coeffs, lo)

    @classmethod
    def from_roots(cls, roots: Iterable[float], scale: float = 1.0) -> LaurentPoly:
        return cls(scale * npoly.polyfromroots(list(roots)))

    @property
    def coeffs(self) -> FloatArray:
        return self._coeffs

    @property
    def lo(self) -> int:
        return self._lo

    @property
    def hi(self) -> int:
        """Highest exponent; ``lo - 1`` for the zero polynomial."""
        return self._lo + len(self._coeffs) - 1

    @property
    def span(self) -> int:
        return len(self._coeffs)

    @property
    def is_zero(self) -> bool:
        return self._coeffs.size == 0

    def coefficient(self, power: int) -> float:
        idx = power - self._lo
        if 0 <= idx < len(self._coeffs):
            return float(self._coeffs[idx])
        return 0.0

    def max_abs(self) -> float:
        return float(np.abs(self._coeffs).max()) if self._coeffs.size else 0.0

    def _aligned(self, other: LaurentPoly) -> tuple[FloatArray, FloatArray, int]:
        if self.is_zero:
            return np.zeros_like(other.coeffs), other.coeffs, other.lo
        if other.is_zero:
            return self._coeffs, np.zeros_like(self._coeffs), self._lo
        lo = min(self._lo, other.lo)
        hi = max(self.hi, other.hi)
        left = np.zeros(hi - lo + 1)
        right = np.zeros(hi - lo + 1)
        left[self._lo - lo : self._lo - lo + self.span] = self._coeffs
        right[other.lo - lo : other.lo - lo + other.span] = other.coeffs
        return left, right, lo

    def __add__(self, other: LaurentPoly | float) -> LaurentPoly:
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(float(other))
        left, right, lo = self._aligned(other)
        return LaurentPoly(left + right, lo)

    __radd__ = __add__

    def __sub__(self, other: LaurentPoly | float) -> LaurentPoly:
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(float(other))
        left, right, lo = self._aligned(other)
        return LaurentPoly(left - right, lo)

    def __rsub__(self, other: float) -> LaurentPoly:
        return LaurentPoly.constant(float(other)) - self

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly(-self._coeffs, self._lo)

    def __mul__(self, other: LaurentPoly | float) -> LaurentPoly:
        if not isinstance(other, LaurentPoly):
            return LaurentPoly(self._coeffs * float(other), self._lo)
        if self.is_zero or other.is_zero:
            return LaurentPoly()
        return LaurentPoly(np.convolve(self._coeffs, other.coeffs), self._lo + other.lo)

    __rmul__ = __mul__

    def __truediv__(self, value: float) -> LaurentPoly:
        return LaurentPoly(self._coeffs / float(value), self._lo)

    def __pow__(self, exponent: int) -> LaurentPoly:
        if exponent < 0:
            raise ValueError("Only non-negative powers are supported")
        result = LaurentPoly.constant(1.0)
        for _ in range(exponent):
            result = result * self
        return result

    def shift(self, power: int) -> LaurentPoly:
        """Multiply by z**power."""
        return LaurentPoly(self._coeffs, self._lo + power)

    def adjoint(self) -> LaurentPoly:
        """p♯(z) = p(1/z)."""
        if self.is_zero:
            return LaurentPoly()
        return LaurentPoly(self._coeffs[::-1], -self.hi)

    def modulate(self) -> LaurentPoly:
        """p(-z)."""
        signs = np.where((self._lo + np.arange(self.span)) % 2 == 0, 1.0, -1.0)
        return LaurentPoly(self._coeffs * signs, self._lo)

    def upsample(self) -> LaurentPoly:
        """p(z**2)."""
        if self.is_zero:
            return LaurentPoly()
        coeffs = np.zeros(2 * self.span - 1)
        coeffs[::2] = self._coeffs
        return LaurentPoly(coeffs, 2 * self._lo)

    def __call__(self, z: ArrayLike) -> npt.NDArray[np.complex128] | complex:
        return self.evaluate(z)

    def evaluate(self, z: ArrayLike) -> npt.NDArray[np.complex128] | complex:
        points = np.asarray(z, dtype=np.complex128)
        if np.any(points == 0):
            raise ZeroArgument()
        if self.is_zero:
            values = np.zeros_like(points)
        else:
            values = npoly.polyval(points, self._coeffs) * points**self._lo
        return complex(values) if values.ndim == 0 else values

    def unit_monomial(
        self, tol: float | None = None, scale: float = 1.0
    ) -> tuple[float, int] | None:
        """Return (c, k) if p is c*z**k up to relative ``tol``, else None.

        Other coefficients must stay below tol * max(1, |c|, scale); pass the
        magnitude of the terms that produced p as ``scale``. They must also
        stay below sqrt(tol) * |c|, so a large ``scale`` never admits a
        polynomial with a genuine second term.
        """
        tol = settings.unit_tol if tol is None else tol
        if self.is_zero:
            return None
        idx = int(np.argmax(np.abs(self._coeffs)))
        lead = float(self._coeffs[idx])
        if abs(lead) <= tol * max(1.0, abs(lead)):
            return None
        rest = np.delete(self._coeffs, idx)
        if rest.size:
            rest_max = float(np.abs(rest).max())
            if rest_max > tol * max(1.0, abs(lead), scale):
                return None
            if rest_max > np.sqrt(tol) * abs(lead):
                return None
        return lead, self._lo + idx

    def exact_div(self, divisor: LaurentPoly, tol: float | None = None) -> LaurentPoly:
        """Quotient q with q * divisor == self, or NotDivisible."""
        tol = settings.trim_tol if tol is None else tol
        if divisor.is_zero:
            raise NotDivisible("Division by the zero polynomial")
        if self.is_zero:
            return LaurentPoly()
        quotient, remainder = npoly.polydiv(self._coeffs, divisor.coeffs)
        residual = float(np.abs(remainder).max()) if remainder.size else 0.0
        if residual > tol * max(1.0, self.max_abs()):
            raise NotDivisible(
                f"{divisor!r} does not divide {self!r} (remainder {residual:.3e})",
                remainder=residual,
            )
        return LaurentPoly(quotient, self._lo - divisor.lo)

    def allclose(self, other: LaurentPoly | float, atol: float = 1e-10) -> bool:
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(float(other))
        left, right, _ = self._aligned(other)
        return bool(np.allclose(left, right, rtol=0.0, atol=atol))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._lo == other.lo and np.array_equal(self._coeffs, other.coeffs)

    def __hash__(self) -> int:
        return hash((self._lo, self._coeffs.tobytes()))

    def __repr__(self) -> str:
        if self.is_zero:
            return "LaurentPoly(0)"
        terms = " + ".join(
            f"{c:.6g}*z^{self._lo + i}" for i, c in enumerate(self._coeffs) if c != 0.0
        )
        return f"LaurentPoly({terms})"


def lp_ring_ops(
    p: LaurentPoly,
    q: LaurentPoly | float,
    op: Literal["add", "sub", "mul", "scale"],
) -> LaurentPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "scale":
        if isinstance(q, LaurentPoly):
            raise TypeError("scale expects a real factor")
        return p * float(q)
    raise ValueError(f"Unknown ring operation: {op}")


def lp_adjoint(p: LaurentPoly) -> LaurentPoly:
    return p.adjoint()


def lp_eval(p: LaurentPoly, z: ArrayLike) -> npt.NDArray[np.complex128] | complex:
    return p.evaluate(z)


def lp_exact_div(
    p: LaurentPoly, d: LaurentPoly, tol: float | None = None
) -> LaurentPoly:
    return p.exact_div(d, tol)


ONE_PLUS_Z = LaurentPoly([1.0, 1.0])
ONE_PLUS_Z_INV = LaurentPoly([1.0, 1.0], -1)
