"""Matrix Laurent polynomials (symbols and masks)."""

from __future__ import annotations

from collections.abc import Mapping, Sequence

import numpy as np
import numpy.typing as npt

from mcwave.config.settings import settings
from mcwave.models.laurent import FloatArray, LaurentPoly
from mcwave.utils.exceptions import DimensionMismatch, NotUnimodular, ZeroArgument

ComplexArray = npt.NDArray[np.complex128]


def unit_circle(n: int, offset: float = 0.0) -> ComplexArray:
    """n equispaced points exp(2*pi*i*(k + offset)/n) on |z| = 1."""
    return np.exp(2j * np.pi * (np.arange(n) + offset) / n)


class MatrixSymbol:
    """Finite sum of coeffs[i] * z**(lo + i) with rows x cols real matrices.

    Stored coefficient-major as an array of shape (length, rows, cols).
    Leading and trailing coefficient matrices whose entries are all below the
    trim threshold are dropped on construction.
    """

    __slots__ = ("_coeffs", "_lo")

    def __init__(
        self,
        coeffs: npt.ArrayLike,
        lo: int = 0,
        *,
        trim_tol: float | None = None,
    ) -> None:
        tol = settings.trim_tol if trim_tol is None else trim_tol
        arr = np.array(coeffs, dtype=np.float64)
        if arr.ndim == 2:
            arr = arr[np.newaxis]
        if arr.ndim != 3:
            raise DimensionMismatch(
                f"Matrix symbol coefficients must be 3-dimensional, got {arr.shape}"
            )
        lo = int(lo)
        if arr.shape[0]:
            mags = np.abs(arr).reshape(arr.shape[0], -1).max(axis=1)
            threshold = tol * max(1.0, float(mags.max()))
            keep = np.flatnonzero(mags > threshold)
            if keep.size == 0:
                arr, lo = arr[:0], 0
            else:
                arr = arr[keep[0] : keep[-1] + 1]
                lo += int(keep[0])
        else:
            lo = 0
        self._coeffs = np.ascontiguousarray(arr)
        self._coeffs.setflags(write=False)
        self._lo = lo

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> MatrixSymbol:
        return cls(np.zeros((0, rows, rows if cols is None else cols)))

    @classmethod
    def identity(cls, r: int) -> MatrixSymbol:
        return cls(np.eye(r))

    @classmethod
    def constant(cls, matrix: npt.ArrayLike) -> MatrixSymbol:
        return cls(np.atleast_2d(np.asarray(matrix, dtype=np.float64)))

    @classmethod
    def from_terms(cls, terms: Mapping[int, npt.ArrayLike]) -> MatrixSymbol:
        """Build from an {exponent: matrix} mapping."""
        mats = {k: np.atleast_2d(np.asarray(v, dtype=np.float64)) for k, v in terms.items()}
        shapes = {m.shape for m in mats.values()}
        if len(shapes) != 1:
            raise DimensionMismatch(f"Inconsistent coefficient shapes: {shapes}")
        shape = shapes.pop()
        lo, hi = min(mats), max(mats)
        coeffs = np.zeros((hi - lo + 1, *shape))
        for power, mat in mats.items():
            coeffs[power - lo] = mat
        return cls(coeffs, lo)

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[LaurentPoly]]) -> MatrixSymbol:
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        if any(len(row) != cols for row in entries):
            raise DimensionMismatch("Ragged entry grid")
        nonzero = [p for row in entries for p in row if not p.is_zero]
        if not nonzero:
            return cls.zeros(rows, cols)
        lo = min(p.lo for p in nonzero)
        hi = max(p.hi for p in nonzero)
        coeffs = np.zeros((hi - lo + 1, rows, cols))
        for i, row in enumerate(entries):
            for j, p in enumerate(row):
                if not p.is_zero:
                    coeffs[p.lo - lo : p.hi - lo + 1, i, j] = p.coeffs
        return cls(coeffs, lo)

    @classmethod
    def diagonal(cls, entries: Sequence[LaurentPoly]) -> MatrixSymbol:
        n = len(entries)
        zero = LaurentPoly()
        return cls.from_entries(
            [[entries[i] if i == j else zero for j in range(n)] for i in range(n)]
        )

    @classmethod
    def block(cls, grid: Sequence[Sequence[MatrixSymbol]]) -> MatrixSymbol:
        """Assemble a block matrix; blocks in a row share rows, in a column cols."""
        nonzero = [b for row in grid for b in row if not b.is_zero]
        lo = min((b.lo for b in nonzero), default=0)
        hi = max((b.hi for b in nonzero), default=-1)
        row_sizes = [row[0].rows for row in grid]
        col_sizes = [b.cols for b in grid[0]]
        for i, row in enumerate(grid):
            for j, b in enumerate(row):
                if b.shape != (row_sizes[i], col_sizes[j]):
                    raise DimensionMismatch(
                        f"Block ({i}, {j}) has shape {b.shape}, expected "
                        f"{(row_sizes[i], col_sizes[j])}"
                    )
        coeffs = np.zeros((hi - lo + 1, sum(row_sizes), sum(col_sizes)))
        r0 = 0
        for i, row in enumerate(grid):
            c0 = 0
            for j, b in enumerate(row):
                if not b.is_zero:
                    coeffs[
                        b.lo - lo : b.hi - lo + 1,
                        r0 : r0 + row_sizes[i],
                        c0 : c0 + col_sizes[j],
                    ] = b.coeffs
                c0 += col_sizes[j]
            r0 += row_sizes[i]
        return cls(coeffs, lo)

    @property
    def coeffs(self) -> FloatArray:
        return self._coeffs

    @property
    def lo(self) -> int:
        return self._lo

    @property
    def hi(self) -> int:
        return self._lo + self._coeffs.shape[0] - 1

    @property
    def length(self) -> int:
        return int(self._coeffs.shape[0])

    @property
    def rows(self) -> int:
        return int(self._coeffs.shape[1])

    @property
    def cols(self) -> int:
        return int(self._coeffs.shape[2])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_zero(self) -> bool:
        return self.length == 0

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def powers(self) -> range:
        return range(self._lo, self.hi + 1)

    def coefficient(self, power: int) -> FloatArray:
        idx = power - self._lo
        if 0 <= idx < self.length:
            return self._coeffs[idx]
        return np.zeros(self.shape)

    def entry(self, i: int, j: int) -> LaurentPoly:
        return LaurentPoly(self._coeffs[:, i, j], self._lo)

    def entries(self) -> list[list[LaurentPoly]]:
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def __getitem__(self, key: tuple[slice | int, slice | int]) -> MatrixSymbol:
        rows, cols = key
        if isinstance(rows, int):
            rows = slice(rows, rows + 1)
        if isinstance(cols, int):
            cols = slice(cols, cols + 1)
        return MatrixSymbol(self._coeffs[:, rows, cols], self._lo)

    def max_abs(self) -> float:
        return float(np.abs(self._coeffs).max()) if self.length else 0.0

    def _aligned(self, other: MatrixSymbol) -> tuple[FloatArray, FloatArray, int]:
        if self.shape != other.shape:
            raise DimensionMismatch(f"Shapes {self.shape} and {other.shape} differ")
        present = [s for s in (self, other) if s.length]
        lo = min((s.lo for s in present), default=0)
        hi = max((s.hi for s in present), default=-1)
        size = hi - lo + 1
        left = np.zeros((size, *self.shape))
        right = np.zeros((size, *self.shape))
        if self.length:
            left[self._lo - lo : self.hi - lo + 1] = self._coeffs
        if other.length:
            right[other.lo - lo : other.hi - lo + 1] = other.coeffs
        return left, right, lo

    def __add__(self, other: MatrixSymbol) -> MatrixSymbol:
        left, right, lo = self._aligned(other)
        return MatrixSymbol(left + right, lo)

    def __sub__(self, other: MatrixSymbol) -> MatrixSymbol:
        left, right, lo = self._aligned(other)
        return MatrixSymbol(left - right, lo)

    def __neg__(self) -> MatrixSymbol:
        return MatrixSymbol(-self._coeffs, self._lo)

    def __mul__(self, value: float) -> MatrixSymbol:
        return MatrixSymbol(self._coeffs * float(value), self._lo)

    __rmul__ = __mul__

    def __truediv__(self, value: float) -> MatrixSymbol:
        return MatrixSymbol(self._coeffs / float(value), self._lo)

    def __matmul__(self, other: MatrixSymbol) -> MatrixSymbol:
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"Cannot multiply {self.shape} by {other.shape} symbols"
            )
        if self.is_zero or other.is_zero:
            return MatrixSymbol.zeros(self.rows, other.cols)
        out = np.zeros((self.length + other.length - 1, self.rows, other.cols))
        for i, coeff in enumerate(self._coeffs):
            out[i : i + other.length] += coeff @ other.coeffs
        return MatrixSymbol(out, self._lo + other.lo)

    def scale_poly(self, p: LaurentPoly) -> MatrixSymbol:
        """Multiply every entry by the scalar Laurent polynomial p."""
        return self @ (MatrixSymbol(p.coeffs[:, None, None] * np.eye(self.cols), p.lo))

    def shift(self, power: int) -> MatrixSymbol:
        """Multiply by z**power."""
        return MatrixSymbol(self._coeffs, self._lo + power)

    def transpose(self) -> MatrixSymbol:
        return MatrixSymbol(self._coeffs.transpose(0, 2, 1), self._lo)

    @property
    def T(self) -> MatrixSymbol:
        return self.transpose()

    def adjoint(self) -> MatrixSymbol:
        """A♯(z) = A(1/z)^T."""
        if self.is_zero:
            return MatrixSymbol.zeros(self.cols, self.rows)
        return MatrixSymbol(self._coeffs[::-1].transpose(0, 2, 1), -self.hi)

    def modulate(self) -> MatrixSymbol:
        """A(-z)."""
        signs = np.where(np.arange(self._lo, self.hi + 1) % 2 == 0, 1.0, -1.0)
        return MatrixSymbol(self._coeffs * signs[:, None, None], self._lo)

    def upsample(self) -> MatrixSymbol:
        """A(z**2)."""
        if self.is_zero:
            return self
        out = np.zeros((2 * self.length - 1, *self.shape))
        out[::2] = self._coeffs
        return MatrixSymbol(out, 2 * self._lo)

    def evaluate(self, z: npt.ArrayLike) -> ComplexArray:
        """Value at z (scalar -> (rows, cols); array -> (..., rows, cols))."""
        points = np.asarray(z, dtype=np.complex128)
        if np.any(points == 0):
            raise ZeroArgument()
        if self.is_zero:
            return np.zeros((*points.shape, *self.shape), dtype=np.complex128)
        powers = points[..., None] ** np.arange(self._lo, self.hi + 1)
        return np.tensordot(powers, self._coeffs, axes=([-1], [0]))

    __call__ = evaluate

    def sample_unit_circle(self, n: int) -> ComplexArray:
        return self.evaluate(unit_circle(n))

    def subsymbols(self) -> tuple[MatrixSymbol, MatrixSymbol]:
        """(A0, A1) with A(z) = A0(z**2) + z*A1(z**2)."""
        if self.is_zero:
            return MatrixSymbol.zeros(self.rows, self.cols), MatrixSymbol.zeros(
                self.rows, self.cols
            )
        start_even = self._lo + (self._lo % 2)
        start_odd = self._lo + 1 - (self._lo % 2)
        even = self._coeffs[start_even - self._lo :: 2]
        odd = self._coeffs[start_odd - self._lo :: 2]
        return (
            MatrixSymbol(even.reshape(-1, *self.shape), start_even // 2),
            MatrixSymbol(odd.reshape(-1, *self.shape), (start_odd - 1) // 2),
        )

    @classmethod
    def merge_subsymbols(cls, even: MatrixSymbol, odd: MatrixSymbol) -> MatrixSymbol:
        """A0(z**2) + z*A1(z**2)."""
        return even.upsample() + odd.upsample().shift(1)

    def det(self) -> LaurentPoly:
        """Determinant by cofactor expansion over the rows."""
        if not self.is_square:
            raise DimensionMismatch(f"Determinant of non-square {self.shape} symbol")
        return _cofactor_det(self.entries(), list(range(self.rows)), list(range(self.cols)))

    def adjugate(self) -> MatrixSymbol:
        if not self.is_square:
            raise DimensionMismatch(f"Adjugate of non-square {self.shape} symbol")
        n = self.rows
        if n == 1:
            return MatrixSymbol.identity(1)
        grid = self.entries()
        memo: dict[tuple[tuple[int, ...], tuple[int, ...]], LaurentPoly] = {}
        cof = [[LaurentPoly() for _ in range(n)] for _ in range(n)]
        for i in range(n):
            rows = [k for k in range(n) if k != i]
            for j in range(n):
                cols = [k for k in range(n) if k != j]
                minor = _cofactor_det(grid, rows, cols, memo)
                cof[j][i] = minor if (i + j) % 2 == 0 else -minor
        return MatrixSymbol.from_entries(cof)

    def det_scale(self) -> float:
        """Hadamard-type bound on det coefficients: product of row l1 norms."""
        return float(np.prod(np.abs(self._coeffs).sum(axis=(0, 2)))) if self.length else 0.0

    def inverse_unimodular(self, unit_tol: float | None = None) -> MatrixSymbol:
        """Inverse of a symbol whose determinant is a unit monomial c*z**k."""
        d = self.det()
        unit = d.unit_monomial(unit_tol, self.det_scale())
        if unit is None:
            raise NotUnimodular(
                f"Determinant {d!r} is not a unit monomial",
                {"determinant_span": d.span, "determinant_max": d.max_abs()},
            )
        value, power = unit
        return (self.adjugate() / value).shift(-power)

    def allclose(self, other: MatrixSymbol, atol: float = 1e-10) -> bool:
        left, right, _ = self._aligned(other)
        return bool(np.allclose(left, right, rtol=0.0, atol=atol))

    def max_coeff_distance(self, other: MatrixSymbol) -> float:
        left, right, _ = self._aligned(other)
        return float(np.abs(left - right).max()) if left.size else 0.0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixSymbol):
            return NotImplemented
        return (
            self._lo == other.lo
            and self._coeffs.shape == other.coeffs.shape
            and np.array_equal(self._coeffs, other.coeffs)
        )

    def __hash__(self) -> int:
        return hash((self._lo, self._coeffs.shape, self._coeffs.tobytes()))

    def __repr__(self) -> str:
        return (
            f"MatrixSymbol(shape={self.shape}, powers={self._lo}..{self.hi}, "
            f"max={self.max_abs():.4g})"
        )


def _cofactor_det(
    grid: list[list[LaurentPoly]],
    rows: list[int],
    cols: list[int],
    memo: dict[tuple[tuple[int, ...], tuple[int, ...]], LaurentPoly] | None = None,
) -> LaurentPoly:
    """Laplace expansion along the first of ``rows``, memoized on column subsets."""
    memo = {} if memo is None else memo
    key = (tuple(rows), tuple(cols))
    if key in memo:
        return memo[key]
    if len(rows) == 1:
        result = grid[rows[0]][cols[0]]
    else:
        result = LaurentPoly()
        head, rest = rows[0], rows[1:]
        for pos, col in enumerate(cols):
            entry = grid[head][col]
            if entry.is_zero:
                continue
            minor = _cofactor_det(grid, rest, cols[:pos] + cols[pos + 1 :], memo)
            term = entry * minor
            result = result + term if pos % 2 == 0 else result - term
    memo[key] = result
    return result


def ms_mul(a: MatrixSymbol, b: MatrixSymbol) -> MatrixSymbol:
    return a @ b


def ms_adjoint(a: MatrixSymbol) -> MatrixSymbol:
    return a.adjoint()


def ms_det(a: MatrixSymbol) -> LaurentPoly:
    return a.det()


def ms_inv_unimodular(a: MatrixSymbol, unit_tol: float | None = None) -> MatrixSymbol:
    return a.inverse_unimodular(unit_tol)


def ms_subsymbols(a: MatrixSymbol) -> tuple[MatrixSymbol, MatrixSymbol]:
    return a.subsymbols()


def ms_merge_subsymbols(even: MatrixSymbol, odd: MatrixSymbol) -> MatrixSymbol:
    if even.shape != odd.shape:
        raise DimensionMismatch(
            f"Subsymbol shapes {even.shape} and {odd.shape} differ"
        )
    return MatrixSymbol.merge_subsymbols(even, odd)


def ms_eval(a: MatrixSymbol, z: npt.ArrayLike) -> ComplexArray:
    return a.evaluate(z)

