"""
Exact Linear Algebra Module
Dense d x d matrices over F_p or Q (ExactMatrix) and over the polynomial
ring (PolyMatrix): products, commutators, nilpotency testing and truncated
exponentials of nilpotent matrices.

Both classes keep their entries in read-only numpy object arrays so that
numpy's dot/kron run on exact Python scalars and polynomials. Indices are
0-based here; files and reports convert to 1-based.
"""

import math
from typing import Dict, Iterable, List, Mapping, Tuple

import numpy as np

from polyhopf import SparsePolynomial
from scalars import FieldSpec, Scalar


class DimensionMismatchError(ValueError):
    """Raised when matrices of different dimension or field are combined."""


class NotNilpotentError(ValueError):
    """Raised when A^d != 0 for a d x d matrix that must be nilpotent."""


class FactorialNotInvertibleError(ValueError):
    """Raised when some k! with k < d vanishes in the field (p <= d - 1)."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class ExactMatrix:
    """Immutable d x d matrix of canonical Scalars."""

    __slots__ = ('field', '_data', '_hash')

    def __init__(self, rows, field: FieldSpec):
        arr = np.array(rows, dtype=object)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise DimensionMismatchError(f"expected a nonempty square matrix, got shape {arr.shape}")
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            out[idx] = field.element(v)
        self._set(out, field)

    def _set(self, arr: np.ndarray, field: FieldSpec) -> None:
        self.field = field
        self._data = _frozen(arr)
        self._hash = None

    @classmethod
    def _wrap(cls, arr: np.ndarray, field: FieldSpec) -> 'ExactMatrix':
        """Wrap an object array produced by exact arithmetic, reducing mod p."""
        if field.is_prime:
            arr = arr % field.p
        obj = object.__new__(cls)
        obj._set(np.array(arr, dtype=object), field)
        return obj

    # Constructors

    @classmethod
    def zeros(cls, d: int, field: FieldSpec) -> 'ExactMatrix':
        return cls([[field.zero] * d for _ in range(d)], field)

    @classmethod
    def identity(cls, d: int, field: FieldSpec) -> 'ExactMatrix':
        return cls([[field.one if i == j else field.zero for j in range(d)] for i in range(d)], field)

    @classmethod
    def from_entries(cls, d: int, field: FieldSpec,
                     entries: Mapping[Tuple[int, int], Scalar]) -> 'ExactMatrix':
        """Sparse constructor; keys are 0-based (row, col)."""
        rows = [[field.zero] * d for _ in range(d)]
        for (i, j), v in entries.items():
            rows[i][j] = v
        return cls(rows, field)

    @classmethod
    def unit(cls, d: int, i: int, j: int, field: FieldSpec) -> 'ExactMatrix':
        """The matrix unit E_ij (0-based)."""
        return cls.from_entries(d, field, {(i, j): 1})

    # Accessors

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    @property
    def array(self) -> np.ndarray:
        return self._data

    def __getitem__(self, index: Tuple[int, int]) -> Scalar:
        return self._data[index]

    def rows(self) -> List[List[Scalar]]:
        return self._data.tolist()

    def nonzero_entries(self) -> Dict[Tuple[int, int], Scalar]:
        return {(i, j): v for (i, j), v in np.ndenumerate(self._data) if v != 0}

    def is_zero(self) -> bool:
        return all(v == 0 for v in self._data.flat)

    # Arithmetic

    def _check(self, other: 'ExactMatrix') -> None:
        if not isinstance(other, ExactMatrix):
            raise TypeError(f"expected ExactMatrix, got {type(other).__name__}")
        if other.dim != self.dim or other.field != self.field:
            raise DimensionMismatchError(
                f"{self.dim}x{self.dim} over {self.field} vs {other.dim}x{other.dim} over {other.field}")

    def __matmul__(self, other: 'ExactMatrix') -> 'ExactMatrix':
        self._check(other)
        return ExactMatrix._wrap(np.dot(self._data, other._data), self.field)

    def __add__(self, other: 'ExactMatrix') -> 'ExactMatrix':
        self._check(other)
        return ExactMatrix._wrap(self._data + other._data, self.field)

    def __sub__(self, other: 'ExactMatrix') -> 'ExactMatrix':
        self._check(other)
        return ExactMatrix._wrap(self._data - other._data, self.field)

    def __neg__(self) -> 'ExactMatrix':
        return ExactMatrix._wrap(-self._data, self.field)

    def scale(self, c: Scalar) -> 'ExactMatrix':
        return ExactMatrix._wrap(self._data * self.field.element(c), self.field)

    def power(self, n: int) -> 'ExactMatrix':
        if n < 0:
            raise ValueError("negative matrix powers are not supported")
        result = ExactMatrix.identity(self.dim, self.field)
        base = self
        while n:
            if n & 1:
                result = result @ base
            n >>= 1
            if n:
                base = base @ base
        return result

    def kron(self, other: 'ExactMatrix') -> 'ExactMatrix':
        if other.field != self.field:
            raise DimensionMismatchError("Kronecker factors must share a field")
        return ExactMatrix._wrap(np.kron(self._data, other._data), self.field)

    @staticmethod
    def block_diagonal(a: 'ExactMatrix', b: 'ExactMatrix') -> 'ExactMatrix':
        if a.field != b.field:
            raise DimensionMismatchError("blocks must share a field")
        d = a.dim + b.dim
        arr = np.empty((d, d), dtype=object)
        arr[...] = a.field.zero
        arr[:a.dim, :a.dim] = a._data
        arr[a.dim:, a.dim:] = b._data
        return ExactMatrix._wrap(arr, a.field)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.field == other.field and self.dim == other.dim
                and all(a == b for a, b in zip(self._data.flat, other._data.flat)))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, self.dim, tuple(self._data.flat)))
        return self._hash

    def __str__(self) -> str:
        cells = [[self.field.format(v) for v in row] for row in self.rows()]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[" + " ".join(c.rjust(width) for c in row) + "]" for row in cells)

    def __repr__(self) -> str:
        return f"ExactMatrix(dim={self.dim}, field={self.field}, nonzero={self.nonzero_entries()})"


def commutator(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """[A, B] = AB - BA."""
    return a @ b - b @ a


def nilpotency_index(a: ExactMatrix) -> int:
    """
    Least N >= 1 with A^N = 0.

    A^d is reached by repeated squaring; the index is then found by
    descending over the stored squares, so the cost is O(log d) products.

    Raises:
        NotNilpotentError: A^d != 0
    """
    d = a.dim
    squares = [a]
    while (1 << (len(squares) - 1)) < d:
        squares.append(squares[-1] @ squares[-1])
    # A^(2^k) with 2^k >= d vanishes iff A is nilpotent
    if not squares[-1].is_zero():
        raise NotNilpotentError(f"matrix is not nilpotent: A^{1 << (len(squares) - 1)} != 0")

    # largest N' with A^N' != 0, built bit by bit
    current = ExactMatrix.identity(d, a.field)
    largest = 0
    for k in range(len(squares) - 1, -1, -1):
        candidate = current @ squares[k]
        if not candidate.is_zero():
            current = candidate
            largest += 1 << k
    return largest + 1


class PolyMatrix:
    """Immutable d x d matrix whose entries are SparsePolynomials of one arity."""

    __slots__ = ('field', 'arity', '_data')

    def __init__(self, rows, field: FieldSpec, arity: int):
        arr = np.empty((len(rows), len(rows)), dtype=object)
        for i, row in enumerate(rows):
            if len(row) != len(rows):
                raise DimensionMismatchError("polynomial matrix must be square")
            for j, v in enumerate(row):
                arr[i, j] = self._coerce_entry(v, field, arity)
        if arr.shape[0] == 0:
            raise DimensionMismatchError("polynomial matrix must be nonempty")
        self._set(arr, field, arity)

    @staticmethod
    def _coerce_entry(v, field: FieldSpec, arity: int) -> SparsePolynomial:
        if isinstance(v, SparsePolynomial):
            if v.field != field or v.arity != arity:
                raise DimensionMismatchError(
                    f"entry over {v.field} with arity {v.arity}; expected {field}, arity {arity}")
            return v
        return SparsePolynomial.constant(v, field, arity)

    def _set(self, arr: np.ndarray, field: FieldSpec, arity: int) -> None:
        self.field = field
        self.arity = arity
        self._data = _frozen(arr)

    @classmethod
    def _wrap(cls, arr: np.ndarray, field: FieldSpec, arity: int) -> 'PolyMatrix':
        obj = object.__new__(cls)
        obj._set(np.array(arr, dtype=object), field, arity)
        return obj

    @classmethod
    def zeros(cls, d: int, field: FieldSpec, arity: int) -> 'PolyMatrix':
        return cls([[0] * d for _ in range(d)], field, arity)

    @classmethod
    def identity(cls, d: int, field: FieldSpec, arity: int) -> 'PolyMatrix':
        return cls([[1 if i == j else 0 for j in range(d)] for i in range(d)], field, arity)

    @classmethod
    def combination(cls, terms: Iterable[Tuple[SparsePolynomial, ExactMatrix]],
                    d: int, field: FieldSpec, arity: int) -> 'PolyMatrix':
        """Sum of f_k * M_k for polynomials f_k and scalar matrices M_k."""
        arr = np.empty((d, d), dtype=object)
        zero = SparsePolynomial.zero(field, arity)
        arr[...] = zero
        for poly, matrix in terms:
            if matrix.dim != d or matrix.field != field:
                raise DimensionMismatchError("coefficient matrix does not fit the combination")
            for (i, j), v in matrix.nonzero_entries().items():
                arr[i, j] = arr[i, j] + poly.scale(v)
        return cls._wrap(arr, field, arity)

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    def entry(self, i: int, j: int) -> SparsePolynomial:
        return self._data[i, j]

    def rows(self) -> List[List[SparsePolynomial]]:
        return self._data.tolist()

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self._data.flat)

    def _check(self, other: 'PolyMatrix') -> None:
        if (not isinstance(other, PolyMatrix) or other.dim != self.dim
                or other.field != self.field or other.arity != self.arity):
            raise DimensionMismatchError("polynomial matrices do not match")

    def __matmul__(self, other: 'PolyMatrix') -> 'PolyMatrix':
        self._check(other)
        return PolyMatrix._wrap(np.dot(self._data, other._data), self.field, self.arity)

    def __add__(self, other: 'PolyMatrix') -> 'PolyMatrix':
        self._check(other)
        return PolyMatrix._wrap(self._data + other._data, self.field, self.arity)

    def __sub__(self, other: 'PolyMatrix') -> 'PolyMatrix':
        self._check(other)
        return PolyMatrix._wrap(self._data - other._data, self.field, self.arity)

    def __neg__(self) -> 'PolyMatrix':
        return PolyMatrix._wrap(-self._data, self.field, self.arity)

    def scale(self, c: Scalar) -> 'PolyMatrix':
        arr = np.empty(self._data.shape, dtype=object)
        for idx, v in np.ndenumerate(self._data):
            arr[idx] = v.scale(c)
        return PolyMatrix._wrap(arr, self.field, self.arity)

    def power(self, n: int) -> 'PolyMatrix':
        result = PolyMatrix.identity(self.dim, self.field, self.arity)
        for _ in range(n):
            result = result @ self
        return result

    def substitute_frobenius(self, q: int) -> 'PolyMatrix':
        arr = np.empty(self._data.shape, dtype=object)
        for idx, v in np.ndenumerate(self._data):
            arr[idx] = v.substitute_frobenius(q)
        return PolyMatrix._wrap(arr, self.field, self.arity)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.field == other.field and self.arity == other.arity and self.dim == other.dim
                and all(a == b for a, b in zip(self._data.flat, other._data.flat)))

    __hash__ = None

    def __str__(self) -> str:
        cells = [[str(v) for v in row] for row in self.rows()]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[" + "  ".join(c.rjust(width) for c in row) + "]" for row in cells)


def truncated_exp(m: PolyMatrix, field: FieldSpec) -> PolyMatrix:
    """
    Sum of M^k / k! for k < d, exact.

    Args:
        m: nilpotent polynomial matrix (M^d = 0 is checked)
        field: the coefficient field; for F_p it must satisfy p > d - 1

    Raises:
        FactorialNotInvertibleError: p <= d - 1
        NotNilpotentError: M^d != 0
    """
    if m.field != field:
        raise DimensionMismatchError(f"matrix is over {m.field}, not {field}")
    d = m.dim
    if field.is_prime and field.p <= d - 1:
        raise FactorialNotInvertibleError(f"(d-1)! = {d - 1}! is not invertible in {field}")

    powers = [PolyMatrix.identity(d, field, m.arity)]
    for _ in range(d):
        powers.append(powers[-1] @ m)
    if not powers[d].is_zero():
        raise NotNilpotentError(f"M^{d} != 0; the exponential series does not terminate")

    result = powers[0]
    for k in range(1, d):
        result = result + powers[k].scale(field.inverse(field.element(math.factorial(k))))
    return result
