"""Sparse real matrices, split-storage complex vectors and the products
every solver layer is built from."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels

__all__ = [
    "SparseReal",
    "ComplexVector",
    "spmv",
    "complex_spmv",
    "kron_sum",
    "dot_h",
    "norm2",
    "linear_combination",
    "permute_symmetric",
    "tridiag",
]


class DimensionMismatch(ValueError):
    """Operand shapes are incompatible."""


@dataclass(frozen=True, eq=False)
class SparseReal:
    """Compressed-row real matrix.

    Symmetric matrices are stored with both triangles. Construct through
    :meth:`from_coo`, :meth:`from_dense` or the helpers below; the
    constructor itself only validates.
    """

    n_rows: int
    n_cols: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray
    symmetric: bool = False

    def __post_init__(self):
        row_ptr = np.ascontiguousarray(self.row_ptr, dtype=np.intp)
        col_idx = np.ascontiguousarray(self.col_idx, dtype=np.intp)
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        object.__setattr__(self, "row_ptr", row_ptr)
        object.__setattr__(self, "col_idx", col_idx)
        object.__setattr__(self, "values", values)
        if row_ptr.shape != (self.n_rows + 1,) or row_ptr[0] != 0:
            raise ValueError("row_ptr must have length n_rows + 1 and start at 0")
        if np.any(np.diff(row_ptr) < 0):
            raise ValueError("row_ptr must be nondecreasing")
        nnz = row_ptr[-1]
        if col_idx.shape != (nnz,) or values.shape != (nnz,):
            raise ValueError("row_ptr[-1] must equal len(col_idx) == len(values)")
        if nnz:
            if col_idx.min() < 0 or col_idx.max() >= self.n_cols:
                raise ValueError("column index out of range")
            steps = np.diff(col_idx)
            row_starts = row_ptr[1:-1]
            within = np.ones(nnz - 1, dtype=bool)
            within[row_starts[(row_starts > 0) & (row_starts < nnz)] - 1] = False
            if np.any(steps[within] <= 0):
                raise ValueError("column indices must be strictly increasing within a row")

    # -- construction -------------------------------------------------
    @classmethod
    def from_coo(cls, rows, cols, vals, shape, symmetric=False):
        """Assemble from triplets, summing duplicates."""
        n_rows, n_cols = shape
        rows = np.asarray(rows, dtype=np.intp)
        cols = np.asarray(cols, dtype=np.intp)
        vals = np.asarray(vals, dtype=np.float64)
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        if rows.size:
            new = np.ones(rows.size, dtype=bool)
            new[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
            starts = np.flatnonzero(new)
            vals = np.add.reduceat(vals, starts)
            rows, cols = rows[starts], cols[starts]
        row_ptr = np.zeros(n_rows + 1, dtype=np.intp)
        np.cumsum(np.bincount(rows, minlength=n_rows), out=row_ptr[1:])
        return cls(n_rows, n_cols, row_ptr, cols, vals, symmetric)

    @classmethod
    def from_dense(cls, a, symmetric=None):
        a = np.asarray(a, dtype=np.float64)
        rows, cols = np.nonzero(a)
        if symmetric is None:
            symmetric = a.shape[0] == a.shape[1] and np.array_equal(a, a.T)
        return cls.from_coo(rows, cols, a[rows, cols], a.shape, symmetric)

    @classmethod
    def identity(cls, n, scale=1.0):
        return cls.diagonal_matrix(np.full(n, float(scale)))

    @classmethod
    def diagonal_matrix(cls, d):
        d = np.asarray(d, dtype=np.float64)
        n = d.size
        return cls(n, n, np.arange(n + 1), np.arange(n), d.copy(), True)

    # -- inspection ---------------------------------------------------
    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self):
        return int(self.row_ptr[-1])

    def row_indices(self):
        return np.repeat(np.arange(self.n_rows), np.diff(self.row_ptr))

    def to_dense(self):
        a = np.zeros(self.shape)
        a[self.row_indices(), self.col_idx] = self.values
        return a

    def diagonal(self):
        rows = self.row_indices()
        d = np.zeros(min(self.shape))
        on = rows == self.col_idx
        d[rows[on]] = self.values[on]
        return d

    def transpose(self):
        return SparseReal.from_coo(
            self.col_idx, self.row_indices(), self.values,
            (self.n_cols, self.n_rows), self.symmetric,
        )

    def is_symmetric(self, rtol=0.0):
        if self.n_rows != self.n_cols:
            return False
        t = self.transpose()
        if not (np.array_equal(t.row_ptr, self.row_ptr)
                and np.array_equal(t.col_idx, self.col_idx)):
            return False
        scale = np.abs(self.values).max(initial=0.0)
        return bool(np.all(np.abs(t.values - self.values) <= rtol * scale))

    def scaled(self, alpha):
        return SparseReal(self.n_rows, self.n_cols, self.row_ptr, self.col_idx,
                          alpha * self.values, self.symmetric)

    def __matmul__(self, x):
        if type(x) is np.ndarray and x.dtype == np.float64 and x.ndim == 1:
            if x.size != self.n_cols:
                raise DimensionMismatch(f"matrix has {self.n_cols} columns, vector has {x.size} entries")
            return kernels.csr_matvec(self.row_ptr, self.col_idx, self.values,
                                      np.ascontiguousarray(x))
        if isinstance(x, ComplexVector):
            return ComplexVector(spmv(self, x.re), spmv(self, x.im))
        x = np.asarray(x)
        if np.iscomplexobj(x):
            return spmv(self, x.real) + 1j * spmv(self, x.imag)
        return spmv(self, x)

    def __repr__(self):
        kind = "symmetric " if self.symmetric else ""
        return f"SparseReal({self.n_rows}x{self.n_cols}, {kind}nnz={self.nnz})"


@dataclass(eq=False)
class ComplexVector:
    """Complex vector held as two real arrays."""

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        self.re = np.ascontiguousarray(self.re, dtype=np.float64)
        self.im = np.ascontiguousarray(self.im, dtype=np.float64)
        if self.re.shape != self.im.shape or self.re.ndim != 1:
            raise DimensionMismatch("re and im must be 1-D arrays of equal length")

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros(n), np.zeros(n))

    @classmethod
    def from_complex(cls, z):
        z = np.asarray(z, dtype=np.complex128)
        return cls(z.real.copy(), z.imag.copy())

    def to_complex(self):
        return self.re + 1j * self.im

    def __len__(self):
        return self.re.size

    def copy(self):
        return ComplexVector(self.re.copy(), self.im.copy())

    def conj(self):
        return ComplexVector(self.re.copy(), -self.im)

    def __add__(self, other):
        return ComplexVector(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return ComplexVector(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return ComplexVector(-self.re, -self.im)

    def scale(self, s):
        """Multiply by a complex scalar."""
        s = complex(s)
        if s.imag == 0.0:
            return ComplexVector(s.real * self.re, s.real * self.im)
        return ComplexVector(s.real * self.re - s.imag * self.im,
                             s.real * self.im + s.imag * self.re)

    def times_i(self):
        return ComplexVector(-self.im, self.re.copy())

    def __mul__(self, s):
        return self.scale(s)

    __rmul__ = __mul__

    def __repr__(self):
        return f"ComplexVector(n={len(self)})"


def _check_square_operand(A, n):
    if A.n_cols != n:
        raise DimensionMismatch(f"matrix has {A.n_cols} columns, vector has {n} entries")


def spmv(A, x):
    """Return ``A @ x`` for a real vector ``x``."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatch("x must be 1-D")
    _check_square_operand(A, x.size)
    return kernels.csr_matvec(A.row_ptr, A.col_idx, A.values, x)


def complex_spmv(re_mat, im_mat, x):
    """Apply ``re_mat + i*im_mat`` to a :class:`ComplexVector`."""
    if re_mat.shape != im_mat.shape:
        raise DimensionMismatch("real and imaginary parts differ in shape")
    _check_square_operand(re_mat, len(x))
    return ComplexVector(
        spmv(re_mat, x.re) - spmv(im_mat, x.im),
        spmv(re_mat, x.im) + spmv(im_mat, x.re),
    )


def kron_sum(V, m):
    """``I_m (x) V + V (x) I_m`` for an m-by-m matrix ``V``.

    Unknowns are ordered with the first factor's index slow, so ``I (x) V``
    acts on the fast (x-direction) index.
    """
    if V.shape != (m, m):
        raise DimensionMismatch(f"V must be {m}x{m}, got {V.shape}")
    r = V.row_indices()
    c = V.col_idx
    v = V.values
    blocks = np.repeat(np.arange(m), V.nnz) * m
    # I (x) V: V repeated along the diagonal blocks
    r1 = blocks + np.tile(r, m)
    c1 = blocks + np.tile(c, m)
    # V (x) I: entry V[a, b] couples (a, j) with (b, j) for each fast index j
    fast = np.tile(np.arange(m), V.nnz)
    r2 = np.repeat(r, m) * m + fast
    c2 = np.repeat(c, m) * m + fast
    vals = np.concatenate([np.tile(v, m), np.repeat(v, m)])
    return SparseReal.from_coo(
        np.concatenate([r1, r2]), np.concatenate([c1, c2]), vals,
        (m * m, m * m), symmetric=V.symmetric,
    )


def tridiag(m, lower, diag, upper, scale=1.0):
    """Constant tridiagonal m-by-m matrix."""
    i = np.arange(m)
    rows = np.concatenate([i[1:], i, i[:-1]])
    cols = np.concatenate([i[:-1], i, i[1:]])
    vals = scale * np.concatenate([np.full(m - 1, lower), np.full(m, diag), np.full(m - 1, upper)])
    return SparseReal.from_coo(rows, cols, vals, (m, m), symmetric=lower == upper)


def linear_combination(*terms):
    """``sum(c * A for c, A in terms)`` over a common shape."""
    shape = terms[0][1].shape
    rows, cols, vals = [], [], []
    symmetric = True
    for c, A in terms:
        if A.shape != shape:
            raise DimensionMismatch("all terms must share a shape")
        rows.append(A.row_indices())
        cols.append(A.col_idx)
        vals.append(c * A.values)
        symmetric &= A.symmetric
    return SparseReal.from_coo(np.concatenate(rows), np.concatenate(cols),
                               np.concatenate(vals), shape, symmetric)


def permute_symmetric(A, perm):
    """``A[perm][:, perm]``: row/column ``k`` of the result is ``perm[k]`` of A."""
    pinv = np.empty_like(perm)
    pinv[perm] = np.arange(perm.size)
    return SparseReal.from_coo(pinv[A.row_indices()], pinv[A.col_idx], A.values,
                               A.shape, A.symmetric)


def dot_h(x, y):
    """Conjugated inner product ``sum(conj(x_j) * y_j)``."""
    if len(x) != len(y):
        raise DimensionMismatch("vectors differ in length")
    re = x.re @ y.re + x.im @ y.im
    im = x.re @ y.im - x.im @ y.re
    return complex(re, im)


def norm2(x):
    """Euclidean norm of a complex vector."""
    return float(np.sqrt(x.re @ x.re + x.im @ x.im))
