"""Sparse Cholesky factorization with approximate minimum degree ordering.

This is the innermost solver: every SPD system of the form ``W + cT`` that
the splitting methods produce ends up here, factored once and reused.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .core_la import DimensionMismatch, SparseReal, permute_symmetric

__all__ = [
    "CholeskyFactor",
    "NonPositivePivot",
    "factor",
    "solve",
    "fill_reducing_order",
    "symbolic_nnz",
    "is_spd",
]


class NonPositivePivot(ValueError):
    """Raised when a pivot is not strictly positive (matrix not SPD).

    ``row`` is the offending row in the caller's original numbering.
    """

    def __init__(self, row):
        super().__init__(f"non-positive pivot at row {row}; matrix is not positive definite")
        self.row = int(row)


@dataclass(frozen=True, eq=False)
class CholeskyFactor:
    """``A[perm][:, perm] = L @ L.T``.

    ``L`` is kept twice: as a :class:`SparseReal` for inspection and as the
    raw compressed-column arrays the triangular solves run on.
    """

    perm: np.ndarray
    L: SparseReal
    n: int
    _Lp: np.ndarray = field(repr=False)
    _Li: np.ndarray = field(repr=False)
    _Lx: np.ndarray = field(repr=False)

    @property
    def nnz(self):
        return int(self._Lp[-1])

    def solve(self, rhs):
        return solve(self, rhs)


def fill_reducing_order(A: SparseReal) -> np.ndarray:
    """Approximate minimum degree permutation of a symmetric pattern."""
    if A.n_rows != A.n_cols:
        raise DimensionMismatch("matrix must be square")
    # a symmetric pattern in CSR is its own CSC
    return np.asarray(kernels.amd(A.row_ptr, A.col_idx, A.n_rows), dtype=np.intp)


def symbolic_nnz(A: SparseReal, perm=None) -> int:
    """Number of entries of the Cholesky factor of ``A[perm][:, perm]``,
    diagonal included."""
    B = A if perm is None else permute_symmetric(A, np.asarray(perm, dtype=np.intp))
    parent = kernels.etree(B.row_ptr, B.col_idx)
    return int(kernels.chol_colptr(B.row_ptr, B.col_idx, parent)[-1])


def factor(A: SparseReal, perm=None) -> CholeskyFactor:
    """Factor a symmetric positive definite matrix.

    Parameters
    ----------
    A : SparseReal
        Symmetric matrix, both triangles stored.
    perm : array_like, optional
        Symmetric permutation to use instead of the AMD ordering.

    Raises
    ------
    NonPositivePivot
        If a pivot is ``<= 0``.
    """
    if A.n_rows != A.n_cols:
        raise DimensionMismatch("matrix must be square")
    n = A.n_rows
    perm = fill_reducing_order(A) if perm is None else np.asarray(perm, dtype=np.intp)
    if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(n)):
        raise ValueError("perm is not a permutation")
    B = permute_symmetric(A, perm)
    parent = kernels.etree(B.row_ptr, B.col_idx)
    Lp = np.asarray(kernels.chol_colptr(B.row_ptr, B.col_idx, parent), dtype=np.intp)
    Li, Lx, bad = kernels.chol_numeric(B.row_ptr, B.col_idx, B.values, parent, Lp)
    if bad >= 0:
        raise NonPositivePivot(perm[bad])
    Li = np.asarray(Li, dtype=np.intp)
    Lx = np.asarray(Lx, dtype=np.float64)
    cols = np.repeat(np.arange(n), np.diff(Lp))
    L = SparseReal.from_coo(Li, cols, Lx, (n, n))
    return CholeskyFactor(perm, L, n, Lp, Li, Lx)


def solve(F: CholeskyFactor, rhs) -> np.ndarray:
    """Solve ``A y = rhs`` with a computed factor."""
    rhs = np.asarray(rhs, dtype=np.float64)
    if rhs.shape != (F.n,):
        raise DimensionMismatch(f"rhs has shape {rhs.shape}, expected ({F.n},)")
    y = rhs[F.perm]
    kernels.lsolve(F._Lp, F._Li, F._Lx, y)
    kernels.ltsolve(F._Lp, F._Li, F._Lx, y)
    out = np.empty_like(y)
    out[F.perm] = y
    return out


def is_spd(A: SparseReal) -> bool:
    """SPD probe: symmetric and Cholesky succeeds."""
    if not A.is_symmetric(rtol=1e-14):
        return False
    try:
        factor(A)
    except NonPositivePivot:
        return False
    return True
