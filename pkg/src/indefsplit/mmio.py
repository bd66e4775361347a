"""Matrix Market I/O for :class:`SparseReal` and :class:`ComplexVector`.

Thin adapters over :mod:`scipy.io`; values are written with 17 significant
digits so a write/read cycle reproduces every double exactly.
"""
from __future__ import annotations

import numpy as np
import scipy.io
import scipy.sparse as sp

from .core_la import ComplexVector, SparseReal

__all__ = ["write_matrix", "read_matrix", "write_vector", "read_vector", "MatrixMarketError"]

_PRECISION = 17


class MatrixMarketError(ValueError):
    """File is not a usable Matrix Market file."""


def _read(path):
    try:
        return scipy.io.mmread(str(path))
    except (OSError, ValueError, IndexError) as exc:
        raise MatrixMarketError(f"{path}: {exc}") from exc


def write_matrix(path, A: SparseReal):
    """Write a real matrix; symmetric matrices store one triangle."""
    coo = sp.csr_matrix((A.values, A.col_idx, A.row_ptr), shape=A.shape).tocoo()
    symmetry = "symmetric" if A.symmetric else "general"
    scipy.io.mmwrite(str(path), coo, field="real", precision=_PRECISION, symmetry=symmetry)


def read_matrix(path) -> SparseReal:
    m = _read(path)
    if not sp.issparse(m):
        raise MatrixMarketError(f"{path}: expected coordinate format")
    if np.iscomplexobj(m.data):
        raise MatrixMarketError(f"{path}: expected a real matrix")
    coo = sp.coo_matrix(m)
    with open(path, "rb") as fh:
        symmetric = b"symmetric" in fh.readline().lower()
    return SparseReal.from_coo(coo.row, coo.col, coo.data.astype(np.float64), coo.shape, symmetric)


def write_vector(path, x: ComplexVector):
    """Write a complex vector as an n-by-1 complex general coordinate matrix."""
    z = x.to_complex()
    n = z.size
    coo = sp.coo_matrix((z, (np.arange(n), np.zeros(n, dtype=np.intp))), shape=(n, 1))
    scipy.io.mmwrite(str(path), coo, field="complex", precision=_PRECISION, symmetry="general")


def read_vector(path) -> ComplexVector:
    m = _read(path)
    dense = m.toarray() if sp.issparse(m) else np.asarray(m)
    if dense.ndim != 2 or dense.shape[1] != 1:
        raise MatrixMarketError(f"{path}: expected an n-by-1 vector, got shape {dense.shape}")
    return ComplexVector.from_complex(dense[:, 0])
