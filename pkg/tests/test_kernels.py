"""Compiled and pure-Python kernels must agree exactly."""
import numpy as np
import pytest

from indefsplit._backend import COMPILED, get_kernels
from indefsplit.core_la import kron_sum, permute_symmetric, tridiag

from conftest import BACKENDS


def laplacian(m):
    return kron_sum(tridiag(m, -1, 2, -1), m)


def dense_L(Lp, Li, Lx, n):
    L = np.zeros((n, n))
    for j in range(n):
        L[Li[Lp[j]:Lp[j + 1]], j] = Lx[Lp[j]:Lp[j + 1]]
    return L


@pytest.mark.parametrize("name", BACKENDS)
def test_amd_is_permutation(name):
    K = laplacian(12)
    k = get_kernels(name)
    perm = np.asarray(k.amd(K.row_ptr, K.col_idx, K.n_rows))
    np.testing.assert_array_equal(np.sort(perm), np.arange(K.n_rows))


@pytest.mark.parametrize("name", BACKENDS)
def test_cholesky_reconstructs(name):
    K = laplacian(8)
    k = get_kernels(name)
    perm = np.asarray(k.amd(K.row_ptr, K.col_idx, K.n_rows), dtype=np.intp)
    B = permute_symmetric(K, perm)
    parent = k.etree(B.row_ptr, B.col_idx)
    Lp = np.asarray(k.chol_colptr(B.row_ptr, B.col_idx, parent))
    Li, Lx, bad = k.chol_numeric(B.row_ptr, B.col_idx, B.values, parent, Lp)
    assert bad == -1
    L = dense_L(Lp, Li, Lx, B.n_rows)
    np.testing.assert_allclose(L @ L.T, B.to_dense(), atol=1e-13)
    x = np.arange(B.n_rows, dtype=float)
    y = B.to_dense() @ x
    k.lsolve(Lp, Li, Lx, y)
    k.ltsolve(Lp, Li, Lx, y)
    np.testing.assert_allclose(y, x, rtol=1e-12, atol=1e-12)


@pytest.mark.skipif(not COMPILED, reason="compiled kernels not built")
def test_backends_agree_bitwise(rng):
    py, cy = get_kernels("python"), get_kernels("cython")
    K = laplacian(10)
    x = rng.standard_normal(K.n_rows)
    np.testing.assert_array_equal(py.csr_matvec(K.row_ptr, K.col_idx, K.values, x),
                                  cy.csr_matvec(K.row_ptr, K.col_idx, K.values, x))
    p1 = np.asarray(py.amd(K.row_ptr, K.col_idx, K.n_rows))
    p2 = np.asarray(cy.amd(K.row_ptr, K.col_idx, K.n_rows))
    np.testing.assert_array_equal(p1, p2)
    B = permute_symmetric(K, p1.astype(np.intp))
    par1 = np.asarray(py.etree(B.row_ptr, B.col_idx))
    par2 = np.asarray(cy.etree(B.row_ptr, B.col_idx))
    np.testing.assert_array_equal(par1, par2)
    Lp1 = np.asarray(py.chol_colptr(B.row_ptr, B.col_idx, par1))
    Lp2 = np.asarray(cy.chol_colptr(B.row_ptr, B.col_idx, par2))
    np.testing.assert_array_equal(Lp1, Lp2)
    Li1, Lx1, _ = py.chol_numeric(B.row_ptr, B.col_idx, B.values, par1, Lp1)
    Li2, Lx2, _ = cy.chol_numeric(B.row_ptr, B.col_idx, B.values, par2, Lp2)
    np.testing.assert_array_equal(np.asarray(Li1), np.asarray(Li2))
    np.testing.assert_allclose(np.asarray(Lx1), np.asarray(Lx2), rtol=1e-14, atol=0)


@pytest.mark.parametrize("name", BACKENDS)
def test_indefinite_pivot_reported(name):
    from indefsplit.core_la import SparseReal

    A = SparseReal.diagonal_matrix([1.0, -1.0, 2.0])
    k = get_kernels(name)
    parent = k.etree(A.row_ptr, A.col_idx)
    Lp = np.asarray(k.chol_colptr(A.row_ptr, A.col_idx, parent))
    _, _, bad = k.chol_numeric(A.row_ptr, A.col_idx, A.values, parent, Lp)
    assert bad == 1


def test_unknown_backend():
    with pytest.raises(ValueError):
        get_kernels("fortran")
