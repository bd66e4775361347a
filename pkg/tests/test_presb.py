import numpy as np
import pytest

from indefsplit.core_la import ComplexVector, DimensionMismatch, SparseReal, linear_combination
from indefsplit.direct_spd import NonPositivePivot
from indefsplit.model_problems import example1, example2, example3
from indefsplit.presb import (
    block_matvec,
    presb_apply,
    presb_block_matvec,
    presb_build,
    presb_spectrum_probe,
)

from conftest import random_spd


def dense_B(R, S):
    return np.block([[R, -S], [S, R + 2 * S]])


def stack(z):
    return np.concatenate([z.re, z.im])


def unstack(v):
    n = len(v) // 2
    return ComplexVector(v[:n], v[n:])


def random_pair(rng, n):
    R = random_spd(rng, n, 0.5, 3.0)
    S = random_spd(rng, n, 0.1, 4.0)
    return R, S


def test_identity_pair():
    P = presb_build(SparseReal.identity(2), SparseReal.identity(2))
    z = presb_apply(P, ComplexVector(np.ones(2), np.zeros(2)))
    np.testing.assert_allclose(z.re, [0.75, 0.75])
    np.testing.assert_allclose(z.im, [-0.25, -0.25])


def test_apply_inverts_dense_block(rng):
    for n in (1, 5, 12):
        R, S = random_pair(rng, n)
        P = presb_build(SparseReal.from_dense(R), SparseReal.from_dense(S))
        c = rng.standard_normal(2 * n)
        expected = np.linalg.solve(dense_B(R, S), c)
        np.testing.assert_allclose(stack(presb_apply(P, unstack(c))), expected,
                                   rtol=1e-10, atol=1e-12)


def test_block_matvec_is_inverse_of_apply(rng):
    R, S = random_pair(rng, 8)
    for conj in (False, True):
        P = presb_build(SparseReal.from_dense(R), SparseReal.from_dense(S), conjugate=conj)
        c = ComplexVector(rng.standard_normal(8), rng.standard_normal(8))
        back = presb_block_matvec(P, presb_apply(P, c))
        np.testing.assert_allclose(stack(back), stack(c), rtol=1e-10, atol=1e-12)


def test_conjugate_flag_conjugates(rng):
    R, S = random_pair(rng, 6)
    Rs, Ss = SparseReal.from_dense(R), SparseReal.from_dense(S)
    P, Pc = presb_build(Rs, Ss), presb_build(Rs, Ss, conjugate=True)
    c = ComplexVector(rng.standard_normal(6), rng.standard_normal(6))
    np.testing.assert_allclose(presb_apply(Pc, c).to_complex(),
                               np.conj(presb_apply(P, c.conj()).to_complex()), rtol=1e-14)


def test_block_matvec_matches_complex_product(rng):
    a, b = rng.standard_normal((4, 4)), rng.standard_normal((4, 4))
    z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    y = block_matvec(SparseReal.from_dense(a), SparseReal.from_dense(b), ComplexVector.from_complex(z))
    np.testing.assert_allclose(y.to_complex(), (a + 1j * b) @ z, rtol=1e-13)


def test_eigenvalues_in_half_one(rng):
    # dense oracle: spectrum of B^-1 A lies in [1/2, 1]
    R, S = random_pair(rng, 10)
    A = np.block([[R, -S], [S, R]])
    lam = np.linalg.eigvals(np.linalg.solve(dense_B(R, S), A))
    assert np.max(np.abs(lam.imag)) < 1e-8
    assert lam.real.min() >= 0.5 - 1e-10 and lam.real.max() <= 1 + 1e-10


@pytest.mark.parametrize("make", [lambda: example1(8, 1.0), lambda: example2(8, 1000.0, 10.0),
                                  lambda: example3(8)])
def test_probe_on_examples(make):
    p = make()
    for R, S in ((p.W1, p.T), (p.T, p.W1), (p.T, p.W2)):
        rho = presb_spectrum_probe(presb_build(R, S), R, S)
        assert rho <= 0.25 + 1e-8


def test_probe_conjugated_pair(rng):
    R, S = random_pair(rng, 9)
    Rs, Ss = SparseReal.from_dense(R), SparseReal.from_dense(S)
    P = presb_build(Rs, Ss, conjugate=True)
    assert presb_spectrum_probe(P, Rs, Ss.scaled(-1.0)) <= 0.25 + 1e-8


def test_probe_with_A_equal_B():
    R, S = SparseReal.identity(4), SparseReal.identity(4)
    P = presb_build(R, S)
    rho = presb_spectrum_probe(P, block_op=lambda z: presb_block_matvec(P, z))
    assert rho == pytest.approx(0.25, abs=1e-12)


def test_probe_detects_wrong_pair(rng):
    R, S = random_pair(rng, 8)
    P = presb_build(SparseReal.from_dense(R), SparseReal.from_dense(S))
    # preconditioning R + 5iS with a PRESB built for R + iS spreads the spectrum
    rho = presb_spectrum_probe(P, SparseReal.from_dense(R), SparseReal.from_dense(5 * S))
    assert rho > 0.25 + 1e-3


def test_errors():
    with pytest.raises(DimensionMismatch):
        presb_build(SparseReal.identity(3), SparseReal.identity(2))
    with pytest.raises(NonPositivePivot):
        presb_build(SparseReal.identity(2), SparseReal.identity(2, -2.0))
    P = presb_build(SparseReal.identity(3), SparseReal.identity(3))
    with pytest.raises(DimensionMismatch):
        presb_apply(P, ComplexVector.zeros(4))
    # R + S SPD while S alone is indefinite: factorization still fine
    S = SparseReal.diagonal_matrix([0.5, -0.5, 0.0])
    presb_build(linear_combination((1.0, SparseReal.identity(3))), S)
