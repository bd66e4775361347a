import numpy as np
import pytest

from indefsplit.chebyshev import ChebyshevConfig
from indefsplit.core_la import ComplexVector, SparseReal
from indefsplit.krylov import (
    ConfigurationError,
    KrylovConfig,
    evaluate_solution,
    gmres_solve,
)
from indefsplit.model_problems import example1, example2, make_problem
from indefsplit.splittings import EXACT_INNER, SplittingScheme, build_operators

from conftest import random_triple

TIGHT = ChebyshevConfig(reduction=1e-12, max_iters=100)


def test_scaled_identity_one_iteration():
    # A = I + iI
    I, Z = SparseReal.identity(5), SparseReal.from_coo([], [], [], (5, 5))
    p = make_problem("id", I, Z, I)
    x, rep = gmres_solve(p, cfg=KrylovConfig("none"))
    assert rep.converged and rep.iters == 1
    np.testing.assert_allclose(x.to_complex(), p.x_exact.to_complex(), rtol=1e-14)
    # with W2 = 0 Method I has N = 0, so M = A and one step is exact as well
    ops = build_operators(p, SplittingScheme("I"), TIGHT)
    _, rep = gmres_solve(p, ops, KrylovConfig("gmres"))
    assert rep.converged and rep.iters == 1


def test_unpreconditioned_matches_dense_solve(rng):
    p = random_triple(rng, 12)
    x, rep = gmres_solve(p, cfg=KrylovConfig("none", outer_reduction=1e-12))
    expected = np.linalg.solve(p.to_dense(), p.b.to_complex())
    assert rep.converged and rep.iters <= 12
    np.testing.assert_allclose(x.to_complex(), expected, rtol=1e-9)


@pytest.mark.parametrize("flavor", ["gmres", "fgmres"])
@pytest.mark.parametrize("scheme", [SplittingScheme("I"), SplittingScheme("II"),
                                    SplittingScheme("III", 2.0), SplittingScheme("SNSS", 1.0, 1.0)],
                         ids=lambda s: s.label)
def test_preconditioned_solves(flavor, scheme):
    p = example2(8, 100.0, 10.0)
    ops = build_operators(p, scheme, TIGHT)
    x, rep = gmres_solve(p, ops, KrylovConfig(flavor))
    assert rep.converged and rep.R_k <= 1e-10
    assert rep.E_k < 1e-8
    assert len(rep.residual_history) == rep.iters + 1
    assert rep.inner_iter_means[0] > 0 or scheme.kind == "SNSS"


def test_history_monotone_and_normalized():
    p = example1(12, 1.0)
    ops = build_operators(p, SplittingScheme("I"))
    _, rep = gmres_solve(p, ops, KrylovConfig("fgmres"))
    h = rep.residual_history
    assert h[0] == pytest.approx(1.0)
    assert np.all(np.diff(h) <= 1e-14)


def test_reported_residual_is_true_residual():
    p = example1(10, 1.0)
    ops = build_operators(p, SplittingScheme("II"))
    x, rep = gmres_solve(p, ops, KrylovConfig("fgmres"))
    R_k, E_k = evaluate_solution(p, x)
    assert rep.R_k == R_k and rep.E_k == E_k
    r = p.b.to_complex() - p.to_dense() @ x.to_complex()
    assert R_k == pytest.approx(np.linalg.norm(r) / np.linalg.norm(p.b.to_complex()), rel=1e-8)


def test_fgmres_equals_gmres_for_fixed_preconditioner():
    p = example2(6, 100.0, 10.0)
    ops = build_operators(p, SplittingScheme("III", 10.0), EXACT_INNER)
    x1, r1 = gmres_solve(p, ops, KrylovConfig("gmres"))
    x2, r2 = gmres_solve(p, ops, KrylovConfig("fgmres"))
    assert r1.iters == r2.iters
    np.testing.assert_allclose(x1.to_complex(), x2.to_complex(), rtol=1e-8)


def test_loose_inner_with_gmres_rejected():
    p = example1(4, 1.0)
    ops = build_operators(p, SplittingScheme("I"), ChebyshevConfig(reduction=1e-2))
    with pytest.raises(ConfigurationError):
        gmres_solve(p, ops, KrylovConfig("gmres"))
    with pytest.raises(ConfigurationError):
        gmres_solve(p, None, KrylovConfig("fgmres"))


def test_nonconvergence_reported():
    p = example1(10, 1.0)
    _, rep = gmres_solve(p, cfg=KrylovConfig("none", max_outer=3))
    assert not rep.converged and rep.iters == 3
    assert rep.status == "NonConvergence" and rep.message


def test_zero_rhs():
    p = example1(4, 1.0)
    p.b, p.x_exact = ComplexVector.zeros(p.n), None
    x, rep = gmres_solve(p, cfg=KrylovConfig("none"))
    assert rep.converged and rep.iters == 0 and not np.any(x.to_complex())


@pytest.mark.parametrize("kw", [dict(flavor="cg"), dict(outer_reduction=0.0),
                                dict(outer_reduction=1.5), dict(max_outer=0)])
def test_config_validation(kw):
    with pytest.raises(ConfigurationError):
        KrylovConfig(**kw)
