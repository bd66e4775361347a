import numpy as np
import pytest

from indefsplit.chebyshev import ChebyshevConfig
from indefsplit.core_la import ComplexVector, SparseReal
from indefsplit.direct_spd import NonPositivePivot
from indefsplit.model_problems import example1, example2, make_problem
from indefsplit.splittings import (
    EXACT_INNER,
    SplittingScheme,
    build_operators,
    precond_apply,
    stationary_solve,
    stationary_step,
)

from conftest import random_triple

SCHEMES = [SplittingScheme("I"), SplittingScheme("II"), SplittingScheme("III", 1.0),
           SplittingScheme("III", 7.5), SplittingScheme("SNSS", 2.0, 0.5)]


def dense_parts(p):
    return p.W1.to_dense(), p.W2.to_dense(), p.T.to_dense()


def N_formula(s, W1, W2, T):
    """Independent dense expressions for N in A = M - N."""
    Ti = np.linalg.inv(T)
    if s.kind in ("I", "II"):
        return -(1 / 1j) * W1 @ Ti @ W2
    if s.kind == "III":
        a = s.alpha
        return (1 / ((1 - 2 * a) * 1j)) * ((a - 1) * T - 1j * W2) @ Ti @ ((a - 1) * T + 1j * W1)
    a, b = s.alpha, s.beta
    return (1 / (a - 1j * b)) * (1j * b * T + W2) @ Ti @ ((a + 1j) * T + W1)


@pytest.mark.parametrize("s", SCHEMES, ids=lambda s: s.label)
def test_splitting_identity(rng, s):
    p = random_triple(rng, 7)
    ops = build_operators(p, s)
    W1, W2, T = dense_parts(p)
    A = W1 - W2 + 1j * T
    M = ops.dense_M()
    assert np.linalg.norm(M - N_formula(s, W1, W2, T) - A) <= 1e-11 * np.linalg.norm(A)


@pytest.mark.parametrize("s", SCHEMES, ids=lambda s: s.label)
def test_precond_apply_inverts_M(rng, s):
    p = random_triple(rng, 6)
    ops = build_operators(p, s, EXACT_INNER)
    v = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    z = precond_apply(ops, ComplexVector.from_complex(v)).to_complex()
    np.testing.assert_allclose(z, np.linalg.solve(ops.dense_M(), v), rtol=1e-9, atol=1e-11)


@pytest.mark.parametrize("s", SCHEMES, ids=lambda s: s.label)
def test_stationary_step_is_affine_map(rng, s):
    p = random_triple(rng, 6)
    ops = build_operators(p, s, EXACT_INNER)
    W1, W2, T = dense_parts(p)
    M, N = ops.dense_M(), N_formula(s, W1, W2, T)
    x = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    got = stationary_step(ops, ComplexVector.from_complex(x), p.b).to_complex()
    expected = np.linalg.solve(M, N @ x + p.b.to_complex())
    np.testing.assert_allclose(got, expected, rtol=1e-9, atol=1e-10)


@pytest.mark.parametrize("s", SCHEMES, ids=lambda s: s.label)
def test_exact_solution_is_fixed_point(rng, s):
    p = random_triple(rng, 5)
    ops = build_operators(p, s, EXACT_INNER)
    x = stationary_step(ops, p.x_exact, p.b)
    assert np.linalg.norm(x.to_complex() - p.x_exact.to_complex()) <= 1e-10


@pytest.mark.parametrize("kind", ["I", "II"])
def test_methods_I_II_converge_on_random_triples(rng, kind):
    for _ in range(5):
        p = random_triple(rng, 8, w_hi=3.0)
        ops = build_operators(p, SplittingScheme(kind), EXACT_INNER)
        M = ops.dense_M()
        rho = max(abs(np.linalg.eigvals(np.linalg.solve(M, M - p.to_dense()))))
        assert rho < 1.0
        x, rep = stationary_solve(ops, tol=1e-10, max_sweeps=2000)
        assert rep.converged and rep.E_k < 1e-8


def test_stationary_solve_on_example():
    p = example1(8, 1.0)
    ops = build_operators(p, SplittingScheme("I"), ChebyshevConfig(reduction=1e-10, max_iters=50))
    x, rep = stationary_solve(ops, tol=1e-8)
    assert rep.converged
    assert len(rep.residual_history) == rep.iters + 1
    assert rep.R_k == rep.residual_history[-1] <= 1e-8
    assert rep.inner_iter_means[0] > 0 and rep.inner_iter_means[1] > 0


def test_stationary_solve_reports_nonconvergence():
    p = example2(6, 1000.0, 10.0)
    _, rep = stationary_solve(build_operators(p, SplittingScheme("I")), tol=1e-14, max_sweeps=2)
    assert not rep.converged and rep.iters == 2 and rep.status == "NonConvergence"


def test_zero_rhs_stays_zero():
    p = example1(5, 1.0)
    ops = build_operators(p, SplittingScheme("III", 2.0))
    x, rep = stationary_solve(ops, b=ComplexVector.zeros(p.n))
    assert rep.iters == 0 and not np.any(x.to_complex())


def test_homogeneous_sweep_is_linear(rng):
    p = example1(5, 1.0)
    ops = build_operators(p, SplittingScheme("II"), EXACT_INNER)
    zero = ComplexVector.zeros(p.n)
    x = ComplexVector(rng.standard_normal(p.n), rng.standard_normal(p.n))
    y = ComplexVector(rng.standard_normal(p.n), rng.standard_normal(p.n))
    c = 0.3 - 1.7j
    lhs = stationary_step(ops, x + y.scale(c), zero).to_complex()
    rhs = (stationary_step(ops, x, zero).to_complex()
           + c * stationary_step(ops, y, zero).to_complex())
    np.testing.assert_allclose(lhs, rhs, rtol=1e-9, atol=1e-12)


def test_snss_real_factor_is_direct():
    p = example1(5, 1.0)
    ops = build_operators(p, SplittingScheme("SNSS", 1.0, 1.0))
    assert ops.sub1.direct is not None and ops.sub1.im is None
    assert ops.sub2.presb is not None


def test_with_inner_keeps_factors():
    ops = build_operators(example1(4, 1.0), SplittingScheme("I"))
    ops2 = ops.with_inner(ChebyshevConfig(reduction=1e-6))
    assert ops2.sub1 is ops.sub1 and ops2.inner_cfg.reduction == 1e-6


class TestSchemeValidation:
    @pytest.mark.parametrize("text,expected", [
        ("I", SplittingScheme("I")),
        ("ii", SplittingScheme("II")),
        ("III:10", SplittingScheme("III", 10.0)),
        ("SNSS:10,1", SplittingScheme("SNSS", 10.0, 1.0)),
    ])
    def test_parse(self, text, expected):
        assert SplittingScheme.parse(text) == expected

    @pytest.mark.parametrize("args", [("III", 0.5), ("III",), ("SNSS", 1.0), ("SNSS", -1.0, 1.0),
                                      ("I", 2.0), ("IV",)])
    def test_rejects(self, args):
        with pytest.raises(ValueError):
            SplittingScheme(*args)

    @pytest.mark.parametrize("text", ["III", "SNSS:1", "I:3", "III:1,2"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            SplittingScheme.parse(text)

    def test_scales(self):
        assert SplittingScheme("I").scale == pytest.approx(1j)
        assert SplittingScheme("III", 1.0).scale == pytest.approx(1j)
        assert SplittingScheme("SNSS", 1.0, 1.0).scale == pytest.approx(0.5 + 0.5j)


def test_non_spd_T_rejected():
    W = SparseReal.identity(3)
    p = make_problem("bad", W, W, SparseReal.identity(3, -1.0))
    with pytest.raises(NonPositivePivot):
        build_operators(p, SplittingScheme("SNSS", 0.5, 1.0))
