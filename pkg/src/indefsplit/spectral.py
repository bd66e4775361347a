"""Norm and spectral-radius estimates behind the convergence bounds.

Hatted quantities refer to ``W^ = T^-1/2 W T^-1/2``; ``T^1/2`` is never
formed, everything goes through solves with a Cholesky factor of ``T``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core_la import ComplexVector, SparseReal
from .direct_spd import factor
from .splittings import EXACT_INNER, SplittingOperators, stationary_step

__all__ = [
    "SpectralEstimates",
    "hatted_norm",
    "bound_eq4",
    "bound_method3",
    "single_factor_bound",
    "alpha_opt",
    "contraction_estimate",
    "spectral_estimates",
]


@dataclass
class SpectralEstimates:
    what_norm_1: float
    what_norm_2: float
    bound_eq4: float
    alpha_opt: float
    bound_method3: dict = field(default_factory=dict)
    rho_B_estimate: Optional[float] = None

    def as_lines(self):
        lines = [
            f"what_norm_1={self.what_norm_1:.10g}",
            f"what_norm_2={self.what_norm_2:.10g}",
            f"bound_eq4={self.bound_eq4:.10g}",
            f"alpha_opt={self.alpha_opt:.10g}",
        ]
        lines += [f"bound_method3[alpha={a:g}]={v:.10g}" for a, v in self.bound_method3.items()]
        if self.rho_B_estimate is not None:
            lines.append(f"rho_B_estimate={self.rho_B_estimate:.10g}")
        return lines


def hatted_norm(W: SparseReal, T: SparseReal, tol: float = 1e-10, max_iter: int = 5000,
                seed: int = 0, T_factor=None) -> float:
    """``||T^-1/2 W T^-1/2||_2`` by power iteration on ``T^-1 W``.

    ``T^-1 W`` is self-adjoint in the ``T`` inner product, so the ratio
    ``||T^-1 W x||_T / ||x||_T`` increases towards the largest ``|lambda|``
    of ``W x = lambda T x``.
    """
    F = T_factor if T_factor is not None else factor(T)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(W.n_rows)
    x /= np.sqrt(x @ (T @ x))
    est = 0.0
    for _ in range(max_iter):
        y = F.solve(W @ x)
        ny = float(np.sqrt(y @ (T @ y)))
        if ny == 0.0:
            return 0.0
        done = abs(ny - est) <= tol * ny
        est = max(est, ny)
        x = y / ny
        if done:
            break
    return est


def bound_eq4(nw1: float, nw2: float) -> float:
    """Contraction bound for Methods I and II."""
    return float(np.sqrt(1.0 / (1.0 + nw1 ** -2) * 1.0 / (1.0 + nw2 ** -2)))


def single_factor_bound(alpha: float, nw: float) -> float:
    """``((alpha-1)^2 + nw^2) / (alpha^2 + nw^2) = 1 - (2 alpha - 1)/(alpha^2 + nw^2)``."""
    return 1.0 - (2.0 * alpha - 1.0) / (alpha * alpha + nw * nw)


def bound_method3(nw1: float, nw2: float, alpha: float) -> float:
    """Contraction bound for Method III."""
    f2 = ((alpha - 1.0) ** 2 + nw2 ** 2) / (alpha ** 2 + nw2 ** 2)
    f1 = ((alpha - 1.0) ** 2 + nw1 ** 2) / (alpha ** 2 + nw1 ** 2)
    return float(np.sqrt(f2) * np.sqrt(f1))


def alpha_opt(nw2: float) -> float:
    """Minimizer of :func:`single_factor_bound` over ``alpha``.

    Setting the derivative to zero gives ``alpha^2 - alpha - nw2^2 = 0``,
    so ``alpha = 1/2 + sqrt(1/4 + nw2^2)``; always ``>= 1`` and close to
    ``nw2`` when ``nw2`` is large.
    """
    if nw2 < 0:
        raise ValueError("nw2 must be nonnegative")
    return 0.5 + float(np.sqrt(0.25 + nw2 * nw2))


def _adapted_norm(ops: SplittingOperators, F_T):
    """Norm in which one sweep's iteration matrix is a product of two
    normal contractions, so every norm ratio is bounded by the analytic
    bound. SNSS has no such norm and uses the Euclidean one."""
    p, s = ops.problem, ops.scheme
    if s.kind == "SNSS":
        return lambda x: float(np.sqrt(x.re @ x.re + x.im @ x.im))

    if s.kind in ("I", "II"):
        def u(x):
            return p.W2 @ x
    else:
        a = s.alpha

        def u(x):
            Tx, Wx = p.T @ x, p.W1 @ x
            return ComplexVector((a - 1.0) * Tx.re - Wx.im, (a - 1.0) * Tx.im + Wx.re)

    def norm(x):
        v = u(x)
        return float(np.sqrt(v.re @ F_T.solve(v.re) + v.im @ F_T.solve(v.im)))

    return norm


def contraction_estimate(ops: SplittingOperators, restarts: int = 3, iters: int = 60,
                         seed: int = 0, tol: float = 1e-8) -> float:
    """Spectral radius of the sweep matrix by power iteration.

    The homogeneous sweep (``b = 0``) is iterated with exact inner solves
    from ``restarts`` random starts, each for at most ``iters`` sweeps or
    until successive norm ratios agree to ``tol`` relative; the largest
    final ratio is returned. Ratios are measured in a scheme-adapted
    norm, so the result never exceeds the scheme's analytic bound.
    """
    p = ops.problem
    exact = ops.with_inner(EXACT_INNER)
    zero = ComplexVector.zeros(p.n)
    norm = _adapted_norm(ops, factor(p.T))
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(max(1, restarts)):
        x = ComplexVector(rng.standard_normal(p.n), rng.standard_normal(p.n))
        nx = norm(x)
        if nx == 0.0:
            continue
        x = x.scale(1.0 / nx)
        ratio = 0.0
        for _ in range(max(1, iters)):
            y = stationary_step(exact, x, zero)
            ny = norm(y)
            settled = abs(ny - ratio) <= tol * ny
            ratio = ny
            if ny == 0.0 or settled:
                break
            x = y.scale(1.0 / ny)
        best = max(best, ratio)
    return best


def spectral_estimates(p, alphas=(1.0, 2.0, 5.0), ops: Optional[SplittingOperators] = None,
                       seed: int = 0) -> SpectralEstimates:
    """Hatted norms, bounds and optimal ``alpha`` for a problem; the
    contraction estimate is added when ``ops`` is given."""
    F_T = factor(p.T)
    nw1 = hatted_norm(p.W1, p.T, seed=seed, T_factor=F_T)
    nw2 = hatted_norm(p.W2, p.T, seed=seed, T_factor=F_T)
    a_opt = alpha_opt(nw2)
    bounds = {float(a): bound_method3(nw1, nw2, a) for a in (*alphas, a_opt)}
    rho = contraction_estimate(ops, seed=seed) if ops is not None else None
    return SpectralEstimates(nw1, nw2, bound_eq4(nw1, nw2), a_opt, bounds, rho)
