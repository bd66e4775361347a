"""Chebyshev semi-iteration for PRESB-preconditioned complex systems.

The preconditioned operator has real spectrum in a known interval
(``[1/2, 1]`` for PRESB), so the optimal polynomial acceleration needs no
inner products and no spectral estimation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core_la import ComplexVector, DimensionMismatch, SparseReal
from .presb import PresbOperator, apply_arrays

__all__ = ["ChebyshevConfig", "cheb_solve", "chebyshev_bound"]


@dataclass(frozen=True)
class ChebyshevConfig:
    """Eigenvalue interval, residual reduction and iteration cap.

    ``max_iters`` counts recurrence steps after the initial correction,
    the same way ``cheb_solve`` reports iterations.
    """

    interval_lo: float = 0.5
    interval_hi: float = 1.0
    reduction: float = 1e-2
    max_iters: int = 20

    def __post_init__(self):
        if not 0.0 < self.interval_lo < self.interval_hi:
            raise ValueError("need 0 < interval_lo < interval_hi")
        if not 0.0 < self.reduction < 1.0:
            raise ValueError("reduction must lie in (0, 1)")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


def chebyshev_bound(reduction, lo=0.5, hi=1.0):
    """``ceil(ln(2/eps) / ln(1/q))`` with ``q = (sqrt(k)-1)/(sqrt(k)+1)``."""
    s = np.sqrt(hi / lo)
    q = (s - 1.0) / (s + 1.0)
    return int(np.ceil(np.log(2.0 / reduction) / np.log(1.0 / q)))


def cheb_solve(A_re: SparseReal, A_im: SparseReal, P: PresbOperator, c: ComplexVector,
               cfg: ChebyshevConfig, x0: Optional[ComplexVector] = None):
    """Solve ``(A_re + i A_im) x = c`` approximately.

    Returns
    -------
    x : ComplexVector
    iters : int
        Completed three-term recurrence steps. The first correction
        ``x0 + B^-1 r0 / theta`` is a plain preconditioned Richardson step
        and is not counted, so a solve that stops right after it reports 0.

    Notes
    -----
    Stops once ``||c - A x|| <= reduction * ||c - A x0||`` using the true,
    unpreconditioned residual, or after ``max_iters`` counted steps.
    """
    n = len(c)
    if A_re.shape != (n, n) or A_im.shape != (n, n) or P.n != n:
        raise DimensionMismatch("operator and vector orders differ")
    theta = 0.5 * (cfg.interval_hi + cfg.interval_lo)
    delta = 0.5 * (cfg.interval_hi - cfg.interval_lo)
    sigma = theta / delta

    # the loop works on raw arrays: at small n, object overhead dominates
    Are, Aim = A_re.__matmul__, A_im.__matmul__
    c_re, c_im = c.re, c.im

    def residual(x_re, x_im):
        return c_re - (Are(x_re) - Aim(x_im)), c_im - (Aim(x_re) + Are(x_im))

    def precond(r_re, r_im):
        return apply_arrays(P, r_re, r_im)

    if x0 is None:
        x_re, x_im = np.zeros(n), np.zeros(n)
        r_re, r_im = c_re.copy(), c_im.copy()
    else:
        x_re, x_im = x0.re.copy(), x0.im.copy()
        r_re, r_im = residual(x_re, x_im)
    target = cfg.reduction * np.sqrt(r_re @ r_re + r_im @ r_im)
    if target == 0.0:
        return ComplexVector(x_re, x_im), 0

    rho = 1.0 / sigma
    d_re, d_im = precond(r_re, r_im)
    d_re /= theta
    d_im /= theta
    iters = -1
    while True:
        x_re += d_re
        x_im += d_im
        r_re, r_im = residual(x_re, x_im)
        iters += 1
        if np.sqrt(r_re @ r_re + r_im @ r_im) <= target or iters >= cfg.max_iters:
            return ComplexVector(x_re, x_im), iters
        z_re, z_im = precond(r_re, r_im)
        rho_next = 1.0 / (2.0 * sigma - rho)
        a = rho_next * rho
        bcoef = 2.0 * rho_next / delta
        d_re = a * d_re + bcoef * z_re
        d_im = a * d_im + bcoef * z_im
        rho = rho_next
