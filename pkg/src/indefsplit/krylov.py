"""Full GMRES and flexible GMRES over the complex field.

Both are right-preconditioned, so the Arnoldi recurrence residual is the
residual of the original system (up to the accuracy of the inner solves).
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core_la import ComplexVector, norm2
from .model_problems import ProblemInstance
from .reports import SolveReport
from .splittings import SplittingOperators, precond_apply

__all__ = [
    "KrylovConfig",
    "ConfigurationError",
    "gmres_solve",
    "evaluate_solution",
    "LOOSE_INNER_LIMIT",
]

#: Inner reductions above this make the preconditioner vary between calls.
LOOSE_INNER_LIMIT = 1e-8

_FLAVORS = ("gmres", "fgmres", "none")


class ConfigurationError(ValueError):
    """Inconsistent solver settings."""


@dataclass(frozen=True)
class KrylovConfig:
    """``flavor`` is ``"gmres"``, ``"fgmres"`` or ``"none"`` (no preconditioner)."""

    flavor: str = "fgmres"
    outer_reduction: float = 1e-10
    max_outer: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "flavor", str(self.flavor).lower())
        if self.flavor not in _FLAVORS:
            raise ConfigurationError(f"flavor must be one of {_FLAVORS}")
        if not 0.0 < self.outer_reduction < 1.0:
            raise ConfigurationError("outer_reduction must lie in (0, 1)")
        if self.max_outer < 1:
            raise ConfigurationError("max_outer must be >= 1")


def validate(ops: Optional[SplittingOperators], cfg: KrylovConfig):
    """Reject a loosely solved (hence variable) preconditioner under plain GMRES."""
    if ops is not None and cfg.flavor == "gmres" and ops.inner_cfg.reduction > LOOSE_INNER_LIMIT:
        raise ConfigurationError(
            f"inner reduction {ops.inner_cfg.reduction:g} makes the preconditioner "
            "inexact; use FGMRES"
        )
    if ops is None and cfg.flavor != "none":
        raise ConfigurationError(f"{cfg.flavor} needs splitting operators")


def evaluate_solution(p: ProblemInstance, x: ComplexVector):
    """``(R_k, E_k)``; ``E_k`` is None without an exact solution."""
    Ax = p.matvec(x)
    r = ComplexVector(p.b.re - Ax.re, p.b.im - Ax.im)
    nb = norm2(p.b)
    R_k = norm2(r) / nb if nb > 0 else norm2(r)
    E_k = None
    if p.x_exact is not None:
        E_k = norm2(x - p.x_exact) / norm2(p.x_exact)
    return R_k, E_k


def _givens(a, b):
    """Complex rotation ``(c, s)`` with ``[c, s; -conj(s), c] [a; b] = [r; 0]``, c real."""
    if b == 0:
        return 1.0, 0.0
    if a == 0:
        return 0.0, np.conj(b) / abs(b)
    t = np.hypot(abs(a), abs(b))
    c = abs(a) / t
    s = (a / abs(a)) * np.conj(b) / t
    return c, s


def gmres_solve(p: ProblemInstance, ops: Optional[SplittingOperators] = None,
                cfg: KrylovConfig = KrylovConfig()):
    """Solve ``A x = b`` from a zero initial guess.

    Returns
    -------
    x : ComplexVector
    report : SolveReport
        ``residual_history`` holds the recurrence residuals divided by
        ``||b||``; ``R_k`` is recomputed from the returned iterate.

    Raises
    ------
    ConfigurationError
        Plain GMRES with an inexact preconditioner.
    """
    if cfg.flavor == "none":
        ops = None
    validate(ops, cfg)
    t0 = time.perf_counter()
    if ops is not None:
        ops.stats.reset()
    n = p.n
    b = p.b.to_complex()
    nb = np.linalg.norm(b)
    tol = cfg.outer_reduction * nb
    flexible = cfg.flavor == "fgmres"

    def M_inv(v):
        if ops is None:
            return v
        return precond_apply(ops, ComplexVector.from_complex(v)).to_complex()

    def A_mul(v):
        return p.matvec(ComplexVector.from_complex(v)).to_complex()

    def finish(x, k, hist, converged, message=""):
        xv = ComplexVector.from_complex(x)
        R_k, E_k = evaluate_solution(p, xv)
        return xv, SolveReport(
            iters=k,
            converged=converged,
            residual_history=np.asarray(hist) / (nb if nb > 0 else 1.0),
            R_k=R_k,
            E_k=E_k,
            wall_seconds=time.perf_counter() - t0,
            inner_iter_means=ops.stats.means() if ops is not None else (0.0, 0.0),
            message=message,
        )

    if nb == 0.0:
        return finish(np.zeros(n, complex), 0, [0.0], True)

    V = [b / nb]
    Z = []
    H = np.zeros((cfg.max_outer + 1, cfg.max_outer), dtype=complex)
    cs = np.zeros(cfg.max_outer)
    sn = np.zeros(cfg.max_outer, dtype=complex)
    g = np.zeros(cfg.max_outer + 1, dtype=complex)
    g[0] = nb
    hist = [nb]
    x = np.zeros(n, complex)

    def current(k):
        y = np.linalg.solve(np.triu(H[:k, :k]), g[:k]) if k else np.zeros(0)
        if flexible:
            return np.column_stack(Z[:k]) @ y if k else np.zeros(n, complex)
        return M_inv(np.column_stack(V[:k]) @ y) if k else np.zeros(n, complex)

    for j in range(cfg.max_outer):
        z = M_inv(V[j])
        if flexible:
            Z.append(z)
        w = A_mul(z)
        w_norm0 = np.linalg.norm(w)
        for i in range(j + 1):
            H[i, j] = np.vdot(V[i], w)
            w = w - H[i, j] * V[i]
        h = np.linalg.norm(w)
        if h < w_norm0 / np.sqrt(2.0):
            for i in range(j + 1):
                corr = np.vdot(V[i], w)
                H[i, j] += corr
                w = w - corr * V[i]
            h = np.linalg.norm(w)
        H[j + 1, j] = h
        for i in range(j):
            hi, hi1 = H[i, j], H[i + 1, j]
            H[i, j] = cs[i] * hi + sn[i] * hi1
            H[i + 1, j] = -np.conj(sn[i]) * hi + cs[i] * hi1
        cs[j], sn[j] = _givens(H[j, j], H[j + 1, j])
        H[j, j] = cs[j] * H[j, j] + sn[j] * H[j + 1, j]
        H[j + 1, j] = 0.0
        g[j + 1] = -np.conj(sn[j]) * g[j]
        g[j] = cs[j] * g[j]
        hist.append(abs(g[j + 1]))
        k = j + 1
        breakdown = h == 0.0
        if abs(g[j + 1]) <= tol or breakdown:
            x = current(k)
            if np.linalg.norm(b - A_mul(x)) <= tol:
                return finish(x, k, hist, True)
            if breakdown:
                return finish(x, k, hist, False, "breakdown")
        V.append(w / h)
    x = current(cfg.max_outer)
    converged = np.linalg.norm(b - A_mul(x)) <= tol
    return finish(x, cfg.max_outer, hist, converged, "" if converged else "max_outer reached")
