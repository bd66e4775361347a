"""Splitting methods for ``(W1 - W2 + iT) x = b``.

Each scheme writes ``A = M - N`` with ``M`` a scaled product of two
complex subsystems around ``T^-1``::

    M = s * A1 @ inv(T) @ A2

and is usable both as a stationary two-half-step sweep and as the
preconditioner ``v -> M^-1 v = (1/s) A2^-1 T A1^-1 v``.

==========  ==================  ==================  =====================
scheme      A1                  A2                  s
==========  ==================  ==================  =====================
I           W1 + iT             W2 - iT             -1/i
II          T - iW1             T + iW2             -1/i
III(a)      aT + iW2            aT - iW1            1/((1 - 2a) i)
SNSS(a, b)  aT + W2             W1 + i(b + 1)T      1/(a - ib)
==========  ==================  ==================  =====================

Complex subsystems are solved by PRESB-preconditioned Chebyshev
iteration; the real SNSS factor by Cholesky.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .chebyshev import ChebyshevConfig, cheb_solve
from .core_la import ComplexVector, SparseReal, linear_combination, norm2
from .direct_spd import CholeskyFactor, factor
from .model_problems import ProblemInstance
from .presb import PresbOperator, presb_build
from .reports import InnerStats, SolveReport

__all__ = [
    "SplittingScheme",
    "Subsystem",
    "SplittingOperators",
    "build_operators",
    "stationary_step",
    "stationary_solve",
    "precond_apply",
    "EXACT_INNER",
]

#: Inner configuration used when a subsystem solve should be exact.
EXACT_INNER = ChebyshevConfig(reduction=1e-14, max_iters=100)


@dataclass(frozen=True)
class SplittingScheme:
    """Method choice: ``"I"``, ``"II"``, ``"III"`` (needs ``alpha >= 1``)
    or ``"SNSS"`` (needs ``alpha, beta > 0``)."""

    kind: str
    alpha: Optional[float] = None
    beta: Optional[float] = None

    def __post_init__(self):
        kind = str(self.kind).upper()
        object.__setattr__(self, "kind", kind)
        if kind in ("I", "II"):
            if self.alpha is not None or self.beta is not None:
                raise ValueError(f"Method {kind} takes no parameters")
        elif kind == "III":
            if self.alpha is None or not self.alpha >= 1.0:
                raise ValueError("Method III requires alpha >= 1")
            if self.beta is not None:
                raise ValueError("Method III takes no beta")
        elif kind == "SNSS":
            if self.alpha is None or self.beta is None or not (self.alpha > 0 and self.beta > 0):
                raise ValueError("SNSS requires alpha > 0 and beta > 0")
        else:
            raise ValueError(f"unknown scheme {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> "SplittingScheme":
        """Parse ``"I"``, ``"II"``, ``"III:10"`` or ``"SNSS:10,1"``."""
        kind, _, args = text.strip().partition(":")
        vals = [float(a) for a in args.split(",") if a.strip()] if args else []
        kind = kind.strip().upper()
        if kind == "III":
            if len(vals) != 1:
                raise ValueError("Method III needs one parameter, e.g. III:10")
            return cls("III", vals[0])
        if kind == "SNSS":
            if len(vals) != 2:
                raise ValueError("SNSS needs two parameters, e.g. SNSS:10,1")
            return cls("SNSS", vals[0], vals[1])
        if vals:
            raise ValueError(f"Method {kind} takes no parameters")
        return cls(kind)

    @property
    def label(self) -> str:
        if self.kind == "III":
            return f"III(alpha={self.alpha:g})"
        if self.kind == "SNSS":
            return f"SNSS(alpha={self.alpha:g},beta={self.beta:g})"
        return self.kind

    @property
    def scale(self) -> complex:
        """The scalar ``s`` in ``M = s A1 T^-1 A2``."""
        if self.kind in ("I", "II"):
            return -1.0 / 1j
        if self.kind == "III":
            return 1.0 / ((1.0 - 2.0 * self.alpha) * 1j)
        return 1.0 / (self.alpha - 1j * self.beta)


@dataclass(eq=False)
class Subsystem:
    """One factor ``re + i im`` of ``M`` with its solver.

    Complex factors hold a :class:`PresbOperator`; the real SNSS factor
    (``im is None``) holds a Cholesky factor.
    """

    re: SparseReal
    im: Optional[SparseReal]
    presb: Optional[PresbOperator] = None
    direct: Optional[CholeskyFactor] = None

    @classmethod
    def complex(cls, R, S, negative=False):
        """``R + iS``, or ``R - iS`` when ``negative``."""
        P = presb_build(R, S, conjugate=negative)
        return cls(R, S.scaled(-1.0) if negative else S, presb=P)

    @classmethod
    def real(cls, R):
        return cls(R, None, direct=factor(R))

    def solve(self, c: ComplexVector, cfg: ChebyshevConfig):
        """Return ``(z, inner_iterations)``."""
        if self.direct is not None:
            return ComplexVector(self.direct.solve(c.re), self.direct.solve(c.im)), 0
        return cheb_solve(self.re, self.im, self.presb, c, cfg)

    def matvec(self, x: ComplexVector) -> ComplexVector:
        if self.im is None:
            return ComplexVector(self.re @ x.re, self.re @ x.im)
        return ComplexVector(self.re @ x.re - self.im @ x.im, self.im @ x.re + self.re @ x.im)

    def to_dense(self):
        d = self.re.to_dense()
        return d if self.im is None else d + 1j * self.im.to_dense()


@dataclass(eq=False)
class SplittingOperators:
    """Everything a scheme needs, factored once per (scheme, problem)."""

    scheme: SplittingScheme
    sub1: Subsystem
    sub2: Subsystem
    problem: ProblemInstance
    inner_cfg: ChebyshevConfig
    stats: InnerStats = field(default_factory=InnerStats)

    def with_inner(self, cfg: ChebyshevConfig) -> "SplittingOperators":
        """Same factorizations, different inner configuration."""
        return SplittingOperators(self.scheme, self.sub1, self.sub2, self.problem, cfg)

    def solve_sub(self, which: int, c: ComplexVector) -> ComplexVector:
        sub = self.sub1 if which == 0 else self.sub2
        z, it = sub.solve(c, self.inner_cfg)
        if sub.direct is None:
            self.stats.record(which, it)
        return z

    # dense assembly, for small-problem checks
    def dense_M(self):
        s = self.scheme.scale
        T = self.problem.T.to_dense()
        return s * self.sub1.to_dense() @ np.linalg.solve(T, self.sub2.to_dense())

    def dense_N(self):
        return self.dense_M() - self.problem.to_dense()


def build_operators(p: ProblemInstance, s: SplittingScheme,
                    inner_cfg: Optional[ChebyshevConfig] = None) -> SplittingOperators:
    """Set up both subsystems of scheme ``s`` for problem ``p``.

    Raises
    ------
    NonPositivePivot
        A factored matrix is not SPD.
    """
    inner_cfg = inner_cfg or ChebyshevConfig()
    W1, W2, T = p.W1, p.W2, p.T
    if s.kind == "I":
        sub1 = Subsystem.complex(W1, T)
        sub2 = Subsystem.complex(W2, T, negative=True)
    elif s.kind == "II":
        sub1 = Subsystem.complex(T, W1, negative=True)
        sub2 = Subsystem.complex(T, W2)
    elif s.kind == "III":
        aT = T.scaled(s.alpha)
        sub1 = Subsystem.complex(aT, W2)
        sub2 = Subsystem.complex(aT, W1, negative=True)
    else:
        sub1 = Subsystem.real(linear_combination((s.alpha, T), (1.0, W2)))
        sub2 = Subsystem.complex(W1, T.scaled(s.beta + 1.0))
    return SplittingOperators(s, sub1, sub2, p, inner_cfg)


def _comb(*terms):
    """``sum(c * v)`` for complex scalars ``c`` and ComplexVectors ``v``."""
    re = np.zeros_like(terms[0][1].re)
    im = np.zeros_like(re)
    for c, v in terms:
        c = complex(c)
        if c.real:
            re += c.real * v.re
            im += c.real * v.im
        if c.imag:
            re -= c.imag * v.im
            im += c.imag * v.re
    return ComplexVector(re, im)


def stationary_step(ops: SplittingOperators, x: ComplexVector, b: ComplexVector) -> ComplexVector:
    """One full sweep ``x -> x+`` of the scheme."""
    p, s = ops.problem, ops.scheme
    W1x = lambda v: p.W1 @ v  # noqa: E731
    W2x = lambda v: p.W2 @ v  # noqa: E731
    Tx = lambda v: p.T @ v  # noqa: E731
    if s.kind == "I":
        y = ops.solve_sub(0, _comb((1, W2x(x)), (1, b)))
        return ops.solve_sub(1, _comb((1, W1x(y)), (-1, b)))
    if s.kind == "II":
        y = ops.solve_sub(0, _comb((-1j, W2x(x)), (-1j, b)))
        return ops.solve_sub(1, _comb((1j, W1x(y)), (-1j, b)))
    if s.kind == "III":
        a = s.alpha
        y = ops.solve_sub(0, _comb((a - 1, Tx(x)), (1j, W1x(x)), (-1j, b)))
        return ops.solve_sub(1, _comb((a - 1, Tx(y)), (-1j, W2x(y)), (-1j, b)))
    a, beta = s.alpha, s.beta
    y = ops.solve_sub(0, _comb((a + 1j, Tx(x)), (1, W1x(x)), (-1, b)))
    return ops.solve_sub(1, _comb((1j * beta, Tx(y)), (1, W2x(y)), (1, b)))


def precond_apply(ops: SplittingOperators, v: ComplexVector) -> ComplexVector:
    """``M^-1 v``: solve with ``A1``, multiply by ``T``, solve with ``A2``,
    divide by ``s``."""
    w = ops.solve_sub(0, v)
    w = ops.problem.T @ w
    w = ops.solve_sub(1, w)
    return w.scale(1.0 / ops.scheme.scale)


def _residual(p, x):
    Ax = p.matvec(x)
    return ComplexVector(p.b.re - Ax.re, p.b.im - Ax.im)


def stationary_solve(ops: SplittingOperators, b: Optional[ComplexVector] = None,
                     tol: float = 1e-10, max_sweeps: int = 1000,
                     x0: Optional[ComplexVector] = None):
    """Sweep until ``||b - A x|| <= tol ||b||`` or ``max_sweeps``.

    Returns ``(x, SolveReport)``; running out of sweeps sets
    ``converged=False`` rather than raising.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    p = ops.problem
    if b is not None and b is not p.b:
        p = ProblemInstance(p.name, p.n, p.W1, p.W2, p.T, b, None, p.params)
    b = p.b
    ops.stats.reset()
    t0 = time.perf_counter()
    x = ComplexVector.zeros(p.n) if x0 is None else x0.copy()
    nb = norm2(b)
    scale = nb if nb > 0 else 1.0
    hist = [norm2(_residual(p, x)) / scale]
    k = 0
    while hist[-1] > tol and k < max_sweeps:
        x = stationary_step(ops, x, b)
        k += 1
        hist.append(norm2(_residual(p, x)) / scale)
    E_k = None
    if p.x_exact is not None:
        E_k = norm2(x - p.x_exact) / norm2(p.x_exact)
    report = SolveReport(
        iters=k,
        converged=hist[-1] <= tol,
        residual_history=np.asarray(hist),
        R_k=hist[-1],
        E_k=E_k,
        wall_seconds=time.perf_counter() - t0,
        inner_iter_means=ops.stats.means(),
    )
    return x, report
