"""PRESB preconditioner for ``(R + iS) z = c`` with ``R``, ``S`` SPD.

The complex system is handled in its real block form acting on
``(Re z, Im z)``::

    [R  -S] [u]   [Re c]
    [S   R] [v] = [Im c]

and the preconditioner is ``B = [[R, -S], [S, R + 2S]]``. It factors as::

    B = [[I, -I], [0, I]] @ [[R+S, 0], [S, R+S]] @ [[I, I], [0, I]]

so one application costs two solves with ``R + S``. The eigenvalues of
``B^-1 A`` are real and lie in ``[1/2, 1]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_la import ComplexVector, DimensionMismatch, SparseReal, linear_combination
from .direct_spd import CholeskyFactor, factor

__all__ = [
    "PresbOperator",
    "presb_build",
    "presb_apply",
    "presb_spectrum_probe",
    "block_matvec",
    "presb_block_matvec",
]


@dataclass(frozen=True, eq=False)
class PresbOperator:
    """Factored PRESB preconditioner.

    With ``conjugate_flag`` set the operator targets ``R - iS`` and is
    applied as ``conj(B^-1 conj(c))``.
    """

    R: SparseReal
    S: SparseReal
    F_RS: CholeskyFactor
    conjugate_flag: bool = False

    @property
    def n(self):
        return self.R.n_rows

    def apply(self, c: ComplexVector) -> ComplexVector:
        return presb_apply(self, c)


def presb_build(R: SparseReal, S: SparseReal, conjugate: bool = False) -> PresbOperator:
    """Factor ``R + S`` once.

    Raises
    ------
    NonPositivePivot
        ``R + S`` is not positive definite.
    """
    if R.shape != S.shape or R.n_rows != R.n_cols:
        raise DimensionMismatch("R and S must be square and of equal order")
    F = factor(linear_combination((1.0, R), (1.0, S)))
    return PresbOperator(R, S, F, bool(conjugate))


def presb_apply(P: PresbOperator, c: ComplexVector) -> ComplexVector:
    """Return ``B^-1 c``; see the module docstring for ``B``."""
    if len(c) != P.n:
        raise DimensionMismatch(f"vector has length {len(c)}, operator order is {P.n}")
    return ComplexVector(*apply_arrays(P, c.re, c.im))


def apply_arrays(P: PresbOperator, c_re, c_im):
    """:func:`presb_apply` on raw real and imaginary parts, unchecked."""
    f2 = -c_im if P.conjugate_flag else c_im
    h1 = P.F_RS.solve(c_re + f2)
    h2 = P.F_RS.solve(f2 - P.S @ h1)
    return h1 - h2, (-h2 if P.conjugate_flag else h2)


def block_matvec(A_re: SparseReal, A_im: SparseReal, z: ComplexVector) -> ComplexVector:
    """Apply ``[[A_re, -A_im], [A_im, A_re]]``, i.e. ``(A_re + i A_im) z``."""
    return ComplexVector(A_re @ z.re - A_im @ z.im, A_im @ z.re + A_re @ z.im)


def presb_block_matvec(P: PresbOperator, z: ComplexVector) -> ComplexVector:
    """Apply ``B`` itself (conjugated form when ``conjugate_flag`` is set)."""
    u = z.re
    v = -z.im if P.conjugate_flag else z.im
    Su, Sv = P.S @ u, P.S @ v
    top = P.R @ u - Sv
    bot = Su + P.R @ v + 2.0 * Sv
    return ComplexVector(top, -bot if P.conjugate_flag else bot)


def _same(A, B):
    return (A.shape == B.shape and np.array_equal(A.row_ptr, B.row_ptr)
            and np.array_equal(A.col_idx, B.col_idx) and np.array_equal(A.values, B.values))


def _own_pair_radius(P, iters, rng):
    # B^-1 A = [[I, X], [0, Y]] with Y = I - 2 F^-1 S F^-1 R, F = R + S.
    # R Y is symmetric, so Y - 3/4 I is self-adjoint in the R inner product
    # and the Rayleigh quotient of its square approaches the top eigenvalue
    # from below.
    def Z(v):
        y = v - 2.0 * P.F_RS.solve(P.S @ P.F_RS.solve(P.R @ v)) - 0.75 * v
        return y

    x = rng.standard_normal(P.n)
    x /= np.sqrt(x @ (P.R @ x))
    rq = 0.0
    for _ in range(max(1, iters)):
        y = Z(x)
        rq = max(rq, float(y @ (P.R @ y)))
        ny = np.sqrt(y @ (P.R @ y))
        if ny == 0.0:
            break
        x = y / ny
    return max(0.25, float(np.sqrt(rq)))


def presb_spectrum_probe(P: PresbOperator, A_re=None, A_im=None, iters: int = 200,
                         seed: int = 0, block_op=None) -> float:
    """Estimate the spectral radius of ``G = B^-1 A - (3/4) I``.

    Parameters
    ----------
    P : PresbOperator
    A_re, A_im : SparseReal
        Real and imaginary parts of the targeted complex matrix. For a
        conjugated operator the imaginary part is ``-S``.
    iters : int
        Power iterations.
    block_op : callable, optional
        Apply an arbitrary real block operator ``A`` to a
        :class:`ComplexVector` instead of ``A_re + i A_im``.

    Notes
    -----
    When ``A`` is the operator's own matrix the block triangular structure
    of ``B^-1 A`` is used: its spectrum is ``{1}`` plus that of a matrix
    self-adjoint in the ``R`` inner product, whose largest shifted
    eigenvalue is found without overshoot. Otherwise plain power iteration
    on ``G^2`` is used, so that eigenvalues near ``+1/4`` and ``-1/4`` do
    not cause oscillation. For a correctly paired preconditioner the true
    value is at most 1/4.
    """
    rng = np.random.default_rng(seed)
    if block_op is None:
        target_im = P.S.scaled(-1.0) if P.conjugate_flag else P.S
        if _same(A_re, P.R) and _same(A_im, target_im):
            return _own_pair_radius(P, iters, rng)

        def block_op(z):
            return block_matvec(A_re, A_im, z)

    n = P.n
    x = ComplexVector(rng.standard_normal(n), rng.standard_normal(n))

    def G(z):
        y = presb_apply(P, block_op(z))
        return ComplexVector(y.re - 0.75 * z.re, y.im - 0.75 * z.im)

    def nrm(z):
        return float(np.sqrt(z.re @ z.re + z.im @ z.im))

    x = x.scale(1.0 / nrm(x))
    ratio = 0.0
    for _ in range(max(1, iters)):
        y = G(G(x))
        ny = nrm(y)
        if ny == 0.0:
            return 0.0
        ratio = ny
        x = y.scale(1.0 / ny)
    return float(np.sqrt(ratio))
