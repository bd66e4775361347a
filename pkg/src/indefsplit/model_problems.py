"""Test problems ``(W1 - W2 + iT) x = b`` on the unit square, and file I/O
for externally supplied triples.

Grid unknowns are ordered lexicographically with the x-index fastest:
node ``(x_j, y_k) = (j h, k h)``, ``j, k = 1..m``, has index ``(j-1) + m (k-1)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import mmio
from .core_la import (
    ComplexVector,
    DimensionMismatch,
    SparseReal,
    complex_spmv,
    kron_sum,
    linear_combination,
    norm2,
    tridiag,
)
from .direct_spd import factor

__all__ = [
    "ProblemInstance",
    "example1",
    "example2",
    "example3",
    "load_problem",
    "save_problem",
    "make_problem",
    "grid_coordinates",
    "relative_residual",
]


@dataclass(eq=False)
class ProblemInstance:
    """A complex symmetric system with indefinite real part ``W1 - W2``."""

    name: str
    n: int
    W1: SparseReal
    W2: SparseReal
    T: SparseReal
    b: ComplexVector
    x_exact: Optional[ComplexVector] = None
    params: dict = field(default_factory=dict)

    @property
    def W(self) -> SparseReal:
        """Real part ``W1 - W2``."""
        return linear_combination((1.0, self.W1), (-1.0, self.W2))

    def matvec(self, x: ComplexVector) -> ComplexVector:
        """``A x`` without assembling ``W``."""
        y = complex_spmv(self.W1, self.T, x)
        y.re -= self.W2 @ x.re
        y.im -= self.W2 @ x.im
        return y

    def to_dense(self) -> np.ndarray:
        return self.W1.to_dense() - self.W2.to_dense() + 1j * self.T.to_dense()

    def validate(self, spd_check=True):
        """Check dimensions, symmetry and (optionally) that ``T`` is SPD."""
        for name in ("W1", "W2", "T"):
            M = getattr(self, name)
            if M.shape != (self.n, self.n):
                raise DimensionMismatch(f"{name} has shape {M.shape}, expected ({self.n}, {self.n})")
            if not M.is_symmetric(rtol=1e-14):
                raise ValueError(f"{name} is not symmetric")
        if len(self.b) != self.n:
            raise DimensionMismatch(f"b has length {len(self.b)}, expected {self.n}")
        if self.x_exact is not None and len(self.x_exact) != self.n:
            raise DimensionMismatch("x_exact has the wrong length")
        if spd_check:
            factor(self.T)
        return self


def make_problem(name, W1, W2, T, params=None, b=None, x_exact=None):
    """Assemble an instance; without ``b`` the solution is ``(1+i)e``."""
    n = W1.n_rows
    p = ProblemInstance(name, n, W1, W2, T, ComplexVector.zeros(n), x_exact, dict(params or {}))
    if b is None:
        p.x_exact = ComplexVector(np.ones(n), np.ones(n))
        p.b = p.matvec(p.x_exact)
    else:
        p.b = b
    return p


def grid_coordinates(m):
    """Interior node coordinates ``(x, y)`` in unknown order."""
    h = 1.0 / (m + 1)
    t = h * np.arange(1, m + 1)
    return np.tile(t, m), np.repeat(t, m)


def _laplacian(m, scale=1.0):
    return kron_sum(tridiag(m, -1.0, 2.0, -1.0, scale=scale), m)


def example1(m: int, omega: float) -> ProblemInstance:
    """Damped wave problem: ``K - omega^2 I + i omega (5 omega I + 0.02 K)``.

    ``K`` is the 5-point Laplacian scaled by ``h^-2``.
    """
    if m < 1 or not omega > 0:
        raise ValueError("need m >= 1 and omega > 0")
    h = 1.0 / (m + 1)
    n = m * m
    K = _laplacian(m, h ** -2)
    I = SparseReal.identity(n)
    W2 = I.scaled(omega ** 2)
    T = linear_combination((5.0 * omega ** 2, I), (0.02 * omega, K))
    params = {"m": m, "h": h, "omega": omega, "mu": 0.02}
    return make_problem("example1", K, W2, T, params)


def _helmholtz_matrices(m, sigma1, sigma2):
    if m < 1 or sigma1 < 0 or not sigma2 > 0:
        raise ValueError("need m >= 1, sigma1 >= 0 and sigma2 > 0")
    h = 1.0 / (m + 1)
    n = m * m
    K = _laplacian(m)
    W2 = SparseReal.identity(n, sigma1 * h * h)
    T = SparseReal.identity(n, sigma2 * h * h)
    return h, K, W2, T


def example2(m: int, sigma1: float, sigma2: float) -> ProblemInstance:
    """Complex Helmholtz: ``K - sigma1 h^2 I + i sigma2 h^2 I``, ``K`` unscaled."""
    h, K, W2, T = _helmholtz_matrices(m, sigma1, sigma2)
    params = {"m": m, "h": h, "sigma1": sigma1, "sigma2": sigma2}
    return make_problem("example2", K, W2, T, params)


def example3(m: int, sigma1: float = 100.0, sigma2: float = 10.0) -> ProblemInstance:
    """Example 2's matrices with ``b = h^2 exp(x + i y)`` at the interior nodes."""
    h, K, W2, T = _helmholtz_matrices(m, sigma1, sigma2)
    x, y = grid_coordinates(m)
    f = h * h * np.exp(x)
    b = ComplexVector(f * np.cos(y), f * np.sin(y))
    params = {"m": m, "h": h, "sigma1": sigma1, "sigma2": sigma2}
    return make_problem("example3", K, W2, T, params, b=b)


def relative_residual(p: ProblemInstance, x: ComplexVector) -> float:
    r = p.matvec(x)
    r = ComplexVector(p.b.re - r.re, p.b.im - r.im)
    nb = norm2(p.b)
    return norm2(r) / nb if nb > 0 else norm2(r)


_FILES = {"W1": "W1.mtx", "W2": "W2.mtx", "T": "T.mtx", "b": "b.mtx", "x_exact": "x_exact.mtx"}


def save_problem(p: ProblemInstance, out_dir) -> Path:
    """Write the triple, ``b``, optional ``x_exact`` and ``meta.txt``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for key in ("W1", "W2", "T"):
        mmio.write_matrix(out / _FILES[key], getattr(p, key))
    mmio.write_vector(out / _FILES["b"], p.b)
    if p.x_exact is not None:
        mmio.write_vector(out / _FILES["x_exact"], p.x_exact)
    lines = [f"name={p.name}", f"n={p.n}"]
    lines += [f"{k}={v!r}" for k, v in p.params.items()]
    (out / "meta.txt").write_text("\n".join(lines) + "\n")
    return out


def _read_meta(path):
    meta = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#") or "=" not in line:
            continue
        key, val = (s.strip() for s in line.split("=", 1))
        meta[key] = val
    return meta


def load_problem(W1_path, W2_path=None, T_path=None, b_path=None, name="loaded") -> ProblemInstance:
    """Read a problem from Matrix Market files.

    Called with a single directory, the layout written by
    :func:`save_problem` is expected (``x_exact`` and ``meta.txt`` are
    picked up when present). Otherwise four file paths are required.

    Raises
    ------
    DimensionMismatch
        Inconsistent orders.
    NonPositivePivot
        ``T`` is not positive definite.
    """
    x_exact = None
    params = {}
    if W2_path is None and Path(W1_path).is_dir():
        d = Path(W1_path)
        W1_path, W2_path, T_path, b_path = (d / _FILES[k] for k in ("W1", "W2", "T", "b"))
        if (d / _FILES["x_exact"]).exists():
            x_exact = mmio.read_vector(d / _FILES["x_exact"])
        if (d / "meta.txt").exists():
            meta = _read_meta(d / "meta.txt")
            name = meta.pop("name", name)
            meta.pop("n", None)
            for k, v in meta.items():
                try:
                    params[k] = float(v) if k != "m" else int(v)
                except ValueError:
                    params[k] = v
    elif None in (W2_path, T_path, b_path):
        raise ValueError("need a directory or all four of W1, W2, T, b")
    W1 = mmio.read_matrix(W1_path)
    W2 = mmio.read_matrix(W2_path)
    T = mmio.read_matrix(T_path)
    b = mmio.read_vector(b_path)
    if W1.n_rows != W1.n_cols:
        raise DimensionMismatch("W1 is not square")
    p = ProblemInstance(name, W1.n_rows, W1, W2, T, b, x_exact, params)
    return p.validate(spd_check=True)
