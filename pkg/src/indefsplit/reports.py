"""Result containers shared by the stationary and Krylov drivers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = ["InnerStats", "SolveReport"]


@dataclass
class InnerStats:
    """Running inner-iteration counts, one slot per subsystem."""

    calls: list = field(default_factory=lambda: [0, 0])
    iterations: list = field(default_factory=lambda: [0, 0])

    def record(self, which: int, iters: int):
        self.calls[which] += 1
        self.iterations[which] += iters

    def means(self):
        return tuple(it / c if c else 0.0 for it, c in zip(self.iterations, self.calls))

    def reset(self):
        self.calls = [0, 0]
        self.iterations = [0, 0]


@dataclass
class SolveReport:
    """Outcome of an outer solve.

    ``R_k`` is the true relative residual of the returned iterate, ``E_k``
    its relative error when the exact solution is known.
    """

    iters: int
    converged: bool
    residual_history: np.ndarray
    R_k: float
    E_k: Optional[float] = None
    wall_seconds: float = 0.0
    inner_iter_means: tuple = (0.0, 0.0)
    message: str = ""

    @property
    def status(self):
        return "converged" if self.converged else "NonConvergence"
