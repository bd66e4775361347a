import numpy as np
import pytest

from indefsplit._backend import COMPILED
from indefsplit.core_la import SparseReal
from indefsplit.model_problems import make_problem


def random_spd(rng, n, lo=0.1, hi=10.0):
    """Dense SPD matrix with eigenvalues drawn from [lo, hi]."""
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    A = Q @ np.diag(rng.uniform(lo, hi, n)) @ Q.T
    return 0.5 * (A + A.T)


def random_triple(rng, n, w_hi=10.0, t_range=(0.5, 2.0)):
    """Problem with dense random SPD W1, W2, T and solution (1+i)e."""
    W1 = SparseReal.from_dense(random_spd(rng, n, 0.1, w_hi), symmetric=True)
    W2 = SparseReal.from_dense(random_spd(rng, n, 0.1, w_hi), symmetric=True)
    T = SparseReal.from_dense(random_spd(rng, n, *t_range), symmetric=True)
    return make_problem("random", W1, W2, T)


def sym_sqrt(T, power):
    w, V = np.linalg.eigh(T)
    return V @ np.diag(w ** power) @ V.T


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


BACKENDS = ["python"] + (["cython"] if COMPILED else [])


def pytest_terminal_summary(terminalreporter):
    """Print one line per acceptance criterion that ran."""
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None:
        return
    ran = {int(r.nodeid.split("test_criterion_")[1][:2])
           for key in ("passed", "failed") for r in terminalreporter.stats.get(key, [])
           if "test_criterion_" in r.nodeid}
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ran):
        line = mod.RESULTS.get(num, f"criterion {num:2d} FAIL  raised before reaching its check")
        terminalreporter.write_line(line)
