"""Experiment runner: problem generation, method sweeps and table output.

Config files are ``key = value`` lines describing the problem, followed by
one ``[method]`` section per solver cell::

    example = 2
    m = 64, 128
    sigma1 = 100
    sigma2 = 100

    [method]
    scheme = I
    krylov = gmres
    inner_tol = 1e-10

    [method]
    scheme = none
"""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Optional

from .chebyshev import ChebyshevConfig
from .direct_spd import NonPositivePivot
from .krylov import LOOSE_INNER_LIMIT, ConfigurationError, KrylovConfig, gmres_solve
from .model_problems import ProblemInstance, example1, example2, example3, load_problem
from .splittings import SplittingScheme, build_operators, stationary_solve

__all__ = [
    "MethodSpec",
    "ExperimentSpec",
    "parse_config",
    "default_krylov",
    "make_problem_from_spec",
    "run_experiment",
    "run_cell",
    "chebyshev_census",
    "emit_table",
    "snss_defaults",
    "COLUMNS",
]

COLUMNS = ("method", "n", "krylov", "inner_tol", "params", "iters", "cpu_s",
           "R_k", "E_k", "inner1_mean", "inner2_mean", "status")
CENSUS_COLUMNS = ("inner_tol", "n", "iters", "inner1_mean", "inner2_mean", "status")

_FLAVORS = ("gmres", "fgmres", "stationary", "none")


@dataclass(frozen=True)
class MethodSpec:
    """One solver cell. ``scheme=None`` means no preconditioner.

    ``krylov`` and ``inner_tol`` left as None take the example's defaults.
    ``table_params`` marks an SNSS cell whose parameters come from the
    bundled table and are looked up again for each problem size.
    """

    scheme: Optional[SplittingScheme]
    krylov: Optional[str] = None
    inner_tol: Optional[float] = None
    max_inner: int = 20
    table_params: bool = False

    @property
    def label(self):
        return "none" if self.scheme is None else self.scheme.label


@dataclass
class ExperimentSpec:
    example: Optional[int] = None
    sizes: tuple = (32,)
    params: dict = field(default_factory=dict)
    problem_dir: Optional[str] = None
    methods: list = field(default_factory=list)
    outer_tol: float = 1e-10
    max_outer: int = 1000
    seed: int = 0
    output: Optional[str] = None
    format: str = "csv"

    def validate(self):
        if self.example is None and self.problem_dir is None:
            raise ConfigurationError("spec needs an example or a problem directory")
        if self.example is not None and self.example not in (1, 2, 3):
            raise ConfigurationError(f"unknown example {self.example}")
        if self.format not in ("csv", "markdown"):
            raise ConfigurationError("format must be csv or markdown")
        KrylovConfig("none", self.outer_tol, self.max_outer)
        for m in self.methods:
            flavor, inner = resolve_settings(self, m)
            if flavor not in _FLAVORS:
                raise ConfigurationError(f"unknown krylov flavor {flavor!r}")
            if m.scheme is None and flavor == "stationary":
                raise ConfigurationError("a stationary sweep needs a scheme")
            if m.scheme is not None and flavor == "none":
                raise ConfigurationError(f"{m.label}: flavor 'none' takes no scheme")
            if m.scheme is not None and flavor == "gmres" and inner > LOOSE_INNER_LIMIT:
                raise ConfigurationError(
                    f"{m.label}: inner tolerance {inner:g} with plain GMRES; use fgmres"
                )
            ChebyshevConfig(reduction=inner, max_iters=m.max_inner)
        return self


def default_krylov(example):
    """Default ``(flavor, inner_tol)`` for an example number."""
    if example == 2:
        return "gmres", 1e-10
    return "fgmres", 1e-2


def resolve_settings(spec: ExperimentSpec, m: MethodSpec):
    flavor, inner = default_krylov(spec.example)
    if m.scheme is None:
        flavor = "none"
    if m.krylov is not None:
        flavor = m.krylov.lower()
    if m.inner_tol is not None:
        inner = m.inner_tol
    return flavor, inner


# -- configuration -------------------------------------------------------

def parse_config(text: str) -> ExperimentSpec:
    """Parse the ``key = value`` / ``[method]`` format."""
    spec = ExperimentSpec()
    current = None
    methods = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if line.lower() != "[method]":
                raise ConfigurationError(f"line {lineno}: unknown section {line}")
            current = {}
            methods.append(current)
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.lower().replace("-", "_")
        if current is not None:
            current[key] = val
            continue
        try:
            if key == "example":
                spec.example = int(val)
            elif key in ("m", "sizes"):
                spec.sizes = tuple(int(v) for v in val.split(",") if v.strip())
            elif key in ("omega", "sigma1", "sigma2"):
                spec.params[key] = float(val)
            elif key in ("problem", "problem_dir"):
                spec.problem_dir = val
            elif key in ("outer_tol", "outer_reduction"):
                spec.outer_tol = float(val)
            elif key == "max_outer":
                spec.max_outer = int(val)
            elif key == "seed":
                spec.seed = int(val)
            elif key in ("output", "out"):
                spec.output = val
            elif key == "format":
                spec.format = val.lower()
            else:
                raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise ConfigurationError(f"line {lineno}: {exc}") from None
    for sec in methods:
        spec.methods.append(_method_from_section(sec, spec))
    return spec.validate()


def _method_from_section(sec, spec):
    sec = dict(sec)
    name = sec.pop("scheme", sec.pop("method", "none")).strip()
    alpha = sec.pop("alpha", None)
    beta = sec.pop("beta", None)
    krylov = sec.pop("krylov", None)
    inner = sec.pop("inner_tol", None)
    max_inner = int(sec.pop("max_inner", 20))
    if sec:
        raise ConfigurationError(f"unknown method keys: {sorted(sec)}")
    alpha = None if alpha is None else float(alpha)
    beta = None if beta is None else float(beta)
    scheme = make_scheme(name, alpha, beta, spec)
    from_table = name.upper() == "SNSS" and (alpha is None or beta is None)
    return MethodSpec(scheme, krylov, float(inner) if inner is not None else None, max_inner,
                      from_table)


def make_scheme(name, alpha=None, beta=None, spec=None, n=None):
    """Build a scheme from CLI-style pieces; SNSS without parameters
    falls back to the bundled table values."""
    name = name.strip()
    if name.lower() == "none":
        return None
    if ":" in name:
        return SplittingScheme.parse(name)
    kind = name.upper()
    if kind == "SNSS" and (alpha is None or beta is None):
        if spec is None or spec.example is None:
            raise ConfigurationError("SNSS needs --alpha and --beta")
        m = spec.sizes[0] if n is None else None
        found = snss_defaults(spec.example, spec.params, n if n is not None else m * m)
        if found is None:
            raise ConfigurationError("no bundled SNSS parameters for this problem; give alpha and beta")
        alpha = found[0] if alpha is None else alpha
        beta = found[1] if beta is None else beta
    try:
        if kind in ("I", "II"):
            return SplittingScheme(kind)
        if kind == "III":
            if alpha is None:
                raise ConfigurationError("Method III needs alpha")
            return SplittingScheme("III", float(alpha))
        return SplittingScheme(kind, None if alpha is None else float(alpha),
                               None if beta is None else float(beta))
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from None


def snss_defaults(example, params, n):
    """Transcribed ``(alpha, beta)`` for SNSS, or None when not tabulated."""
    text = resources.files("indefsplit").joinpath("data/snss_params.txt").read_text()
    for line in text.splitlines():
        line = line.split("#", 1)[0].split()
        if len(line) != 5:
            continue
        ex, key, nn, a, b = line
        if int(ex) != example or int(nn) != n:
            continue
        if key != "-":
            want = dict(kv.split("=") for kv in key.split(","))
            if any(abs(params.get(k, float("nan")) - float(v)) > 1e-12 for k, v in want.items()):
                continue
        return float(a), float(b)
    return None


# -- running -------------------------------------------------------------

def make_problem_from_spec(spec: ExperimentSpec, m: Optional[int] = None) -> ProblemInstance:
    if spec.problem_dir is not None:
        return load_problem(spec.problem_dir)
    m = spec.sizes[0] if m is None else m
    prm = spec.params
    if spec.example == 1:
        return example1(m, prm.get("omega", 1.0))
    if spec.example == 2:
        return example2(m, prm.get("sigma1", 100.0), prm.get("sigma2", 100.0))
    return example3(m, prm.get("sigma1", 100.0), prm.get("sigma2", 10.0))


def _params_text(scheme):
    if scheme is None or scheme.kind in ("I", "II"):
        return ""
    if scheme.kind == "III":
        return f"alpha={scheme.alpha:g}"
    return f"alpha={scheme.alpha:g};beta={scheme.beta:g}"


def _solve_cell(p, spec, m, flavor, inner, cache):
    cfg = ChebyshevConfig(reduction=inner, max_iters=m.max_inner)
    if m.scheme is None:
        _, rep = gmres_solve(p, None, KrylovConfig("none", spec.outer_tol, spec.max_outer))
        return rep
    key = m.scheme
    if key not in cache:
        cache[key] = build_operators(p, m.scheme, cfg)
    ops = cache[key].with_inner(cfg)
    if flavor == "stationary":
        _, rep = stationary_solve(ops, tol=spec.outer_tol, max_sweeps=spec.max_outer)
        return rep
    _, rep = gmres_solve(p, ops, KrylovConfig(flavor, spec.outer_tol, spec.max_outer))
    return rep


def run_cell(p: ProblemInstance, spec: ExperimentSpec, m: MethodSpec, cache=None):
    """Solve one cell. Returns ``(row, report)``; ``report`` is None when
    the cell failed before producing one."""
    cache = {} if cache is None else cache
    flavor, inner = resolve_settings(spec, m)
    row = {
        "method": m.label, "n": p.n,
        "krylov": flavor, "inner_tol": inner if m.scheme is not None else None,
        "params": _params_text(m.scheme),
        "iters": None, "cpu_s": None, "R_k": None, "E_k": None,
        "inner1_mean": None, "inner2_mean": None, "status": "",
    }
    rep = None
    t0 = time.perf_counter()
    try:
        rep = _solve_cell(p, spec, m, flavor, inner, cache)
    except (NonPositivePivot, ValueError, ArithmeticError) as exc:
        row["status"] = f"error: {exc}"
    else:
        row.update(
            iters=rep.iters, R_k=rep.R_k, E_k=rep.E_k,
            # the real SNSS factor is solved directly: no inner iterations
            inner1_mean=(rep.inner_iter_means[0]
                         if m.scheme is not None and m.scheme.kind != "SNSS" else None),
            inner2_mean=rep.inner_iter_means[1] if m.scheme is not None else None,
            status=rep.status,
        )
    row["cpu_s"] = time.perf_counter() - t0
    return row, rep


def run_experiment(spec: ExperimentSpec):
    """Run every (size, method) cell in spec order.

    Returns a list of row dicts keyed by :data:`COLUMNS`. Failures are
    recorded in ``status``; they never abort the sweep.
    """
    spec.validate()
    rows = []
    sizes = (None,) if spec.problem_dir is not None else spec.sizes
    for m_size in sizes:
        if not spec.methods:
            break
        p = make_problem_from_spec(spec, m_size)
        cache = {}
        for m in spec.methods:
            if m.table_params:
                m = replace(m, scheme=make_scheme("SNSS", spec=spec, n=p.n))
            rows.append(run_cell(p, spec, m, cache)[0])
    return rows


def chebyshev_census(spec: ExperimentSpec, reductions):
    """Mean inner iterations per subsystem for each inner reduction.

    ``spec`` must name one problem size and one preconditioned method.
    """
    if len(spec.methods) != 1 or spec.methods[0].scheme is None:
        raise ConfigurationError("census needs exactly one preconditioned method")
    m = spec.methods[0]
    p = make_problem_from_spec(spec)
    flavor, _ = resolve_settings(spec, m)
    ops = build_operators(p, m.scheme, ChebyshevConfig(max_iters=m.max_inner))
    rows = []
    for red in reductions:
        if flavor == "gmres" and red > LOOSE_INNER_LIMIT:
            flavor_here = "fgmres"
        else:
            flavor_here = flavor
        cfg = ChebyshevConfig(reduction=red, max_iters=m.max_inner)
        _, rep = gmres_solve(p, ops.with_inner(cfg),
                             KrylovConfig(flavor_here, spec.outer_tol, spec.max_outer))
        rows.append({
            "inner_tol": red, "n": p.n, "iters": rep.iters,
            "inner1_mean": None if m.scheme.kind == "SNSS" else rep.inner_iter_means[0],
            "inner2_mean": rep.inner_iter_means[1],
            "status": rep.status,
        })
    return rows


# -- output --------------------------------------------------------------

def _fmt(key, val):
    if val is None:
        return ""
    if key in ("R_k", "E_k"):
        return f"{val:.3e}"
    if key == "inner_tol":
        return f"{val:.0e}"
    if key == "cpu_s":
        return f"{val:.3f}"
    if key.endswith("_mean"):
        return f"{val:.2f}"
    return str(val)


def emit_table(rows, fmt="csv", path=None, columns=None) -> str:
    """Render rows as CSV or a markdown table; write to ``path`` if given."""
    columns = tuple(columns or (rows[0].keys() if rows else COLUMNS))
    cells = [[_fmt(c, r.get(c)) for c in columns] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        w.writerows(cells)
        out = buf.getvalue()
    elif fmt == "markdown":
        lines = ["| " + " | ".join(columns) + " |",
                 "|" + "|".join("---" for _ in columns) + "|"]
        lines += ["| " + " | ".join(c) + " |" for c in cells]
        out = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        Path(path).write_text(out)
    return out

