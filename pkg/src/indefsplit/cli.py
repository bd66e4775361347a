"""Command line entry point: ``indefsplit {generate,solve,experiment,census,spectrum}``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .direct_spd import NonPositivePivot
from .harness import (
    CENSUS_COLUMNS,
    COLUMNS,
    ExperimentSpec,
    MethodSpec,
    chebyshev_census,
    emit_table,
    make_problem_from_spec,
    make_scheme,
    parse_config,
    run_cell,
    run_experiment,
)
from .krylov import ConfigurationError
from .model_problems import save_problem
from .splittings import build_operators
from .spectral import spectral_estimates

EXIT_OK, EXIT_INVALID, EXIT_NONCONVERGED = 0, 2, 3


def _add_problem_args(p, with_problem_dir=True):
    p.add_argument("--example", type=int, choices=(1, 2, 3))
    p.add_argument("--m", type=int, default=32, help="grid points per direction (n = m^2)")
    p.add_argument("--omega", type=float)
    p.add_argument("--sigma1", type=float)
    p.add_argument("--sigma2", type=float)
    if with_problem_dir:
        p.add_argument("--problem", help="directory written by 'generate'")


def _add_method_args(p):
    p.add_argument("--method", default="I", help="I, II, III, snss or none")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--krylov", choices=("gmres", "fgmres", "stationary"))
    p.add_argument("--inner-tol", type=float)
    p.add_argument("--outer-tol", type=float, default=1e-10)
    p.add_argument("--max-outer", type=int, default=1000)
    p.add_argument("--max-inner", type=int, default=20)


def _add_output_args(p):
    p.add_argument("--format", choices=("csv", "markdown"), default="csv")
    p.add_argument("--out", help="write the table here instead of stdout")
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    ap = argparse.ArgumentParser(prog="indefsplit", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a test problem as Matrix Market files")
    _add_problem_args(g, with_problem_dir=False)
    g.add_argument("--out", required=True)

    s = sub.add_parser("solve", help="solve one problem with one method")
    _add_problem_args(s)
    _add_method_args(s)
    _add_output_args(s)
    s.add_argument("--history", help="write the residual history as CSV")

    e = sub.add_parser("experiment", help="run a config file of methods")
    e.add_argument("config")
    e.add_argument("--format", choices=("csv", "markdown"))
    e.add_argument("--out")

    c = sub.add_parser("census", help="mean inner iterations versus inner tolerance")
    _add_problem_args(c)
    _add_method_args(c)
    _add_output_args(c)
    c.add_argument("--reductions", default="1e-2,1e-4,1e-6,1e-10")

    sp = sub.add_parser("spectrum", help="hatted norms, bounds and contraction estimate")
    _add_problem_args(sp)
    sp.add_argument("--method", default="I")
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--seed", type=int, default=0)
    return ap


def _spec_from_args(a) -> ExperimentSpec:
    if a.example is None and getattr(a, "problem", None) is None:
        raise ConfigurationError("give --example or --problem")
    params = {k: getattr(a, k) for k in ("omega", "sigma1", "sigma2") if getattr(a, k) is not None}
    spec = ExperimentSpec(
        example=a.example, sizes=(a.m,), params=params,
        problem_dir=getattr(a, "problem", None),
        outer_tol=getattr(a, "outer_tol", 1e-10),
        max_outer=getattr(a, "max_outer", 1000),
        seed=getattr(a, "seed", 0),
        format=getattr(a, "format", None) or "csv",
    )
    return spec


def _method_from_args(a, spec):
    scheme = make_scheme(a.method, a.alpha, a.beta, spec)
    return MethodSpec(scheme, a.krylov, a.inner_tol, getattr(a, "max_inner", 20))


def _emit(rows, fmt, out, columns):
    text = emit_table(rows, fmt, out, columns)
    if out is None:
        sys.stdout.write(text)


def _status(rows):
    return EXIT_NONCONVERGED if any(r["status"] != "converged" for r in rows) else EXIT_OK


def cmd_generate(a):
    spec = _spec_from_args(a)
    if spec.example is None:
        raise ConfigurationError("generate needs --example")
    p = make_problem_from_spec(spec)
    out = save_problem(p, a.out)
    print(f"wrote {p.name} n={p.n} to {out}")
    return EXIT_OK


def cmd_solve(a):
    spec = _spec_from_args(a)
    spec.methods = [_method_from_args(a, spec)]
    spec.validate()
    p = make_problem_from_spec(spec)
    row, rep = run_cell(p, spec, spec.methods[0])
    if a.history and rep is not None:
        lines = "".join(f"{k},{r:.6e}\n" for k, r in enumerate(rep.residual_history))
        Path(a.history).write_text("k,relres\n" + lines)
    _emit([row], spec.format, a.out, COLUMNS)
    return _status([row])


def cmd_experiment(a):
    spec = parse_config(Path(a.config).read_text())
    fmt = a.format or spec.format
    out = a.out or spec.output
    rows = run_experiment(spec)
    _emit(rows, fmt, out, COLUMNS)
    return _status(rows)


def cmd_census(a):
    spec = _spec_from_args(a)
    spec.methods = [_method_from_args(a, spec)]
    spec.validate()
    reductions = [float(r) for r in a.reductions.split(",") if r.strip()]
    rows = chebyshev_census(spec, reductions)
    _emit(rows, spec.format, a.out, CENSUS_COLUMNS)
    return _status(rows)


def cmd_spectrum(a):
    spec = _spec_from_args(a)
    p = make_problem_from_spec(spec)
    scheme = make_scheme(a.method, a.alpha, a.beta, spec)
    ops = build_operators(p, scheme) if scheme is not None else None
    alphas = (1.0, 2.0, 5.0) + ((a.alpha,) if a.alpha else ())
    est = spectral_estimates(p, alphas=alphas, ops=ops, seed=a.seed)
    print(f"problem={p.name}")
    print(f"n={p.n}")
    print(f"method={'none' if scheme is None else scheme.label}")
    for line in est.as_lines():
        print(line)
    return EXIT_OK


_COMMANDS = {
    "generate": cmd_generate,
    "solve": cmd_solve,
    "experiment": cmd_experiment,
    "census": cmd_census,
    "spectrum": cmd_spectrum,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigurationError, NonPositivePivot, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
