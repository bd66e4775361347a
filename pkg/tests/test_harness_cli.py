import csv
import io

import pytest

from indefsplit.cli import main
from indefsplit.harness import (
    COLUMNS,
    ExperimentSpec,
    MethodSpec,
    chebyshev_census,
    emit_table,
    make_scheme,
    parse_config,
    run_experiment,
    snss_defaults,
)
from indefsplit.krylov import ConfigurationError
from indefsplit.splittings import SplittingScheme

CONFIG = """\
example = 2
m = 6, 8
sigma1 = 100
sigma2 = 10
seed = 3

[method]
scheme = I

[method]
scheme = III
alpha = 10
krylov = fgmres
inner_tol = 1e-2

[method]
scheme = none
"""


def without_time(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    for r in rows:
        r.pop("cpu_s")
    return rows


class TestConfig:
    def test_parse(self):
        spec = parse_config(CONFIG)
        assert spec.example == 2 and spec.sizes == (6, 8) and spec.seed == 3
        assert spec.params == {"sigma1": 100.0, "sigma2": 10.0}
        assert [m.label for m in spec.methods] == ["I", "III(alpha=10)", "none"]
        assert spec.methods[1].krylov == "fgmres" and spec.methods[1].inner_tol == 1e-2

    def test_loose_inner_with_gmres_rejected(self):
        bad = CONFIG.replace("krylov = fgmres", "krylov = gmres")
        with pytest.raises(ConfigurationError):
            parse_config(bad)

    @pytest.mark.parametrize("text", ["example = 4\n", "bogus = 1\n", "example = 2\n[other]\n",
                                      "example = 2\n[method]\nscheme = III\n",
                                      "example = 2\n[method]\nscheme = I\ncolour = red\n"])
    def test_rejects(self, text):
        with pytest.raises(ConfigurationError):
            parse_config(text)

    def test_snss_table_defaults(self):
        assert snss_defaults(2, {"sigma1": 1000.0, "sigma2": 10.0}, 4096) == (10.0, 1.0)
        assert snss_defaults(2, {"sigma1": 1.0, "sigma2": 1.0}, 4096) is None
        spec = ExperimentSpec(example=2, sizes=(64,), params={"sigma1": 1000.0, "sigma2": 10.0})
        assert make_scheme("SNSS", spec=spec) == SplittingScheme("SNSS", 10.0, 1.0)
        with pytest.raises(ConfigurationError):
            make_scheme("SNSS")


class TestRun:
    def test_empty_methods_gives_header_only(self):
        rows = run_experiment(ExperimentSpec(example=2, sizes=(4,)))
        assert rows == []
        assert emit_table(rows, "csv", columns=COLUMNS) == ",".join(COLUMNS) + "\n"

    def test_rows_and_formats(self, tmp_path):
        rows = run_experiment(parse_config(CONFIG))
        assert len(rows) == 6
        assert [r["n"] for r in rows] == [36] * 3 + [64] * 3
        assert all(r["status"] == "converged" for r in rows)
        assert all(r["R_k"] <= 1e-10 for r in rows)
        assert rows[0]["krylov"] == "gmres" and rows[0]["inner_tol"] == 1e-10
        assert rows[2]["krylov"] == "none" and rows[2]["inner1_mean"] is None
        text = emit_table(rows, "csv", tmp_path / "t.csv", COLUMNS)
        assert (tmp_path / "t.csv").read_text() == text
        back = list(csv.DictReader(io.StringIO(text)))
        assert [int(r["iters"]) for r in back] == [r["iters"] for r in rows]
        assert back[1]["params"] == "alpha=10" and back[1]["inner_tol"] == "1e-02"
        md = emit_table(rows, "markdown", columns=COLUMNS).splitlines()
        assert md[0].startswith("| method | n |") and len(md) == 8

    def test_deterministic(self):
        a = emit_table(run_experiment(parse_config(CONFIG)), "csv", columns=COLUMNS)
        b = emit_table(run_experiment(parse_config(CONFIG)), "csv", columns=COLUMNS)
        assert without_time(a) == without_time(b)

    def test_stationary_and_nonconvergence(self):
        spec = ExperimentSpec(example=1, sizes=(6,), max_outer=2, methods=[
            MethodSpec(SplittingScheme("I"), "stationary", 1e-10, 50)])
        rows = run_experiment(spec)
        assert rows[0]["status"] == "NonConvergence" and rows[0]["iters"] == 2

    def test_census(self):
        spec = ExperimentSpec(example=1, sizes=(16,), methods=[MethodSpec(SplittingScheme("I"))])
        rows = chebyshev_census(spec, [1e-2, 1e-6, 1e-10])
        means = [r["inner1_mean"] for r in rows]
        assert means == sorted(means)
        assert all(r["status"] == "converged" for r in rows)


class TestCli:
    def test_generate_then_solve(self, tmp_path, capsys):
        out = tmp_path / "prob"
        assert main(["generate", "--example", "2", "--m", "6", "--sigma1", "100",
                     "--sigma2", "10", "--out", str(out)]) == 0
        assert (out / "W1.mtx").exists()
        hist = tmp_path / "h.csv"
        code = main(["solve", "--problem", str(out), "--method", "III", "--alpha", "10",
                     "--history", str(hist)])
        assert code == 0
        text = capsys.readouterr().out
        row = list(csv.DictReader(io.StringIO(text.split("\n", 1)[1])))[0]
        assert row["method"] == "III(alpha=10)" and row["status"] == "converged"
        lines = hist.read_text().splitlines()
        assert lines[0] == "k,relres" and len(lines) == int(row["iters"]) + 2

    def test_experiment_markdown(self, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(CONFIG)
        out = tmp_path / "t.md"
        assert main(["experiment", str(cfg), "--format", "markdown", "--out", str(out)]) == 0
        assert out.read_text().startswith("| method |")

    def test_census_and_spectrum(self, capsys):
        assert main(["census", "--example", "1", "--m", "8", "--reductions", "1e-2,1e-4"]) == 0
        assert capsys.readouterr().out.startswith("inner_tol,n,iters")
        assert main(["spectrum", "--example", "2", "--m", "6", "--sigma1", "1000",
                     "--sigma2", "10"]) == 0
        out = capsys.readouterr().out
        assert "what_norm_2=100" in out and "rho_B_estimate=" in out

    def test_exit_codes(self, capsys):
        assert main(["solve", "--example", "1", "--m", "6", "--krylov", "gmres",
                     "--inner-tol", "1e-2"]) == 2
        assert main(["solve", "--m", "6"]) == 2
        assert main(["solve", "--example", "1", "--m", "6", "--max-outer", "1"]) == 3
        assert main(["solve", "--problem", "/nonexistent/dir"]) == 2
        assert "error:" in capsys.readouterr().err
        with pytest.raises(SystemExit):
            main(["solve", "--example", "7"])


def test_snss_table_params_follow_problem_size(monkeypatch):
    import indefsplit.harness as h

    seen = []
    monkeypatch.setattr(h, "make_problem_from_spec",
                        lambda spec, m=None: type("P", (), {"n": m * m})())
    monkeypatch.setattr(h, "run_cell", lambda p, spec, m, cache: (seen.append(m.scheme), None))
    spec = parse_config("example = 2\nm = 64, 128\nsigma1 = 1000\nsigma2 = 10\n"
                        "[method]\nscheme = SNSS\n")
    run_experiment(spec)
    assert seen == [SplittingScheme("SNSS", 10.0, 1.0), SplittingScheme("SNSS", 5.0, 0.9)]
