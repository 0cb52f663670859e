import csv
import dataclasses
import io
import math

import numpy as np
import pytest

from fraccalc import cli
from fraccalc.differint import catalogue
from fraccalc.settings import SETTINGS

# differint sweeps among the figure datasets, with the function each one differentiates
SWEEPS = {
    "sin_integer_derivatives.csv": "sin",
    "identity_rl_a1.csv": "identity",
    "identity_caputo_a1.csv": "identity",
    "identity_a0.csv": "identity",
    "sqrt.csv": "sqrt",
    "square.csv": "square",
    "sin_rl.csv": "sin",
    "sin_caputo.csv": "sin",
}


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def column(header, rows, name):
    j = header.index(name)
    return np.array([float(r[j]) if r[j] else math.nan for r in rows])


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(scope="module")
def figures(tmp_path_factory):
    first = tmp_path_factory.mktemp("first")
    second = tmp_path_factory.mktemp("second")
    cli.write_figures(first)
    cli.write_figures(second)
    return first, second


def test_figures_are_byte_identical(figures):
    first, second = figures
    names = sorted(p.name for p in first.iterdir())
    assert names == sorted(p.name for p in second.iterdir())
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_index_lists_every_dataset(figures):
    first, _ = figures
    header, rows = read_csv((first / "index.csv").read_text())
    assert header == ["file", "figure", "invocation"]
    listed = {r[0] for r in rows}
    assert listed == {p.name for p in first.iterdir()} - {"index.csv"}
    assert all(r[2].startswith("fraccalc ") for r in rows)


@pytest.mark.parametrize("name", sorted(SWEEPS))
def test_figure_endpoint_orders(figures, name):
    first, _ = figures
    header, rows = read_csv((first / name).read_text())
    f = catalogue(SWEEPS[name])
    x = column(header, rows, "x")
    assert np.allclose(column(header, rows, "alpha=0"), f(x), rtol=0, atol=1e-2)
    assert np.allclose(column(header, rows, "alpha=1"), f.derivative(1)(x), rtol=0, atol=1e-2)


def test_figure_output_format(figures):
    first, _ = figures
    for path in first.iterdir():
        raw = path.read_bytes()
        assert b"\r" not in raw
        assert raw.endswith(b"\n")


def test_gamma_rows(capsys):
    code, out, _ = run(capsys, "gamma", "--interval=-5,5", "--step", "0.01")
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["x", "gamma", "reciprocal_gamma"]
    # 1001 grid points minus the six nonpositive integers 0, -1, ..., -5 in their guard bands
    assert len(rows) == 995
    table = {float(r[0]): float(r[1]) for r in rows}
    assert table[0.5] == pytest.approx(1.7724538509, abs=1e-10)
    assert table[-0.5] == pytest.approx(-3.5449077, abs=1e-7)
    assert 0.0 not in table and -3.0 not in table


def test_gamma_bad_step_is_usage_error(capsys):
    code, _, err = run(capsys, "gamma", "--step", "0")
    assert code == 2
    assert "error" in err


def test_bad_interval_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["gamma", "--interval", "5,1"])
    assert exc.value.code == 2


def test_ml_columns(capsys):
    code, out, _ = run(capsys, "ml", "--params", "1,1;2,1;0.5,1", "--interval=-5,5", "--samples", "11")
    assert code == 0
    header, rows = read_csv(out)
    z = column(header, rows, "z")
    assert np.allclose(column(header, rows, "E(1;1)"), np.exp(z), rtol=1e-10, atol=0)
    cos_col = column(header, rows, "E(2;1)")
    assert cos_col[np.argmin(np.abs(z + 4))] == pytest.approx(math.cos(2.0), rel=1e-12)
    assert cos_col[np.argmin(np.abs(z + 4))] == pytest.approx(-0.4161468, abs=1e-7)
    assert column(header, rows, "E(0.5;1)")[np.argmin(np.abs(z))] == 1.0


def test_ml_bad_params_is_usage_error(capsys):
    code, _, _ = run(capsys, "ml", "--params", "0,1")
    assert code == 2


def test_ml_outside_domain_leaves_empty_cells(capsys):
    code, out, err = run(capsys, "ml", "--params", "1,1", "--interval=-200,0", "--samples", "3")
    assert code == 0
    _, rows = read_csv(out)
    assert rows[0][1] == ""
    assert "empty cell" in err


def test_differint_identity_closed(capsys):
    code, out, _ = run(capsys, "differint", "--function", "identity", "--alpha", "0,0.5", "--interval", "0,1", "--samples", "4")
    assert code == 0
    header, rows = read_csv(out)
    assert column(header, rows, "alpha=0.5")[-1] == pytest.approx(1.1283792, abs=1e-7)
    assert np.array_equal(column(header, rows, "alpha=0"), column(header, rows, "f"))


def test_differint_rl_matches_closed_for_square(capsys):
    args = ["differint", "--function", "square", "--alpha", "0.3,0.6", "--interval", "0,2", "--samples", "6"]
    _, closed, _ = run(capsys, *args, "--engine", "closed")
    _, rl, _ = run(capsys, *args, "--engine", "rl")
    hc, rc = read_csv(closed)
    hr, rr = read_csv(rl)
    for name in ("alpha=0.3", "alpha=0.6"):
        assert np.allclose(column(hr, rr, name), column(hc, rc, name), rtol=5e-3, atol=0)


def test_differint_rejected_cells_are_reported(capsys):
    # integer order 1 is outside the quadrature engines' domain
    code, out, err = run(capsys, "differint", "--engine", "rl", "--alpha", "1", "--samples", "3")
    assert code == 0
    _, rows = read_csv(out)
    assert all(r[2] == "" for r in rows)
    assert "note:" in err


def test_falling_body_columns(capsys):
    code, out, _ = run(capsys, "falling-body", "--v0", "0,60", "--interval", "0,100", "--samples", "5")
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["t", "v0=0", "v0=60"]
    assert column(header, rows, "v0=0")[0] == 0.0
    assert column(header, rows, "v0=0")[-1] == pytest.approx(39.24, rel=1e-9)
    assert column(header, rows, "v0=60")[-1] == pytest.approx(39.24, rel=1e-9)


def test_falling_body_bad_alpha_is_usage_error(capsys):
    code, _, _ = run(capsys, "falling-body", "--alpha", "1.5")
    assert code == 2


def test_tautochrone_columns(capsys):
    code, out, _ = run(capsys, "tautochrone", "--samples", "8")
    assert code == 0
    header, rows = read_csv(out)
    closed = column(header, rows, "S_closed")
    quad = column(header, rows, "S_quadrature")
    assert np.allclose(quad, closed, rtol=1e-4, atol=0)
    phi = column(header, rows, "descent_phi")
    assert (phi.max() - phi.min()) / phi.mean() < 1e-3


def test_config_file_and_convergence_exit_code(capsys, tmp_path):
    saved = dataclasses.asdict(SETTINGS)
    cfg = tmp_path / "tight.cfg"
    # a five-term cap cannot reach double precision for E_1(5)
    cfg.write_text("# tight budget\nml.max_terms = 5\n")
    try:
        code, _, err = run(capsys, "--config", str(cfg), "ml", "--params", "1,1", "--interval=-5,5", "--samples", "3")
    finally:
        SETTINGS.update(**saved)
    assert code == 3
    assert "did not converge" in err or "series terms" in err


def test_unknown_config_key_is_usage_error(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("no_such_key = 1\n")
    code, _, err = run(capsys, "--config", str(cfg), "gamma")
    assert code == 2
    assert "no_such_key" in err


def test_laplace_check_small_grid(capsys):
    code, out, _ = run(capsys, "laplace-check", "--alpha", "0.5", "--s", "2", "--functions", "sin")
    assert code == 0
    header, rows = read_csv(out)
    assert len(rows) == 2
    assert all(float(r[header.index("rel_err")]) < 1e-2 for r in rows)


def test_output_file(tmp_path, capsys):
    target = tmp_path / "g.csv"
    code, out, _ = run(capsys, "gamma", "--interval", "1,2", "--step", "0.5", "--out", str(target))
    assert code == 0 and out == ""
    header, rows = read_csv(target.read_text())
    assert [r[0] for r in rows] == ["1", "1.5", "2"]
    assert float(rows[1][1]) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-15)
    assert float(rows[1][2]) == pytest.approx(2 / math.sqrt(math.pi), rel=1e-15)
    # 17 significant digits round-trip the double exactly
    assert float(rows[1][1]) == cli.specfun.gamma(1.5)
