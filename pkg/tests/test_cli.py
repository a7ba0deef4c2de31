import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from minimax_relu import cli, experiments
from minimax_relu.reference import REFERENCE


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def _field(line, key):
    for tok in line.split():
        if tok.startswith(key + "="):
            return tok.split("=", 1)[1]
    raise KeyError(key)


def test_approx_exp_five(tmp_path):
    code, out, _ = run("approx", "--builtin", "exp", "--n", 5, "--out", tmp_path / "a.json")
    assert code == 0
    assert float(_field(out, "mean")) == pytest.approx(0.00421, abs=1e-5)
    assert float(_field(out, "gap")) <= 1e-6
    assert (tmp_path / "a.json").exists()


def test_approx_square_three():
    code, out, _ = run("approx", "--builtin", "square", "--n", 3)
    assert code == 0
    assert float(_field(out, "mean")) == pytest.approx(0.05556, abs=1e-5)


def test_concave_expression_is_input_error():
    code, _, err = run("approx", "--expr", "-x^2", "--domain", 0, 1)
    assert code == 1
    assert "NotStrictlyConvex" in err


def test_cube_needs_relaxed_flag():
    assert run("approx", "--builtin", "cube", "--n", 2)[0] == 1
    code, out, _ = run("approx", "--builtin", "cube", "--n", 2, "--relaxed-convexity")
    assert code == 0
    assert float(_field(out, "mean")) == pytest.approx(0.04486, abs=1e-4)


def test_expression_without_domain_is_input_error():
    assert run("approx", "--expr", "exp(x)")[0] == 1


def test_syntax_error_is_input_error():
    code, _, err = run("approx", "--expr", "x +", "--domain", 0, 1)
    assert code == 1
    assert "offset 3" in err or "3" in err


def test_bounds_command():
    code, out, _ = run("bounds", "--builtin", "exp", "--n", 2)
    assert code == 0
    assert float(_field(out, "lower")) == pytest.approx(0.015625, rel=1e-5)
    assert float(_field(out, "upper")) == pytest.approx(0.042473, rel=1e-5)


def test_size_bounds_command():
    code, out, _ = run("bounds", "--builtin", "square", "--n", 2, "--neurons", 6, "--layers", 3)
    assert code == 0
    assert float(_field(out.splitlines()[1], "size_upper")) == pytest.approx(0.125)


@pytest.fixture
def square2_file(tmp_path):
    path = tmp_path / "sq.json"
    assert run("approx", "--builtin", "square", "--n", 2, "--out", path)[0] == 0
    return path


@pytest.mark.parametrize("arch", ["fixed-depth", "fixed-width"])
def test_pipeline_round_trip(tmp_path, arch):
    approx = tmp_path / "a.json"
    net = tmp_path / "n.json"
    table = tmp_path / "e.csv"
    assert run("approx", "--builtin", "exp", "--n", 5, "--out", approx)[0] == 0
    code, out, _ = run("build-net", approx, "--arch", arch, "--out", net)
    assert code == 0
    assert float(_field(out, "residual")) <= 1e-9
    assert run("eval-net", net, "--grid", 1001, "--csv", table)[0] == 0

    from minimax_relu import serialize
    pwl, _, _, _ = serialize.approx_from_dict(serialize.read_json(approx))
    with open(table, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1001
    xs = np.array([float(r["x"]) for r in rows])
    ys = np.array([float(r["net"]) for r in rows])
    assert np.max(np.abs(ys - pwl(xs))) <= 1e-9
    assert all(r["warning"] == "" for r in rows)


def test_build_net_reports_shape(square2_file, tmp_path):
    _, out, _ = run("build-net", square2_file, "--arch", "fixed-width", "--out", tmp_path / "n.json")
    assert _field(out, "hidden") == "40"
    assert "width<=5" in out.split()


def test_eval_net_single_point(square2_file, tmp_path):
    net = tmp_path / "n.json"
    run("build-net", square2_file, "--out", net)
    code, out, err = run("eval-net", net, "--x", 0.5)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert float(rows[0]["net"]) == pytest.approx(0.375, abs=1e-15)
    assert float(rows[0]["f"]) == 0.25
    assert err == ""


def test_eval_net_outside_domain_warns(square2_file, tmp_path):
    net = tmp_path / "n.json"
    run("build-net", square2_file, "--out", net)
    code, out, err = run("eval-net", net, "--x", 2)
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["warning"] == "outside_domain"
    assert float(row["net"]) == pytest.approx(0.875, abs=1e-15)
    assert "outside" in err


def test_eval_net_needs_one_probe(square2_file, tmp_path):
    net = tmp_path / "n.json"
    run("build-net", square2_file, "--out", net)
    assert run("eval-net", net)[0] == 1


def test_plot_data(square2_file, tmp_path):
    out = tmp_path / "p.csv"
    assert run("plot-data", square2_file, "--grid", 5, "--csv", out)[0] == 0
    text = out.read_text(encoding="utf-8")
    assert text.count("x,f,pwl,residual") == 1
    samples, nodes = text.split("\n\n")
    rows = list(csv.DictReader(io.StringIO(samples)))
    res = [float(r["residual"]) for r in rows]
    assert max(res) == pytest.approx(0.125, abs=1e-12)
    assert min(res) == pytest.approx(-0.125, abs=1e-12)
    bps = [float(r["breakpoint"]) for r in csv.DictReader(io.StringIO(nodes))]
    assert bps == pytest.approx([-1.0, 0.0, 1.0], abs=1e-12)


def test_plot_data_grid_minimum(square2_file, tmp_path):
    assert run("plot-data", square2_file, "--grid", 1, "--csv", tmp_path / "p.csv")[0] == 1


def test_same_config_same_bytes(tmp_path):
    for name in ("one", "two"):
        assert run("approx", "--builtin", "exp", "--n", 3, "--seed", 7,
                   "--out", tmp_path / f"{name}.json")[0] == 0
    assert (tmp_path / "one.json").read_bytes() == (tmp_path / "two.json").read_bytes()


def test_seed_changes_starting_point(tmp_path):
    run("approx", "--builtin", "exp", "--n", 3, "--out", tmp_path / "even.json")
    run("approx", "--builtin", "exp", "--n", 3, "--seed", 1, "--out", tmp_path / "rand.json")
    even = json.loads((tmp_path / "even.json").read_text())
    rand = json.loads((tmp_path / "rand.json").read_text())
    assert even["report"]["initial_gap"] != rand["report"]["initial_gap"]
    assert rand["config"]["seed"] == 1
    assert np.allclose(even["breakpoints"], rand["breakpoints"], atol=1e-4)


def test_missing_file_is_io_error(tmp_path):
    assert run("build-net", tmp_path / "nope.json", "--out", tmp_path / "n.json")[0] == 2


def test_schema_violation_is_io_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": "minimax-relu/approx@1"}', encoding="utf-8")
    code, _, err = run("build-net", bad, "--out", tmp_path / "n.json")
    assert code == 2
    assert "SchemaError" in err


def test_table1(tmp_path):
    code, out, _ = run("table1", "--csv", tmp_path / "t.csv")
    assert code == 0
    with open(tmp_path / "t.csv", newline="", encoding="utf-8") as fh:
        rows = {(r["function"], int(r["n"])): r for r in csv.DictReader(fh)}
    assert set(rows) == set(REFERENCE)
    assert float(rows[("square", 10)]["mean_error"]) == pytest.approx(0.005, abs=1e-7)
    assert float(rows[("square", 10)]["upper_bound"]) == pytest.approx(0.005, abs=1e-12)
    assert float(rows[("exp", 3)]["mean_error"]) == pytest.approx(0.01170, abs=1e-4)
    assert float(rows[("cube", 2)]["lower_bound"]) == 0.0
    assert "time_s" in out.splitlines()[0]


def test_table1_deviation_exit_code(monkeypatch):
    cell = REFERENCE[("exp", 2)]
    patched = dict(REFERENCE)
    patched[("exp", 2)] = cell._replace(mean=cell.mean + 1e-3)
    monkeypatch.setattr(experiments, "REFERENCE", patched)
    code, out, _ = run("table1")
    assert code == 3
    assert "exp n=2" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "minimax_relu", "bounds", "--builtin", "square",
                           "--n", "5"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "upper=0.02" in proc.stdout
