import csv
import json
from pathlib import Path

import numpy as np
import pytest

from fermifisher import cli, oracle
from fermifisher.cli import ConfigError, load_config, load_sld_dump, main, parse_config
from fermifisher.sld import cr_bound_scalar

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

ROTATION_ARGS = {
    "state": [[0, 0.3, 0, 0], [-0.3, 0, 0, 0], [0, 0, 0, 0.7], [0, 0, -0.7, 0]],
    "generators": [
        [[0, 0, 1, 0], [0, 0, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0]],
        [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]],
    ],
}


def _write_config(tmp_path, **overrides):
    cfg = {
        "schema_version": 1,
        "family": {"name": "single_mode"},
        "grid": {"axes": {"lambda": {"min": -0.9, "max": 0.9, "steps": 19}}},
        "outputs": ["qfim", "purity"],
        "output_path": "out.csv",
    }
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


def _read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0] == "# fermifisher report schema 1"
    return list(csv.DictReader(lines[1:]))


def test_single_mode_sweep(tmp_path):
    assert main(["run", str(_write_config(tmp_path))]) == 0
    rows = _read_csv(tmp_path / "out.csv")
    assert list(rows[0]) == ["lambda", "J_11", "purity"]
    assert len(rows) == 19
    for row in rows:
        lam = float(row["lambda"])
        assert float(row["J_11"]) == pytest.approx(1 / (1 - lam**2), abs=1e-8)
        assert float(row["purity"]) == pytest.approx((1 + lam**2) / 2, abs=1e-12)


def test_golden_header_and_layout(tmp_path):
    path = _write_config(
        tmp_path,
        family={"name": "rotation", "args": ROTATION_ARGS},
        grid={"points": [[0.1, 0.2]]},
        outputs=["qfim", "uhlmann", "purity", "bound"],
        cost_matrix=[[1, 0], [0, 1]],
    )
    assert main(["run", str(path)]) == 0
    lines = (tmp_path / "out.csv").read_text().split("\n")
    assert lines[0] == "# fermifisher report schema 1"
    assert lines[1] == "lambda1,lambda2,J_11,J_12,J_22,U_12,compatible,max_abs_U,purity,bound"
    assert lines[-1] == ""


@pytest.mark.parametrize(
    "grid",
    [
        {"axes": {"lambda": {"min": 0.0, "max": 0.5, "steps": 0}}},
        {"points": []},
    ],
)
def test_empty_grid_is_config_error(tmp_path, grid, capsys):
    assert main(["run", str(_write_config(tmp_path, grid=grid))]) == 2
    assert not (tmp_path / "out.csv").exists()
    assert "/grid" in capsys.readouterr().err


@pytest.mark.parametrize(
    "override",
    [
        {"outputs": ["qfim", "entropy"]},
        {"grid": {"axes": {"lambda": {"min": 0.0, "max": 1.0, "steps": 3}}}},
        {"grid": {"axes": {"mu": {"min": 0.0, "max": 0.5, "steps": 3}}}},
        {"outputs": ["bound"]},
        {"cost_matrix": [[-1.0]], "outputs": ["bound"]},
        {"family": {"name": "unknown"}},
        {"schema_version": 2},
    ],
)
def test_invalid_configs(tmp_path, override):
    assert main(["run", str(_write_config(tmp_path, **override))]) == 2
    assert not (tmp_path / "out.csv").exists()


def test_missing_config_file(tmp_path):
    assert main(["run", str(tmp_path / "nope.json")]) == 2


def test_parse_config_error_path():
    with pytest.raises(ConfigError, match="/grid/axes/lambda/steps"):
        parse_config(
            {
                "schema_version": 1,
                "family": {"name": "single_mode"},
                "grid": {"axes": {"lambda": {"min": 0.0, "max": 0.5, "steps": 0}}},
                "outputs": ["qfim"],
                "output_path": "x.csv",
            }
        )


def test_rotation_bound_is_trace_inverse(tmp_path):
    path = _write_config(
        tmp_path,
        family={"name": "rotation", "args": ROTATION_ARGS},
        grid={"points": [[0.0, 0.0], [0.2, -0.1], [0.5, 0.4]]},
        outputs=["qfim", "uhlmann", "bound"],
        cost_matrix=[[1, 0], [0, 1]],
        format="json",
        output_path="out.json",
    )
    assert main(["run", str(path)]) == 0
    rows = json.loads((tmp_path / "out.json").read_text())
    assert len(rows) == 3
    for row in rows:
        j = np.array(row["J"])
        assert row["bound"] == pytest.approx(np.trace(np.linalg.inv(j)), abs=1e-10)
        assert row["bound"] == pytest.approx(cr_bound_scalar(j, np.eye(2)), abs=1e-10)
        assert row["schema_version"] == 1
        assert not row["compatible"]
        assert "diagnostics" in row


def test_numerical_failure_writes_error_report(tmp_path):
    # the strict policy rejects any singular pair, and a pure mode always has one
    path = _write_config(
        tmp_path,
        family={"name": "rotation", "args": {"state": [[0, 1], [-1, 0]], "generators": [[[0, 1], [-1, 0]]]}},
        grid={"points": [[0.1]]},
        outputs=["qfim"],
        singular_policy="strict",
    )
    assert main(["run", str(path)]) == 3
    report = json.loads((tmp_path / "out.csv.error.json").read_text())
    assert report["index"] == 0
    assert report["error"] == "SingularPair"
    assert not (tmp_path / "out.csv").exists()


def test_output_override(tmp_path):
    target = tmp_path / "sub" / "x.csv"
    assert main(["run", str(_write_config(tmp_path)), "--output", str(target)]) == 0
    assert target.exists()


def test_sld_dump_at_maximally_mixed_state(tmp_path):
    path = _write_config(tmp_path)
    out = tmp_path / "dump.json"
    assert main(["sld-dump", str(path), "--point", "0", "--output", str(out)]) == 0
    obj = json.loads(out.read_text())
    k = np.array(obj["parameters"][0]["k_rep"])
    gdot = np.array(obj["tangents"][0])
    np.testing.assert_array_equal(k, -gdot)
    assert obj["parameters"][0]["eta"] == 0
    assert "dense" in obj["parameters"][0]


def test_sld_dump_reload_is_bitwise(tmp_path):
    path = _write_config(tmp_path, family={"name": "kitaev_chain", "args": {"sites": 3, "beta": 2.0}},
                         grid={"points": [[0.4, 1.0, 0.6]]})
    config = load_config(path)
    payload = cli.sld_dump(config, [0.4, 1.0, 0.6], dense=False)
    out = tmp_path / "dump.json"
    out.write_text(json.dumps(payload))
    back = load_sld_dump(out)
    for entry, s in zip(payload["parameters"], back):
        original = np.array(entry["k_rep"])
        assert np.array_equal(s.k_rep, original)
        assert s.eta == entry["eta"]
    # and against a fresh computation
    again = cli.sld_dump(config, [0.4, 1.0, 0.6], dense=False)
    for a, b in zip(again["parameters"], back):
        assert np.array_equal(np.array(a["k_rep"]), b.k_rep)


def test_sld_dump_reproduces_dense_qfi(tmp_path):
    path = _write_config(tmp_path, family={"name": "rotation", "args": ROTATION_ARGS},
                         grid={"points": [[0.3, -0.2]]})
    out = tmp_path / "dump.json"
    assert main(["sld-dump", str(path), "--point", "0.3,-0.2", "--output", str(out)]) == 0
    obj = json.loads(out.read_text())
    g = np.array(obj["correlation"])
    rho = oracle.dense_state(g)
    drhos = [oracle.dense_tangent(g, np.array(t))[1] for t in obj["tangents"]]
    j_dense, _ = oracle.dense_qfi(rho, drhos)
    for mu, s in enumerate(load_sld_dump(out)):
        lsld = oracle.dense_quadratic(s.k_rep, s.eta)
        j_mm = np.trace(rho @ lsld @ lsld).real
        assert j_mm == pytest.approx(j_dense[mu, mu], rel=1e-8)
        # dense spectrum in the dump matches L
        spectrum = obj["parameters"][mu]["dense"]["spectrum"]
        np.testing.assert_allclose(spectrum, np.linalg.eigvalsh(lsld), atol=1e-12)


def test_sld_dump_outside_domain(tmp_path):
    assert main(["sld-dump", str(_write_config(tmp_path)), "--point", "1.5"]) == 2


def test_check_verb(capsys):
    assert main(["check", "--modes", "2", "--trials", "3", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "sld_residual" in out and "PASS" in out


@pytest.mark.parametrize("argv", [["check", "--modes", "7", "--trials", "1"],
                                  ["check", "--modes", "2", "--trials", "0"],
                                  ["frobnicate"], []])
def test_usage_errors(argv):
    assert main(argv) == 2


def test_thread_count(monkeypatch):
    monkeypatch.setenv("FERMIFISHER_THREADS", "3")
    assert cli.thread_count() == 3
    monkeypatch.setenv("FERMIFISHER_THREADS", "0")
    assert cli.thread_count() >= 1
    monkeypatch.setenv("FERMIFISHER_THREADS", "many")
    with pytest.raises(ConfigError):
        cli.thread_count()


def test_threaded_sweep_matches_serial(tmp_path):
    config = load_config(CONFIGS / "kitaev_sweep.json")
    serial, _ = cli.sweep(config, 1)
    threaded, _ = cli.sweep(config, 4)
    assert cli.render_csv(config, serial) == cli.render_csv(config, threaded)


@pytest.mark.parametrize("name", ["single_mode.json", "kitaev_sweep.json", "rotation_bound.json"])
def test_shipped_configs_run(tmp_path, name):
    out = tmp_path / "out"
    assert main(["run", str(CONFIGS / name), "--output", str(out)]) == 0
    assert out.stat().st_size > 0
