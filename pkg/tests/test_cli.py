"""Command-line interface: subcommands, config layering, exit codes."""

import json
import subprocess
import sys

import pytest

from symsector import cli


def run_cli(argv, capsys):
    try:
        code = cli.main(argv)
    except SystemExit as exc:  # argparse paths
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def test_no_command_shows_usage(capsys):
    code, _out, err = run_cli([], capsys)
    assert code == 2
    assert "usage" in err


def test_verify_report_to_stdout(capsys):
    code, out, _ = run_cli(["verify", "--sample-scale", "0.02"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] is True
    assert len(rep["suites"]) == 26
    assert rep["config"]["sample_scale"] == 0.02


def test_verify_deterministic_bytes(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    args = ["verify", "--sample-scale", "0.02", "--seed", "11"]
    assert run_cli(args + ["--out", str(a)], capsys)[0] == 0
    assert run_cli(args + ["--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_infeasible_cutoff_is_expected(capsys):
    # below the bridge threshold the cutoff profile cannot exist, and the
    # profile suite records that as the expected outcome rather than a failure
    code, out, _ = run_cli(
        ["verify", "--sample-scale", "0.02", "--epsilon", "1.0",
         "--smoothing", "cutoff"],
        capsys,
    )
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] is True
    profile = next(s for s in rep["suites"]
                   if s["name"] == "smoothing-profile-bounds")
    assert "infeasible" in profile["detail"]


def test_verify_failure_maps_to_exit_1(monkeypatch, capsys):
    from symsector import verify as verify_mod

    fake = {"passed": False, "failed": ["x"], "suites": [], "config": {}}
    monkeypatch.setattr(verify_mod, "run_all", lambda cfg: fake)
    code, out, _ = run_cli(["verify"], capsys)
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_classify_grid_csv(capsys):
    code, out, _ = run_cli(["classify-grid", "--grid", "7"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("coord1,coord2,label")
    assert len(lines) == 1 + 49


def test_classify_grid_out_file(tmp_path, capsys):
    target = tmp_path / "grid.csv"
    code, out, _ = run_cli(
        ["classify-grid", "--grid", "5", "--out", str(target)], capsys
    )
    assert code == 0 and out == ""
    assert target.read_text().count("\n") == 1 + 25


def test_slice_plot_svg(tmp_path, capsys):
    target = tmp_path / "fig.svg"
    code, _, _ = run_cli(
        ["slice-plot", "--grid", "9", "--slice", "im:0", "--out", str(target)],
        capsys,
    )
    assert code == 0
    text = target.read_text()
    assert text.startswith("<?xml")
    assert "<svg" in text


def test_decompose_builtin(capsys):
    code, out, _ = run_cli(["decompose", "--surface", "p1-minus-4pts"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["counts"] == {"pieces": 3, "hypersurfaces": 2, "corners": 0}
    assert rep["lg_labels"]["mirror"] == "{xyz=0} in C^3"


def test_decompose_requires_surface(capsys):
    code, _, err = run_cli(["decompose"], capsys)
    assert code == 2
    assert "--surface" in err


def test_decompose_surface_file(tmp_path, capsys):
    from symsector.surfaces import builtin_surface

    path = tmp_path / "surface.json"
    path.write_text(builtin_surface("example-5.3").dumps())
    code, out, _ = run_cli(["decompose", "--surface", str(path)], capsys)
    assert code == 0
    assert json.loads(out)["counts"]["pieces"] == 6


def test_decompose_invalid_surface(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "components": [
            {"id": "a", "genus": 0, "ends": 1, "slots": ["p"]}
        ],
        "arcs": [["p", "ghost"]],
    }))
    code, _, err = run_cli(["decompose", "--surface", str(path)], capsys)
    assert code == 2
    assert "UNKNOWN_SLOT" in err


def test_decompose_missing_file(capsys):
    code, _, err = run_cli(["decompose", "--surface", "/no/such.json"], capsys)
    assert code == 2
    assert err


def test_bad_alpha_rejected(capsys):
    code, _, err = run_cli(["verify", "--alpha", "0.5"], capsys)
    assert code == 2
    assert "alpha" in err


def test_bad_smoothing_rejected(capsys):
    code, _, err = run_cli(["classify-grid", "--smoothing", "fancy"], capsys)
    assert code == 2


def test_config_file_layering(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"sample-scale": 0.02, "seed": 4, "epsilon": 16.0}))
    code, out, _ = run_cli(["verify", "--config", str(cfg)], capsys)
    assert code == 0
    assert json.loads(out)["config"]["seed"] == 4
    # flags win over the config file
    code, out, _ = run_cli(
        ["verify", "--config", str(cfg), "--seed", "9"], capsys
    )
    assert json.loads(out)["config"]["seed"] == 9


def test_config_file_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"sample-scale": 0.02, "bogus": 1}))
    code, _, err = run_cli(["verify", "--config", str(cfg)], capsys)
    assert code == 2
    assert "bogus" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "symsector", "decompose", "--surface",
         "example-5.3"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["euler"] == 1
