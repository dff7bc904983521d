from __future__ import annotations

import json

import pytest

from srl import cli, load_graph


def _run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _manifest_path(out: str) -> str:
    return out.strip().splitlines()[-1]


# ---------------------------------------------------------------------------
# parsing and exit codes


def test_help_exits_zero(capsys):
    assert cli.main(["--help"]) == 0
    capsys.readouterr()


@pytest.mark.parametrize(
    "subcommand",
    ["gen-graph", "spectrum", "train", "compare", "oversmooth", "bounds", "plot"],
)
def test_subcommand_help_lists_flags(capsys, subcommand):
    assert cli.main([subcommand, "--help"]) == 0
    out = capsys.readouterr().out
    assert "--out" in out
    assert "--seed" in out


def test_unknown_subcommand_is_a_usage_error(capsys):
    code, _, err = _run(capsys, ["transmogrify"])
    assert code == 1
    assert "error" in err


def test_unknown_flag_is_a_usage_error(capsys):
    code, _, err = _run(capsys, ["compare", "--warp", "9"])
    assert code == 1
    assert "--warp" in err


def test_negative_stepsize_override_names_the_flag(capsys):
    code, _, err = _run(capsys, ["compare", "--gamma", "-1"])
    assert code == 1
    assert "--gamma" in err


def test_internal_faults_exit_two(capsys, monkeypatch):
    def boom(cfg, out_dir):
        raise RuntimeError("wires crossed")

    monkeypatch.setattr(cli, "run_spectrum_study", boom)
    code, _, err = _run(capsys, ["spectrum", "--n", "20", "--d", "4"])
    assert code == 2
    assert "internal error" in err
    assert "wires crossed" in err


# ---------------------------------------------------------------------------
# gen-graph


def test_gen_graph_writes_graph_and_manifest(capsys, tmp_path):
    out = tmp_path / "g"
    code, stdout, _ = _run(
        capsys, ["gen-graph", "--out", str(out), "--seed", "7", "--n", "30", "--m", "2"]
    )
    assert code == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert _manifest_path(stdout) == str(out / "manifest.json")
    assert manifest["experiment"] == "gen-graph"
    assert manifest["seed"] == 7
    graph = load_graph(out / "graph.json")
    assert graph.n == 30
    assert graph.edge_count == 2 * (30 - 2)


def test_gen_graph_regular_model(capsys, tmp_path):
    out = tmp_path / "r"
    code, stdout, _ = _run(
        capsys,
        ["gen-graph", "--out", str(out), "--model", "regular", "--n", "16", "--degree", "3"],
    )
    assert code == 0
    graph = load_graph(out / "graph.json")
    assert graph.n == 16
    assert all(deg == 3 for deg in graph.degrees())
    assert json.loads((out / "manifest.json").read_text())["config"]["degree"] == 3


# ---------------------------------------------------------------------------
# seeds from flags, environment, and config files


def test_env_seed_is_used_when_no_flag(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SRL_SEED", "123")
    out = tmp_path / "env"
    code, _, _ = _run(capsys, ["gen-graph", "--out", str(out), "--n", "10", "--m", "2"])
    assert code == 0
    assert json.loads((out / "manifest.json").read_text())["seed"] == 123


def test_seed_flag_beats_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SRL_SEED", "123")
    out = tmp_path / "flag"
    code, _, _ = _run(
        capsys, ["gen-graph", "--out", str(out), "--seed", "5", "--n", "10", "--m", "2"]
    )
    assert code == 0
    assert json.loads((out / "manifest.json").read_text())["seed"] == 5


def test_flag_overrides_config_file(capsys, tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({
        "n": 96, "d": 16, "iterations": 64, "trials": 1,
        "align_k": 2, "validation_fraction": 0.25,
    }))
    out = tmp_path / "run"
    code, stdout, _ = _run(
        capsys,
        ["compare", "--config", str(cfg_path), "--d", "8", "--out", str(out), "--seed", "3"],
    )
    assert code == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["d"] == 8  # flag wins
    assert manifest["config"]["n"] == 96  # file survives where no flag is given
    assert manifest["config"]["trials"] == 1


# ---------------------------------------------------------------------------
# experiment subcommands (small runs)


def test_spectrum_run_emits_expected_files(capsys, tmp_path):
    out = tmp_path / "spec"
    code, stdout, _ = _run(
        capsys,
        ["spectrum", "--out", str(out), "--n", "60", "--d", "12",
         "--head-window", "10", "--seed", "1", "--jobs", "1"],
    )
    assert code == 0
    assert _manifest_path(stdout) == str(out / "manifest.json")
    spectra_lines = (out / "spectra.csv").read_text().splitlines()
    assert len(spectra_lines) == 1 + 2 * (60 + 12)
    assert (out / "laplacian.csv").exists()
    assert (out / "summary.csv").exists()
    assert (out / "spectra.svg").exists()


def test_train_writes_estimator_and_report(capsys, tmp_path):
    out = tmp_path / "train"
    code, stdout, _ = _run(
        capsys,
        ["train", "--out", str(out), "--n", "96", "--d", "8", "--iterations", "64",
         "--align-k", "2", "--validation-fraction", "0.25", "--seed", "2", "--jobs", "1"],
    )
    assert code == 0
    est = json.loads((out / "estimator.json").read_text())
    assert set(est) == {"algorithm", "config", "theta"}
    assert est["algorithm"] == "sgd"
    assert len(est["theta"]) == 8
    report_lines = (out / "report.csv").read_text().splitlines()
    assert report_lines[0].startswith("delta,")
    assert len(report_lines) == 2
    manifest = json.loads((out / "manifest.json").read_text())
    assert "chosen_hyperparameter" in manifest["config"]


def test_train_with_ridge(capsys, tmp_path):
    out = tmp_path / "ridge"
    code, _, _ = _run(
        capsys,
        ["train", "--out", str(out), "--algorithm", "ridge", "--n", "96", "--d", "8",
         "--iterations", "64", "--align-k", "2", "--seed", "2", "--jobs", "1"],
    )
    assert code == 0
    assert json.loads((out / "estimator.json").read_text())["algorithm"] == "ridge"


def test_oversmooth_is_reproducible_across_invocations(capsys, tmp_path):
    argv_tail = [
        "--layers", "1..2", "--align", "tail", "--align-k", "2", "--n", "48",
        "--d", "12", "--ba-m", "2", "--trials", "1", "--iterations", "32",
        "--algorithm", "ridge", "--jobs", "1", "--seed", "9",
    ]
    first, second = tmp_path / "one", tmp_path / "two"
    assert cli.main(["oversmooth", "--out", str(first), *argv_tail]) == 0
    assert cli.main(["oversmooth", "--out", str(second), *argv_tail]) == 0
    capsys.readouterr()
    for name in ("results.csv", "summary.csv", "oversmoothing.svg", "manifest.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_bounds_run_emits_overlay(capsys, tmp_path):
    out = tmp_path / "bounds"
    code, stdout, _ = _run(
        capsys,
        ["bounds", "--out", str(out), "--n-grid", "32,64", "--trials", "1",
         "--d", "8", "--align-k", "2", "--seed", "4", "--jobs", "1"],
    )
    assert code == 0
    overlay_lines = (out / "overlay.csv").read_text().splitlines()
    assert len(overlay_lines) == 3
    assert overlay_lines[0].startswith("N,")
    assert (out / "bounds.csv").exists()
    assert _manifest_path(stdout) == str(out / "manifest.json")


# ---------------------------------------------------------------------------
# plot


def test_plot_renders_grouped_series(capsys, tmp_path):
    source = tmp_path / "data.csv"
    source.write_text(
        "step,value,series\n1,1.0,a\n2,2.0,a\n1,3.0,b\n2,1.5,b\n"
    )
    out = tmp_path / "plots"
    code, stdout, _ = _run(
        capsys,
        ["plot", "--input", str(source), "--x", "step", "--y", "value",
         "--group", "series", "--out", str(out)],
    )
    assert code == 0
    svg = (out / "plot.svg").read_text()
    assert svg.count("<polyline") == 2
    assert _manifest_path(stdout) == str(out / "manifest.json")


def test_plot_rejects_missing_columns(capsys, tmp_path):
    source = tmp_path / "data.csv"
    source.write_text("step,value\n1,1.0\n")
    code, _, err = _run(
        capsys,
        ["plot", "--input", str(source), "--x", "step", "--y", "height", "--out", str(tmp_path)],
    )
    assert code == 1
    assert "height" in err
