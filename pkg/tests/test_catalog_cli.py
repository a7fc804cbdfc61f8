"""Catalog listing, config loading, golden reports, and CLI exit codes."""

import pathlib
import subprocess
import sys

import pytest

from isoflow import __version__
from isoflow.catalog import CATALOG, Scenario, list_catalog, run_scenario
from isoflow.cli import load_scenarios, main
from isoflow.errors import InvalidInput, IsoflowError
from isoflow.report import render_reports

ROOT = pathlib.Path(__file__).resolve().parent.parent
CONFIGS = sorted((ROOT / "configs").glob("*.cfg"))
GOLDEN = ROOT / "tests" / "golden"

EXPECTED_CONSTRUCTIONS = {
    "halfline_shift", "bishift", "modified_bishift", "four_block_dc",
    "four_block_ddc", "commutant_e", "commutant_mz", "bcl", "dual_example",
    "double_dual", "simultaneous",
}


def test_catalog_lists_all_constructions():
    text = list_catalog()
    assert len(CATALOG) >= 11
    for name in EXPECTED_CONSTRUCTIONS:
        assert f"\n  {name}\n" in text
    # every entry carries a description and defaults line
    assert text.count("defaults:") == len(CATALOG)


def test_catalog_listing_stable():
    assert list_catalog() == list_catalog()


def test_unknown_construction_rejected():
    with pytest.raises(InvalidInput):
        run_scenario(Scenario("x", "no_such_thing", {}))


def test_config_loading(tmp_path):
    path = tmp_path / "one.cfg"
    path.write_text("[demo]\nconstruction = bcl\nT = 4\nm = 4\nr = 1\n")
    scenarios = load_scenarios(str(path))
    assert scenarios[0].name == "demo"
    assert scenarios[0].construction == "bcl"
    with pytest.raises(IsoflowError):
        load_scenarios(str(tmp_path / "missing.cfg"))
    bad = tmp_path / "bad.cfg"
    bad.write_text("[demo]\nT = 4\n")
    with pytest.raises(IsoflowError):
        load_scenarios(str(bad))


def test_tol_override_reaches_params(tmp_path):
    path = tmp_path / "one.cfg"
    path.write_text("[demo]\nconstruction = commutant_e\nm = 2\nr = 1\n")
    scenarios = load_scenarios(str(path), tol_override=1e-9)
    report = run_scenario(scenarios[0])
    assert ("resid_abs", "1e-09") in report.params


@pytest.mark.parametrize("config", CONFIGS, ids=lambda p: p.stem)
def test_bundled_configs_match_goldens(config):
    scenarios = load_scenarios(str(config))
    text = render_reports([run_scenario(s) for s in scenarios], version=__version__)
    golden = (GOLDEN / f"{config.stem}.txt").read_text()
    assert text == golden


def test_reports_are_deterministic():
    config = ROOT / "configs" / "duality.cfg"
    runs = []
    for _ in range(2):
        scenarios = load_scenarios(str(config))
        runs.append(render_reports([run_scenario(s) for s in scenarios], version=__version__))
    assert runs[0] == runs[1]


# --- CLI process-level behavior -----------------------------------------------------

def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "isoflow.cli", *args],
                          capture_output=True, text=True, cwd=ROOT)


def test_cli_list_exit_zero():
    proc = run_cli("list")
    assert proc.returncode == 0
    assert "available constructions:" in proc.stdout


def test_cli_run_pass_exit_zero(tmp_path):
    out = tmp_path / "report.txt"
    proc = run_cli("run", "configs/bcl.cfg", "--out", str(out))
    assert proc.returncode == 0
    assert out.read_text() == proc.stdout
    assert proc.stdout == (GOLDEN / "bcl.txt").read_text()


def test_cli_run_check_failure_exit_one(tmp_path):
    config = tmp_path / "starved.cfg"
    config.write_text("[starved]\nconstruction = bishift\nm = 2\nT = 2\nK = 1\n"
                      "samples = 1/2\n")
    proc = run_cli("run", str(config))
    assert proc.returncode == 1
    assert "overall FAIL" in proc.stdout


def test_cli_usage_errors_exit_two(tmp_path):
    proc = run_cli("run", str(tmp_path / "nowhere.cfg"))
    assert proc.returncode == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("[x]\nconstruction = banana\n")
    proc = run_cli("run", str(bad))
    assert proc.returncode == 2
    assert "error" in proc.stderr


def test_main_inprocess_matches_subprocess(capsys):
    code = main(["run", str(ROOT / "configs" / "shift.cfg")])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out == (GOLDEN / "shift.txt").read_text()
