"""CLI command tests."""

from __future__ import annotations

import json
from collections.abc import Iterator
from pathlib import Path

import pytest
from loguru import logger
from typer.testing import CliRunner

from spinforge import __version__
from spinforge.cli_main import EXIT_CHECK_FAILED, EXIT_CONFIG_ERROR, app
from spinforge.experiments import CheckResult, ExperimentResult

runner = CliRunner()

AHT_CONFIG = """\
experiment: aht-check
topology:
  hydrogens: [1, 2]
  reading: per-chain
"""


@pytest.fixture(autouse=True)
def _reset_logger() -> Iterator[None]:
    yield
    logger.remove()


def test_version_command() -> None:
    """`spinforge version` should print the package version."""
    result = runner.invoke(app, ["version"])

    assert result.exit_code == 0
    assert __version__ in result.output


def test_list_experiments_shows_bundled_configs() -> None:
    """Bundled configs should be listed by name."""
    result = runner.invoke(app, ["list-experiments"])

    assert result.exit_code == 0
    for name in ("fig2", "fig3", "fig4", "tomography"):
        assert name in result.output


@pytest.mark.parametrize("convention", ["spin-half", "pauli"])
def test_aht_check_passes(convention: str) -> None:
    """The averaged Hamiltonian should match H_eff in both conventions."""
    result = runner.invoke(app, ["aht-check", "--max-n", "2", "--convention", convention])

    assert result.exit_code == 0
    assert "PASS" in result.output
    assert "FAIL" not in result.output


def test_run_writes_outputs(tmp_path: Path) -> None:
    """`spinforge run` should write the CSV tables and summary.json."""
    config = tmp_path / "aht.yaml"
    config.write_text(AHT_CONFIG, encoding="utf-8")
    output = tmp_path / "out"

    result = runner.invoke(app, ["run", str(config), "--output", str(output)])

    assert result.exit_code == 0
    assert (output / "aht_residuals.csv").is_file()
    summary = json.loads((output / "summary.json").read_text(encoding="utf-8"))
    assert summary["experiment"] == "aht-check"
    assert summary["passed"] is True


def test_run_bundled_config_by_name(tmp_path: Path) -> None:
    """Bundled configs can be run by name."""
    result = runner.invoke(app, ["run", "aht_check", "-o", str(tmp_path)])

    assert result.exit_code == 0
    assert (tmp_path / "summary.json").is_file()


def test_invalid_config_exits_with_config_error(tmp_path: Path) -> None:
    """Schema violations should exit with code 1 and a diagnostic."""
    config = tmp_path / "bad.yaml"
    config.write_text("experiment: fig2\nsampling:\n  n_sample: 3\n", encoding="utf-8")

    result = runner.invoke(app, ["run", str(config)])

    assert result.exit_code == EXIT_CONFIG_ERROR
    assert "config error" in result.output
    assert "sampling.n_sample" in result.output


def test_unknown_bundled_name_exits_with_config_error() -> None:
    """A name that is neither a file nor a bundled config is a config error."""
    result = runner.invoke(app, ["run", "no-such-experiment"])

    assert result.exit_code == EXIT_CONFIG_ERROR


def test_failed_check_exits_with_code_two(tmp_path: Path, monkeypatch) -> None:
    """Any failed invariant check should produce exit code 2."""
    config = tmp_path / "aht.yaml"
    config.write_text(AHT_CONFIG, encoding="utf-8")
    failing = ExperimentResult("aht-check", checks=[CheckResult("broken", False, 1.0, 0.5)])
    monkeypatch.setattr("spinforge.cli_main.run_experiment", lambda config, threads: failing)

    result = runner.invoke(app, ["run", str(config), "-o", str(tmp_path / "out")])

    assert result.exit_code == EXIT_CHECK_FAILED
    assert "FAIL" in result.output
    summary = json.loads((tmp_path / "out" / "summary.json").read_text(encoding="utf-8"))
    assert summary["passed"] is False
