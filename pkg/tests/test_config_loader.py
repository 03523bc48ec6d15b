"""Configuration loader regression tests."""

from __future__ import annotations

from pathlib import Path

import pytest

from spinforge.algebra import SpinConvention
from spinforge.config import ConfigError, load_experiment_config, parse_experiment_config
from spinforge.config.loader import load_runtime_settings
from spinforge.config.schema import ExperimentKind
from spinforge.dynamics import SiteState
from spinforge.experiments import bundled_config, bundled_configs

VALID = """\
experiment: fig3
convention: pauli
topology:
  hydrogens: [6, 8]
cycle:
  delta_t_us: [1.228]
  n_cycles: [225]
initial:
  - label: b
    carbon: ground
    bath: excited
seed: 3
"""


def test_parse_valid_config() -> None:
    """A complete config should parse into typed sections."""
    config = parse_experiment_config(VALID)

    assert config.experiment is ExperimentKind.FIG3
    assert config.convention is SpinConvention.PAULI
    assert [topo.n_per_chain for topo in config.topology.topologies()] == [3, 4]
    assert config.initial[0].state().bath is SiteState.EXCITED
    cycle, n_cycles = config.cycle.cycles(config.convention)[0]
    assert n_cycles == 225
    assert cycle.is_cyclic(config.convention)


def test_unknown_key_reports_field_and_line() -> None:
    """Unknown keys should name the dotted field path and its line."""
    text = "experiment: fig2\nsampling:\n  n_sample: 10\n"

    with pytest.raises(ConfigError) as excinfo:
        parse_experiment_config(text)

    assert excinfo.value.field == "sampling.n_sample"
    assert excinfo.value.line == 3
    assert "line 3" in excinfo.value.diagnostic()


def test_error_in_second_list_entry_reports_its_own_line() -> None:
    """Errors inside a list entry should point at that entry, not an earlier key."""
    text = (
        "experiment: fig4\n"
        "topology:\n"
        "  hydrogens: [4]\n"
        "initial:\n"
        "  - carbon: excited\n"
        "    bath: ground\n"
        "  - label: b\n"
        "    bath: lukewarm\n"
    )

    with pytest.raises(ConfigError) as excinfo:
        parse_experiment_config(text)

    assert excinfo.value.field == "initial.1.bath"
    assert excinfo.value.line == 8


def test_flow_list_item_reports_its_line() -> None:
    """Items of an inline list should resolve to the line holding the list."""
    text = "experiment: fig2\ncycle:\n  delta_t_us: [1.0]\n  n_cycles: [10, -3]\n"

    with pytest.raises(ConfigError) as excinfo:
        parse_experiment_config(text)

    assert excinfo.value.line == 4


def test_yaml_syntax_error_reports_line() -> None:
    """YAML scanner errors should carry a 1-based line number."""
    text = "experiment: fig2\ntopology:\n\thydrogens: [6]\n"

    with pytest.raises(ConfigError, match="invalid YAML") as excinfo:
        parse_experiment_config(text)

    assert excinfo.value.line == 3


def test_top_level_must_be_mapping() -> None:
    """A YAML list at the top level should be rejected."""
    with pytest.raises(ConfigError, match="mapping"):
        parse_experiment_config("- fig2\n- fig3\n")


def test_odd_total_hydrogen_count_rejected() -> None:
    """Total hydrogen counts must split into two equal chains."""
    text = "experiment: fig3\ntopology:\n  hydrogens: [7]\n"

    with pytest.raises(ConfigError, match="even") as excinfo:
        parse_experiment_config(text)

    assert excinfo.value.field == "topology"
    assert excinfo.value.line == 2


def test_cycle_lengths_must_match() -> None:
    """Each delta_t needs a matching cycle count."""
    text = "experiment: fig2\ncycle:\n  delta_t_us: [1.0, 2.0]\n  n_cycles: [10]\n"

    with pytest.raises(ConfigError, match="same length"):
        parse_experiment_config(text)


def test_mixed_tomography_bath_rejected() -> None:
    """Process tomography needs a pure bath."""
    text = "experiment: tomography\ntomography:\n  baths: [maximally-mixed]\n"

    with pytest.raises(ConfigError, match="ground or excited"):
        parse_experiment_config(text)


def test_beta_given_once() -> None:
    """Both beta forms at once are ambiguous."""
    text = "experiment: machine\nmachine:\n  beta_per_joule: 1.0\n  beta_hbar_omega: -2.0\n"

    with pytest.raises(ConfigError, match="either"):
        parse_experiment_config(text)


def test_load_from_file(tmp_path: Path) -> None:
    """Configs should load from disk, and missing files should raise ConfigError."""
    path = tmp_path / "fig3.yaml"
    path.write_text(VALID, encoding="utf-8")

    assert load_experiment_config(path).seed == 3
    with pytest.raises(ConfigError, match="not found"):
        load_experiment_config(tmp_path / "missing.yaml")


def test_threads_env_overrides_cli(monkeypatch) -> None:
    """SPINFORGE_THREADS should win over the --threads value."""
    monkeypatch.setenv("SPINFORGE_THREADS", "3")
    assert load_runtime_settings(8).threads == 3

    monkeypatch.delenv("SPINFORGE_THREADS")
    assert load_runtime_settings(8).threads == 8
    assert load_runtime_settings().threads is None


def test_runtime_settings_from_env(monkeypatch) -> None:
    """Other runtime settings should also read the SPINFORGE_ prefix."""
    monkeypatch.setenv("SPINFORGE_OUTPUT_DIR", "/tmp/spinforge-out")
    monkeypatch.setenv("SPINFORGE_LOG_LEVEL", "DEBUG")

    settings = load_runtime_settings()

    assert settings.output_dir == Path("/tmp/spinforge-out")
    assert settings.log_level == "DEBUG"


@pytest.mark.parametrize("name", list(bundled_configs()))
def test_bundled_configs_parse(name: str) -> None:
    """Every bundled experiment config should validate."""
    config = bundled_config(name)

    assert config.experiment in ExperimentKind


def test_unknown_bundled_config() -> None:
    """Unknown bundled names should list what is available."""
    with pytest.raises(KeyError, match="available"):
        bundled_config("fig9")
