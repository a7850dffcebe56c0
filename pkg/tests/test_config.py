"""
Tests for run configuration loading.
"""

import pytest

from src.config import RunConfig, load_run_config, read_config_file
from src.errors import IoError, UsageError
from src.models import DEFAULT_SCHEDULE


@pytest.mark.unit
class TestRunConfig:
    """Test RunConfig defaults and validation."""

    def test_defaults(self, monkeypatch):
        """Test the built-in defaults."""
        monkeypatch.delenv("PAGERANK_DAMPING", raising=False)
        config = load_run_config()

        assert config.damping == 0.85
        assert config.schedule == DEFAULT_SCHEDULE
        assert config.tolerance == 1e-12
        assert config.max_iter == 1000
        assert config.mode == "weighted"
        assert config.teleport == "uniform"
        assert config.levels == (30, 50, 100, 200, 300, 500)
        assert config.output_format == "csv"

    def test_comma_separated_lists(self):
        """Test schedule and levels given as strings."""
        config = RunConfig(schedule="0.85, 0.15", levels="10,20")

        assert config.schedule == (0.85, 0.15)
        assert config.levels == (10, 20)

    @pytest.mark.parametrize("overrides", [
        {"damping": 1.0},
        {"tolerance": 0},
        {"schedule": "0.5,0.5"},
        {"schedule": "0.0,0.5"},
        {"levels": "50,30"},
        {"mode": "sideways"},
        {"output_format": "xlsx"},
        {"unknown_key": 1},
    ])
    def test_invalid_values_are_usage_errors(self, overrides):
        """Test that invalid settings map to exit code 3."""
        with pytest.raises(UsageError) as info:
            load_run_config(overrides=overrides)

        assert info.value.exit_code == 3

    def test_zero_damping_allowed(self):
        """Test that d = 0 is a valid single damping."""
        assert load_run_config(overrides={"damping": 0.0}).damping == 0.0


@pytest.mark.unit
class TestConfigFiles:
    """Test config file formats and precedence."""

    def test_yaml_sections_are_flattened(self, tmp_path):
        """Test that sectioned YAML keys reach the flat config."""
        path = tmp_path / "run.yaml"
        path.write_text(
            "pagerank:\n  damping: 0.55\n  mode: unweighted\n"
            "output:\n  output_format: markdown\n",
            encoding="utf-8",
        )
        config = load_run_config(path)

        assert config.damping == 0.55
        assert config.mode == "unweighted"
        assert config.output_format == "markdown"

    def test_key_value_file(self, tmp_path):
        """Test a plain key = value file."""
        path = tmp_path / "run.conf"
        path.write_text("damping = 0.65\nschedule = 0.85,0.45\ntop_k =\n", encoding="utf-8")

        assert read_config_file(path) == {"damping": "0.65", "schedule": "0.85,0.45"}
        config = load_run_config(path)
        assert config.damping == 0.65
        assert config.schedule == (0.85, 0.45)
        assert config.top_k == 20

    def test_flags_override_file(self, tmp_path):
        """Test flags > config file > defaults."""
        path = tmp_path / "run.yaml"
        path.write_text("damping: 0.55\nmax_iter: 50\n", encoding="utf-8")
        config = load_run_config(path, {"damping": 0.35, "tolerance": None})

        assert config.damping == 0.35
        assert config.max_iter == 50
        assert config.tolerance == 1e-12

    def test_file_overrides_environment(self, tmp_path, monkeypatch):
        """Test that the config file wins over PAGERANK_* variables."""
        monkeypatch.setenv("PAGERANK_DAMPING", "0.25")
        monkeypatch.setenv("PAGERANK_MAX_ITER", "77")
        path = tmp_path / "run.yaml"
        path.write_text("damping: 0.45\n", encoding="utf-8")
        config = load_run_config(path)

        assert config.damping == 0.45
        assert config.max_iter == 77

    def test_missing_file(self, tmp_path):
        """Test that a missing config file is an input error."""
        with pytest.raises(IoError):
            load_run_config(tmp_path / "absent.yaml")

    def test_yaml_must_be_mapping(self, tmp_path):
        """Test that a YAML list is rejected."""
        path = tmp_path / "run.yaml"
        path.write_text("- 1\n- 2\n", encoding="utf-8")

        with pytest.raises(UsageError):
            load_run_config(path)
