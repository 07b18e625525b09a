#!/usr/bin/env python3
"""
Tests for settings loading and overrides
"""

import json
import sys
from pathlib import Path

import pytest

# Add package root to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from hypeval.errors import ParseError
from hypeval.settings import Settings, configure, get_settings, save_settings


class TestSettings:
    """Defaults, files, environment and explicit overrides"""

    def test_defaults(self):
        """Test the built-in defaults"""
        settings = get_settings()
        assert settings.precision_bits == 53
        assert settings.tol == 1e-9
        assert settings.seed == 7
        assert settings.working_bits == 73

    def test_cached_instance(self):
        """Test get_settings returns the same object until reconfigured"""
        assert get_settings() is get_settings()

    def test_precision_floor(self):
        """Test fewer than 53 bits is a parse error"""
        with pytest.raises(ParseError):
            Settings(precision_bits=32)

    def test_invalid_file_values(self, tmp_path):
        """Test a config file with zero workers is rejected as a parse error"""
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"workers": 0}))
        with pytest.raises(ParseError):
            configure(str(path))

    def test_environment_override(self, monkeypatch):
        """Test HYPEVAL_* variables override defaults"""
        monkeypatch.setenv("HYPEVAL_PRECISION", "100")
        monkeypatch.setenv("HYPEVAL_SEED", "42")
        settings = configure()
        assert settings.precision_bits == 100
        assert settings.seed == 42

    def test_malformed_environment(self, monkeypatch):
        """Test malformed values are ignored"""
        monkeypatch.setenv("HYPEVAL_TOL", "tiny")
        assert configure().tol == 1e-9

    def test_config_file(self, tmp_path):
        """Test values from a JSON file, with unknown keys ignored"""
        path = tmp_path / "custom.json"
        path.write_text(json.dumps({"tol": 1e-6, "workers": 2, "colour": "blue"}))
        settings = configure(str(path))
        assert settings.tol == 1e-6
        assert settings.workers == 2

    def test_environment_beats_file(self, tmp_path, monkeypatch):
        """Test the environment is applied after the file"""
        path = tmp_path / "custom.json"
        path.write_text(json.dumps({"seed": 3}))
        monkeypatch.setenv("HYPEVAL_SEED", "9")
        assert configure(str(path)).seed == 9

    def test_explicit_overrides(self):
        """Test keyword overrides win and None is ignored"""
        settings = configure(precision_bits=80, seed=None)
        assert settings.precision_bits == 80
        assert settings.seed == 7
        assert get_settings() is settings

    def test_save_and_load(self, tmp_path):
        """Test settings written by save_settings load back"""
        target = save_settings(configure(tol=1e-7), str(tmp_path / "out" / "hypeval.json"))
        assert target.exists()
        assert configure(str(target)).tol == 1e-7

    def test_default_file_in_working_directory(self):
        """Test hypeval.json in the working directory is picked up"""
        Path("hypeval.json").write_text(json.dumps({"max_terms": 500}))
        assert configure().max_terms == 500
