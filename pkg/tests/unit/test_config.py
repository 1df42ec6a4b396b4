import os
import logging
import pytest
from unittest.mock import patch
from pydantic import ValidationError
from leveltrees.config import Settings, load_settings


def test_settings_with_valid_env():
    """Test loading settings from environment variables."""
    with patch.dict(os.environ, {
        "LTC_SEARCH_CAP": "12",
        "LTC_TOWER_CAP": "3",
        "LTC_FIXTURES_DIR": "/tmp/goldens",
    }):
        s = Settings()
        assert s.search_cap == 12
        assert s.tower_cap == 3
        assert s.fixtures_dir == "/tmp/goldens"


def test_settings_with_defaults():
    """Test defaults for optional settings."""
    with patch.dict(os.environ, {}, clear=True):
        s = Settings()
        assert s.search_cap == 64
        assert s.tower_cap == 8
        assert s.fixtures_dir == "fixtures"
        assert s.log_level == "WARNING"


def test_log_level_is_upper_cased():
    """A lower-case level name is accepted and normalized."""
    with patch.dict(os.environ, {"LTC_LOG_LEVEL": "debug"}):
        s = Settings()
        assert s.log_level == "DEBUG"
        assert s.numeric_log_level == logging.DEBUG


def test_invalid_values_raise():
    """Unknown level names and non-positive caps are rejected."""
    with patch.dict(os.environ, {"LTC_LOG_LEVEL": "chatty"}):
        with pytest.raises(ValidationError, match="LTC_LOG_LEVEL must be one of"):
            Settings()
    with patch.dict(os.environ, {"LTC_SEARCH_CAP": "0"}):
        with pytest.raises(ValidationError, match="search bounds must be >= 1"):
            Settings()


def test_load_settings_function():
    """Test load_settings returns a Settings instance."""
    with patch.dict(os.environ, {"LTC_SEARCH_CAP": "5"}):
        s = load_settings()
        assert isinstance(s, Settings)
        assert s.search_cap == 5


def test_load_settings_falls_back_to_defaults(caplog, capsys):
    """Bad values log a warning and leave the defaults in place."""
    with patch.dict(os.environ, {"LTC_TOWER_CAP": "-1"}):
        with caplog.at_level(logging.WARNING, logger="leveltrees.config"):
            s = load_settings()
        assert s.tower_cap == 8
        assert s.search_cap == 64
    assert "Invalid leveltrees settings" in caplog.text
    assert capsys.readouterr().out == ""
