import logging

from dotenv import load_dotenv
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings

logger = logging.getLogger(__name__)

_LEVEL_NAMES = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")


class Settings(BaseSettings):
    """Library and CLI settings loaded from environment variables, they are."""

    # Search bounds
    search_cap: int = Field(default=64, alias="LTC_SEARCH_CAP")
    tower_cap: int = Field(default=8, alias="LTC_TOWER_CAP")

    # Fixture store
    fixtures_dir: str = Field(default="fixtures", alias="LTC_FIXTURES_DIR")

    # Logging
    log_level: str = Field(default="WARNING", alias="LTC_LOG_LEVEL")

    @field_validator("search_cap", "tower_cap")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        """Validate that search bounds are positive, we must."""
        if v < 1:
            raise ValueError(f"search bounds must be >= 1, got {v}")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate that the log level is a standard level name, we must."""
        level = v.strip().upper()
        if level not in _LEVEL_NAMES:
            raise ValueError(f"LTC_LOG_LEVEL must be one of {', '.join(_LEVEL_NAMES)}, got {v!r}")
        return level

    @property
    def numeric_log_level(self) -> int:
        return logging.getLevelName(self.log_level)

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "case_sensitive": False,
        "populate_by_name": True,
    }


def load_settings() -> Settings:
    """Load settings from environment, falling back to defaults on bad values, we must."""
    load_dotenv()
    try:
        return Settings()
    except Exception as e:
        logger.warning(f"Invalid leveltrees settings ({e}); using defaults")
        return Settings.model_construct()


settings: Settings | None = None


def get_settings() -> Settings:
    """Get global settings instance, we must."""
    global settings
    if settings is None:
        settings = load_settings()
    return settings
