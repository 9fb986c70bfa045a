# ────────────── src/app/config.py ──────────────
import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

from src.core.errors import ConfigError

load_dotenv()


@dataclass(frozen=True)
class Settings:
    log_level: str = "WARNING"
    exhaustive_limit: int = 20
    sample_size: int = 4096
    seed: int = 0
    workers: int = 1
    console_width: int = 160

    @property
    def limits(self) -> dict:
        """Keyword arguments shared by check, generate and fuzz."""
        return {"exhaustive_limit": self.exhaustive_limit, "sample_size": self.sample_size}


def _int_env(name: str, default: int, minimum: int = 0) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


def load_settings() -> Settings:
    level = os.getenv("MCDC_LOG_LEVEL", "WARNING").upper()
    if not isinstance(logging.getLevelName(level), int):
        raise ConfigError(f"MCDC_LOG_LEVEL must be a logging level name, got {level!r}")
    return Settings(
        log_level=level,
        exhaustive_limit=_int_env("MCDC_EXHAUSTIVE_LIMIT", 20),
        sample_size=_int_env("MCDC_SAMPLE_SIZE", 4096, minimum=1),
        seed=_int_env("MCDC_SEED", 0),
        workers=_int_env("MCDC_WORKERS", 1, minimum=1),
        console_width=_int_env("MCDC_CONSOLE_WIDTH", 160, minimum=40),
    )
