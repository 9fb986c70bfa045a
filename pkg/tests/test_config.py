import pytest

from src.app.config import Settings, load_settings
from src.core.errors import ConfigError

ENV = ("MCDC_LOG_LEVEL", "MCDC_EXHAUSTIVE_LIMIT", "MCDC_SAMPLE_SIZE", "MCDC_SEED", "MCDC_WORKERS",
       "MCDC_CONSOLE_WIDTH")


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ENV:
        monkeypatch.delenv(name, raising=False)


def test_defaults():
    assert load_settings() == Settings()


def test_overrides(monkeypatch):
    monkeypatch.setenv("MCDC_LOG_LEVEL", "debug")
    monkeypatch.setenv("MCDC_EXHAUSTIVE_LIMIT", "12")
    monkeypatch.setenv("MCDC_SEED", "7")
    settings = load_settings()
    assert settings.log_level == "DEBUG"
    assert settings.limits == {"exhaustive_limit": 12, "sample_size": 4096}
    assert settings.seed == 7


def test_blank_value_falls_back_to_default(monkeypatch):
    monkeypatch.setenv("MCDC_WORKERS", "")
    assert load_settings().workers == 1


@pytest.mark.parametrize("name, value", [
    ("MCDC_SAMPLE_SIZE", "many"),
    ("MCDC_SAMPLE_SIZE", "0"),
    ("MCDC_WORKERS", "-2"),
    ("MCDC_CONSOLE_WIDTH", "10"),
    ("MCDC_LOG_LEVEL", "LOUD"),
])
def test_invalid_values(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ConfigError, match=name):
        load_settings()


def test_limits_is_a_fresh_dict():
    settings = Settings()
    settings.limits["exhaustive_limit"] = 99
    assert settings.limits["exhaustive_limit"] == 20
