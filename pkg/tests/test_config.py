import pytest

from stopcontagion.config import DEFAULT_DATABASE_URL, get_settings
from stopcontagion.errors import ConfigError


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


def test_defaults(monkeypatch):
    for name in ("RESULTS_DATABASE_URL", "STOPCONTAGION_LOG_LEVEL", "STOPCONTAGION_EXACT_LIMIT", "STOPCONTAGION_THREADS"):
        monkeypatch.delenv(name, raising=False)
    settings = get_settings()
    assert settings.database_url == DEFAULT_DATABASE_URL
    assert settings.log_level == "INFO"
    assert settings.exact_limit == 12
    assert settings.threads == 1


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("RESULTS_DATABASE_URL", "postgres://user:pw@host/db")
    monkeypatch.setenv("STOPCONTAGION_LOG_LEVEL", "debug")
    monkeypatch.setenv("STOPCONTAGION_THREADS", "4")
    settings = get_settings()
    assert settings.database_url == "postgresql+psycopg2://user:pw@host/db"
    assert settings.log_level == "DEBUG"
    assert settings.threads == 4


@pytest.mark.parametrize("name", ["STOPCONTAGION_EXACT_LIMIT", "STOPCONTAGION_THREADS"])
def test_malformed_integer_setting(monkeypatch, name):
    monkeypatch.setenv(name, "twelve")
    with pytest.raises(ConfigError) as e:
        get_settings()
    assert name in e.value.detail
    assert e.value.exit_code == 2
