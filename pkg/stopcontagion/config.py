import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict

from .errors import ConfigError

load_dotenv()

DEFAULT_DATABASE_URL = "sqlite:///stopcontagion_results.db"


class Settings(BaseModel):
    model_config = ConfigDict(frozen=True)

    log_level: str = "INFO"
    database_url: str = DEFAULT_DATABASE_URL
    exact_limit: int = 12
    threads: int = 1


def database_url() -> str:
    url = os.getenv("RESULTS_DATABASE_URL", DEFAULT_DATABASE_URL)
    # Heroku/Railway style URLs need an explicit driver
    if url.startswith("postgres://"):
        url = url.replace("postgres://", "postgresql+psycopg2://", 1)
    return url


def _int_setting(name: str, default: int) -> int:
    raw = os.getenv(name, str(default))
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Read settings from the environment (and a local ``.env`` file)."""
    return Settings(
        log_level=os.getenv("STOPCONTAGION_LOG_LEVEL", "INFO").upper(),
        database_url=database_url(),
        exact_limit=_int_setting("STOPCONTAGION_EXACT_LIMIT", 12),
        threads=_int_setting("STOPCONTAGION_THREADS", 1),
    )
