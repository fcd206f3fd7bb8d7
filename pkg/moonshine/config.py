import os
from pathlib import Path

from pydantic import BaseModel, Field, ValidationError

DEFAULT_TERMS = 52
TABLE_TERMS = 52
CENTRAL_CHARGE = 24
DEFAULT_DIMENSION_HEIGHT = 5
DEFAULT_WORKERS = 8
DEFAULT_LOG_LEVEL = "WARNING"

DATA_DIR = Path(__file__).parent / "data"
DEFAULT_CORPUS_PATH = DATA_DIR / "corpus.csv"
DEFAULT_DEGREES_PATH = DATA_DIR / "degrees.csv"
DEFAULT_CHECKSUMS_PATH = DATA_DIR / "checksums.csv"
DEFAULT_LEVELS_PATH = DATA_DIR / "levels_n0.csv"


class ConfigError(Exception):
    pass


class Settings(BaseModel):
    corpus_path: Path = DEFAULT_CORPUS_PATH
    degrees_path: Path | None = None
    checksums_path: Path = DEFAULT_CHECKSUMS_PATH
    workers: int = Field(DEFAULT_WORKERS, ge=1)
    log_level: str = DEFAULT_LOG_LEVEL


def load_settings() -> Settings:
    """Read MOONSHINE_* overrides from the environment (call load_dotenv first)."""
    overrides = {
        "corpus_path": os.environ.get("MOONSHINE_CORPUS"),
        "degrees_path": os.environ.get("MOONSHINE_DEGREES"),
        "checksums_path": os.environ.get("MOONSHINE_CHECKSUMS"),
        "workers": os.environ.get("MOONSHINE_WORKERS"),
        "log_level": os.environ.get("MOONSHINE_LOG_LEVEL"),
    }
    try:
        return Settings(**{k: v for k, v in overrides.items() if v})
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(p) for p in first.get("loc", ()))
        raise ConfigError(f"Invalid setting {field}: {first.get('msg')}") from e
