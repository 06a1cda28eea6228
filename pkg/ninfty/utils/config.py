import os
from functools import lru_cache
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from ninfty.utils.errors import ConfigError

load_dotenv()


def _default_cache_dir() -> Path:
    xdg = os.getenv("XDG_CACHE_HOME")
    base = Path(xdg) if xdg else Path.home() / ".cache"
    return base / "ninfty"


_ENV_NAMES = {
    "assoc_check_cap": "NINFTY_ASSOC_CHECK_CAP",
    "subgroup_cap": "NINFTY_SUBGROUP_CAP",
    "max_order": "NINFTY_MAX_ORDER",
    "arity_cap": "NINFTY_ARITY_CAP",
    "threads": "NINFTY_THREADS",
}


def _env_flag(name: str, default: bool = False) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in {"1", "true", "yes", "on"}


class Settings(BaseModel):
    """Runtime limits and locations, read once from the environment."""

    cache_dir: Path = Field(default_factory=_default_cache_dir)
    cache_enabled: bool = True
    assoc_check_cap: int = Field(default=256, ge=1)
    assoc_sample_size: int = Field(default=10_000, ge=1)
    subgroup_cap: int = Field(default=384, ge=1)
    max_order: int = Field(default=4096, ge=1)
    arity_cap: int = Field(default=6, ge=0)
    threads: int = Field(default=1, ge=1)
    progress: bool = False

    @classmethod
    def from_env(cls) -> "Settings":
        values = {
            "cache_enabled": not _env_flag("NINFTY_NO_CACHE"),
            "progress": _env_flag("NINFTY_PROGRESS"),
        }
        cache_dir = os.getenv("NINFTY_CACHE")
        if cache_dir:
            values["cache_dir"] = Path(cache_dir)
        for field, env in _ENV_NAMES.items():
            raw = os.getenv(env)
            if raw:
                try:
                    values[field] = int(raw)
                except ValueError:
                    raise ConfigError(f"{env}={raw!r} is not an integer")
        try:
            return cls(**values)
        except ValidationError as e:
            err = e.errors()[0]
            field = err["loc"][0]
            raise ConfigError(f"invalid {_ENV_NAMES.get(field, field)}: {err['msg']}")


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings.from_env()


def override_settings(
    cache_dir: Optional[Path] = None,
    cache_enabled: Optional[bool] = None,
    threads: Optional[int] = None,
    progress: Optional[bool] = None,
) -> Settings:
    """Apply per-invocation CLI overrides in place and return the settings."""
    settings = get_settings()
    if cache_dir is not None:
        settings.cache_dir = Path(cache_dir)
    if cache_enabled is not None:
        settings.cache_enabled = cache_enabled
    if threads is not None:
        settings.threads = max(1, threads)
    if progress is not None:
        settings.progress = progress
    return settings
