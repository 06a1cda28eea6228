import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Callable, Dict, Optional

from pydantic import BaseModel, ValidationError

from ninfty.utils.config import get_settings
from ninfty.utils.logger import logger

CACHE_VERSION = 1


class CacheEntry(BaseModel):
    key: str
    version: int
    payload: Any


def _stable_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def cache_key(fingerprint: str, operation: str, params: Dict[str, Any]) -> str:
    """sha256 over the group table fingerprint, operation name and parameters."""
    blob = _stable_dumps({"table": fingerprint, "operation": operation, "params": params})
    return hashlib.sha256(blob.encode()).hexdigest()


class CacheHandler:
    """JSON-on-disk cache of expensive results, one file per key."""

    def __init__(self, root: Optional[Path] = None, enabled: Optional[bool] = None):
        settings = get_settings()
        self.root = Path(root) if root is not None else Path(settings.cache_dir)
        self.enabled = settings.cache_enabled if enabled is None else enabled

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def read(self, key: str) -> Optional[Any]:
        """Payload for key, or None on a miss, a version mismatch or a corrupt entry."""
        if not self.enabled:
            return None
        path = self._path(key)
        if not path.exists():
            logger.debug(f"cache miss: {key[:12]}")
            return None
        try:
            entry = CacheEntry.model_validate_json(path.read_text(encoding="utf-8"))
        except (OSError, ValidationError) as e:
            logger.warning(f"Unreadable cache entry {path.name}: {e}")
            return None
        if entry.version != CACHE_VERSION or entry.key != key:
            logger.debug(f"cache entry {key[:12]} has version {entry.version}, expected {CACHE_VERSION}")
            return None
        logger.debug(f"cache hit: {key[:12]}")
        return entry.payload

    def write(self, key: str, payload: Any) -> None:
        """Write to a temporary file in the cache directory, then rename over the entry."""
        if not self.enabled:
            return
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            entry = CacheEntry(key=key, version=CACHE_VERSION, payload=payload)
            fd, tmp = tempfile.mkstemp(dir=self.root, prefix=f".{key[:12]}-", suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    fh.write(_stable_dumps(entry.model_dump()))
                os.replace(tmp, self._path(key))
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
            logger.debug(f"cache write: {key[:12]}")
        except OSError as e:
            logger.warning(f"Cache write failed for {key[:12]}: {e}")

    def get_or_compute(self, key: str, compute: Callable[[], Any]) -> Any:
        payload = self.read(key)
        if payload is None:
            payload = compute()
            self.write(key, payload)
        return payload
