from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path
from typing import Any

from . import __version__
from .liesuper import SuperAlgebra
from .restricted import PMap, RestrictedAlgebra

log = logging.getLogger(__name__)


def _canonical(value: Any) -> Any:
    if isinstance(value, SuperAlgebra):
        return value.key()
    if isinstance(value, PMap):
        return [value.algebra.key(), list(value.key())]
    if isinstance(value, RestrictedAlgebra):
        return _canonical(value.pmap)
    if isinstance(value, (list, tuple)):
        return [_canonical(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _canonical(v) for k, v in value.items()}
    return value


def compute_cache_key(**parts: Any) -> str:
    """sha256 over a canonical JSON encoding of ``parts`` and the package version."""
    h = hashlib.sha256()
    h.update(__version__.encode())
    payload = {name: _canonical(value) for name, value in sorted(parts.items())}
    h.update(json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str).encode())
    return h.hexdigest()


def load_cached_result(cache_dir: Path, key: str) -> Any | None:
    path = cache_dir / f"{key}.json"
    if not path.exists():
        return None
    log.info("cache hit %s", key[:12])
    return json.loads(path.read_text(encoding="utf-8"))


def save_cached_result(cache_dir: Path, key: str, result: Any) -> None:
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"{key}.json"
    path.write_text(json.dumps(result, ensure_ascii=False, indent=2), encoding="utf-8")
