"""Content-addressed on-disk cache for rank computations.

Each record is one JSON file named by the SHA-256 of its key.  Writers go
through a temporary file and ``os.replace`` so concurrent inserts never
expose a partial record.  Records from another engine version are ignored,
and unreadable records are deleted.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

ENGINE_VERSION = "1"
ENV_DIR = "JETBOUND_CACHE_DIR"


@dataclass(frozen=True)
class CacheRecord:
    key: str
    value: dict
    version: str


class RankCache:
    def __init__(self, directory: str | os.PathLike, version: str = ENGINE_VERSION):
        self.dir = Path(directory)
        self.version = version
        self.dir.mkdir(parents=True, exist_ok=True)

    @classmethod
    def from_env(cls) -> "RankCache | None":
        d = os.environ.get(ENV_DIR)
        return cls(d) if d else None

    def __getstate__(self):
        return {"dir": str(self.dir), "version": self.version}

    def __setstate__(self, state):
        self.dir = Path(state["dir"])
        self.version = state["version"]

    @staticmethod
    def key(kind: str, parts: tuple) -> str:
        return hashlib.sha256(repr((kind, parts)).encode()).hexdigest()

    def _path(self, key: str) -> Path:
        return self.dir / f"{key}.json"

    def get(self, key: str) -> dict | None:
        rec = self.get_record(key)
        return None if rec is None else rec.value

    def get_record(self, key: str) -> CacheRecord | None:
        path = self._path(key)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
            rec = CacheRecord(raw["key"], dict(raw["value"]), str(raw["version"]))
            if rec.key != key:
                raise ValueError("key mismatch")
        except FileNotFoundError:
            return None
        except (ValueError, KeyError, TypeError, OSError):
            path.unlink(missing_ok=True)
            return None
        if rec.version != self.version:
            return None
        return rec

    def put(self, key: str, value: dict) -> CacheRecord:
        rec = CacheRecord(key, value, self.version)
        fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump({"key": key, "value": value, "version": self.version}, fh, sort_keys=True)
        os.replace(tmp, self._path(key))
        return rec

    def entries(self) -> list[Path]:
        return sorted(self.dir.glob("*.json"))

    def clear(self) -> int:
        files = self.entries()
        for f in files:
            f.unlink(missing_ok=True)
        return len(files)
