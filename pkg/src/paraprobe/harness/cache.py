"""Append-only on-disk key-value cache for backend responses.

One JSONL file per store; entries are never rewritten, so a cached
response is treated as ground truth for reruns (the backends are
deterministic at temperature 0).  Appends are serialized behind a lock;
reads are lock-free after load.
"""

from __future__ import annotations

import hashlib
import json
import threading
from pathlib import Path


class KVCache:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._data: dict[str, object] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        if self.path.exists():
            with self.path.open(encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    entry = json.loads(line)
                    self._data[entry["key"]] = entry["value"]

    @staticmethod
    def digest(material: str) -> str:
        return hashlib.sha256(material.encode("utf-8")).hexdigest()

    def get(self, key: str):
        key = self.digest(key)
        value = self._data.get(key)
        with self._lock:
            if value is not None:
                self.hits += 1
            else:
                self.misses += 1
        return value

    def put(self, key: str, value) -> None:
        key = self.digest(key)
        line = json.dumps({"key": key, "value": value}, ensure_ascii=False, sort_keys=True)
        with self._lock:
            if key in self._data:
                return
            self._data[key] = value
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def __len__(self) -> int:
        return len(self._data)
