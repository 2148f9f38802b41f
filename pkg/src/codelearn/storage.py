"""File-backed storage: namespaced JSON records with atomic writes.

One directory per namespace, one JSON file per record, written via
write-then-rename so a crash mid-write never leaves a half-written record.
Desk-scale by design; the interface is small enough to back with a document
database later without touching callers.
"""

from __future__ import annotations

import json
import re
import tempfile
import threading
from pathlib import Path

from .errors import IoFailure

_SAFE_KEY = re.compile(r"[^A-Za-z0-9._-]")


class FileStorage:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, namespace: str, key: str) -> Path:
        safe = _SAFE_KEY.sub("_", str(key))
        directory = self.root / namespace
        directory.mkdir(parents=True, exist_ok=True)
        return directory / f"{safe}.json"

    def put(self, namespace: str, key: str, record: dict) -> None:
        path = self._path(namespace, key)
        try:
            with tempfile.NamedTemporaryFile(
                "w", dir=path.parent, prefix=path.name, suffix=".tmp",
                delete=False, encoding="utf-8",
            ) as tmp:
                json.dump(record, tmp, ensure_ascii=False, sort_keys=True)
            Path(tmp.name).replace(path)
        except OSError as exc:
            raise IoFailure(f"cannot write {namespace}/{key}: {exc}") from exc

    def get(self, namespace: str, key: str) -> dict | None:
        path = self._path(namespace, key)
        if not path.exists():
            return None
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise IoFailure(f"cannot read {namespace}/{key}: {exc}") from exc

    def delete(self, namespace: str, key: str) -> None:
        self._path(namespace, key).unlink(missing_ok=True)

    def keys(self, namespace: str) -> list[str]:
        directory = self.root / namespace
        if not directory.is_dir():
            return []
        return sorted(p.stem for p in directory.glob("*.json"))

    def values(self, namespace: str) -> list[dict]:
        return [v for k in self.keys(namespace) if (v := self.get(namespace, k)) is not None]

    def append(self, namespace: str, key: str, entry: dict) -> None:
        """Append to a record holding a JSON list; atomic read-modify-rewrite."""
        with self._lock:
            record = self.get(namespace, key) or {"entries": []}
            record["entries"].append(entry)
            self.put(namespace, key, record)


class NamespaceDict:
    """Mapping facade over one storage namespace (used as ingest catalog)."""

    def __init__(self, storage: FileStorage, namespace: str):
        self._storage = storage
        self._namespace = namespace

    def __setitem__(self, key: str, value) -> None:
        if isinstance(value, list):
            value = {"items": value}
        self._storage.put(self._namespace, key, value)

    def __getitem__(self, key: str):
        value = self._storage.get(self._namespace, key)
        if value is None:
            raise KeyError(key)
        if set(value.keys()) == {"items"}:
            return value["items"]
        return value

    def get(self, key: str, default=None):
        try:
            return self[key]
        except KeyError:
            return default

    def __contains__(self, key: str) -> bool:
        return self._storage.get(self._namespace, key) is not None

    def keys(self) -> list[str]:
        return self._storage.keys(self._namespace)
