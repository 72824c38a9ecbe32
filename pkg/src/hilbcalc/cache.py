"""Content-addressed JSON cache on disk.

Keys hash the model fingerprint, an operation tag, the arguments and the
format version; entries are written atomically, so concurrent writers of the
same key at worst replace a file with identical bytes.
"""
from __future__ import annotations

import hashlib
import json
import os
import sys
import tempfile
from pathlib import Path

FORMAT_VERSION = 1


def default_cache_dir() -> Path:
    env = os.environ.get("HILBCALC_CACHE")
    if env:
        return Path(env)
    if sys.platform == "darwin":
        base = Path.home() / "Library" / "Caches"
    elif os.name == "nt":
        base = Path(os.environ.get("LOCALAPPDATA", Path.home() / "AppData" / "Local"))
    else:
        base = Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache"))
    return base / "hilbcalc"


class DiskCache:
    def __init__(self, root: Path | str | None = None, enabled: bool = True):
        self.root = Path(root) if root is not None else default_cache_dir()
        self.enabled = enabled

    def key(self, fingerprint: str, tag: str, args) -> str:
        blob = json.dumps([FORMAT_VERSION, fingerprint, tag, args], sort_keys=True,
                          separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def get(self, key: str):
        if not self.enabled:
            return None
        path = self._path(key)
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            return None
        if doc.get("version") != FORMAT_VERSION or doc.get("key") != key:
            return None
        return doc["value"]

    def put(self, key: str, value) -> None:
        if not self.enabled:
            return
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        doc = {"version": FORMAT_VERSION, "key": key, "value": value}
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
            os.replace(tmp, path)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise

    def cached(self, fingerprint: str, tag: str, args, compute):
        """Return the cached JSON value for (tag, args), computing it on a miss."""
        key = self.key(fingerprint, tag, args)
        hit = self.get(key)
        if hit is not None:
            return hit
        value = compute()
        self.put(key, value)
        return value
