"""On-disk cache of Witt structure tables, one JSON file per (mode, p, e, n, op).

Entries are re-verified on load; anything unreadable or failing its ghost
identities is logged, ignored and rebuilt.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path

from .witt import WittPolyTable

ENV_VAR = "LATFROB_CACHE_DIR"
log = logging.getLogger(__name__)


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "latfrob"


class TableStore:
    def __init__(self, directory: str | Path | None = None):
        self.directory = Path(directory) if directory else default_cache_dir()

    def path(self, setup, n: int, op: str) -> Path:
        return self.directory / f"witt-{setup.key()}-n{n}-{op}.json"

    def load(self, setup, n: int, op: str) -> WittPolyTable | None:
        path = self.path(setup, n, op)
        if not path.exists():
            return None
        try:
            table = WittPolyTable.from_json(json.loads(path.read_text()))
            if table.setup.key() != setup.key() or table.n != n or table.op != op:
                raise ValueError("header does not match the file name")
            table.verify()
        except Exception as exc:  # corrupt entries are rebuilt, never trusted
            log.warning("discarding cache entry %s: %s", path, exc)
            return None
        return WittPolyTable(setup, n, op, table.polys)

    def save(self, table: WittPolyTable) -> None:
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            path = self.path(table.setup, table.n, table.op)
            fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                json.dump(table.to_json(), fh, sort_keys=True, indent=1)
            os.replace(tmp, path)
        except OSError as exc:
            log.warning("could not write cache entry: %s", exc)
