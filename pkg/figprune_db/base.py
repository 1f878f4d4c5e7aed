# figprune_db/base.py

"""
base.py – Core File Repository Class

Provides the `BaseRepository` class every artifact repository inherits from. A
repository is bound to one file path; it reads through pandas or raw bytes and
writes atomically (temporary file in the same directory, then `os.replace`), so
an interrupted write never leaves a half-written artifact behind.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any

import pandas as pd

from utils.errors import UsageError


class BaseRepository:
    """
    Base class for file-backed repositories.

    Args:
        path (str | Path): The artifact file this repository reads and writes.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({str(self.path)!r})"

    def exists(self) -> bool:
        return self.path.is_file()

    def _require_file(self) -> None:
        """
        Raises:
            UsageError: If the artifact does not exist.
        """
        if not self.path.is_file():
            raise UsageError(f"file not found: {self.path}")

    def write_bytes(self, data: bytes) -> None:
        """Atomically replaces the artifact with `data`."""
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{self.path.name}.", dir=self.path.parent)
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def write_text(self, text: str) -> None:
        self.write_bytes(text.encode("utf-8"))

    def read_bytes(self) -> bytes:
        self._require_file()
        return self.path.read_bytes()

    def write_frame(self, df: pd.DataFrame, sep: str = ",", **kwargs: Any) -> None:
        """Writes a DataFrame without index, with '\\n' line endings."""
        self.write_text(df.to_csv(sep=sep, index=False, lineterminator="\n", **kwargs))

    def read_frame(self, sep: str = ",", **kwargs: Any) -> pd.DataFrame:
        self._require_file()
        return pd.read_csv(self.path, sep=sep, **kwargs)

    def write_json(self, data: Any) -> None:
        """Pretty JSON with sorted keys and a trailing newline."""
        self.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")

    def read_json(self) -> Any:
        self._require_file()
        try:
            return json.loads(self.path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise UsageError(f"{self.path} is not valid JSON: {e}") from e
