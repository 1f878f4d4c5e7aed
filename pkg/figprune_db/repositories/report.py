# figprune_db/repositories/report.py

"""
report.py – JSON Report Repository

Stores JSON documents (prune reports, evaluation reports, comparisons, the run
config echo) with sorted keys and two-space indentation.
"""

from __future__ import annotations

from typing import Any

from ..base import BaseRepository


class ReportRepository(BaseRepository):

    def save(self, data: dict[str, Any]) -> None:
        self.write_json(data)

    def load(self) -> dict[str, Any]:
        return self.read_json()
