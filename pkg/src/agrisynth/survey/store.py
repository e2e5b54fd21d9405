"""Append-only ratings store (newline-delimited JSON) and aggregation."""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from ..errors import DuplicateRating, IoError, ScoreOutOfRange
from .pool import SurveyPool

__all__ = ["RatingRecord", "RatingsStore", "aggregate_ratings"]


@dataclass(frozen=True)
class RatingRecord:
    session_id: str
    item_id: str
    score: int
    submitted_at: str  # ISO-8601 UTC
    rater_label: str = ""

    def __post_init__(self):
        if self.score not in (1, 2, 3, 4, 5):
            raise ScoreOutOfRange(f"score must be 1..5, got {self.score}")

    @classmethod
    def now(cls, session_id: str, item_id: str, score: int, rater_label: str = "") -> "RatingRecord":
        return cls(
            session_id=session_id,
            item_id=item_id,
            score=score,
            submitted_at=datetime.now(timezone.utc).isoformat(),
            rater_label=rater_label,
        )


class RatingsStore:
    """One record per line; appends are serialized through a single lock.

    Existing lines are loaded on open so duplicate detection survives
    process restarts.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._seen: set = set()
        if self.path.exists():
            for record in self.load_all():
                self._seen.add((record.session_id, record.item_id))

    def append(self, record: RatingRecord) -> None:
        key = (record.session_id, record.item_id)
        with self._lock:
            if key in self._seen:
                raise DuplicateRating(
                    f"item already rated in this session: {record.item_id}"
                )
            line = json.dumps(
                {
                    "session_id": record.session_id,
                    "item_id": record.item_id,
                    "score": record.score,
                    "submitted_at": record.submitted_at,
                    "rater_label": record.rater_label,
                },
                sort_keys=True,
            )
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(line + "\n")
                handle.flush()
            self._seen.add(key)

    def load_all(self) -> list[RatingRecord]:
        try:
            text = self.path.read_text(encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot read ratings store {self.path}: {exc}") from exc
        records = []
        for line in text.splitlines():
            if not line.strip():
                continue
            data = json.loads(line)
            records.append(
                RatingRecord(
                    session_id=data["session_id"],
                    item_id=data["item_id"],
                    score=int(data["score"]),
                    submitted_at=data["submitted_at"],
                    rater_label=data.get("rater_label", ""),
                )
            )
        return records

    def __len__(self) -> int:
        return len(self._seen)


def aggregate_ratings(records, pool: SurveyPool) -> dict:
    """Mean score and count per (category, source) cell.

    ``records`` may be a path to a store file or an iterable of
    RatingRecord. Cells nobody rated are absent from the result (never
    reported as zero); ratings for items outside the pool are ignored.
    """
    if isinstance(records, (str, Path)):
        records = RatingsStore(records).load_all()

    sums: dict = {}
    counts: dict = {}
    for record in records:
        item = pool.get(record.item_id)
        if item is None:
            continue
        key = (item.category, item.source)
        sums[key] = sums.get(key, 0.0) + record.score
        counts[key] = counts.get(key, 0) + 1

    table = {}
    for key, count in counts.items():
        mean = sums[key] / count
        assert 1.0 <= mean <= 5.0 and math.isfinite(mean)
        table[key] = {"mean": mean, "n": count}
    return table
