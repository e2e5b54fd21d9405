"""The survey image pool and blinded rater sessions.

A pool manifest is a JSON file::

    {"items": [{"item_id": "...", "image_path": "...",
                "category": "...", "source": "ground_truth"}, ...]}

``source`` (how the image was produced) and ``image_path`` are the
blinded fields: they exist only server-side and must never reach a rater.
Relative image paths are resolved against the manifest's directory.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import EmptyPool, InvalidConfig, IoError
from ..methods import Method

__all__ = ["PoolItem", "SurveyPool", "Session", "load_pool", "create_session"]


@dataclass(frozen=True)
class PoolItem:
    item_id: str
    image_path: Path
    category: str
    source: Method

    def __post_init__(self):
        object.__setattr__(self, "source", Method(self.source))
        object.__setattr__(self, "image_path", Path(self.image_path))


@dataclass(frozen=True)
class SurveyPool:
    items: tuple

    def __post_init__(self):
        ids = [item.item_id for item in self.items]
        if len(set(ids)) != len(ids):
            raise InvalidConfig("pool item_ids must be unique")
        object.__setattr__(self, "items", tuple(self.items))

    def __len__(self) -> int:
        return len(self.items)

    def get(self, item_id: str) -> PoolItem | None:
        return self._by_id().get(item_id)

    def _by_id(self) -> dict:
        cached = getattr(self, "_index", None)
        if cached is None:
            cached = {item.item_id: item for item in self.items}
            object.__setattr__(self, "_index", cached)
        return cached


@dataclass
class Session:
    """One rater's pass over the pool, in a seeded-shuffled order."""

    session_id: str
    rater_label: str
    order: list[str]
    rated: set = field(default_factory=set)

    @property
    def total(self) -> int:
        return len(self.order)

    def next_unrated(self) -> str | None:
        for item_id in self.order:
            if item_id not in self.rated:
                return item_id
        return None


def load_pool(manifest_path) -> SurveyPool:
    path = Path(manifest_path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read pool manifest {path}: {exc}") from exc
    except ValueError as exc:
        raise InvalidConfig(f"pool manifest {path} is not valid JSON: {exc}") from exc
    try:
        entries = data["items"]
        items = []
        for entry in entries:
            image_path = Path(entry["image_path"])
            if not image_path.is_absolute():
                image_path = path.parent / image_path
            items.append(
                PoolItem(
                    item_id=str(entry["item_id"]),
                    image_path=image_path,
                    category=str(entry["category"]),
                    source=Method(entry["source"]),
                )
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidConfig(f"malformed pool manifest {path}: {exc}") from exc
    return SurveyPool(items=tuple(items))


def create_session(pool: SurveyPool, rater_label: str, seed: int) -> Session:
    """A new session whose order is a seeded shuffle of the pool."""
    if len(pool) == 0:
        raise EmptyPool("survey pool holds no items")
    ids = [item.item_id for item in pool.items]
    random.Random(seed).shuffle(ids)
    session_id = f"s{seed:x}-{random.Random((seed << 16) ^ len(ids)).getrandbits(48):012x}"
    return Session(session_id=session_id, rater_label=rater_label, order=ids)
