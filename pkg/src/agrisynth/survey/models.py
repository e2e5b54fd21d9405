"""Request/response schemas for the survey HTTP API.

These define the client-visible surface; by construction they carry no
provenance fields (no source labels, no file paths).
"""

from __future__ import annotations

from pydantic import BaseModel

__all__ = [
    "SessionRequest",
    "SessionResponse",
    "ItemView",
    "NextResponse",
    "RatingRequest",
    "RatingResponse",
    "ResultsCell",
    "ResultsResponse",
]


class SessionRequest(BaseModel):
    rater_label: str


class SessionResponse(BaseModel):
    session_id: str
    total: int


class ItemView(BaseModel):
    item_id: str
    category: str
    image_url: str
    position: int  # 1-based
    total: int


class NextResponse(BaseModel):
    done: bool
    item: ItemView | None = None


class RatingRequest(BaseModel):
    session_id: str
    item_id: str
    score: int


class RatingResponse(BaseModel):
    accepted: bool
    rated: int
    total: int


class ResultsCell(BaseModel):
    category: str
    source: str
    mean: float
    n: int


class ResultsResponse(BaseModel):
    cells: list[ResultsCell]
