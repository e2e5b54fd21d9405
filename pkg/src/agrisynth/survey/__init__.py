"""Blinded human-realism survey: pool, sessions, ratings store, HTTP app."""

from .models import (
    ItemView,
    NextResponse,
    RatingRequest,
    RatingResponse,
    SessionRequest,
    SessionResponse,
)
from .pool import PoolItem, Session, SurveyPool, create_session, load_pool
from .service import create_app
from .store import RatingRecord, RatingsStore, aggregate_ratings

__all__ = [
    "PoolItem",
    "SurveyPool",
    "Session",
    "create_session",
    "load_pool",
    "RatingRecord",
    "RatingsStore",
    "aggregate_ratings",
    "create_app",
    "ItemView",
    "NextResponse",
    "RatingRequest",
    "RatingResponse",
    "SessionRequest",
    "SessionResponse",
]
