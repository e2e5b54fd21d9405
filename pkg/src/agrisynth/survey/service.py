"""The blinded realism-survey HTTP service.

Raters see one image at a time with only its crop name and a 1-5 scale;
which images are AI-generated and which are field photographs is withheld
throughout (no source labels or server paths in any response). Each
session walks the whole pool in its own seeded-shuffled order; ratings
append to an ndjson store that survives restarts.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, Response
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles

from ..errors import DuplicateRating, EmptyPool
from .models import (
    ItemView,
    NextResponse,
    RatingRequest,
    RatingResponse,
    ResultsCell,
    ResultsResponse,
    SessionRequest,
    SessionResponse,
)
from .pool import SurveyPool, create_session
from .store import RatingRecord, RatingsStore, aggregate_ratings

__all__ = ["create_app"]

_MEDIA_TYPES = {".png": "image/png", ".jpg": "image/jpeg", ".jpeg": "image/jpeg"}

_PLACEHOLDER_PAGE = """<!doctype html>
<html><head><title>Realism survey</title></head>
<body><h1>Realism survey service</h1>
<p>The service is running, but no survey UI assets are installed.
Point --static at a built frontend, or drive the JSON API directly.</p>
</body></html>
"""


def create_app(
    pool: SurveyPool,
    store: RatingsStore,
    base_seed: int = 0,
    admin: bool = False,
    static_dir: Path | None = None,
) -> FastAPI:
    if len(pool) == 0:
        raise EmptyPool("refusing to serve an empty survey pool")

    app = FastAPI(title="realism-survey")
    sessions: dict = {}
    state_lock = threading.Lock()
    counter = {"next": 0}

    @app.post("/api/sessions", response_model=SessionResponse)
    def open_session(request: SessionRequest) -> SessionResponse:
        with state_lock:
            seed = base_seed + counter["next"]
            counter["next"] += 1
            session = create_session(pool, request.rater_label, seed)
            sessions[session.session_id] = session
        return SessionResponse(session_id=session.session_id, total=session.total)

    @app.get("/api/sessions/{session_id}/next", response_model=NextResponse)
    def next_item(session_id: str) -> NextResponse:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        with state_lock:
            item_id = session.next_unrated()
            rated = len(session.rated)
        if item_id is None:
            return NextResponse(done=True)
        item = pool.get(item_id)
        return NextResponse(
            done=False,
            item=ItemView(
                item_id=item.item_id,
                category=item.category,
                image_url=f"/api/images/{item.item_id}",
                position=rated + 1,
                total=session.total,
            ),
        )

    @app.get("/api/images/{item_id}")
    def image_bytes(item_id: str) -> Response:
        item = pool.get(item_id)
        if item is None:
            raise HTTPException(status_code=404, detail="unknown item")
        media_type = _MEDIA_TYPES.get(item.image_path.suffix.lower())
        if media_type is None:
            raise HTTPException(status_code=404, detail="unknown item")
        try:
            payload = item.image_path.read_bytes()
        except OSError:
            raise HTTPException(status_code=404, detail="image unavailable")
        return Response(content=payload, media_type=media_type)

    @app.post("/api/ratings", response_model=RatingResponse)
    def submit_rating(request: RatingRequest) -> RatingResponse:
        session = sessions.get(request.session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        if pool.get(request.item_id) is None:
            raise HTTPException(status_code=404, detail="unknown item")
        if request.score not in (1, 2, 3, 4, 5):
            raise HTTPException(status_code=422, detail="score must be between 1 and 5")
        record = RatingRecord.now(
            session_id=request.session_id,
            item_id=request.item_id,
            score=request.score,
            rater_label=session.rater_label,
        )
        try:
            store.append(record)
        except DuplicateRating:
            raise HTTPException(status_code=409, detail="item already rated")
        with state_lock:
            session.rated.add(request.item_id)
            rated = len(session.rated)
        return RatingResponse(accepted=True, rated=rated, total=session.total)

    @app.get("/api/results", response_model=ResultsResponse)
    def results() -> ResultsResponse:
        if not admin:
            raise HTTPException(status_code=403, detail="results endpoint disabled")
        table = aggregate_ratings(store.load_all(), pool)
        cells = [
            ResultsCell(category=category, source=source.value, mean=cell["mean"], n=cell["n"])
            for (category, source), cell in sorted(
                table.items(), key=lambda kv: (kv[0][0], kv[0][1].value)
            )
        ]
        return ResultsResponse(cells=cells)

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        def placeholder() -> str:
            return _PLACEHOLDER_PAGE

    return app
