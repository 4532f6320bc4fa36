"""HTTP service: batch event ingestion, catalog listing, heatmap retrieval.

Ingestion acknowledges after the durable append but before any scoring;
heatmaps are served from the latest snapshot and lag the log until the next
recompute.  No authentication (sessions are anonymous by construction); a
light per-address rate limit guards against crude flooding.
"""
from __future__ import annotations

import threading
import time
from datetime import date
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .model import PlaybackEvent, ValidationError, validate_event
from .recompute import recompute_all
from .scoring import ScoringConfig
from .store import EventStore, NoSnapshot, UnknownVideo

DEFAULT_BATCH_CAP = 1000


class RateLimiter:
    """Sliding-window request counter per source address."""

    def __init__(self, max_per_minute: int = 600):
        self.max_per_minute = max_per_minute
        self._hits: dict[str, list[float]] = {}
        self._lock = threading.Lock()

    def allow(self, addr: str) -> bool:
        now = time.monotonic()
        with self._lock:
            hits = self._hits.setdefault(addr, [])
            cutoff = now - 60.0
            while hits and hits[0] < cutoff:
                hits.pop(0)
            if len(hits) >= self.max_per_minute:
                return False
            hits.append(now)
            return True


def create_app(
    store: EventStore,
    cfg: Optional[ScoringConfig] = None,
    batch_cap: int = DEFAULT_BATCH_CAP,
    rate_limit_per_minute: int = 600,
    ui_dir: Optional[Path] = None,
) -> FastAPI:
    cfg = cfg or ScoringConfig()
    app = FastAPI(title="vidusage")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    limiter = RateLimiter(rate_limit_per_minute)
    # Serializes appends per video; snapshots need no lock (atomic rename).
    append_lock = threading.Lock()

    @app.middleware("http")
    async def rate_limit(request: Request, call_next):
        addr = request.client.host if request.client else "unknown"
        if not limiter.allow(addr):
            return JSONResponse({"error": "rate_limited"}, status_code=429)
        return await call_next(request)

    @app.get("/api/v1/videos")
    def list_videos() -> list[dict]:
        return [meta.to_wire() for meta in store.load_catalog()]

    @app.post("/api/v1/videos/{video_id}/events")
    async def ingest(video_id: str, request: Request) -> Response:
        try:
            meta = store.get_meta(video_id)
        except UnknownVideo:
            return JSONResponse({"error": "unknown_video"}, status_code=404)
        try:
            body = await request.json()
        except Exception:
            return JSONResponse({"error": "malformed_body"}, status_code=400)
        if not isinstance(body, list):
            return JSONResponse({"error": "malformed_body"}, status_code=400)
        if len(body) > batch_cap:
            return JSONResponse({"error": "batch_too_large", "cap": batch_cap}, status_code=413)

        accepted: list[PlaybackEvent] = []
        rejected: list[dict] = []
        for i, rec in enumerate(body):
            try:
                if not isinstance(rec, dict):
                    raise ValidationError("bad_record", "event must be an object")
                ev = PlaybackEvent.from_wire({**rec, "video": video_id})
                accepted.append(validate_event(ev, meta))
            except ValidationError as exc:
                rejected.append({"index": i, "reason": exc.code})
        with append_lock:
            n = store.append_events(accepted)
        return JSONResponse({"accepted": n, "rejected": rejected}, status_code=202)

    @app.get("/api/v1/videos/{video_id}/heatmap")
    def heatmap(video_id: str) -> Response:
        try:
            meta = store.get_meta(video_id)
        except UnknownVideo:
            return JSONResponse({"error": "unknown_video"}, status_code=404)
        try:
            snap = store.load_snapshot(video_id)
            as_of = snap.vector.as_of.isoformat() if snap.vector.as_of else None
            scores = [float(x) for x in snap.vector.normalized]
        except NoSnapshot:
            as_of = None
            scores = [0.0] * meta.duration_s
        return JSONResponse(
            {
                "video": video_id,
                "duration_s": meta.duration_s,
                "as_of": as_of,
                "scores": scores,
            }
        )

    @app.post("/api/v1/recompute")
    def recompute(as_of: Optional[str] = None) -> dict:
        """On-demand trigger of the nightly recompute."""
        day = date.fromisoformat(as_of) if as_of else date.today()
        results = recompute_all(store, cfg, day)
        return {
            "as_of": day.isoformat(),
            "ok": sorted(v for v, p in results.items() if p is not None),
            "failed": sorted(v for v, p in results.items() if p is None),
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
