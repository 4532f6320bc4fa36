"""The (nightly) recompute: log -> sessions -> scores -> snapshot, per video.

Recomputation is total, never incremental: every run re-reads the full log
so the day weights reflect the current epoch arithmetic.  Snapshots are
written atomically, so readers keep serving the previous one until the new
file is in place.
"""
from __future__ import annotations

import logging
import threading
from datetime import date, datetime, timedelta
from pathlib import Path
from typing import Callable, Optional
from zoneinfo import ZoneInfo

from .scoring import ScoringConfig, score_events
from .store import EventStore

log = logging.getLogger(__name__)


def recompute_video(store: EventStore, cfg: ScoringConfig, video_id: str, as_of: date) -> Path:
    meta = store.get_meta(video_id)
    events = store.load_events(video_id, up_to=as_of)
    vector = score_events(events, meta, cfg, as_of=as_of)
    return store.save_snapshot(vector, cfg)


def recompute_all(store: EventStore, cfg: ScoringConfig, as_of: date) -> dict[str, Optional[Path]]:
    """Recompute every cataloged video; one video failing never stops the rest."""
    results: dict[str, Optional[Path]] = {}
    for meta in store.load_catalog():
        try:
            results[meta.video_id] = recompute_video(store, cfg, meta.video_id, as_of)
        except Exception:
            log.exception("recompute failed for video %s; skipping", meta.video_id)
            results[meta.video_id] = None
    return results


def seconds_until_midnight(now: datetime, tz: str) -> float:
    zone = ZoneInfo(tz)
    local = now.astimezone(zone)
    tomorrow = (local + timedelta(days=1)).date()
    midnight = datetime.combine(tomorrow, datetime.min.time(), tzinfo=zone)
    return (midnight - local).total_seconds()


class MidnightScheduler:
    """Background thread that runs the recompute at each local midnight."""

    def __init__(
        self,
        store: EventStore,
        cfg: ScoringConfig,
        tz: str = "UTC",
        clock: Callable[[], datetime] = lambda: datetime.now(ZoneInfo("UTC")),
    ):
        self.store = store
        self.cfg = cfg
        self.tz = tz
        self.clock = clock
        self._stop = threading.Event()
        self._thread: Optional[threading.Thread] = None

    def start(self) -> None:
        self._thread = threading.Thread(target=self._run, name="midnight-recompute", daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread:
            self._thread.join(timeout=5)

    def _run(self) -> None:
        while not self._stop.is_set():
            wait = seconds_until_midnight(self.clock(), self.tz)
            if self._stop.wait(timeout=wait):
                return
            as_of = self.clock().astimezone(ZoneInfo(self.tz)).date()
            try:
                recompute_all(self.store, self.cfg, as_of)
            except Exception:
                log.exception("scheduled recompute failed")
