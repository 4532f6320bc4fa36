"""Append-only on-disk persistence for events, the catalog, and snapshots.

Layout inside the data directory:

    catalog.meta                      one VideoMeta record per line (JSON)
    <video_id>.events.log             one PlaybackEvent per line (JSON)
    <video_id>.scores.<as_of>.snap    one ScoreVector snapshot (JSON)

Records are line-delimited JSON: greppable, append-friendly and language
neutral.  Log lines are never rewritten; snapshots are immutable once
written (temp-file + rename, so readers always see a whole file).
"""
from __future__ import annotations

import errno
import json
import logging
import os
from dataclasses import dataclass
from datetime import date, timezone
from pathlib import Path
from typing import Optional

from .model import PlaybackEvent, ScoreVector, VideoMeta
from .scoring import ScoringConfig

log = logging.getLogger(__name__)


class StoreError(Exception):
    pass


class UnknownVideo(StoreError):
    pass


class NoSnapshot(StoreError):
    pass


class CorruptLog(StoreError):
    pass


class StorageFull(StoreError):
    pass


@dataclass
class Snapshot:
    vector: ScoreVector
    config: ScoringConfig


class EventStore:
    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)

    # -- catalog -----------------------------------------------------------

    @property
    def catalog_path(self) -> Path:
        return self.data_dir / "catalog.meta"

    def save_catalog(self, videos: list[VideoMeta]) -> None:
        seen = set()
        for v in videos:
            if v.video_id in seen:
                raise StoreError(f"duplicate video_id {v.video_id!r} in catalog")
            seen.add(v.video_id)
        lines = [json.dumps(v.to_wire(), sort_keys=True) for v in sorted(videos, key=lambda v: v.video_id)]
        self._atomic_write(self.catalog_path, "".join(line + "\n" for line in lines))

    def load_catalog(self) -> list[VideoMeta]:
        if not self.catalog_path.exists():
            return []
        videos = []
        for line in self.catalog_path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                videos.append(VideoMeta.from_wire(json.loads(line)))
        return sorted(videos, key=lambda v: v.video_id)

    def get_meta(self, video_id: str) -> VideoMeta:
        for v in self.load_catalog():
            if v.video_id == video_id:
                return v
        raise UnknownVideo(video_id)

    # -- event log ---------------------------------------------------------

    def _log_path(self, video_id: str) -> Path:
        return self.data_dir / f"{video_id}.events.log"

    def append_events(self, batch: list[PlaybackEvent]) -> int:
        """Append validated events to their per-video logs, in batch order.

        Lines are flushed and fsynced before returning, so an acknowledged
        append survives a crash.
        """
        if not batch:
            return 0
        by_video: dict[str, list[PlaybackEvent]] = {}
        for ev in batch:
            by_video.setdefault(ev.video_id, []).append(ev)
        count = 0
        for video_id, events in by_video.items():
            payload = "".join(json.dumps(ev.to_wire(), sort_keys=True) + "\n" for ev in events)
            try:
                with open(self._log_path(video_id), "a", encoding="utf-8") as fh:
                    fh.write(payload)
                    fh.flush()
                    os.fsync(fh.fileno())
            except OSError as exc:
                if exc.errno == errno.ENOSPC:
                    raise StorageFull(str(exc)) from exc
                raise
            count += len(events)
        return count

    def load_events(self, video_id: str, up_to: Optional[date] = None) -> list[PlaybackEvent]:
        """All stored events for a video with UTC date <= up_to, time-sorted.

        A torn (unparseable) final line is skipped with a warning -- that is
        the expected crash artifact.  A bad line anywhere else means real
        corruption and raises CorruptLog.
        """
        self.get_meta(video_id)  # raises UnknownVideo
        path = self._log_path(video_id)
        if not path.exists():
            return []
        lines = path.read_text(encoding="utf-8").split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        events: list[PlaybackEvent] = []
        for i, line in enumerate(lines):
            try:
                events.append(PlaybackEvent.from_wire(json.loads(line)))
            except (ValueError, KeyError) as exc:
                if i == len(lines) - 1:
                    log.warning("skipping torn final line in %s: %s", path.name, exc)
                    break
                raise CorruptLog(f"{path.name} line {i + 1}: {exc}") from exc
        if up_to is not None:
            events = [e for e in events if _utc_date(e) <= up_to]
        events.sort(key=lambda e: e.timestamp)  # stable: ties keep arrival order
        return events

    # -- snapshots ---------------------------------------------------------

    def _snap_path(self, video_id: str, as_of: date) -> Path:
        return self.data_dir / f"{video_id}.scores.{as_of.isoformat()}.snap"

    def save_snapshot(self, vector: ScoreVector, config: ScoringConfig) -> Path:
        if vector.as_of is None:
            raise StoreError("snapshot requires an as_of date")
        body = json.dumps(
            {
                "video": vector.video_id,
                "as_of": vector.as_of.isoformat(),
                "config": config.to_wire(),
                "raw": [float(x) for x in vector.raw],
                "normalized": [float(x) for x in vector.normalized],
            },
            sort_keys=True,
        )
        path = self._snap_path(vector.video_id, vector.as_of)
        self._atomic_write(path, body + "\n")
        return path

    def load_snapshot(self, video_id: str) -> Snapshot:
        """Latest snapshot for a video (highest as_of)."""
        snaps = sorted(self.data_dir.glob(f"{video_id}.scores.*.snap"))
        if not snaps:
            raise NoSnapshot(video_id)
        rec = json.loads(snaps[-1].read_text(encoding="utf-8"))
        vector = ScoreVector(
            video_id=rec["video"],
            as_of=date.fromisoformat(rec["as_of"]),
            raw=rec["raw"],
            normalized=rec["normalized"],
        )
        return Snapshot(vector=vector, config=ScoringConfig.from_wire(rec["config"]))

    # -- helpers -----------------------------------------------------------

    def _atomic_write(self, path: Path, text: str) -> None:
        tmp = path.with_name(path.name + ".tmp")
        try:
            with open(tmp, "w", encoding="utf-8") as fh:
                fh.write(text)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except OSError as exc:
            if exc.errno == errno.ENOSPC:
                raise StorageFull(str(exc)) from exc
            raise


def _utc_date(ev: PlaybackEvent) -> date:
    ts = ev.timestamp
    if ts.tzinfo is None:
        return ts.date()
    return ts.astimezone(timezone.utc).date()
