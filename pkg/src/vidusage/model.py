"""Shared domain types, the wire/event schema, and the scoring constants.

Everything here is an immutable value object; the only behavior is
validation and (de)serialization.  Media positions stay fractional in
events -- bucketing into 1-second windows happens during scoring.

Privacy note: the event schema has no user field at all.  A session is an
opaque client-generated token, so logs carry no linkable identity.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, fields, replace
from datetime import date, datetime
from enum import Enum
from typing import Any, Optional

import numpy as np

SCHEMA_VERSION = 1

_VIDEO_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


class ValidationError(ValueError):
    """Raised when an event (or record) fails schema validation.

    ``code`` is one of: unknown_kind, missing_field, negative_rate,
    unknown_video, bad_record.
    """

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


class EventKind(str, Enum):
    PLAY = "play"
    PAUSE = "pause"
    SEEK = "seek"
    RATE = "rate"
    FOCUS = "focus"
    END = "end"


class VideoKind(str, Enum):
    SYNCHRONOUS_RECORDING = "synchronous_recording"
    ASYNCHRONOUS_SCREENCAST = "asynchronous_screencast"


@dataclass(frozen=True)
class VideoMeta:
    video_id: str
    duration_s: int
    title: str = ""
    course_code: str = ""
    week_label: str = ""
    kind: VideoKind = VideoKind.ASYNCHRONOUS_SCREENCAST
    published_at: Optional[date] = None

    def __post_init__(self):
        if not _VIDEO_ID_RE.match(self.video_id):
            raise ValueError(f"invalid video_id {self.video_id!r}")
        if self.duration_s < 1:
            raise ValueError("duration_s must be >= 1")

    def to_wire(self) -> dict[str, Any]:
        return {
            "video_id": self.video_id,
            "duration_s": self.duration_s,
            "title": self.title,
            "course_code": self.course_code,
            "week_label": self.week_label,
            "kind": self.kind.value,
            "published_at": self.published_at.isoformat() if self.published_at else None,
        }

    @classmethod
    def from_wire(cls, rec: dict[str, Any]) -> "VideoMeta":
        return cls(
            video_id=rec["video_id"],
            duration_s=int(rec["duration_s"]),
            title=rec.get("title", ""),
            course_code=rec.get("course_code", ""),
            week_label=rec.get("week_label", ""),
            kind=VideoKind(rec.get("kind", "asynchronous_screencast")),
            published_at=date.fromisoformat(rec["published_at"]) if rec.get("published_at") else None,
        )


# Wire field names are part of the on-disk log format: one record per line,
# keys: v, session, video, type, t, pos, to, rate, focus.  Optional keys are
# omitted when absent so the log stays compact and greppable.
@dataclass(frozen=True)
class PlaybackEvent:
    session_id: str
    video_id: str
    kind: EventKind
    timestamp: datetime
    pos_s: Optional[float] = None
    to_s: Optional[float] = None
    rate: Optional[float] = None
    in_focus: Optional[bool] = None
    schema_version: int = SCHEMA_VERSION

    def to_wire(self) -> dict[str, Any]:
        rec: dict[str, Any] = {
            "v": self.schema_version,
            "session": self.session_id,
            "video": self.video_id,
            "type": self.kind.value,
            "t": self.timestamp.isoformat(),
        }
        if self.pos_s is not None:
            rec["pos"] = self.pos_s
        if self.to_s is not None:
            rec["to"] = self.to_s
        if self.rate is not None:
            rec["rate"] = self.rate
        if self.in_focus is not None:
            rec["focus"] = self.in_focus
        return rec

    @classmethod
    def from_wire(cls, rec: dict[str, Any]) -> "PlaybackEvent":
        try:
            kind = EventKind(rec["type"])
        except ValueError:
            raise ValidationError("unknown_kind", f"unknown event type {rec.get('type')!r}")
        except KeyError:
            raise ValidationError("missing_field", "event has no 'type'")
        try:
            ts = datetime.fromisoformat(str(rec["t"]).replace("Z", "+00:00"))
        except (KeyError, ValueError):
            raise ValidationError("missing_field", "event has no parseable 't'")
        for key in ("session", "video"):
            if not rec.get(key):
                raise ValidationError("missing_field", f"event has no '{key}'")
        return cls(
            session_id=str(rec["session"]),
            video_id=str(rec["video"]),
            kind=kind,
            timestamp=ts,
            pos_s=float(rec["pos"]) if rec.get("pos") is not None else None,
            to_s=float(rec["to"]) if rec.get("to") is not None else None,
            rate=float(rec["rate"]) if rec.get("rate") is not None else None,
            in_focus=bool(rec["focus"]) if rec.get("focus") is not None else None,
            schema_version=int(rec.get("v", SCHEMA_VERSION)),
        )


# Which fields each event kind must carry.
_REQUIRED: dict[EventKind, tuple[str, ...]] = {
    EventKind.PLAY: ("pos_s",),
    EventKind.PAUSE: ("pos_s",),
    EventKind.SEEK: ("pos_s", "to_s"),
    EventKind.RATE: ("rate",),
    EventKind.FOCUS: ("in_focus",),
    EventKind.END: ("pos_s",),
}


def validate_event(ev: PlaybackEvent, meta: VideoMeta) -> PlaybackEvent:
    """Validate one event against its video and clamp positions into range.

    Returns the (possibly clamped) event, or raises ValidationError.
    """
    if ev.video_id != meta.video_id:
        raise ValidationError("unknown_video", f"event video {ev.video_id!r} != {meta.video_id!r}")
    for name in _REQUIRED[ev.kind]:
        if getattr(ev, name) is None:
            raise ValidationError("missing_field", f"{ev.kind.value} event missing {name}")
    if ev.rate is not None and ev.rate <= 0:
        raise ValidationError("negative_rate", f"rate must be > 0, got {ev.rate}")
    changes: dict[str, float] = {}
    d = float(meta.duration_s)
    if ev.pos_s is not None:
        clamped = min(max(ev.pos_s, 0.0), d)
        if clamped != ev.pos_s:
            changes["pos_s"] = clamped
    if ev.to_s is not None:
        clamped = min(max(ev.to_s, 0.0), d)
        if clamped != ev.to_s:
            changes["to_s"] = clamped
    return replace(ev, **changes) if changes else ev


@dataclass(frozen=True)
class PlaybackPass:
    """A contiguous stretch of media played at one (rate, focus) state.

    ``event_day`` is assigned at scoring time, once the video's epoch is
    known; the sessionizer leaves it at 0.
    """

    session_id: str
    video_id: str
    media_start_s: float
    media_end_s: float
    rate: float
    in_focus: bool
    wall_start: datetime
    event_day: int = 0

    def __post_init__(self):
        if not self.media_end_s > self.media_start_s:
            raise ValueError("media_end_s must be > media_start_s")

    @property
    def media_seconds(self) -> float:
        return self.media_end_s - self.media_start_s


@dataclass(frozen=True)
class SkipEvent:
    """A forward seek: source position and destination, both media seconds."""

    session_id: str
    video_id: str
    source_s: float
    dest_s: float
    wall_at: datetime
    event_day: int = 0

    def __post_init__(self):
        if not self.dest_s > self.source_s:
            raise ValueError("dest_s must be > source_s (forward seeks only)")


@dataclass(frozen=True)
class IncrementTable:
    """The ten base scoring constants, in score units per 1-second window."""

    play_focus: float = 1.0
    play_unfocus: float = 0.25
    replay: float = 2.0
    play2x_focus: float = 0.6
    play2x_unfocus: float = 0.2
    play15_focus: float = 1.5
    play15_unfocus: float = 0.5
    skip_band1: float = -0.3
    skip_band2: float = -0.2
    skip_band3: float = -0.1

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, f.name) for f in fields(self))

    def to_wire(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_wire(cls, rec: dict[str, float]) -> "IncrementTable":
        return cls(**{k: float(v) for k, v in rec.items()})


@dataclass(frozen=True, eq=False)
class ScoreVector:
    """Per-video per-window scores: raw (signed) and display-normalized [0,1]."""

    video_id: str
    as_of: Optional[date]
    raw: np.ndarray = field(compare=False)
    normalized: np.ndarray = field(compare=False)

    def __post_init__(self):
        raw = np.asarray(self.raw, dtype=np.float64)
        norm = np.asarray(self.normalized, dtype=np.float64)
        object.__setattr__(self, "raw", raw)
        object.__setattr__(self, "normalized", norm)
        if raw.shape != norm.shape or raw.ndim != 1:
            raise ValueError("raw and normalized must be 1-d arrays of equal length")
        if norm.size and (norm.min() < 0.0 or norm.max() > 1.0):
            raise ValueError("normalized values must lie in [0, 1]")

    def __eq__(self, other):
        if not isinstance(other, ScoreVector):
            return NotImplemented
        return (
            self.video_id == other.video_id
            and self.as_of == other.as_of
            and np.array_equal(self.raw, other.raw)
            and np.array_equal(self.normalized, other.normalized)
        )
