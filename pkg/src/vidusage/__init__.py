"""Usage-based heatmaps for learning videos.

Ingests anonymized playback events, reconstructs per-session playback
passes, scores every 1-second window with recency-weighted increments, and
serves normalized per-video usage heatmaps.
"""
from .model import (
    IncrementTable,
    PlaybackEvent,
    PlaybackPass,
    ScoreVector,
    SkipEvent,
    ValidationError,
    VideoMeta,
    validate_event,
)
from .scoring import ScoringConfig, normalize, score_events, score_video
from .sessionize import mark_replays, reconstruct
from .store import EventStore

__all__ = [
    "EventStore",
    "IncrementTable",
    "PlaybackEvent",
    "PlaybackPass",
    "ScoreVector",
    "ScoringConfig",
    "SkipEvent",
    "ValidationError",
    "VideoMeta",
    "mark_replays",
    "normalize",
    "reconstruct",
    "score_events",
    "score_video",
    "validate_event",
]
