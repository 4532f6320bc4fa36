"""Per-window scoring: increments, skip-penalty bands, day weighting,
aggregation across sessions, and display-time normalization.

Scoring is a full recomputation from the log every time; there is no
incremental state.  Raw scores keep their negative parts; clamping to zero
happens only in normalization (display time).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from datetime import date, datetime
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional
from zoneinfo import ZoneInfo

import numpy as np
import yaml

from .model import IncrementTable, PlaybackEvent, PlaybackPass, ScoreVector, SkipEvent, VideoMeta
from .sessionize import Classification, covered_windows, group_by_session, reconstruct

SKIP_BAND_SECONDS = 60.0  # each of the three penalty bands spans one minute


class ContractViolation(ValueError):
    pass


class RateBracket(str, Enum):
    NORMAL = "normal"
    ONE_AND_HALF = "one_and_half"
    DOUBLE = "double"


class EpochPolicy(str, Enum):
    FIRST_EVENT_DATE = "first_event_date"
    VIDEO_PUBLISHED_AT = "video_published_at"
    FIXED_DATE = "fixed_date"


class SkipBandScope(str, Enum):
    LITERAL_BANDS = "literal_bands"
    SKIPPED_REGION_ONLY = "skipped_region_only"


@dataclass(frozen=True)
class ScoringConfig:
    table: IncrementTable = field(default_factory=IncrementTable)
    decay_slope: float = 0.1
    epoch_policy: EpochPolicy = EpochPolicy.FIRST_EVENT_DATE
    fixed_epoch: Optional[date] = None
    skip_band_scope: SkipBandScope = SkipBandScope.LITERAL_BANDS
    rate_bracket_bounds: tuple[float, float] = (1.25, 1.75)
    tz: str = "UTC"

    def __post_init__(self):
        if self.decay_slope < 0:
            raise ValueError("decay_slope must be >= 0")
        lo, hi = self.rate_bracket_bounds
        if not lo < hi:
            raise ValueError("rate_bracket_bounds must be strictly increasing")
        if self.epoch_policy is EpochPolicy.FIXED_DATE and self.fixed_epoch is None:
            raise ValueError("fixed_date epoch policy requires fixed_epoch")

    def to_wire(self) -> dict:
        return {
            "table": self.table.to_wire(),
            "decay_slope": self.decay_slope,
            "epoch_policy": self.epoch_policy.value,
            "fixed_epoch": self.fixed_epoch.isoformat() if self.fixed_epoch else None,
            "skip_band_scope": self.skip_band_scope.value,
            "rate_bracket_bounds": list(self.rate_bracket_bounds),
            "tz": self.tz,
        }

    @classmethod
    def from_wire(cls, rec: dict) -> "ScoringConfig":
        rec = dict(rec or {})
        return cls(
            table=IncrementTable.from_wire(rec["table"]) if rec.get("table") else IncrementTable(),
            decay_slope=float(rec.get("decay_slope", 0.1)),
            epoch_policy=EpochPolicy(rec.get("epoch_policy", "first_event_date")),
            fixed_epoch=date.fromisoformat(rec["fixed_epoch"]) if rec.get("fixed_epoch") else None,
            skip_band_scope=SkipBandScope(rec.get("skip_band_scope", "literal_bands")),
            rate_bracket_bounds=tuple(rec.get("rate_bracket_bounds", (1.25, 1.75))),
            tz=rec.get("tz", "UTC"),
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "ScoringConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_wire(yaml.safe_load(fh) or {})

    def to_file(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            yaml.safe_dump(self.to_wire(), fh, sort_keys=True)


def rate_bracket(rate: float, cfg: ScoringConfig | None = None) -> RateBracket:
    """Bucket a playback rate into one of the three scored speeds."""
    if rate <= 0:
        raise ContractViolation(f"rate must be > 0, got {rate}")
    lo, hi = (cfg or _DEFAULT_CFG).rate_bracket_bounds
    if rate < lo:
        return RateBracket.NORMAL
    if rate < hi:
        return RateBracket.ONE_AND_HALF
    return RateBracket.DOUBLE


def increment_for_pass(
    classification: Classification,
    in_focus: bool,
    bracket: RateBracket,
    table: IncrementTable,
) -> float:
    """Score delta one pass adds to each window it covers.

    An in-focus replay earns the flat replay increment regardless of speed
    (replaying requires the window to be focused); an out-of-focus replay
    falls back to the ordinary (bracket, unfocused) cell.
    """
    if classification is Classification.REPLAY and in_focus:
        return table.replay
    if bracket is RateBracket.NORMAL:
        return table.play_focus if in_focus else table.play_unfocus
    if bracket is RateBracket.ONE_AND_HALF:
        return table.play15_focus if in_focus else table.play15_unfocus
    return table.play2x_focus if in_focus else table.play2x_unfocus


def _band_window_range(lo_s: float, hi_s: float, duration_s: int) -> range:
    """Integer windows whose start lies in [lo_s, hi_s), clipped to the video."""
    lo = max(0, math.ceil(lo_s))
    hi = min(duration_s, math.ceil(hi_s))
    return range(lo, hi) if hi > lo else range(0)


def skip_penalty_bands(
    skip: SkipEvent, meta: VideoMeta, cfg: ScoringConfig
) -> list[tuple[range, float]]:
    """The up-to-three (window range, penalty) bands following a skip source."""
    table = cfg.table
    src = skip.source_s
    bands = []
    for i, penalty in enumerate((table.skip_band1, table.skip_band2, table.skip_band3)):
        lo_s = src + i * SKIP_BAND_SECONDS
        hi_s = src + (i + 1) * SKIP_BAND_SECONDS
        if cfg.skip_band_scope is SkipBandScope.SKIPPED_REGION_ONLY:
            lo_s = max(lo_s, skip.source_s)
            hi_s = min(hi_s, skip.dest_s)
        rng = _band_window_range(lo_s, hi_s, meta.duration_s)
        if len(rng):
            bands.append((rng, penalty))
    return bands


def skip_penalties(skip: SkipEvent, meta: VideoMeta, cfg: ScoringConfig) -> dict[int, float]:
    """Window -> score delta map for one forward skip (before day weighting)."""
    out: dict[int, float] = {}
    for rng, penalty in skip_penalty_bands(skip, meta, cfg):
        for w in rng:
            out[w] = out.get(w, 0.0) + penalty
    return out


def day_weight(event_day: int, cfg: ScoringConfig) -> float:
    """Linear recency weight: 1 + slope * days since the video's epoch."""
    if event_day < 0:
        raise ContractViolation(f"event_day must be >= 0, got {event_day}")
    return 1.0 + cfg.decay_slope * event_day


def local_date(instant: datetime, tz: str) -> date:
    zone = ZoneInfo(tz)
    if instant.tzinfo is None:
        instant = instant.replace(tzinfo=ZoneInfo("UTC"))
    return instant.astimezone(zone).date()


def resolve_epoch(
    cfg: ScoringConfig, meta: VideoMeta, first_event_at: Optional[datetime]
) -> Optional[date]:
    """Pick the video's day-0 date under the configured policy."""
    if cfg.epoch_policy is EpochPolicy.FIXED_DATE:
        return cfg.fixed_epoch
    if cfg.epoch_policy is EpochPolicy.VIDEO_PUBLISHED_AT:
        if meta.published_at is None:
            raise ContractViolation(f"video {meta.video_id} has no published_at for epoch")
        return meta.published_at
    if first_event_at is None:
        return None
    return local_date(first_event_at, cfg.tz)


def assign_event_days(
    passes: Iterable[PlaybackPass],
    skips: Iterable[SkipEvent],
    epoch: date,
    tz: str = "UTC",
) -> tuple[list[PlaybackPass], list[SkipEvent]]:
    """Stamp each pass/skip with its day index relative to the epoch.

    Days before the epoch (possible under published_at/fixed policies) are
    clamped to 0 rather than rejected.
    """

    def day_of(instant: datetime) -> int:
        return max(0, (local_date(instant, tz) - epoch).days)

    new_passes = [replace(p, event_day=day_of(p.wall_start)) for p in passes]
    new_skips = [replace(s, event_day=day_of(s.wall_at)) for s in skips]
    return new_passes, new_skips


class _Counts:
    """Per-window integer tallies for one increment value: how many
    contributions (n) and the sum of their event days (day_sum).

    Everything downstream derives from these integers, so the result is
    independent of accumulation order and exactly linear in log
    duplication -- which is what makes normalized heatmaps bit-identical
    under k-fold replays of the same log.
    """

    __slots__ = ("n", "day_sum")

    def __init__(self, duration_s: int):
        self.n = np.zeros(duration_s, dtype=np.int64)
        self.day_sum = np.zeros(duration_s, dtype=np.int64)


def _accumulate_counts(
    passes: list[PlaybackPass],
    skips: list[SkipEvent],
    meta: VideoMeta,
    cfg: ScoringConfig,
) -> dict[float, _Counts]:
    """Tally contributions per distinct increment value.

    Pass/skip event_day fields must already be assigned.
    """
    counts: dict[float, _Counts] = {}

    def tally(value: float) -> _Counts:
        c = counts.get(value)
        if c is None:
            c = counts[value] = _Counts(meta.duration_s)
        return c

    by_session: dict[str, list[PlaybackPass]] = {}
    for p in passes:
        by_session.setdefault(p.session_id, []).append(p)

    seen = np.zeros(meta.duration_s, dtype=bool)
    for session_passes in by_session.values():
        seen[:] = False
        for p in session_passes:
            rng = covered_windows(p.media_start_s, min(p.media_end_s, meta.duration_s))
            if not len(rng):
                continue
            lo, hi = rng.start, rng.stop
            bracket = rate_bracket(p.rate, cfg)
            base = increment_for_pass(Classification.FIRST_PLAY, p.in_focus, bracket, cfg.table)
            repl = increment_for_pass(Classification.REPLAY, p.in_focus, bracket, cfg.table)
            if repl != base and seen[lo:hi].any():
                replayed = seen[lo:hi]
                fresh = (~replayed).astype(np.int64)
                hit = replayed.astype(np.int64)
                cb, cr = tally(base), tally(repl)
                cb.n[lo:hi] += fresh
                cb.day_sum[lo:hi] += fresh * p.event_day
                cr.n[lo:hi] += hit
                cr.day_sum[lo:hi] += hit * p.event_day
            else:
                cb = tally(base)
                cb.n[lo:hi] += 1
                cb.day_sum[lo:hi] += p.event_day
            seen[lo:hi] = True

    for s in skips:
        for rng, penalty in skip_penalty_bands(s, meta, cfg):
            c = tally(penalty)
            c.n[rng.start : rng.stop] += 1
            c.day_sum[rng.start : rng.stop] += s.event_day

    return counts


def _exact_numerators(
    counts: dict[float, _Counts], cfg: ScoringConfig, duration_s: int
) -> tuple[np.ndarray, int]:
    """Exact per-window score numerators over a common power-of-two denominator.

    raw[w] = sum_v v * (n_v[w] + slope * day_sum_v[w]); the float64 values
    and the slope are binary rationals, so each numerator is an integer over
    2^T.  Returns (object array of python ints, denominator).
    """
    slope = Fraction(cfg.decay_slope)
    den = 1
    terms = []
    for value, c in counts.items():
        a = Fraction(value)
        b = a * slope
        terms.append((a, b, c))
        den = max(den, a.denominator, b.denominator)  # all powers of two
    numerators = np.zeros(duration_s, dtype=object)
    for a, b, c in terms:
        a_int = int(a * den)
        b_int = int(b * den)
        numerators = numerators + c.n.astype(object) * a_int + c.day_sum.astype(object) * b_int
    return numerators, den


def score_components(
    passes: list[PlaybackPass],
    skips: list[SkipEvent],
    meta: VideoMeta,
    cfg: ScoringConfig,
    epoch: Optional[date] = None,
) -> tuple[np.ndarray, int]:
    """Exact score numerators (python ints) and their common denominator."""
    if not passes and not skips:
        return np.zeros(meta.duration_s, dtype=object), 1
    if epoch is None:
        walls = [p.wall_start for p in passes] + [s.wall_at for s in skips]
        epoch = resolve_epoch(cfg, meta, min(walls))
    passes, skips = assign_event_days(passes, skips, epoch, cfg.tz)
    counts = _accumulate_counts(passes, skips, meta, cfg)
    return _exact_numerators(counts, cfg, meta.duration_s)


def score_video(
    passes: list[PlaybackPass],
    skips: list[SkipEvent],
    meta: VideoMeta,
    cfg: ScoringConfig,
    epoch: Optional[date] = None,
) -> np.ndarray:
    """Aggregate raw per-window scores over all sessions of one video.

    raw[w] = sum over pass contributions and skip penalties touching w of
    increment x day_weight(event_day), correctly rounded to float64.
    Replay detection is scoped to a session: per session, the first covering
    pass of a window is its first play, later covering passes are replays.
    """
    numerators, den = score_components(passes, skips, meta, cfg, epoch)
    return np.array([n / den for n in numerators], dtype=np.float64)


def normalize_components(numerators: np.ndarray, den: int) -> np.ndarray:
    """Normalization straight from the exact numerators.

    Mathematically the same clamp-then-scale as normalize(), but each output
    is the correctly rounded ratio of exact integers, so scaling every count
    by a constant cannot move a single bit.
    """
    clamped = [max(int(n), 0) for n in numerators]
    peak = max(clamped, default=0)
    if peak <= 0:
        return np.zeros(len(clamped), dtype=np.float64)
    return np.array([n / peak for n in clamped], dtype=np.float64)


def normalize(raw: np.ndarray) -> np.ndarray:
    """Display-time normalization: clamp below at 0, scale the max to 1."""
    clamped = np.maximum(np.asarray(raw, dtype=np.float64), 0.0)
    peak = clamped.max(initial=0.0)
    if peak <= 0.0:
        return np.zeros_like(clamped)
    return clamped / peak


def score_events(
    events: list[PlaybackEvent],
    meta: VideoMeta,
    cfg: ScoringConfig,
    as_of: date,
) -> ScoreVector:
    """Full pipeline for one video: sessionize, score, normalize."""
    passes: list[PlaybackPass] = []
    skips: list[SkipEvent] = []
    for stream in group_by_session(events).values():
        p, s = reconstruct(stream, meta)
        passes.extend(p)
        skips.extend(s)
    epoch = resolve_epoch(cfg, meta, min((e.timestamp for e in events), default=None))
    numerators, den = score_components(passes, skips, meta, cfg, epoch=epoch)
    raw = np.array([n / den for n in numerators], dtype=np.float64)
    normalized = normalize_components(numerators, den)
    return ScoreVector(video_id=meta.video_id, as_of=as_of, raw=raw, normalized=normalized)


_DEFAULT_CFG = ScoringConfig()
