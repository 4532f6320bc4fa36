from dataclasses import replace
from datetime import datetime, timezone

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vidusage.model import (
    EventKind,
    IncrementTable,
    PlaybackEvent,
    PlaybackPass,
    ScoreVector,
    SkipEvent,
    ValidationError,
    VideoMeta,
    validate_event,
)

from .conftest import T0, at, play, rate, seek


class TestIncrementTable:
    def test_defaults_match_base_increments(self):
        assert IncrementTable().as_tuple() == (1.0, 0.25, 2.0, 0.6, 0.2, 1.5, 0.5, -0.3, -0.2, -0.1)

    def test_wire_round_trip(self):
        t = IncrementTable(play_focus=1.25, skip_band1=-0.5)
        assert IncrementTable.from_wire(t.to_wire()) == t


class TestValidateEvent:
    def test_seek_beyond_duration_clamped(self, meta100):
        got = validate_event(seek(T0, 10, 105), meta100)
        assert got.to_s == 100.0

    def test_zero_rate_rejected(self, meta100):
        with pytest.raises(ValidationError) as exc:
            validate_event(rate(T0, 0.0), meta100)
        assert exc.value.code == "negative_rate"

    def test_well_formed_play_unchanged(self, meta100):
        got = validate_event(play(T0, 0.0), meta100)
        assert got == play(T0, 0.0)

    def test_missing_field_rejected(self, meta100):
        bare = PlaybackEvent(session_id="s1", video_id="v1", kind=EventKind.SEEK, timestamp=T0, pos_s=3.0)
        with pytest.raises(ValidationError) as exc:
            validate_event(bare, meta100)
        assert exc.value.code == "missing_field"

    def test_wrong_video_rejected(self, meta100):
        with pytest.raises(ValidationError) as exc:
            validate_event(play(T0, 0.0, video="other"), meta100)
        assert exc.value.code == "unknown_video"

    def test_negative_pos_clamped(self, meta100):
        assert validate_event(play(T0, -4.0), meta100).pos_s == 0.0


_kinds = st.sampled_from(list(EventKind))
_pos = st.one_of(st.none(), st.floats(0, 100, allow_nan=False))


@given(
    kind=_kinds,
    pos=_pos,
    to=_pos,
    rate_=st.one_of(st.none(), st.floats(0.25, 4, allow_nan=False)),
    focus=st.one_of(st.none(), st.booleans()),
    micros=st.integers(0, 86_400_000_000),
)
def test_event_wire_round_trip(kind, pos, to, rate_, focus, micros):
    from datetime import timedelta

    ev = PlaybackEvent(
        session_id="abc123",
        video_id="v1",
        kind=kind,
        timestamp=T0 + timedelta(microseconds=micros),
        pos_s=pos,
        to_s=to,
        rate=rate_,
        in_focus=focus,
    )
    assert PlaybackEvent.from_wire(ev.to_wire()) == ev


def test_event_wire_unknown_kind_rejected():
    rec = play(T0, 0.0).to_wire()
    rec["type"] = "teleport"
    with pytest.raises(ValidationError) as exc:
        PlaybackEvent.from_wire(rec)
    assert exc.value.code == "unknown_kind"


def test_schema_has_no_user_field(meta100):
    wire = validate_event(play(T0, 1.0), meta100).to_wire()
    assert set(wire) <= {"v", "session", "video", "type", "t", "pos", "to", "rate", "focus"}


class TestInvariants:
    def test_video_meta_duration_positive(self):
        with pytest.raises(ValueError):
            VideoMeta(video_id="v1", duration_s=0)

    def test_pass_requires_positive_extent(self):
        with pytest.raises(ValueError):
            PlaybackPass("s1", "v1", 5.0, 5.0, 1.0, True, T0)

    def test_skip_forward_only(self):
        with pytest.raises(ValueError):
            SkipEvent("s1", "v1", 10.0, 10.0, T0)

    def test_score_vector_shape_and_range(self):
        with pytest.raises(ValueError):
            ScoreVector("v1", None, raw=[1.0, 2.0], normalized=[1.0])
        with pytest.raises(ValueError):
            ScoreVector("v1", None, raw=[1.0], normalized=[1.5])
