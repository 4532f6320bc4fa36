import random
from dataclasses import replace
from datetime import date, timedelta

import numpy as np
import pytest

from vidusage.model import IncrementTable, PlaybackPass, SkipEvent, VideoMeta
from vidusage.scoring import (
    ContractViolation,
    EpochPolicy,
    RateBracket,
    ScoringConfig,
    SkipBandScope,
    day_weight,
    increment_for_pass,
    normalize,
    rate_bracket,
    resolve_epoch,
    score_events,
    score_video,
    skip_penalties,
)
from vidusage.sessionize import Classification, group_by_session, reconstruct

from .conftest import T0, at, pause, play, random_session_events, seek
from .oracles import brute_scores

CFG = ScoringConfig()
EPOCH = T0.date()


def mkpass(start, end, *, session="s1", video="v1", rate=1.0, in_focus=True, day=0):
    return PlaybackPass(session, video, start, end, rate, in_focus, T0 + timedelta(days=day))


def mkskip(source, dest, *, session="s1", video="v1", day=0):
    return SkipEvent(session, video, source, dest, T0 + timedelta(days=day))


class TestRateBracket:
    @pytest.mark.parametrize(
        "rate,expected",
        [
            (1.0, RateBracket.NORMAL),
            (0.75, RateBracket.NORMAL),
            (1.24, RateBracket.NORMAL),
            (1.25, RateBracket.ONE_AND_HALF),
            (1.5, RateBracket.ONE_AND_HALF),
            (1.74, RateBracket.ONE_AND_HALF),
            (1.75, RateBracket.DOUBLE),
            (2.0, RateBracket.DOUBLE),
            (3.0, RateBracket.DOUBLE),
        ],
    )
    def test_brackets(self, rate, expected):
        assert rate_bracket(rate, CFG) is expected

    def test_nonpositive_rate_rejected(self):
        with pytest.raises(ContractViolation):
            rate_bracket(0.0, CFG)


class TestIncrementForPass:
    T = IncrementTable()

    @pytest.mark.parametrize(
        "cls,focus,bracket,expected",
        [
            (Classification.FIRST_PLAY, True, RateBracket.NORMAL, 1.0),
            (Classification.FIRST_PLAY, False, RateBracket.NORMAL, 0.25),
            (Classification.FIRST_PLAY, True, RateBracket.DOUBLE, 0.6),
            (Classification.FIRST_PLAY, False, RateBracket.DOUBLE, 0.2),
            (Classification.FIRST_PLAY, True, RateBracket.ONE_AND_HALF, 1.5),
            (Classification.FIRST_PLAY, False, RateBracket.ONE_AND_HALF, 0.5),
            (Classification.REPLAY, True, RateBracket.NORMAL, 2.0),
            (Classification.REPLAY, True, RateBracket.DOUBLE, 2.0),
            (Classification.REPLAY, False, RateBracket.NORMAL, 0.25),
            (Classification.REPLAY, False, RateBracket.ONE_AND_HALF, 0.5),
        ],
    )
    def test_lookup(self, cls, focus, bracket, expected):
        assert increment_for_pass(cls, focus, bracket, self.T) == expected

    def test_play_plus_replay_totals_three(self):
        total = increment_for_pass(Classification.FIRST_PLAY, True, RateBracket.NORMAL, self.T)
        total += increment_for_pass(Classification.REPLAY, True, RateBracket.NORMAL, self.T)
        assert total == 3.0


class TestSkipPenalties:
    def test_three_literal_bands(self, meta1000):
        deltas = skip_penalties(mkskip(100, 400), meta1000, CFG)
        for w in range(100, 160):
            assert deltas[w] == -0.3
        for w in range(160, 220):
            assert deltas[w] == -0.2
        for w in range(220, 280):
            assert deltas[w] == -0.1
        assert set(deltas) == set(range(100, 280))

    def test_bands_truncated_at_video_end(self, meta1000):
        deltas = skip_penalties(mkskip(950, 990), meta1000, CFG)
        assert set(deltas) == set(range(950, 1000))
        assert all(v == -0.3 for v in deltas.values())

    def test_skipped_region_only_scope(self, meta1000):
        cfg = replace(CFG, skip_band_scope=SkipBandScope.SKIPPED_REGION_ONLY)
        deltas = skip_penalties(mkskip(100, 170), meta1000, cfg)
        assert set(deltas) == set(range(100, 170))
        assert deltas[159] == -0.3 and deltas[160] == -0.2

    def test_fractional_source_uses_window_starts(self, meta1000):
        deltas = skip_penalties(mkskip(10.4, 300), meta1000, CFG)
        assert 10 not in deltas  # window 10 starts before the source
        assert deltas[11] == -0.3
        assert deltas[70] == -0.3 and deltas[71] == -0.2


class TestDayWeight:
    def test_day_zero(self):
        assert day_weight(0, CFG) == 1.0

    def test_day_one(self):
        assert day_weight(1, CFG) == 1.1

    def test_day_ten_doubles(self):
        assert day_weight(10, CFG) == 2.0

    def test_negative_day_rejected(self):
        with pytest.raises(ContractViolation):
            day_weight(-1, CFG)

    def test_affine_strictly_increasing(self):
        weights = [day_weight(d, CFG) for d in range(50)]
        diffs = np.diff(weights)
        assert np.allclose(diffs, CFG.decay_slope) and (diffs > 0).all()


class TestScoreVideo:
    def test_no_events_all_zero(self, meta1000):
        raw = score_video([], [], meta1000, CFG, epoch=EPOCH)
        assert raw.shape == (1000,) and not raw.any()

    def test_worked_play_skip_play(self, meta1000):
        passes = [mkpass(0, 10), mkpass(70, 75)]
        skips = [mkskip(10, 70)]
        raw = score_video(passes, skips, meta1000, CFG, epoch=EPOCH)
        expected = np.zeros(1000)
        expected[0:10] = 1.0
        expected[10:70] = -0.3
        expected[70:75] = 0.8  # +1.0 play, -0.2 second band
        expected[75:130] = -0.2
        expected[130:190] = -0.1
        assert raw == pytest.approx(expected, abs=1e-12)
        brute = brute_scores(passes, skips, meta1000, CFG, EPOCH)
        assert raw == pytest.approx(brute, abs=1e-12)

    def test_day_ten_scores_double_day_zero(self, meta1000):
        raw0 = score_video([mkpass(0, 10, day=0)], [], meta1000, CFG, epoch=EPOCH)
        raw10 = score_video([mkpass(0, 10, day=10)], [], meta1000, CFG, epoch=EPOCH)
        assert raw10 == pytest.approx(2.0 * raw0, abs=1e-12)

    def test_replay_window_totals(self, meta1000):
        for d in (0, 1, 10):
            passes = [mkpass(0, 10, day=d), mkpass(3, 6, day=d)]
            raw = score_video(passes, [], meta1000, CFG, epoch=EPOCH)
            assert raw[4] == pytest.approx(3.0 * (1 + 0.1 * d), abs=1e-12)

    def test_cross_session_passes_are_not_replays(self, meta1000):
        passes = [mkpass(0, 10, session="a"), mkpass(0, 10, session="b")]
        raw = score_video(passes, [], meta1000, CFG, epoch=EPOCH)
        assert raw[5] == 2.0  # two first plays, not +1 +2

    def test_out_of_focus_replay_falls_back(self, meta1000):
        passes = [mkpass(0, 10), mkpass(3, 6, in_focus=False)]
        raw = score_video(passes, [], meta1000, CFG, epoch=EPOCH)
        assert raw[4] == pytest.approx(1.25)

    def test_linearity_under_log_duplication(self, meta100):
        rng = random.Random(23)
        events = []
        for s in range(4):
            events += random_session_events(rng, meta100, f"s{s}", max_events=15)
        passes, skips = _sessionize_all(events, meta100)
        raw1 = score_video(passes, skips, meta100, CFG, epoch=EPOCH)
        k = 3
        passes_k, skips_k = [], []
        for i in range(k):
            for p in passes:
                passes_k.append(replace(p, session_id=f"{p.session_id}#{i}"))
            for s in skips:
                skips_k.append(replace(s, session_id=f"{s.session_id}#{i}"))
        raw_k = score_video(passes_k, skips_k, meta100, CFG, epoch=EPOCH)
        assert raw_k == pytest.approx(k * raw1, abs=1e-9)
        assert normalize(raw_k) == pytest.approx(normalize(raw1), abs=1e-12)


def _sessionize_all(events, meta):
    passes, skips = [], []
    for stream in group_by_session(events).values():
        p, s = reconstruct(stream, meta)
        passes += p
        skips += s
    return passes, skips


class TestNormalize:
    def test_clamp_then_scale(self):
        assert normalize(np.array([2.0, -0.5, 1.0])) == pytest.approx([1.0, 0.0, 0.5])

    def test_all_zeros(self):
        assert not normalize(np.zeros(5)).any()

    def test_all_negative(self):
        assert not normalize(np.array([-1.0, -2.0])).any()

    def test_uniform_positive(self):
        assert normalize(np.array([5.0, 5.0])) == pytest.approx([1.0, 1.0])

    def test_max_is_one_iff_any_positive(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            raw = rng.normal(size=20)
            norm = normalize(raw)
            assert norm.min() >= 0.0 and norm.max() <= 1.0
            if (raw > 0).any():
                assert norm.max() == 1.0
            else:
                assert not norm.any()


class TestEpoch:
    def test_first_event_date_default(self, meta100):
        assert resolve_epoch(CFG, meta100, T0) == T0.date()

    def test_fixed_date(self, meta100):
        cfg = replace(CFG, epoch_policy=EpochPolicy.FIXED_DATE, fixed_epoch=date(2026, 1, 1))
        assert resolve_epoch(cfg, meta100, T0) == date(2026, 1, 1)

    def test_published_at(self):
        meta = VideoMeta(video_id="v1", duration_s=100, published_at=date(2026, 2, 1))
        cfg = replace(CFG, epoch_policy=EpochPolicy.VIDEO_PUBLISHED_AT)
        assert resolve_epoch(cfg, meta, T0) == date(2026, 2, 1)

    def test_reporting_timezone_shifts_day_boundary(self, meta100):
        # 01:00 UTC is still the previous day in New York
        cfg = replace(CFG, tz="America/New_York")
        late = T0.replace(hour=1)
        events = [play(late, 0, video="v1"), pause(late + timedelta(seconds=10), 10, video="v1")]
        vec_utc = score_events(events, meta100, CFG, as_of=T0.date())
        vec_ny = score_events(events, meta100, cfg, as_of=T0.date())
        # both are day 0 relative to their own epoch, so raw scores agree
        assert vec_utc.raw == pytest.approx(vec_ny.raw)


class TestConfig:
    def test_defaults_reproduce_published_constants(self):
        cfg = ScoringConfig()
        assert cfg.table.as_tuple() == (1.0, 0.25, 2.0, 0.6, 0.2, 1.5, 0.5, -0.3, -0.2, -0.1)
        assert cfg.decay_slope == 0.1
        assert cfg.rate_bracket_bounds == (1.25, 1.75)

    def test_file_round_trip(self, tmp_path):
        cfg = ScoringConfig(
            decay_slope=0.2,
            epoch_policy=EpochPolicy.FIXED_DATE,
            fixed_epoch=date(2026, 1, 1),
            skip_band_scope=SkipBandScope.SKIPPED_REGION_ONLY,
            tz="Europe/Dublin",
        )
        path = tmp_path / "scoring.yaml"
        cfg.to_file(path)
        assert ScoringConfig.from_file(path) == cfg

    def test_invalid_bounds_rejected(self):
        with pytest.raises(ValueError):
            ScoringConfig(rate_bracket_bounds=(1.75, 1.25))

    def test_negative_slope_rejected(self):
        with pytest.raises(ValueError):
            ScoringConfig(decay_slope=-0.1)


class TestOracleEquivalenceSmoke:
    def test_random_streams_match_brute_force(self):
        rng = random.Random(31)
        for case in range(25):
            meta = VideoMeta(video_id="v1", duration_s=rng.randint(30, 300))
            events = []
            for s in range(rng.randint(1, 6)):
                events += random_session_events(rng, meta, f"s{s}", max_events=20)
            passes, skips = _sessionize_all(events, meta)
            walls = [p.wall_start for p in passes] + [s.wall_at for s in skips]
            if not walls:
                continue
            epoch = min(walls).date()
            raw = score_video(passes, skips, meta, CFG, epoch=epoch)
            brute = brute_scores(passes, skips, meta, CFG, epoch)
            assert raw == pytest.approx(brute, abs=1e-9), f"case {case}"
