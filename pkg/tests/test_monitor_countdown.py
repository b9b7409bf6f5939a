"""Countdown parsing and the RESET / PERSIST judgment rules."""

from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from darkscope.monitor.countdown import TimerObservation, judge_countdown, parse_countdown
from darkscope.monitor.verdict import Rule, Verdict


class TestParse:
    @pytest.mark.parametrize("text,expected", [
        ("Your cart will expire in 10:00 minutes", 600),
        ("02:15:30 left", 8130),
        ("limited time only", None),
        ("ends in 00:45", 45),
        ("2 days 01:00:00 until the sale ends", 2 * 86400 + 3600),
        ("1 day, 00:30", 86400 + 1800),
        ("no numbers here", None),
        ("call 555-1234 now", None),
    ])
    def test_forms(self, text, expected):
        assert parse_countdown(text) == expected


def obs(t, remaining, offer="offer-a", ref=None):
    return TimerObservation(page="p", snapshot_ref=ref or f"snap-{t}",
                            remaining_seconds=remaining, offer_text_hash=offer,
                            observed_at=float(t))


def presence(*entries):
    return [(float(t), frozenset(hashes)) for t, hashes in entries]


class TestJudge:
    def test_reset_fires_on_increase_with_same_offer(self):
        series = [obs(0, 600), obs(1, 300), obs(2, 600)]
        verdict = judge_countdown(series, presence((0, {"offer-a"}), (1, {"offer-a"}),
                                                   (2, {"offer-a"})), expiry_margin=0.5)
        assert verdict.verdict == Verdict.DECEPTIVE
        assert verdict.rule == Rule.RESET
        assert len(verdict.evidence) >= 2

    def test_increase_with_new_offer_is_not_reset(self):
        series = [obs(0, 600, "offer-a"), obs(1, 300, "offer-a"), obs(2, 600, "offer-b")]
        verdict = judge_countdown(series, presence((0, {"offer-a"}), (1, {"offer-a"}),
                                                   (2, {"offer-b"})), expiry_margin=0.1)
        assert verdict.rule != Rule.RESET

    def test_persist_fires_when_offer_outlives_deadline(self):
        series = [obs(0, 2), obs(1, 1), obs(2, 0)]
        pres = presence((0, {"offer-a"}), (1, {"offer-a"}), (2, {"offer-a"}),
                        (3, {"offer-a"}), (4, {"offer-a"}))
        verdict = judge_countdown(series, pres, expiry_margin=0.5)
        assert verdict.verdict == Verdict.DECEPTIVE
        assert verdict.rule == Rule.PERSIST

    def test_honest_expiry_not_deceptive(self):
        series = [obs(0, 2), obs(1, 1), obs(2, 0)]
        pres = presence((0, {"offer-a"}), (1, {"offer-a"}), (2, {"offer-a"}),
                        (3, set()), (4, set()))
        verdict = judge_countdown(series, pres, expiry_margin=0.5)
        assert verdict.verdict == Verdict.NOT_DECEPTIVE
        assert verdict.rule == Rule.NONE

    def test_display_at_expiry_instant_is_not_persistence(self):
        # the 00:00 frame itself lands within the margin window
        series = [obs(0, 2), obs(2, 0)]
        pres = presence((0, {"offer-a"}), (2, {"offer-a"}), (2.1, set()))
        verdict = judge_countdown(series, pres, expiry_margin=0.5)
        assert verdict.verdict != Verdict.DECEPTIVE

    def test_incomplete_series_is_indeterminate(self):
        series = [obs(0, 10_000), obs(1, 9_999)]
        verdict = judge_countdown(series, presence((0, {"offer-a"}), (1, {"offer-a"})),
                                  expiry_margin=0.5)
        assert verdict.verdict == Verdict.INDETERMINATE

    def test_needs_two_observations(self):
        with pytest.raises(ValueError):
            judge_countdown([obs(0, 10)], presence((0, {"offer-a"})))

    def test_duplicate_timestamps_collapse(self):
        base = [obs(0, 600), obs(1, 300)]
        dup = base + [obs(1, 300, ref="snap-dup")]
        pres = presence((0, {"offer-a"}), (1, {"offer-a"}))
        v1 = judge_countdown(base, pres, expiry_margin=0.5)
        v2 = judge_countdown(dup, pres, expiry_margin=0.5)
        assert (v1.rule, v1.verdict) == (v2.rule, v2.verdict)

    @given(st.permutations(list(range(5))))
    def test_input_order_never_changes_verdict(self, order):
        series = [obs(0, 600), obs(1, 450), obs(2, 300), obs(3, 600), obs(4, 450)]
        shuffled = [series[i] for i in order]
        pres = presence(*[(t, {"offer-a"}) for t in range(5)])
        v1 = judge_countdown(series, pres, expiry_margin=0.5)
        v2 = judge_countdown(shuffled, pres, expiry_margin=0.5)
        assert (v1.rule, v1.verdict) == (v2.rule, v2.verdict)

    def test_monotone_nonrepeating_with_removal_never_deceptive(self):
        # documented property: strictly decreasing timers whose offer leaves
        # at expiry never judge deceptive
        for step in (1, 7, 60):
            series = [obs(i, 300 - step * i) for i in range(4)]
            pres = presence(*[(i, {"offer-a"}) for i in range(4)],
                            (400, set()), (500, set()))
            verdict = judge_countdown(series, pres, expiry_margin=0.5)
            assert verdict.verdict == Verdict.NOT_DECEPTIVE
