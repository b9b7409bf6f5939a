"""Countdown-timer parsing and deception judgment.

A timer is deceptive when it RESETs (remaining time increases between
consecutive visits while the same offer stays up) or PERSISTs (the offer is
still present in a snapshot taken after the deadline the timer promised).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from darkscope.monitor.verdict import DeceptionVerdict, Rule, Verdict

# `N days HH:MM:SS`, `HH:MM:SS`, or `MM:SS` embedded anywhere in the text.
_TIMER_RE = re.compile(
    r"(?:(\d+)\s*days?[,\s]+)?(\d{1,3}):(\d{2})(?::(\d{2}))?",
)


def parse_countdown(text: str) -> int | None:
    """Total remaining seconds, or None when no timer form is present."""
    m = _TIMER_RE.search(text)
    if not m:
        return None
    days, first, second, third = m.groups()
    total = int(days) * 86400 if days else 0
    if third is not None:
        total += int(first) * 3600 + int(second) * 60 + int(third)
    elif days:
        total += int(first) * 3600 + int(second) * 60
    else:
        total += int(first) * 60 + int(second)
    return total


@dataclass(frozen=True)
class TimerObservation:
    page: str
    snapshot_ref: str
    remaining_seconds: int
    offer_text_hash: str
    observed_at: float

    def __post_init__(self):
        if self.remaining_seconds < 0:
            raise ValueError("remaining_seconds must be >= 0")


DEFAULT_EXPIRY_MARGIN = 60.0


def judge_countdown(
    series: Sequence[TimerObservation],
    offer_presence: Sequence[tuple[float, frozenset[str] | set[str]]],
    expiry_margin: float = DEFAULT_EXPIRY_MARGIN,
) -> DeceptionVerdict:
    """Judge one page's timer series.

    `offer_presence` lists (observed_at, offer hashes present) for every
    snapshot of the page, including ones without a readable timer. Duplicate
    observations (same timestamp) are collapsed, so input order never
    changes the verdict.

    PERSIST only counts snapshots at least `expiry_margin` seconds past the
    promised deadline: a page caught displaying 00:00 at the expiry instant
    is not yet evidence that the offer outlived its own timer.
    """
    if len(series) < 2:
        raise ValueError("need at least 2 timer observations")

    by_time: dict[float, TimerObservation] = {}
    for obs in sorted(series, key=lambda o: (o.observed_at, o.snapshot_ref)):
        by_time.setdefault(obs.observed_at, obs)
    ordered = [by_time[t] for t in sorted(by_time)]
    presence = sorted((float(t), frozenset(h)) for t, h in offer_presence)

    # RESET: remaining time went up while the offer stayed the same.
    for prev, cur in zip(ordered, ordered[1:]):
        if cur.remaining_seconds > prev.remaining_seconds and cur.offer_text_hash == prev.offer_text_hash:
            return DeceptionVerdict(
                pattern_kind="countdown",
                rule=Rule.RESET,
                verdict=Verdict.DECEPTIVE,
                evidence=[prev.snapshot_ref, cur.snapshot_ref],
                detail=f"remaining went {prev.remaining_seconds}s -> {cur.remaining_seconds}s",
            )

    # PERSIST: offer still present after its own promised deadline.
    any_deadline_observable = False
    for obs in ordered:
        deadline = obs.observed_at + obs.remaining_seconds
        later = [(t, hashes) for t, hashes in presence if t > deadline + expiry_margin]
        if later:
            any_deadline_observable = True
        for t, hashes in later:
            if obs.offer_text_hash in hashes:
                return DeceptionVerdict(
                    pattern_kind="countdown",
                    rule=Rule.PERSIST,
                    verdict=Verdict.DECEPTIVE,
                    evidence=[obs.snapshot_ref, f"t={t}"],
                    detail="offer present after its deadline",
                )

    if not any_deadline_observable:
        return DeceptionVerdict(
            pattern_kind="countdown",
            rule=Rule.NONE,
            verdict=Verdict.INDETERMINATE,
            evidence=[ordered[-1].snapshot_ref],
            detail="series ended before any promised deadline",
        )
    return DeceptionVerdict(
        pattern_kind="countdown",
        rule=Rule.NONE,
        verdict=Verdict.NOT_DECEPTIVE,
        evidence=[ordered[0].snapshot_ref],
    )
