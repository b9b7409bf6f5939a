"""Revisit scheduling for the deception monitor.

The coordinator visits each target once per interval for the configured
duration. Tests compress the interval to fractions of a second; the math is
identical. Failed visits leave gaps in the series rather than aborting.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MonitorSchedule:
    interval: float = 4 * 3600.0  # seconds
    duration: float = 5 * 24 * 3600.0
    targets: tuple[str, ...] = ()

    def __post_init__(self):
        if self.interval <= 0:
            raise ValueError("interval must be positive")
        if self.duration < 2 * self.interval:
            raise ValueError("duration must be at least twice the interval")

    @property
    def visits_per_target(self) -> int:
        return int(self.duration / self.interval)


@dataclass
class MonitorVisit:
    target: str
    index: int
    observed_at: float
    snapshot: object | None  # None marks a gap
    error: str = ""


@dataclass
class MonitorSeries:
    target: str
    visits: list[MonitorVisit] = field(default_factory=list)
    complete: bool = True

    def observations(self) -> list[MonitorVisit]:
        return [v for v in self.visits if v.snapshot is not None]

    def gaps(self) -> list[MonitorVisit]:
        return [v for v in self.visits if v.snapshot is None]


def schedule_revisits(
    schedule: MonitorSchedule,
    fetch: Callable[[str], object],
    sleep: Callable[[float], None] = time.sleep,
    targets: Sequence[str] | None = None,
) -> dict[str, MonitorSeries]:
    """Visit every target once per interval until the duration is spent.

    `fetch(target)` returns a snapshot-like object or raises; failures are
    recorded as gaps and the target is marked incomplete but its partial
    series is kept.
    """
    target_list = list(targets if targets is not None else schedule.targets)
    series = {t: MonitorSeries(target=t) for t in target_list}
    n_visits = schedule.visits_per_target
    for index in range(n_visits):
        for target in target_list:
            observed_at = time.time()
            try:
                snap = fetch(target)
                series[target].visits.append(MonitorVisit(target, index, observed_at, snap))
            except Exception as exc:
                log.warning("monitor visit %d of %s failed: %s", index, target, exc)
                series[target].visits.append(MonitorVisit(target, index, observed_at, None, str(exc)))
                series[target].complete = False
        if index < n_visits - 1:
            sleep(schedule.interval)
    return series
