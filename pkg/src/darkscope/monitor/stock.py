"""Low-stock message deception judgment.

RANDOM: two loads of the same page less than a minute apart (no purchase can
explain it) report different quantities. SCHEDULE: the quantity sequence
repeats an exact period-p pattern (p >= 2) for at least two full periods;
the repeating window must contain at least two distinct values so genuinely
constant stock never fires. CONSTANT_UNSPECIFIED is informational only: the
message is always present but never shows a quantity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from darkscope.monitor.verdict import DeceptionVerdict, Rule, Verdict

RELOAD_WINDOW_SECONDS = 60.0

_STOCK_RE = re.compile(
    r"(?:only\s+)?(\d+)\s+(?:left|remaining|in stock|available)", re.IGNORECASE
)


def parse_stock_quantity(text: str) -> int | None:
    m = _STOCK_RE.search(text)
    return int(m.group(1)) if m else None


@dataclass(frozen=True)
class StockObservation:
    page: str
    product: str
    quantity: int | None  # None = message present but quantity unspecified
    observed_at: float
    snapshot_ref: str = ""

    def __post_init__(self):
        if self.quantity is not None and self.quantity < 0:
            raise ValueError("quantity must be non-negative")


def _repeating_period(values: list[int]) -> int | None:
    n = len(values)
    for p in range(2, n // 2 + 1):
        if n < 2 * p:
            break
        if len(set(values[:p])) < 2:
            continue
        if all(values[i] == values[i + p] for i in range(n - p)):
            return p
    return None


def judge_lowstock(
    series: Sequence[StockObservation],
    reload_pair: tuple[StockObservation, StockObservation] | None = None,
) -> DeceptionVerdict:
    if len(series) < 4 and reload_pair is None:
        raise ValueError("need at least 4 observations or one reload pair")

    if reload_pair is not None:
        a, b = sorted(reload_pair, key=lambda o: o.observed_at)
        close = (b.observed_at - a.observed_at) < RELOAD_WINDOW_SECONDS
        if (
            close
            and a.page == b.page
            and a.quantity is not None
            and b.quantity is not None
            and a.quantity != b.quantity
        ):
            return DeceptionVerdict(
                pattern_kind="lowstock",
                rule=Rule.RANDOM,
                verdict=Verdict.DECEPTIVE,
                evidence=[a.snapshot_ref or f"t={a.observed_at}", b.snapshot_ref or f"t={b.observed_at}"],
                detail=f"quantity {a.quantity} -> {b.quantity} within {b.observed_at - a.observed_at:.0f}s",
            )

    ordered = sorted(series, key=lambda o: o.observed_at)
    quantities = [o.quantity for o in ordered]

    if quantities and all(q is None for q in quantities):
        return DeceptionVerdict(
            pattern_kind="lowstock",
            rule=Rule.CONSTANT_UNSPECIFIED,
            verdict=Verdict.NOT_DECEPTIVE,
            evidence=[ordered[0].snapshot_ref or f"t={ordered[0].observed_at}"],
            detail="message always present, quantity never shown",
            informational=True,
        )

    known = [(o, q) for o, q in zip(ordered, quantities) if q is not None]
    values = [q for _, q in known]
    period = _repeating_period(values)
    if period is not None:
        evidence = [o.snapshot_ref or f"t={o.observed_at}" for o, _ in known[: 2 * period]]
        return DeceptionVerdict(
            pattern_kind="lowstock",
            rule=Rule.SCHEDULE,
            verdict=Verdict.DECEPTIVE,
            evidence=evidence,
            detail=f"quantities repeat with period {period}: {values}",
        )

    if known:
        ref = known[0][0]
    elif ordered:
        ref = ordered[0]
    else:
        ref = reload_pair[0]  # empty series implies the pair satisfied the precondition
    return DeceptionVerdict(
        pattern_kind="lowstock",
        rule=Rule.NONE,
        verdict=Verdict.NOT_DECEPTIVE,
        evidence=[ref.snapshot_ref or f"t={ref.observed_at}"],
    )
