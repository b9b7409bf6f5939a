from darkscope.checkout.capture import Snapshot, capture_snapshot
from darkscope.checkout.flow import (
    CrawlSession,
    InteractionStep,
    Outcome,
    classify_outcome,
    run_checkout_flow,
)

__all__ = [
    "Snapshot",
    "capture_snapshot",
    "CrawlSession",
    "InteractionStep",
    "Outcome",
    "classify_outcome",
    "run_checkout_flow",
]
