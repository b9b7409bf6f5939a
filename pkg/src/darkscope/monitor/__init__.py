from darkscope.monitor.countdown import (
    TimerObservation,
    judge_countdown,
    parse_countdown,
)
from darkscope.monitor.stock import StockObservation, judge_lowstock
from darkscope.monitor.activity import extract_activity_pairs
from darkscope.monitor.attribution import (
    ThirdPartyEntity,
    attribute_third_party,
    entity_prevalence,
    load_entity_registry,
)
from darkscope.monitor.schedule import MonitorSchedule, MonitorVisit, schedule_revisits
from darkscope.monitor.verdict import DeceptionVerdict, Rule, Verdict

__all__ = [
    "TimerObservation",
    "judge_countdown",
    "parse_countdown",
    "StockObservation",
    "judge_lowstock",
    "extract_activity_pairs",
    "ThirdPartyEntity",
    "attribute_third_party",
    "entity_prevalence",
    "load_entity_registry",
    "MonitorSchedule",
    "MonitorVisit",
    "schedule_revisits",
    "DeceptionVerdict",
    "Rule",
    "Verdict",
]
