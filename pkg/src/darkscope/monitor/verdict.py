"""Deception verdict record shared by the monitor's judgment rules."""

from __future__ import annotations

from dataclasses import dataclass, field


class Verdict:
    DECEPTIVE = "deceptive"
    NOT_DECEPTIVE = "not_deceptive"
    INDETERMINATE = "indeterminate"


class Rule:
    RESET = "RESET"
    PERSIST = "PERSIST"
    RANDOM = "RANDOM"
    SCHEDULE = "SCHEDULE"
    CONSTANT_UNSPECIFIED = "CONSTANT_UNSPECIFIED"
    NONE = "NONE"


@dataclass
class DeceptionVerdict:
    pattern_kind: str  # countdown | lowstock | activity
    rule: str
    verdict: str
    evidence: list[str] = field(default_factory=list)  # observation / snapshot refs
    detail: str = ""
    informational: bool = False

    def __post_init__(self):
        if self.verdict == Verdict.DECEPTIVE and len(self.evidence) < 2:
            raise ValueError("a deceptive verdict needs at least 2 evidence observations")

    def to_record(self) -> dict:
        return {
            "pattern_kind": self.pattern_kind,
            "rule": self.rule,
            "verdict": self.verdict,
            "evidence": list(self.evidence),
            "detail": self.detail,
            "informational": self.informational,
        }
