"""Synthetic standalone success probabilities for portfolio deals.

Each founder type draws from a scaled Beta distribution on its own bounds
(right-skewed: alpha = 1 keeps mass near the floor), then deals in selected
geographies or high-growth sectors get a one-time +1% nudge, and everything
is capped back to the founder type's upper bound.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .universe import Deal


@dataclass(frozen=True)
class FounderRule:
    """Probability bounds and Beta shape for one founder type."""

    lo: float
    hi: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not (0.0 < self.lo < self.hi < 1.0):
            raise ValidationError(
                f"bounds must satisfy 0 < lo < hi < 1, got ({self.lo}, {self.hi})"
            )
        if self.alpha <= 0.0 or self.beta <= 0.0:
            raise ValidationError("Beta shape parameters must be positive")

    @property
    def mean(self) -> float:
        return self.lo + (self.hi - self.lo) * self.alpha / (self.alpha + self.beta)


@dataclass(frozen=True)
class AssignmentRules:
    """Per-founder-type draws plus geography/sector nudges."""

    founder_rules: dict[str, FounderRule]
    nudge: float = 0.01
    nudge_geographies: frozenset[str] = frozenset()
    nudge_sectors: frozenset[str] = frozenset()
    stack_nudges: bool = False

    def __post_init__(self):
        if self.nudge < 0.0:
            raise ValidationError(f"nudge must be >= 0, got {self.nudge}")
        object.__setattr__(self, "nudge_geographies", frozenset(self.nudge_geographies))
        object.__setattr__(self, "nudge_sectors", frozenset(self.nudge_sectors))


def default_rules() -> AssignmentRules:
    """First-time founders on [0.1%, 12%] targeting a 1.8% mean; repeat
    founders on [1%, 20%] targeting 2.6%; +1% for CA/NY or high-growth
    sectors, capped at the upper bound."""
    return AssignmentRules(
        founder_rules={
            "FirstTime": FounderRule(lo=0.001, hi=0.12, alpha=1.0, beta=6.0),
            "Repeat": FounderRule(lo=0.01, hi=0.20, alpha=1.0, beta=11.0),
        },
        nudge=0.01,
        nudge_geographies=frozenset({"CA", "NY"}),
        nudge_sectors=frozenset({"AI", "FinTech", "SaaS"}),
    )


def healthcare_highgrowth_rules(base: AssignmentRules | None = None) -> AssignmentRules:
    """Variant that treats healthcare as a high-growth (nudged) sector."""
    base = base or default_rules()
    return replace(base, nudge_sectors=base.nudge_sectors | {"Healthcare"})


def assign_probabilities(
    affiliations: Sequence, rules: AssignmentRules, stream: np.random.Generator
) -> list[Deal]:
    """Draw one probability per deal; deterministic given the stream state.

    Qualifying on geography OR sector earns the nudge once (non-stacking by
    default); the cap back to the founder bound means nudged draws near the
    top of the range saturate there.
    """
    deals = []
    for i, member in enumerate(affiliations):
        rule = rules.founder_rules.get(member.founder)
        if rule is None:
            raise ValidationError(
                f"no probability rule for founder type {member.founder!r}"
            )
        x = stream.beta(rule.alpha, rule.beta)
        p = rule.lo + (rule.hi - rule.lo) * x
        nudged_geo = member.geography in rules.nudge_geographies
        nudged_sector = member.sector in rules.nudge_sectors
        if rules.stack_nudges:
            p += rules.nudge * (int(nudged_geo) + int(nudged_sector))
        elif nudged_geo or nudged_sector:
            p += rules.nudge
        p = min(max(p, rule.lo), rule.hi)
        deals.append(
            Deal(
                id=getattr(member, "id", f"deal-{i:03d}"),
                p=p,
                sector=member.sector,
                geography=member.geography,
                founder=member.founder,
            )
        )
    return deals


# ---------------------------------------------------------------------------
# JSON (de)serialization; the shipped default config mirrors these rules
# ---------------------------------------------------------------------------

def rules_to_dict(rules: AssignmentRules) -> dict:
    return {
        "founder_rules": {
            name: {"lo": r.lo, "hi": r.hi, "alpha": r.alpha, "beta": r.beta}
            for name, r in sorted(rules.founder_rules.items())
        },
        "nudge": rules.nudge,
        "nudge_geographies": sorted(rules.nudge_geographies),
        "nudge_sectors": sorted(rules.nudge_sectors),
        "stack_nudges": rules.stack_nudges,
    }


def rules_from_dict(doc: dict) -> AssignmentRules:
    try:
        founder_rules = {
            name: FounderRule(
                lo=entry["lo"], hi=entry["hi"], alpha=entry["alpha"], beta=entry["beta"]
            )
            for name, entry in doc["founder_rules"].items()
        }
        return AssignmentRules(
            founder_rules=founder_rules,
            nudge=doc.get("nudge", 0.01),
            nudge_geographies=frozenset(doc.get("nudge_geographies", ())),
            nudge_sectors=frozenset(doc.get("nudge_sectors", ())),
            stack_nudges=doc.get("stack_nudges", False),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad assignment rules document: {exc}")


def load_rules(path) -> AssignmentRules:
    return rules_from_dict(json.loads(Path(path).read_text()))
