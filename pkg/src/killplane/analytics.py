"""Lifecycle, critical-stage, disruption, and response-window analytics.

Dwell is the only temporal quantity the campaign model carries, so the
critical human-layer stage is operationalized as maximum human-layer dwell.
Events without a duration count one second toward dwell so that
count-only campaigns still produce answers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .campaign import (
    Campaign,
    DAY,
    HOUR,
    MONTH,
    format_duration,
    interaction_ratio,
    plane_occupancy,
    require_valid,
)
from .chains import (
    HkcStage,
    PlaneCoordinate,
    STAGE_DESCRIPTORS,
    human_axis_label,
    human_axis_ordinal,
    human_axis_token,
)
from .errors import (
    EmptyCampaignError,
    InsufficientVocabularyError,
    NoHumanLayerError,
    UndatedCampaignError,
)

# Dwell credited to an event that has no recorded duration.
DEFAULT_EVENT_DWELL = 1

# Score weight applied to zero-click cells in disruption ranking.
DEFAULT_ZERO_CLICK_WEIGHT = 0.25

PHINGO_CARD_SIDE = 5
PHINGO_CARD_SIZE = PHINGO_CARD_SIDE * PHINGO_CARD_SIDE


@dataclass(frozen=True)
class LifecycleProfile:
    """Duration bounds and the pivotal human-layer stage for one scam type."""

    scam_type: str
    min_duration: int  # seconds
    max_duration: int  # seconds
    critical_stage: HkcStage

    def __post_init__(self):
        if self.min_duration > self.max_duration:
            raise ValueError("min_duration must not exceed max_duration")


_BUILTIN_PROFILES = (
    LifecycleProfile("Tech support", 0, 48 * HOUR, HkcStage.EMOTIONAL_TRIGGERING),
    LifecycleProfile(
        "Business email compromise", 2 * DAY, 14 * DAY, HkcStage.TRUST_ESTABLISHMENT
    ),
    LifecycleProfile("Romance scam", 3 * MONTH, 18 * MONTH, HkcStage.SUSTAINED_ENGAGEMENT),
)


def builtin_profiles() -> list[LifecycleProfile]:
    """The three catalogued scam lifecycles."""
    return list(_BUILTIN_PROFILES)


def profile_by_label(label: str) -> Optional[LifecycleProfile]:
    for profile in _BUILTIN_PROFILES:
        if profile.scam_type == label:
            return profile
    return None


def _effective_dwell(duration: Optional[int]) -> int:
    return duration if duration is not None else DEFAULT_EVENT_DWELL


def critical_stage(campaign: Campaign) -> HkcStage:
    """Human-layer stage with the largest total dwell; ties go to the lower ordinal."""
    require_valid(campaign)
    dwell: dict[HkcStage, int] = {}
    for event in campaign.events:
        if event.is_zero_click:
            continue
        stage = event.coordinate.human
        dwell[stage] = dwell.get(stage, 0) + _effective_dwell(event.duration)
    if not dwell:
        raise NoHumanLayerError("campaign has no events on a human-layer stage")
    return max(dwell, key=lambda s: (dwell[s], -s.ordinal))


def campaign_duration(campaign: Campaign) -> int:
    """Span in seconds from the first timestamp to the last timestamp plus its duration."""
    require_valid(campaign)
    dated = [e for e in campaign.events if e.timestamp is not None]
    if not dated:
        raise UndatedCampaignError("campaign has no timestamped events")
    first = dated[0]
    last = max(dated, key=lambda e: (e.timestamp, e.seq))
    span = int((last.timestamp - first.timestamp).total_seconds())
    return span + (last.duration or 0)


@dataclass(frozen=True)
class ConformanceReport:
    """Measured duration and critical stage checked against a lifecycle profile."""

    profile: LifecycleProfile
    measured_duration: int
    measured_critical_stage: Optional[HkcStage]
    duration_in_bounds: bool
    critical_stage_matches: bool

    @property
    def conforms(self) -> bool:
        return self.duration_in_bounds and self.critical_stage_matches


def check_profile(campaign: Campaign, profile: LifecycleProfile) -> ConformanceReport:
    """Compare a campaign's measured lifecycle against a catalogue profile."""
    duration = campaign_duration(campaign)
    try:
        stage = critical_stage(campaign)
    except NoHumanLayerError:
        stage = None
    return ConformanceReport(
        profile=profile,
        measured_duration=duration,
        measured_critical_stage=stage,
        duration_in_bounds=profile.min_duration <= duration <= profile.max_duration,
        critical_stage_matches=stage == profile.critical_stage,
    )


@dataclass(frozen=True)
class DisruptionCandidate:
    """A plane cell where defensive action would hurt the attacker most."""

    coordinate: PlaneCoordinate
    score: float
    rationale: str


def disruption_candidates(
    campaign: Campaign,
    k: int,
    zero_click_weight: float = DEFAULT_ZERO_CLICK_WEIGHT,
) -> list[DisruptionCandidate]:
    """Rank occupied cells by dwell share, discounting zero-click cells.

    score(cell) = dwell_fraction(cell) * weight, where weight is 1 for staged
    cells and ``zero_click_weight`` for zero-click cells. Ordering is
    deterministic: score descending, then technical ordinal, then human
    ordinal with zero-click last.
    """
    require_valid(campaign)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 0.0 <= zero_click_weight <= 1.0:
        raise ValueError(f"zero-click weight must be in [0, 1], got {zero_click_weight}")
    if not campaign.events:
        raise EmptyCampaignError("disruption ranking is undefined for an empty campaign")

    dwell: dict[PlaneCoordinate, int] = {}
    for event in campaign.events:
        dwell[event.coordinate] = dwell.get(event.coordinate, 0) + _effective_dwell(
            event.duration
        )
    total = sum(dwell.values())

    candidates = []
    for coord, cell_dwell in dwell.items():
        fraction = cell_dwell / total
        weight = zero_click_weight if coord.is_zero_click else 1.0
        note = " (zero-click, discounted)" if coord.is_zero_click else ""
        rationale = (
            f"{fraction * 100:.1f}% of campaign dwell at "
            f"({coord.ckc.label}, {human_axis_label(coord.human)}){note}"
        )
        candidates.append(DisruptionCandidate(coord, fraction * weight, rationale))

    candidates.sort(
        key=lambda c: (
            -c.score,
            c.coordinate.ckc.ordinal,
            human_axis_ordinal(c.coordinate.human),
        )
    )
    return candidates[:k]


@dataclass(frozen=True)
class ResponseWindow:
    """Whether a response completes before the fastest plausible attack does."""

    ok: bool
    margin: int  # seconds past the deadline; 0 when ok
    deadline: int  # effective deadline in seconds


def response_window_check(
    campaign: Campaign,
    profile: LifecycleProfile,
    response_time: int,
    policy_multiplier: float = 1.0,
) -> ResponseWindow:
    """Check a response time against the profile's minimum lifecycle duration.

    The conservative deadline is min_duration scaled by the policy
    multiplier. The campaign argument is part of the reporting contract;
    the rule itself depends only on the profile.
    """
    if response_time < 0:
        raise ValueError(f"response_time must be >= 0, got {response_time}")
    deadline = int(profile.min_duration * policy_multiplier)
    if response_time <= deadline:
        return ResponseWindow(ok=True, margin=0, deadline=deadline)
    return ResponseWindow(ok=False, margin=response_time - deadline, deadline=deadline)


def analysis_report(
    campaign: Campaign,
    profile_label: Optional[str] = None,
    zero_click_weight: float = DEFAULT_ZERO_CLICK_WEIGHT,
    disruption_k: int = 3,
) -> dict:
    """Aggregate the analytics suite into one JSON-ready report.

    Raises the underlying domain errors (empty, undated, no human layer)
    rather than papering over them; callers map those to exit codes or
    HTTP statuses.
    """
    occupancy = plane_occupancy(campaign)
    ratio = interaction_ratio(campaign)
    duration = campaign_duration(campaign)
    stage = critical_stage(campaign)

    conformance = None
    if profile_label is not None:
        profile = profile_by_label(profile_label)
        if profile is None:
            raise ValueError(f"unknown lifecycle profile {profile_label!r}")
        report = check_profile(campaign, profile)
        conformance = {
            "duration_in_bounds": report.duration_in_bounds,
            "critical_stage_matches": report.critical_stage_matches,
            "profile_min_seconds": profile.min_duration,
            "profile_max_seconds": profile.max_duration,
            "profile_critical_stage": profile.critical_stage.token,
        }

    candidates = disruption_candidates(campaign, disruption_k, zero_click_weight)
    return {
        "campaign_id": campaign.id,
        "name": campaign.name,
        "event_count": occupancy.total_count,
        "zero_click_events": occupancy.zero_click_count(),
        "occupied_cells": len(occupancy.occupied()),
        "interaction_ratio": ratio,
        "duration_seconds": duration,
        "duration_display": format_duration(duration),
        "critical_stage": stage.token,
        "profile": profile_label,
        "conformance": conformance,
        "disruption": [
            {
                "ckc": c.coordinate.ckc.token,
                "human": human_axis_token(c.coordinate.human),
                "score": c.score,
                "rationale": c.rationale,
            }
            for c in candidates
        ],
    }


# Canonical psychological tactic labels, combined with the per-stage attacker
# goals to seed training-card vocabularies.
PSYCH_TACTICS: tuple[str, ...] = (
    "urgency",
    "fear",
    "curiosity",
    "compassion",
    "greed",
    "authority pressure",
    "scarcity",
    "reciprocity",
    "flattery",
    "intimidation",
)


def default_phingo_vocabulary() -> list[str]:
    """Tactic vocabulary built from stage goals plus canonical tactic labels."""
    seen: dict[str, None] = {}
    for descriptor in STAGE_DESCRIPTORS.values():
        for goal in descriptor.attacker_goals:
            seen.setdefault(goal)
    for tactic in PSYCH_TACTICS:
        seen.setdefault(tactic)
    return list(seen)


@dataclass(frozen=True)
class PhingoCard:
    """A 5x5 card of distinct tactic labels, row-major."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) != PHINGO_CARD_SIZE:
            raise ValueError(f"a card needs exactly {PHINGO_CARD_SIZE} labels")
        if len(set(self.labels)) != PHINGO_CARD_SIZE:
            raise ValueError("card labels must be distinct")

    def rows(self) -> list[tuple[str, ...]]:
        side = PHINGO_CARD_SIDE
        return [self.labels[i * side : (i + 1) * side] for i in range(side)]


def generate_phingo_cards(
    vocabulary: Sequence[str], n_cards: int, seed: int
) -> list[PhingoCard]:
    """Deal ``n_cards`` cards of 25 distinct labels, deterministically from the seed."""
    if n_cards < 1:
        raise ValueError(f"n_cards must be >= 1, got {n_cards}")
    distinct = list(dict.fromkeys(vocabulary))
    if len(distinct) < PHINGO_CARD_SIZE:
        raise InsufficientVocabularyError(
            f"need at least {PHINGO_CARD_SIZE} distinct labels, got {len(distinct)}"
        )
    rng = random.Random(seed)
    return [
        PhingoCard(tuple(rng.sample(distinct, PHINGO_CARD_SIZE))) for _ in range(n_cards)
    ]
