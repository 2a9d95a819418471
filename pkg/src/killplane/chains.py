"""Canonical kill-chain enumerations and the two-axis plane coordinate system.

The technical axis is the classic seven-phase kill chain; the human axis is
the eight-stage psychological attack lifecycle plus a distinguished
zero-click band for attack steps that need no user interaction. Together
they address a 7x9 grid of 63 cells.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, unique
from typing import Union


@unique
class CkcPhase(Enum):
    """Technical kill-chain phases, in canonical order (ordinals 1..7)."""

    RECONNAISSANCE = "Reconnaissance"
    WEAPONIZATION = "Weaponization"
    DELIVERY = "Delivery"
    EXPLOITATION = "Exploitation"
    INSTALLATION = "Installation"
    COMMAND_AND_CONTROL = "CommandAndControl"
    ACTIONS_ON_OBJECTIVES = "ActionsOnObjectives"

    @property
    def token(self) -> str:
        """Serialized name, e.g. ``CommandAndControl``."""
        return self.value

    @property
    def ordinal(self) -> int:
        return _CKC_ORDINALS[self]

    @property
    def label(self) -> str:
        """Human-readable name, e.g. ``Command and Control``."""
        return _CKC_LABELS[self]

    @classmethod
    def from_token(cls, token: str) -> "CkcPhase":
        try:
            return cls(token)
        except ValueError:
            raise ValueError(f"unknown technical phase name: {token!r}") from None


_CKC_ORDINALS = {phase: i + 1 for i, phase in enumerate(CkcPhase)}

_CKC_LABELS = {
    CkcPhase.RECONNAISSANCE: "Reconnaissance",
    CkcPhase.WEAPONIZATION: "Weaponization",
    CkcPhase.DELIVERY: "Delivery",
    CkcPhase.EXPLOITATION: "Exploitation",
    CkcPhase.INSTALLATION: "Installation",
    CkcPhase.COMMAND_AND_CONTROL: "Command and Control",
    CkcPhase.ACTIONS_ON_OBJECTIVES: "Actions on Objectives",
}


@unique
class HkcStage(Enum):
    """Human-layer attack stages, in canonical order (ordinals 1..8)."""

    TARGET_PROFILING = "TargetProfiling"
    HUMAN_VULNERABILITY_ASSESSMENT = "HumanVulnerabilityAssessment"
    PERSONALIZED_ATTACK_DESIGN = "PersonalizedAttackDesign"
    TRUST_ESTABLISHMENT = "TrustEstablishment"
    EMOTIONAL_TRIGGERING = "EmotionalTriggering"
    SUSTAINED_ENGAGEMENT = "SustainedEngagement"
    ACTION_MANIPULATION = "ActionManipulation"
    OPERATIONAL_CLEANUP = "OperationalCleanup"

    @property
    def token(self) -> str:
        return self.value

    @property
    def ordinal(self) -> int:
        return _HKC_ORDINALS[self]

    @property
    def label(self) -> str:
        return _HKC_LABELS[self]

    @classmethod
    def from_token(cls, token: str) -> "HkcStage":
        try:
            return cls(token)
        except ValueError:
            raise ValueError(f"unknown human-layer stage name: {token!r}") from None


_HKC_ORDINALS = {stage: i + 1 for i, stage in enumerate(HkcStage)}

_HKC_LABELS = {
    HkcStage.TARGET_PROFILING: "Target Profiling",
    HkcStage.HUMAN_VULNERABILITY_ASSESSMENT: "Human Vulnerability Assessment",
    HkcStage.PERSONALIZED_ATTACK_DESIGN: "Personalized Attack Design",
    HkcStage.TRUST_ESTABLISHMENT: "Trust Establishment",
    HkcStage.EMOTIONAL_TRIGGERING: "Emotional Triggering",
    HkcStage.SUSTAINED_ENGAGEMENT: "Sustained Engagement",
    HkcStage.ACTION_MANIPULATION: "Action Manipulation",
    HkcStage.OPERATIONAL_CLEANUP: "Operational Cleanup",
}


@dataclass(frozen=True)
class ZeroClick:
    """Marker for the zero-click band of the human axis.

    A real value, never an absent field: zero-click cells are addressable
    grid positions, distinct from every human-layer stage.
    """

    def __repr__(self) -> str:
        return "ZeroClick"


ZERO_CLICK = ZeroClick()

ZERO_CLICK_TOKEN = "ZeroClick"

# Row index used for zero-click on the human axis; drawn beneath the 8 stages.
ZERO_CLICK_ORDINAL = 9

HumanAxisPosition = Union[HkcStage, ZeroClick]


def is_zero_click(position: HumanAxisPosition) -> bool:
    return isinstance(position, ZeroClick)


def human_axis_token(position: HumanAxisPosition) -> str:
    return ZERO_CLICK_TOKEN if is_zero_click(position) else position.token


def human_axis_label(position: HumanAxisPosition) -> str:
    return "Zero Click" if is_zero_click(position) else position.label


def human_axis_ordinal(position: HumanAxisPosition) -> int:
    """Row index 1..9; the zero-click band sorts after every stage."""
    return ZERO_CLICK_ORDINAL if is_zero_click(position) else position.ordinal


def human_axis_from_token(token: str) -> HumanAxisPosition:
    if token == ZERO_CLICK_TOKEN:
        return ZERO_CLICK
    return HkcStage.from_token(token)


@dataclass(frozen=True)
class PlaneCoordinate:
    """One of the 63 grid cells: a technical phase paired with a human-axis position."""

    ckc: CkcPhase
    human: HumanAxisPosition

    @property
    def is_zero_click(self) -> bool:
        return is_zero_click(self.human)

    def sort_key(self) -> tuple[int, int]:
        return (self.ckc.ordinal, human_axis_ordinal(self.human))

    def __str__(self) -> str:
        return f"({self.ckc.token}, {human_axis_token(self.human)})"


def all_coordinates() -> list[PlaneCoordinate]:
    """Every grid cell, ordered by (technical ordinal, human ordinal)."""
    cells = []
    for phase in CkcPhase:
        for stage in HkcStage:
            cells.append(PlaneCoordinate(phase, stage))
        cells.append(PlaneCoordinate(phase, ZERO_CLICK))
    return sorted(cells, key=PlaneCoordinate.sort_key)


GRID_COLUMNS = len(CkcPhase)
GRID_ROWS = len(HkcStage) + 1
GRID_CELLS = GRID_COLUMNS * GRID_ROWS


@dataclass(frozen=True)
class AxisContrast:
    """A single contrast between the technical and human axes."""

    aspect: str
    technical: str
    human: str


# Contrasts between the two axes, shared by every stage descriptor.
AXIS_CONTRASTS: tuple[AxisContrast, ...] = (
    AxisContrast("Primary target", "Technical systems", "Human psychology"),
    AxisContrast("Attack vector", "Software vulnerabilities", "Emotional vulnerabilities"),
    AxisContrast("Success factors", "Technical expertise", "Social engineering skills"),
    AxisContrast(
        "AI enhancements",
        "Automated technical attacks",
        "Personalised psychological manipulation",
    ),
    AxisContrast(
        "Defence strategy",
        "Technical controls, policies, processes and awareness",
        "Psychological resilience (mental health focus)",
    ),
)


@dataclass(frozen=True)
class StageDescriptor:
    """Reference metadata for one human-layer stage."""

    stage: HkcStage
    summary: str
    attacker_goals: tuple[str, ...]
    ai_capabilities: tuple[str, ...]
    axis_profile: tuple[AxisContrast, ...] = field(default=AXIS_CONTRASTS)


STAGE_DESCRIPTORS: dict[HkcStage, StageDescriptor] = {
    HkcStage.TARGET_PROFILING: StageDescriptor(
        stage=HkcStage.TARGET_PROFILING,
        summary=(
            "Builds a psychological dossier on the victim from open sources: "
            "who they are, who they trust, and what is going on in their life."
        ),
        attacker_goals=(
            "background research",
            "social graph mapping",
            "stressor discovery",
            "communication style capture",
        ),
        ai_capabilities=("bulk open-source mining", "automated dossier synthesis"),
    ),
    HkcStage.HUMAN_VULNERABILITY_ASSESSMENT: StageDescriptor(
        stage=HkcStage.HUMAN_VULNERABILITY_ASSESSMENT,
        summary=(
            "Turns the dossier into an exploit plan: which emotions, biases, "
            "and blind spots give the attacker the best odds."
        ),
        attacker_goals=(
            "emotional trigger shortlisting",
            "cognitive bias spotting",
            "awareness gap probing",
            "susceptibility scoring",
        ),
        ai_capabilities=("rapid vector ranking over collected intel",),
    ),
    HkcStage.PERSONALIZED_ATTACK_DESIGN: StageDescriptor(
        stage=HkcStage.PERSONALIZED_ATTACK_DESIGN,
        summary=(
            "Crafts the lure around the chosen weaknesses: bespoke narratives, "
            "spoofed trusted parties, and fallback paths if the first hook misses."
        ),
        attacker_goals=(
            "tailored pretext writing",
            "trusted contact mimicry",
            "deepfake production",
            "contingency scripting",
        ),
        ai_capabilities=("generated lure content", "voice cloning", "synthetic video"),
    ),
    HkcStage.TRUST_ESTABLISHMENT: StageDescriptor(
        stage=HkcStage.TRUST_ESTABLISHMENT,
        summary=(
            "Delivers the approach through channels the victim already trusts, "
            "borrowing credibility until the attacker feels familiar."
        ),
        attacker_goals=(
            "credibility borrowing",
            "familiar channel use",
            "social proof staging",
            "rapport building",
        ),
        ai_capabilities=("writing style replication", "relationship pattern mimicry"),
    ),
    HkcStage.EMOTIONAL_TRIGGERING: StageDescriptor(
        stage=HkcStage.EMOTIONAL_TRIGGERING,
        summary=(
            "Fires a calibrated emotional response so the victim acts before "
            "thinking: urgency, fear, curiosity, compassion, greed, or authority."
        ),
        attacker_goals=(
            "urgency pressure",
            "fear induction",
            "curiosity baiting",
            "compassion exploitation",
            "authority pressure",
            "greed appeal",
        ),
        ai_capabilities=("trigger content calibrated to the profile",),
    ),
    HkcStage.SUSTAINED_ENGAGEMENT: StageDescriptor(
        stage=HkcStage.SUSTAINED_ENGAGEMENT,
        summary=(
            "Keeps the manipulation alive across many interactions, adapting "
            "the story to the victim's reactions and deepening commitment."
        ),
        attacker_goals=(
            "narrative upkeep",
            "response adaptation",
            "progressive commitment",
            "cross-channel consistency",
        ),
        ai_capabilities=("automated contextual replies", "dynamic story adjustment"),
    ),
    HkcStage.ACTION_MANIPULATION: StageDescriptor(
        stage=HkcStage.ACTION_MANIPULATION,
        summary=(
            "Steers the victim into the concrete act the attacker needs: "
            "revealing secrets, moving money, or opening access."
        ),
        attacker_goals=(
            "credential harvesting push",
            "payment redirection",
            "access request",
            "insider influence",
        ),
        ai_capabilities=("behavioural outcome prediction",),
    ),
    HkcStage.OPERATIONAL_CLEANUP: StageDescriptor(
        stage=HkcStage.OPERATIONAL_CLEANUP,
        summary=(
            "Buries the manipulation afterwards: cover stories, doubt-seeding, "
            "and deleted traces so the victim never realises what happened."
        ),
        attacker_goals=(
            "cover story planting",
            "gaslighting",
            "evidence removal",
            "deniability construction",
        ),
        ai_capabilities=("synthetic cover narratives", "trace scrubbing automation"),
    ),
}


def stage_descriptor(stage: HkcStage) -> StageDescriptor:
    return STAGE_DESCRIPTORS[stage]
