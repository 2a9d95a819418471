"""Shared fixtures: bundled campaign loading and a randomized campaign generator."""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone
from importlib import resources
from pathlib import Path

import pytest

from killplane import (
    Campaign,
    CampaignEvent,
    CkcPhase,
    HkcStage,
    PlaneCoordinate,
    TechniqueRef,
    ZERO_CLICK,
    load_campaign,
)

PHASES = list(CkcPhase)
STAGES = list(HkcStage)

EPOCH = datetime(2025, 1, 1, tzinfo=timezone.utc)


def fixture_text(name: str) -> str:
    return (
        resources.files("killplane")
        .joinpath(f"data/fixtures/{name}.json")
        .read_text(encoding="utf-8")
    )


def load_fixture(name: str) -> Campaign:
    return load_campaign(fixture_text(name))


@pytest.fixture
def ransomware() -> Campaign:
    return load_fixture("ransomware")


@pytest.fixture
def romance_scam() -> Campaign:
    return load_fixture("romance_scam")


@pytest.fixture
def bec() -> Campaign:
    return load_fixture("business_email_compromise")


@pytest.fixture
def tech_support() -> Campaign:
    return load_fixture("tech_support")


def random_campaign(rng: random.Random, max_events: int = 50) -> Campaign:
    """A structurally valid campaign: unique ids/seqs, seq-ordered timestamps."""
    n = rng.randint(0, max_events)
    events = []
    seq = 0
    offset = rng.randrange(0, 1 << 20)
    for i in range(n):
        seq += rng.randint(1, 3)
        offset += rng.randint(0, 50_000)
        human = ZERO_CLICK if rng.random() < 0.3 else rng.choice(STAGES)
        technique = None
        if rng.random() < 0.4:
            technique = TechniqueRef(
                base_id=f"{rng.randint(0, 9999):04d}",
                sub_id=f"{rng.randint(0, 999):03d}" if rng.random() < 0.5 else None,
            )
        events.append(
            CampaignEvent(
                id=f"e{i + 1}",
                seq=seq,
                timestamp=(
                    EPOCH + timedelta(seconds=offset) if rng.random() < 0.8 else None
                ),
                coordinate=PlaneCoordinate(rng.choice(PHASES), human),
                description=rng.choice(["", "probe", "lure sent", "call placed"]),
                technique=technique,
                hioa_refs=tuple(f"h{j}" for j in range(rng.randint(0, 2))),
                duration=rng.randint(0, 1_000_000) if rng.random() < 0.7 else None,
            )
        )
    metadata = {"source": rng.choice(["synthetic", "drill"])} if rng.random() < 0.5 else {}
    return Campaign(
        id=f"c{rng.randrange(1_000_000)}",
        name="Randomized campaign",
        events=tuple(events),
        scam_type=rng.choice(
            [None, "Romance scam", "Tech support", "Business email compromise"]
        ),
        metadata=metadata,
    )


def make_event(
    eid: str,
    seq: int,
    phase: CkcPhase = CkcPhase.DELIVERY,
    human=ZERO_CLICK,
    *,
    timestamp: datetime | None = None,
    duration: int | None = None,
    description: str = "",
) -> CampaignEvent:
    return CampaignEvent(
        id=eid,
        seq=seq,
        coordinate=PlaneCoordinate(phase, human),
        timestamp=timestamp,
        duration=duration,
        description=description,
    )


def at(seconds: int) -> datetime:
    return EPOCH + timedelta(seconds=seconds)
