"""Campaign data model, validation, projections, and plane occupancy.

Campaigns are immutable, ordered by an explicit sequence number; timestamps
are optional corroboration because incident evidence frequently lacks clock
data. Durations are integer seconds internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, TYPE_CHECKING

from .chains import CkcPhase, HkcStage, PlaneCoordinate, all_coordinates
from .errors import CampaignValidationError, EmptyCampaignError

if TYPE_CHECKING:
    from .interop import TechniqueRef

HOUR = 3600
DAY = 86400
# Display/bound convention for the lifecycle catalogue; calendar months vary.
MONTH = 30 * DAY


def format_duration(seconds: int) -> str:
    """Render a span in the largest round unit among months, days, hours, seconds."""
    if seconds < 0:
        raise ValueError("duration must be non-negative")
    if seconds >= MONTH and seconds % MONTH == 0:
        n = seconds // MONTH
        return f"{n} month" + ("s" if n != 1 else "")
    if seconds >= DAY and seconds % DAY == 0:
        n = seconds // DAY
        return f"{n} day" + ("s" if n != 1 else "")
    if seconds >= HOUR and seconds % HOUR == 0:
        n = seconds // HOUR
        return f"{n} hour" + ("s" if n != 1 else "")
    if seconds >= HOUR:
        return f"{seconds / HOUR:.1f} hours"
    return f"{seconds} s"


def utc_second(dt: datetime) -> datetime:
    """Normalize to UTC at second resolution; naive datetimes are taken as UTC."""
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).replace(microsecond=0)


@dataclass(frozen=True)
class CampaignEvent:
    """One plane-positioned step of a campaign.

    ``seq`` is the primary order key; ``timestamp`` (UTC, second resolution)
    and ``duration`` (seconds the event spans) are optional evidence.
    """

    id: str
    seq: int
    coordinate: PlaneCoordinate
    description: str = ""
    timestamp: Optional[datetime] = None
    technique: Optional["TechniqueRef"] = None
    hioa_refs: tuple[str, ...] = ()
    duration: Optional[int] = None

    def __post_init__(self):
        if self.timestamp is not None:
            object.__setattr__(self, "timestamp", utc_second(self.timestamp))
        object.__setattr__(self, "hioa_refs", tuple(self.hioa_refs))

    @property
    def is_zero_click(self) -> bool:
        return self.coordinate.is_zero_click


@dataclass(frozen=True)
class Campaign:
    """A named, ordered sequence of plane-positioned events."""

    id: str
    name: str
    events: tuple[CampaignEvent, ...] = ()
    scam_type: Optional[str] = None
    metadata: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        ordered = tuple(sorted(self.events, key=lambda e: e.seq))
        object.__setattr__(self, "events", ordered)
        object.__setattr__(self, "metadata", MappingProxyType(dict(self.metadata)))

    def with_events(self, events: Iterable[CampaignEvent]) -> "Campaign":
        return replace(self, events=tuple(events))


@dataclass(frozen=True)
class Violation:
    """A single campaign invariant violation."""

    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_campaign(
    campaign: Campaign, known_scam_types: Optional[Iterable[str]] = None
) -> ValidationReport:
    """Enumerate every invariant violation; an empty report means valid.

    Malformed campaigns produce violations, never exceptions. When
    ``known_scam_types`` is omitted the builtin lifecycle catalogue is used.
    """
    violations: list[Violation] = []

    seen_ids: set[str] = set()
    seen_seq: set[int] = set()
    for event in campaign.events:
        if event.id in seen_ids:
            violations.append(
                Violation("duplicate-event-id", f"duplicate event id {event.id!r}")
            )
        seen_ids.add(event.id)
        if event.seq in seen_seq:
            violations.append(
                Violation("duplicate-seq", f"duplicate sequence number {event.seq}")
            )
        seen_seq.add(event.seq)
        if event.duration is not None and event.duration < 0:
            violations.append(
                Violation(
                    "negative-duration",
                    f"event {event.id!r} has negative duration {event.duration}",
                )
            )

    dated = [e for e in campaign.events if e.timestamp is not None]
    for earlier, later in zip(dated, dated[1:]):
        if earlier.timestamp > later.timestamp:
            violations.append(
                Violation(
                    "order-disagreement",
                    f"events {earlier.id!r} and {later.id!r} disagree: "
                    "sequence order contradicts timestamp order",
                )
            )

    if campaign.scam_type is not None:
        if known_scam_types is None:
            from .analytics import builtin_profiles

            known_scam_types = [p.scam_type for p in builtin_profiles()]
        if campaign.scam_type not in set(known_scam_types):
            violations.append(
                Violation(
                    "unknown-scam-type",
                    f"scam_type {campaign.scam_type!r} is not in the lifecycle catalogue",
                )
            )

    return ValidationReport(tuple(violations))


def require_valid(campaign: Campaign) -> None:
    report = validate_campaign(campaign)
    if not report.ok:
        raise CampaignValidationError(report)


def project_to_ckc(campaign: Campaign) -> list[CkcPhase]:
    """Collapse the campaign onto the technical axis, one phase per event.

    Zero-click and staged events project identically; the human axis is
    discarded. Output order is event order.
    """
    require_valid(campaign)
    return [event.coordinate.ckc for event in campaign.events]


def project_to_hkc(campaign: Campaign) -> list[HkcStage]:
    """Collapse onto the human axis; zero-click events are omitted."""
    require_valid(campaign)
    return [
        event.coordinate.human
        for event in campaign.events
        if not event.is_zero_click
    ]


def project_axis(campaign: Campaign, axis: str) -> list[str]:
    """Axis projection as serialized names; ``axis`` is ``ckc`` or ``hkc``."""
    if axis == "ckc":
        return [phase.token for phase in project_to_ckc(campaign)]
    if axis == "hkc":
        return [stage.token for stage in project_to_hkc(campaign)]
    raise ValueError(f"axis must be 'ckc' or 'hkc', got {axis!r}")


@dataclass(frozen=True)
class CellStats:
    count: int = 0
    dwell: int = 0


class OccupancyMatrix:
    """Per-cell event counts and dwell seconds over the full 63-cell grid."""

    def __init__(self, stats: Mapping[PlaneCoordinate, CellStats]):
        self._stats = {coord: stats.get(coord, CellStats()) for coord in all_coordinates()}

    def count(self, coordinate: PlaneCoordinate) -> int:
        return self._stats[coordinate].count

    def dwell(self, coordinate: PlaneCoordinate) -> int:
        return self._stats[coordinate].dwell

    def cells(self) -> list[tuple[PlaneCoordinate, CellStats]]:
        """All 63 cells in (technical ordinal, human ordinal) order."""
        return sorted(self._stats.items(), key=lambda item: item[0].sort_key())

    def occupied(self) -> list[tuple[PlaneCoordinate, CellStats]]:
        return [(c, s) for c, s in self.cells() if s.count > 0]

    @property
    def total_count(self) -> int:
        return sum(s.count for s in self._stats.values())

    @property
    def total_dwell(self) -> int:
        return sum(s.dwell for s in self._stats.values())

    def zero_click_count(self) -> int:
        return sum(s.count for c, s in self._stats.items() if c.is_zero_click)


def plane_occupancy(campaign: Campaign) -> OccupancyMatrix:
    """Accumulate event counts and dwell per grid cell.

    Events without a duration contribute zero dwell here; the analytics
    module applies its own one-second convention where it needs one.
    """
    require_valid(campaign)
    acc: dict[PlaneCoordinate, list[int]] = {}
    for event in campaign.events:
        entry = acc.setdefault(event.coordinate, [0, 0])
        entry[0] += 1
        entry[1] += event.duration or 0
    return OccupancyMatrix(
        {coord: CellStats(count=c, dwell=d) for coord, (c, d) in acc.items()}
    )


def interaction_ratio(campaign: Campaign) -> float:
    """Fraction of events that sit on a human-layer stage, in [0, 1]."""
    require_valid(campaign)
    if not campaign.events:
        raise EmptyCampaignError("interaction ratio is undefined for an empty campaign")
    staged = sum(1 for e in campaign.events if not e.is_zero_click)
    return staged / len(campaign.events)
