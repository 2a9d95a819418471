"""Parsers and serializers: technique ids, campaign documents, interchange bundles.

The campaign file format is a single JSON document with a fixed schema;
canonical output has sorted keys, two-space indentation, and a trailing
newline so that documents diff cleanly and golden tests stay stable.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from .campaign import Campaign, CampaignEvent, require_valid
from .chains import (
    CkcPhase,
    HkcStage,
    PlaneCoordinate,
    ZERO_CLICK,
    human_axis_from_token,
    human_axis_token,
)
from .errors import DocumentParseError, DocumentSchemaError, EmptyPlaybookError
from .indicators import Hioa, Hioc, HiocCategory, MeasurementSource

TECHNIQUE_BASE_DIGITS = 4
TECHNIQUE_SUB_DIGITS = 3


@dataclass(frozen=True)
class TechniqueRef:
    """A technique identifier such as T1566 or T1566.002, zero-padding preserved."""

    base_id: str
    sub_id: Optional[str] = None
    raw: str = ""

    def __post_init__(self):
        rendered = "T" + self.base_id + (("." + self.sub_id) if self.sub_id else "")
        if not self.raw:
            object.__setattr__(self, "raw", rendered)
        elif self.raw != rendered:
            raise ValueError(f"raw {self.raw!r} does not match parts {rendered!r}")

    def render(self) -> str:
        return self.raw


def parse_technique_id(s: str) -> TechniqueRef:
    """Parse ``T`` + 4 digits, optionally ``.`` + 3 digits; nothing else.

    Errors carry the character position of the first offending character.
    """
    if not s or s[0] != "T":
        raise DocumentParseError("expected 'T'", 0)
    pos = 1
    for _ in range(TECHNIQUE_BASE_DIGITS):
        if pos >= len(s) or not s[pos].isascii() or not s[pos].isdigit():
            raise DocumentParseError("expected digit", pos)
        pos += 1
    base = s[1:pos]
    if pos == len(s):
        return TechniqueRef(base_id=base)
    if s[pos] != ".":
        raise DocumentParseError("expected '.' or end of input", pos)
    pos += 1
    sub_start = pos
    for _ in range(TECHNIQUE_SUB_DIGITS):
        if pos >= len(s) or not s[pos].isascii() or not s[pos].isdigit():
            raise DocumentParseError("expected digit", pos)
        pos += 1
    if pos != len(s):
        raise DocumentParseError("unexpected trailing characters", pos)
    return TechniqueRef(base_id=base, sub_id=s[sub_start:pos])


# --- campaign documents -----------------------------------------------------

TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def format_timestamp(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).strftime(TIMESTAMP_FORMAT)


def parse_timestamp(value: str, where: str) -> datetime:
    text = value[:-1] + "+00:00" if value.endswith("Z") else value
    try:
        dt = datetime.fromisoformat(text)
    except ValueError:
        raise DocumentSchemaError(f"{where}: invalid timestamp {value!r}") from None
    if dt.tzinfo is None:
        raise DocumentSchemaError(f"{where}: timestamp {value!r} must carry a UTC offset")
    return dt.astimezone(timezone.utc).replace(microsecond=0)


def _expect(obj: Any, field: str, kinds, where: str, required: bool = True):
    if field not in obj or obj[field] is None:
        if required:
            raise DocumentSchemaError(f"{where}: missing field {field!r}")
        return None
    value = obj[field]
    if isinstance(value, bool) and bool not in (
        kinds if isinstance(kinds, tuple) else (kinds,)
    ):
        raise DocumentSchemaError(f"{where}: field {field!r} has wrong type")
    if not isinstance(value, kinds):
        raise DocumentSchemaError(f"{where}: field {field!r} has wrong type")
    return value


def event_to_obj(event: CampaignEvent) -> dict:
    return {
        "id": event.id,
        "seq": event.seq,
        "timestamp": format_timestamp(event.timestamp) if event.timestamp else None,
        "ckc": event.coordinate.ckc.token,
        "human": human_axis_token(event.coordinate.human),
        "technique": event.technique.render() if event.technique else None,
        "description": event.description,
        "hioa_refs": list(event.hioa_refs),
        "duration_seconds": event.duration,
    }


def event_from_obj(obj: Any, where: str = "event") -> CampaignEvent:
    if not isinstance(obj, dict):
        raise DocumentSchemaError(f"{where}: expected an object")
    event_id = _expect(obj, "id", str, where)
    seq = _expect(obj, "seq", int, where)
    ckc_token = _expect(obj, "ckc", str, where)
    human_token = _expect(obj, "human", str, where)
    try:
        coordinate = PlaneCoordinate(
            CkcPhase.from_token(ckc_token), human_axis_from_token(human_token)
        )
    except ValueError as exc:
        raise DocumentSchemaError(f"{where}: {exc}") from None

    timestamp_text = _expect(obj, "timestamp", str, where, required=False)
    timestamp = (
        parse_timestamp(timestamp_text, where) if timestamp_text is not None else None
    )

    technique_text = _expect(obj, "technique", str, where, required=False)
    technique = None
    if technique_text is not None:
        try:
            technique = parse_technique_id(technique_text)
        except DocumentParseError as exc:
            raise DocumentSchemaError(f"{where}: invalid technique id: {exc}") from None

    refs = _expect(obj, "hioa_refs", list, where, required=False) or []
    for ref in refs:
        if not isinstance(ref, str):
            raise DocumentSchemaError(f"{where}: hioa_refs entries must be strings")

    duration = _expect(obj, "duration_seconds", int, where, required=False)
    description = _expect(obj, "description", str, where, required=False) or ""

    return CampaignEvent(
        id=event_id,
        seq=seq,
        coordinate=coordinate,
        description=description,
        timestamp=timestamp,
        technique=technique,
        hioa_refs=tuple(refs),
        duration=duration,
    )


def campaign_to_obj(campaign: Campaign) -> dict:
    return {
        "id": campaign.id,
        "name": campaign.name,
        "scam_type": campaign.scam_type,
        "metadata": dict(campaign.metadata),
        "events": [event_to_obj(e) for e in campaign.events],
    }


def campaign_from_obj(obj: Any) -> Campaign:
    if not isinstance(obj, dict):
        raise DocumentSchemaError("campaign: expected a JSON object")
    campaign_id = _expect(obj, "id", str, "campaign")
    name = _expect(obj, "name", str, "campaign")
    scam_type = _expect(obj, "scam_type", str, "campaign", required=False)
    metadata = _expect(obj, "metadata", dict, "campaign", required=False) or {}
    for key, value in metadata.items():
        if not isinstance(key, str) or not isinstance(value, str):
            raise DocumentSchemaError("campaign: metadata must map strings to strings")
    events_obj = _expect(obj, "events", list, "campaign")
    events = [
        event_from_obj(entry, where=f"events[{i}]") for i, entry in enumerate(events_obj)
    ]
    return Campaign(
        id=campaign_id,
        name=name,
        events=tuple(events),
        scam_type=scam_type,
        metadata=metadata,
    )


def _canonical_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def save_campaign(campaign: Campaign) -> str:
    """Serialize to the canonical document form."""
    return _canonical_json(campaign_to_obj(campaign))


def load_campaign(document: str) -> Campaign:
    """Parse a campaign document; syntax and schema problems raise distinct errors.

    Campaign invariant violations are not checked here; run
    ``validate_campaign`` on the result.
    """
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DocumentParseError(exc.msg, exc.pos) from None
    return campaign_from_obj(obj)


# --- lifecycle profile catalogues -------------------------------------------


def save_profiles(profiles: Sequence) -> str:
    """Serialize a lifecycle catalogue in the campaign-file conventions."""
    return _canonical_json(
        {
            "profiles": [
                {
                    "scam_type": p.scam_type,
                    "min_duration_seconds": p.min_duration,
                    "max_duration_seconds": p.max_duration,
                    "critical_stage": p.critical_stage.token,
                }
                for p in profiles
            ]
        }
    )


def load_profiles(document: str) -> list:
    """Parse a replacement lifecycle catalogue document."""
    from .analytics import LifecycleProfile

    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DocumentParseError(exc.msg, exc.pos) from None
    if not isinstance(obj, dict):
        raise DocumentSchemaError("profiles: expected a JSON object")
    entries = _expect(obj, "profiles", list, "profiles")
    profiles = []
    for i, entry in enumerate(entries):
        where = f"profiles[{i}]"
        if not isinstance(entry, dict):
            raise DocumentSchemaError(f"{where}: expected an object")
        try:
            stage = HkcStage.from_token(_expect(entry, "critical_stage", str, where))
        except ValueError as exc:
            raise DocumentSchemaError(f"{where}: {exc}") from None
        minimum = _expect(entry, "min_duration_seconds", int, where)
        maximum = _expect(entry, "max_duration_seconds", int, where)
        if minimum > maximum:
            raise DocumentSchemaError(f"{where}: min duration exceeds max duration")
        profiles.append(
            LifecycleProfile(
                scam_type=_expect(entry, "scam_type", str, where),
                min_duration=minimum,
                max_duration=maximum,
                critical_stage=stage,
            )
        )
    return profiles


# --- interchange bundles ----------------------------------------------------

_ID_NAMESPACE = uuid.UUID("7b0e8364-4a64-4f7e-9c57-2c1e4fbe41f5")

_EXTENSION_PREFIX = "x_sociotech_"

_KILL_CHAIN_NAME = "lockheed-martin-cyber-kill-chain"


def _stable_id(kind: str, *parts: str) -> str:
    return f"{kind}--{uuid.uuid5(_ID_NAMESPACE, '/'.join(parts))}"


def _phase_name(phase: CkcPhase) -> str:
    return phase.label.lower().replace(" ", "-")


def _event_object(campaign: Campaign, event: CampaignEvent) -> dict:
    obj: dict[str, Any] = {
        "type": "attack-pattern",
        "spec_version": "2.1",
        "id": _stable_id("attack-pattern", campaign.id, event.id),
        "name": event.description or f"Event {event.id}",
        "kill_chain_phases": [
            {
                "kill_chain_name": _KILL_CHAIN_NAME,
                "phase_name": _phase_name(event.coordinate.ckc),
            }
        ],
        "x_sociotech_event_id": event.id,
        "x_sociotech_seq": event.seq,
        "x_sociotech_ckc_phase": event.coordinate.ckc.token,
        "x_sociotech_zero_click": event.is_zero_click,
    }
    if not event.is_zero_click:
        obj["x_sociotech_hkc_stage"] = event.coordinate.human.token
    if event.timestamp is not None:
        obj["x_sociotech_timestamp"] = format_timestamp(event.timestamp)
    if event.duration is not None:
        obj["x_sociotech_duration_seconds"] = event.duration
    if event.hioa_refs:
        obj["x_sociotech_hioa_refs"] = list(event.hioa_refs)
    if event.technique is not None:
        obj["external_references"] = [
            {"source_name": "mitre-attack", "external_id": event.technique.render()}
        ]
    return obj


def _hioa_object(hioa: Hioa) -> dict:
    obj: dict[str, Any] = {
        "type": "x-sociotech-hioa",
        "spec_version": "2.1",
        "id": _stable_id("x-sociotech-hioa", hioa.id),
        "description": hioa.description,
        "x_sociotech_hioa_id": hioa.id,
        "x_sociotech_psych_tactic": hioa.psych_tactic,
        "x_sociotech_hkc_stage": hioa.hkc_stage.token,
        "x_sociotech_linked_ioa_ids": sorted(hioa.linked_ioa_ids),
    }
    if hioa.source_artifact is not None:
        obj["x_sociotech_source_artifact"] = hioa.source_artifact
    return obj


def _hioc_object(hioc: Hioc) -> dict:
    obj: dict[str, Any] = {
        "type": "x-sociotech-hioc",
        "spec_version": "2.1",
        "id": _stable_id("x-sociotech-hioc", hioc.id),
        "x_sociotech_hioc_id": hioc.id,
        "x_sociotech_category": hioc.category.value,
        "x_sociotech_subject_ref": hioc.subject_ref,
        "x_sociotech_measurement_source": hioc.measurement_source.value,
        "x_sociotech_observable": hioc.observable,
        "x_sociotech_timestamp": format_timestamp(hioc.timestamp),
        "x_sociotech_related_hioa_ids": list(hioc.related_hioa_ids),
    }
    if hioc.value is not None:
        obj["x_sociotech_value"] = hioc.value
    return obj


def export_bundle(
    campaign: Campaign,
    hioas: Sequence[Hioa] = (),
    hiocs: Sequence[Hioc] = (),
) -> str:
    """Serialize a campaign and its indicators as an interchange bundle.

    Human-axis data rides in ``x_sociotech_`` extension properties; output is
    byte-deterministic for a given input.
    """
    require_valid(campaign)
    objects: list[dict] = [
        {
            "type": "campaign",
            "spec_version": "2.1",
            "id": _stable_id("campaign", campaign.id),
            "name": campaign.name,
            "x_sociotech_campaign_id": campaign.id,
            "x_sociotech_scam_type": campaign.scam_type,
            "x_sociotech_metadata": dict(campaign.metadata),
        }
    ]
    objects.extend(_event_object(campaign, e) for e in campaign.events)
    objects.extend(_hioa_object(h) for h in hioas)
    objects.extend(_hioc_object(h) for h in hiocs)
    bundle = {
        "type": "bundle",
        "id": _stable_id("bundle", campaign.id),
        "objects": objects,
    }
    return _canonical_json(bundle)


@dataclass(frozen=True)
class BundleContents:
    campaign: Campaign
    hioas: tuple[Hioa, ...]
    hiocs: tuple[Hioc, ...]


def _require_bundle(document: str) -> dict:
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DocumentParseError(exc.msg, exc.pos) from None
    if not isinstance(obj, dict) or obj.get("type") != "bundle":
        raise DocumentSchemaError("bundle: expected an object with type 'bundle'")
    if not isinstance(obj.get("objects"), list):
        raise DocumentSchemaError("bundle: missing field 'objects'")
    return obj


def import_bundle(document: str) -> BundleContents:
    """Rebuild a campaign and its indicators from a bundle produced by export_bundle."""
    bundle = _require_bundle(document)
    campaign_obj = None
    events: list[CampaignEvent] = []
    hioas: list[Hioa] = []
    hiocs: list[Hioc] = []
    for entry in bundle["objects"]:
        if not isinstance(entry, dict):
            raise DocumentSchemaError("bundle: objects entries must be objects")
        kind = entry.get("type")
        if kind == "campaign":
            campaign_obj = entry
        elif kind == "attack-pattern" and "x_sociotech_event_id" in entry:
            events.append(_event_from_bundle(entry))
        elif kind == "x-sociotech-hioa":
            hioas.append(_hioa_from_bundle(entry))
        elif kind == "x-sociotech-hioc":
            hiocs.append(_hioc_from_bundle(entry))
    if campaign_obj is None:
        raise DocumentSchemaError("bundle: no campaign object present")
    where = "campaign object"
    campaign = Campaign(
        id=_expect(campaign_obj, "x_sociotech_campaign_id", str, where),
        name=_expect(campaign_obj, "name", str, where),
        events=tuple(sorted(events, key=lambda e: e.seq)),
        scam_type=_expect(campaign_obj, "x_sociotech_scam_type", str, where, required=False),
        metadata=_expect(campaign_obj, "x_sociotech_metadata", dict, where, required=False)
        or {},
    )
    return BundleContents(campaign, tuple(hioas), tuple(hiocs))


def _technique_from_refs(entry: dict, where: str) -> Optional[TechniqueRef]:
    for ref in entry.get("external_references", []) or []:
        if isinstance(ref, dict) and ref.get("source_name") == "mitre-attack":
            external_id = ref.get("external_id")
            if isinstance(external_id, str):
                try:
                    return parse_technique_id(external_id)
                except DocumentParseError as exc:
                    raise DocumentSchemaError(
                        f"{where}: invalid technique id: {exc}"
                    ) from None
    return None


def _event_from_bundle(entry: dict) -> CampaignEvent:
    where = f"event object {entry.get('x_sociotech_event_id', '?')}"
    zero_click = entry.get("x_sociotech_zero_click")
    if not isinstance(zero_click, bool):
        raise DocumentSchemaError(f"{where}: missing field 'x_sociotech_zero_click'")
    if zero_click:
        human = ZERO_CLICK
    else:
        stage_token = _expect(entry, "x_sociotech_hkc_stage", str, where)
        try:
            human = HkcStage.from_token(stage_token)
        except ValueError as exc:
            raise DocumentSchemaError(f"{where}: {exc}") from None
    try:
        ckc = CkcPhase.from_token(_expect(entry, "x_sociotech_ckc_phase", str, where))
    except ValueError as exc:
        raise DocumentSchemaError(f"{where}: {exc}") from None
    timestamp_text = _expect(entry, "x_sociotech_timestamp", str, where, required=False)
    refs = _expect(entry, "x_sociotech_hioa_refs", list, where, required=False) or []
    name = entry.get("name", "")
    event_id = _expect(entry, "x_sociotech_event_id", str, where)
    return CampaignEvent(
        id=event_id,
        seq=_expect(entry, "x_sociotech_seq", int, where),
        coordinate=PlaneCoordinate(ckc, human),
        description="" if name == f"Event {event_id}" else name,
        timestamp=parse_timestamp(timestamp_text, where) if timestamp_text else None,
        technique=_technique_from_refs(entry, where),
        hioa_refs=tuple(refs),
        duration=_expect(entry, "x_sociotech_duration_seconds", int, where, required=False),
    )


def _hioa_from_bundle(entry: dict) -> Hioa:
    where = "hioa object"
    try:
        stage = HkcStage.from_token(_expect(entry, "x_sociotech_hkc_stage", str, where))
    except ValueError as exc:
        raise DocumentSchemaError(f"{where}: {exc}") from None
    return Hioa(
        id=_expect(entry, "x_sociotech_hioa_id", str, where),
        description=_expect(entry, "description", str, where),
        psych_tactic=_expect(entry, "x_sociotech_psych_tactic", str, where),
        hkc_stage=stage,
        linked_ioa_ids=frozenset(
            _expect(entry, "x_sociotech_linked_ioa_ids", list, where, required=False) or []
        ),
        source_artifact=_expect(
            entry, "x_sociotech_source_artifact", str, where, required=False
        ),
    )


def _hioc_from_bundle(entry: dict) -> Hioc:
    where = "hioc object"
    try:
        category = HiocCategory(_expect(entry, "x_sociotech_category", str, where))
        source = MeasurementSource(
            _expect(entry, "x_sociotech_measurement_source", str, where)
        )
    except ValueError as exc:
        raise DocumentSchemaError(f"{where}: {exc}") from None
    return Hioc(
        id=_expect(entry, "x_sociotech_hioc_id", str, where),
        category=category,
        subject_ref=_expect(entry, "x_sociotech_subject_ref", str, where),
        measurement_source=source,
        observable=_expect(entry, "x_sociotech_observable", str, where),
        timestamp=parse_timestamp(
            _expect(entry, "x_sociotech_timestamp", str, where), where
        ),
        value=_expect(entry, "x_sociotech_value", str, where, required=False),
        related_hioa_ids=tuple(
            _expect(entry, "x_sociotech_related_hioa_ids", list, where, required=False)
            or []
        ),
    )


# --- playbook import --------------------------------------------------------


def _normalize_alias(term: str) -> str:
    return " ".join(term.lower().replace("-", " ").replace("_", " ").split())


def _load_alias_table(path: Path) -> dict[str, CkcPhase]:
    table: dict[str, CkcPhase] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" not in line:
            raise ValueError(f"{path.name}:{lineno}: expected alias<TAB>phase")
        alias, token = line.split("\t", 1)
        table[_normalize_alias(alias)] = CkcPhase.from_token(token.strip())
    return table


_alias_cache: dict[str, CkcPhase] | None = None


def phase_aliases(path: Optional[Path] = None) -> dict[str, CkcPhase]:
    """Alias-to-phase table used for playbook ingestion; bundled by default."""
    global _alias_cache
    if path is not None:
        return _load_alias_table(path)
    if _alias_cache is None:
        _alias_cache = _load_alias_table(
            Path(resources.files("killplane").joinpath("data/ckc_aliases.tsv"))
        )
    return _alias_cache


@dataclass(frozen=True)
class PlaybookImport:
    """An imported playbook skeleton plus what had to be skipped."""

    campaign: Campaign
    skipped: tuple[str, ...]


def import_playbook(
    document: str, aliases: Optional[dict[str, CkcPhase]] = None
) -> PlaybookImport:
    """Map a bundle-shaped adversary playbook onto the plane's technical axis.

    Every produced event sits in the zero-click band: the importer never
    invents human-axis data; the result awaits analyst annotation.
    Attack-pattern phases that do not name a technical kill-chain phase are
    skipped and reported.
    """
    bundle = _require_bundle(document)
    table = aliases if aliases is not None else phase_aliases()

    patterns = [
        entry
        for entry in bundle["objects"]
        if isinstance(entry, dict) and entry.get("type") == "attack-pattern"
    ]
    if not patterns:
        raise EmptyPlaybookError("playbook contains no attack-pattern objects")

    events: list[CampaignEvent] = []
    skipped: list[str] = []
    seq = 0
    for entry in patterns:
        label = entry.get("name") or entry.get("id") or "attack-pattern"
        phases = entry.get("kill_chain_phases") or []
        if not phases:
            skipped.append(f"{label}: no kill-chain phases")
            continue
        technique = None
        try:
            technique = _technique_from_refs(entry, label)
        except DocumentSchemaError as exc:
            skipped.append(str(exc))
        for phase_entry in phases:
            phase_name = (
                phase_entry.get("phase_name") if isinstance(phase_entry, dict) else None
            )
            if not isinstance(phase_name, str):
                skipped.append(f"{label}: malformed kill-chain phase entry")
                continue
            phase = table.get(_normalize_alias(phase_name))
            if phase is None:
                skipped.append(f"{label}: unmapped phase {phase_name!r}")
                continue
            seq += 1
            events.append(
                CampaignEvent(
                    id=f"pb-{seq}",
                    seq=seq,
                    coordinate=PlaneCoordinate(phase, ZERO_CLICK),
                    description=label,
                    technique=technique,
                )
            )

    campaign = Campaign(
        id=bundle.get("id") or "imported-playbook",
        name="Imported playbook",
        events=tuple(events),
        metadata={"origin": "playbook-import"},
    )
    return PlaybookImport(campaign=campaign, skipped=tuple(skipped))
