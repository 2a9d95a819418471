"""HTTP/JSON API backing the navigator UI.

Campaigns persist as one canonical document per file, shared with the CLI.
Mutations are atomic per campaign: a writer takes that campaign's lock,
builds the new immutable value, validates it, persists it, then swaps it
into the in-memory map. Reads are lock-free snapshots of immutable values.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .analytics import (
    DEFAULT_ZERO_CLICK_WEIGHT,
    analysis_report,
    default_phingo_vocabulary,
    disruption_candidates,
    generate_phingo_cards,
)
from .campaign import Campaign, CampaignEvent, plane_occupancy, project_axis, validate_campaign
from .chains import human_axis_token
from .errors import (
    CampaignValidationError,
    DocumentSchemaError,
    EmptyCampaignError,
    InsufficientVocabularyError,
    InvalidWindowError,
    NoHumanLayerError,
    UnclassifiableObservableError,
    UndatedCampaignError,
)
from .indicators import Exposure, classify_hioc, correlate_exposure
from .interop import (
    campaign_from_obj,
    campaign_to_obj,
    event_from_obj,
    load_campaign,
    parse_timestamp,
    save_campaign,
)

_SAFE_ID = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")

_FIXTURE_FILES = (
    "tech_support.json",
    "business_email_compromise.json",
    "romance_scam.json",
    "ransomware.json",
)


class NotFound(Exception):
    pass


class Store:
    """File-backed campaign store with per-campaign mutual exclusion."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.campaign_dir = self.root / "campaigns"
        self.campaign_dir.mkdir(parents=True, exist_ok=True)
        self._log_path = self.root / "mutations.log"
        self._registry_lock = threading.Lock()
        self._log_lock = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}
        self._campaigns: dict[str, Campaign] = {}
        self._op_seq = 0
        if self._log_path.exists():
            with self._log_path.open(encoding="utf-8") as fh:
                self._op_seq = sum(1 for _ in fh)
        for path in sorted(self.campaign_dir.glob("*.json")):
            campaign = load_campaign(path.read_text(encoding="utf-8"))
            report = validate_campaign(campaign)
            if not report.ok:  # hand-edited files must not break the store invariant
                raise CampaignValidationError(report)
            self._campaigns[campaign.id] = campaign

    def _lock_for(self, campaign_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(campaign_id, threading.Lock())

    def _audit(self, op: str, campaign_id: str, event_id: Optional[str] = None) -> None:
        entry = {
            "op": op,
            "campaign": campaign_id,
            "event": event_id,
            "at": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
        }
        with self._log_lock:
            self._op_seq += 1
            entry["op_seq"] = self._op_seq
            with self._log_path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry, sort_keys=True) + "\n")

    def _persist(self, campaign: Campaign) -> None:
        path = self.campaign_dir / f"{campaign.id}.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(save_campaign(campaign), encoding="utf-8")
        os.replace(tmp, path)

    def list_campaigns(self) -> list[Campaign]:
        return sorted(self._campaigns.values(), key=lambda c: c.id)

    def get(self, campaign_id: str) -> Campaign:
        campaign = self._campaigns.get(campaign_id)
        if campaign is None:
            raise NotFound(campaign_id)
        return campaign

    def put(self, campaign: Campaign) -> Campaign:
        if not _SAFE_ID.match(campaign.id):
            raise DocumentSchemaError(
                f"campaign id {campaign.id!r} is not filename-safe "
                "(use letters, digits, '.', '_', '-')"
            )
        report = validate_campaign(campaign)
        if not report.ok:
            raise CampaignValidationError(report)
        with self._lock_for(campaign.id):
            self._persist(campaign)
            self._campaigns[campaign.id] = campaign
        self._audit("put", campaign.id)
        return campaign

    def _commit(self, current: Campaign, updated: Campaign) -> Campaign:
        report = validate_campaign(updated)
        if not report.ok:
            raise CampaignValidationError(report)
        self._persist(updated)
        self._campaigns[updated.id] = updated
        return updated

    def append_event(self, campaign_id: str, event: CampaignEvent) -> Campaign:
        with self._lock_for(campaign_id):
            current = self.get(campaign_id)
            updated = self._commit(current, current.with_events(current.events + (event,)))
        self._audit("append-event", campaign_id, event.id)
        return updated

    def append_payload(self, campaign_id: str, payload: dict) -> Campaign:
        """Append an event described as a document fragment.

        ``seq`` may be omitted; it is then assigned as max+1 under the
        campaign lock so concurrent appends stay collision-free.
        """
        with self._lock_for(campaign_id):
            current = self.get(campaign_id)
            if isinstance(payload, dict) and payload.get("seq") is None:
                payload = dict(payload)
                payload["seq"] = max((e.seq for e in current.events), default=0) + 1
            event = event_from_obj(payload)
            updated = self._commit(current, current.with_events(current.events + (event,)))
        self._audit("append-event", campaign_id, event.id)
        return updated

    def delete_event(self, campaign_id: str, event_id: str) -> Campaign:
        with self._lock_for(campaign_id):
            current = self.get(campaign_id)
            remaining = [e for e in current.events if e.id != event_id]
            if len(remaining) == len(current.events):
                raise NotFound(event_id)
            updated = self._commit(current, current.with_events(remaining))
        self._audit("delete-event", campaign_id, event_id)
        return updated

    def seed_fixtures(self) -> None:
        from importlib import resources

        for name in _FIXTURE_FILES:
            text = (
                resources.files("killplane")
                .joinpath(f"data/fixtures/{name}")
                .read_text(encoding="utf-8")
            )
            self.put(load_campaign(text))


def create_app(store: Store) -> FastAPI:
    app = FastAPI(title="killplane service", version="0.1.0")

    @app.exception_handler(RequestValidationError)
    async def _malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": "malformed request body"})

    @app.exception_handler(DocumentSchemaError)
    async def _schema_error(request: Request, exc: DocumentSchemaError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(NotFound)
    async def _not_found(request: Request, exc: NotFound):
        return JSONResponse(status_code=404, content={"detail": f"unknown id: {exc}"})

    @app.exception_handler(CampaignValidationError)
    async def _validation_error(request: Request, exc: CampaignValidationError):
        return JSONResponse(
            status_code=409,
            content={
                "detail": "campaign validation failed",
                "violations": [
                    {"code": v.code, "message": v.message} for v in exc.report.violations
                ],
            },
        )

    domain_errors = (
        EmptyCampaignError,
        NoHumanLayerError,
        UndatedCampaignError,
        InvalidWindowError,
        UnclassifiableObservableError,
        InsufficientVocabularyError,
        ValueError,
    )

    for err in domain_errors:

        @app.exception_handler(err)
        async def _domain_error(request: Request, exc: Exception):
            return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/campaigns")
    def list_campaigns():
        return {
            "campaigns": [
                {
                    "id": c.id,
                    "name": c.name,
                    "scam_type": c.scam_type,
                    "event_count": len(c.events),
                }
                for c in store.list_campaigns()
            ]
        }

    @app.get("/campaigns/{campaign_id}")
    def get_campaign(campaign_id: str):
        return campaign_to_obj(store.get(campaign_id))

    @app.put("/campaigns/{campaign_id}")
    def put_campaign(campaign_id: str, payload: Any = Body(...)):
        campaign = campaign_from_obj(payload)
        if campaign.id != campaign_id:
            raise DocumentSchemaError(
                f"body id {campaign.id!r} does not match path id {campaign_id!r}"
            )
        return campaign_to_obj(store.put(campaign))

    @app.post("/campaigns/{campaign_id}/events", status_code=201)
    def append_event(campaign_id: str, payload: Any = Body(...)):
        return campaign_to_obj(store.append_payload(campaign_id, payload))

    @app.delete("/campaigns/{campaign_id}/events/{event_id}")
    def delete_event(campaign_id: str, event_id: str):
        return campaign_to_obj(store.delete_event(campaign_id, event_id))

    @app.get("/campaigns/{campaign_id}/occupancy")
    def occupancy(campaign_id: str):
        campaign = store.get(campaign_id)
        matrix = plane_occupancy(campaign)
        return {
            "campaign_id": campaign.id,
            "total_events": matrix.total_count,
            "total_dwell_seconds": matrix.total_dwell,
            "cells": [
                {
                    "ckc": coord.ckc.token,
                    "human": human_axis_token(coord.human),
                    "count": stats.count,
                    "dwell_seconds": stats.dwell,
                }
                for coord, stats in matrix.cells()
            ],
        }

    @app.get("/campaigns/{campaign_id}/projection")
    def projection(campaign_id: str, axis: str):
        campaign = store.get(campaign_id)
        return {"axis": axis, "sequence": project_axis(campaign, axis)}

    @app.get("/campaigns/{campaign_id}/analysis")
    def analysis(
        campaign_id: str,
        profile: Optional[str] = None,
        w0: float = DEFAULT_ZERO_CLICK_WEIGHT,
    ):
        campaign = store.get(campaign_id)
        label = profile if profile is not None else campaign.scam_type
        return analysis_report(campaign, profile_label=label, zero_click_weight=w0)

    @app.get("/campaigns/{campaign_id}/disruption")
    def disruption(
        campaign_id: str, k: int = 3, w0: float = DEFAULT_ZERO_CLICK_WEIGHT
    ):
        campaign = store.get(campaign_id)
        candidates = disruption_candidates(campaign, k, w0)
        return {
            "campaign_id": campaign.id,
            "candidates": [
                {
                    "ckc": c.coordinate.ckc.token,
                    "human": human_axis_token(c.coordinate.human),
                    "score": c.score,
                    "rationale": c.rationale,
                }
                for c in candidates
            ],
        }

    @app.post("/hiocs/classify")
    def classify(payload: Any = Body(...)):
        if not isinstance(payload, dict) or not isinstance(payload.get("observable"), str):
            raise DocumentSchemaError("body must be an object with a string 'observable'")
        category = classify_hioc(payload["observable"])
        return {
            "observable": payload["observable"],
            "category": category.value,
            "family": category.family,
            "subtype": category.subtype,
        }

    @app.post("/correlate")
    def correlate(payload: Any = Body(...)):
        if not isinstance(payload, dict):
            raise DocumentSchemaError("body must be an object")
        window = payload.get("window_seconds")
        if not isinstance(window, int) or isinstance(window, bool):
            raise DocumentSchemaError("'window_seconds' must be an integer")
        exposures = []
        for i, entry in enumerate(payload.get("exposures") or []):
            where = f"exposures[{i}]"
            if not isinstance(entry, dict) or not isinstance(entry.get("hioa_id"), str):
                raise DocumentSchemaError(f"{where}: needs a string 'hioa_id'")
            if not isinstance(entry.get("time"), str):
                raise DocumentSchemaError(f"{where}: needs a string 'time'")
            subject = entry.get("subject_ref")
            if subject is not None and not isinstance(subject, str):
                raise DocumentSchemaError(f"{where}: 'subject_ref' must be a string")
            exposures.append(
                Exposure(
                    hioa_id=entry["hioa_id"],
                    time=parse_timestamp(entry["time"], where),
                    subject_ref=subject,
                )
            )
        observations = []
        for i, entry in enumerate(payload.get("observations") or []):
            observations.append(_hioc_from_payload(entry, f"observations[{i}]"))
        pairs = correlate_exposure(exposures, observations, window)
        return {
            "pairs": [
                {"hioa_id": p.hioa_id, "hioc_id": p.hioc_id, "lag_seconds": p.lag}
                for p in pairs
            ]
        }

    @app.post("/phingo")
    def phingo(payload: Any = Body(...)):
        if not isinstance(payload, dict):
            raise DocumentSchemaError("body must be an object")
        vocabulary = payload.get("vocabulary")
        if vocabulary is None:
            vocabulary = default_phingo_vocabulary()
        elif not isinstance(vocabulary, list) or not all(
            isinstance(v, str) for v in vocabulary
        ):
            raise DocumentSchemaError("'vocabulary' must be a list of strings")
        n_cards = payload.get("n_cards", 1)
        seed = payload.get("seed")
        if not isinstance(n_cards, int) or isinstance(n_cards, bool):
            raise DocumentSchemaError("'n_cards' must be an integer")
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise DocumentSchemaError("'seed' must be an integer")
        cards = generate_phingo_cards(vocabulary, n_cards, seed)
        return {"cards": [{"rows": [list(row) for row in card.rows()]} for card in cards]}

    return app


def _hioc_from_payload(entry: Any, where: str):
    from .indicators import Hioc, HiocCategory, MeasurementSource

    if not isinstance(entry, dict):
        raise DocumentSchemaError(f"{where}: expected an object")

    def need(field: str) -> str:
        value = entry.get(field)
        if not isinstance(value, str):
            raise DocumentSchemaError(f"{where}: needs a string {field!r}")
        return value

    try:
        category = HiocCategory(need("category"))
        source = MeasurementSource(need("measurement_source"))
    except ValueError as exc:
        raise DocumentSchemaError(f"{where}: {exc}") from None
    value = entry.get("value")
    if value is not None and not isinstance(value, str):
        raise DocumentSchemaError(f"{where}: 'value' must be a string")
    refs = entry.get("related_hioa_ids") or []
    if not isinstance(refs, list) or not all(isinstance(r, str) for r in refs):
        raise DocumentSchemaError(f"{where}: 'related_hioa_ids' must be a list of strings")
    return Hioc(
        id=need("id"),
        category=category,
        subject_ref=need("subject_ref"),
        measurement_source=source,
        observable=need("observable"),
        timestamp=parse_timestamp(need("timestamp"), where),
        value=value,
        related_hioa_ids=tuple(refs),
    )


def main(argv: Optional[list[str]] = None) -> None:
    import uvicorn

    parser = argparse.ArgumentParser(prog="killplane-service", description=__doc__)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=int(os.environ.get("PORT", "8000")))
    parser.add_argument(
        "--data-dir", type=Path, default=Path(os.environ.get("KILLPLANE_DATA", "./data"))
    )
    parser.add_argument(
        "--seed-fixtures",
        action="store_true",
        help="load the bundled example campaigns into the store at startup",
    )
    args = parser.parse_args(argv)

    store = Store(args.data_dir)
    if args.seed_fixtures:
        store.seed_fixtures()
    uvicorn.run(create_app(store), host=args.host, port=args.port, log_level="warning")


if __name__ == "__main__":
    main()
