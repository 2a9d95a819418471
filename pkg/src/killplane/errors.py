"""Exception types shared across the kill-plane engine.

Parsing, schema, and domain failures are kept distinct so callers (CLI exit
codes, HTTP status mapping) can tell them apart without string matching.
"""

from __future__ import annotations


class KillPlaneError(Exception):
    """Base class for all engine errors."""


class DocumentParseError(KillPlaneError):
    """A document is not syntactically well formed. Carries a character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DocumentSchemaError(KillPlaneError):
    """A syntactically valid document violates the expected schema."""


class CampaignValidationError(KillPlaneError):
    """An operation requiring a valid campaign received one with violations."""

    def __init__(self, report):
        lines = "; ".join(v.message for v in report.violations)
        super().__init__(f"campaign has {len(report.violations)} violation(s): {lines}")
        self.report = report


class EmptyCampaignError(KillPlaneError):
    """An operation needing at least one event received an empty campaign."""


class NoHumanLayerError(KillPlaneError):
    """Human-layer analytics requested on a campaign with only zero-click events."""


class UndatedCampaignError(KillPlaneError):
    """Duration analytics requested on a campaign with no timestamped events."""


class UnclassifiableObservableError(KillPlaneError):
    """An observable is absent from the classification rule table."""

    def __init__(self, term: str):
        super().__init__(f"unclassifiable observable: {term!r}")
        self.term = term


class InvalidWindowError(KillPlaneError):
    """Correlation window must be a positive time span."""


class EmptyLinkError(KillPlaneError):
    """Linking requires at least one technical-indicator id."""


class InsufficientVocabularyError(KillPlaneError):
    """Card generation needs at least 25 distinct labels."""


class EmptyPlaybookError(KillPlaneError):
    """A playbook document contains no attack-pattern objects."""
