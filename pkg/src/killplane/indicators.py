"""Human indicators of attack and compromise.

An attack indicator (Hioa) is attacker-created evidence of a psychological
tactic; a compromise indicator (Hioc) is observed evidence that a person
entered a dysregulated state after exposure. Compromise indicators fall into
five leaf classes: atomic-behavioural, atomic-physiological,
computed-contextual, computed-predictive, and latent.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime
from enum import Enum, unique
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .campaign import utc_second
from .chains import HkcStage
from .errors import (
    EmptyLinkError,
    InvalidWindowError,
    UnclassifiableObservableError,
)

# Correlation window used by bundled fixtures and the service default.
DEFAULT_CORRELATION_WINDOW = 24 * 3600


@unique
class IndicatorKind(Enum):
    """Classes of technical indicators."""

    ATOMIC = "atomic"
    COMPUTED = "computed"
    BEHAVIOURAL = "behavioural"


@unique
class MeasurementSource(Enum):
    """How a compromise indicator was captured."""

    OBSERVED_BY_THIRD_PARTY = "observed-by-third-party"
    INSTRUMENTED = "instrumented"
    SELF_REPORTED = "self-reported"


@unique
class HiocCategory(Enum):
    """The five leaf classes of human compromise indicators."""

    ATOMIC_BEHAVIOURAL = "atomic-behavioural"
    ATOMIC_PHYSIOLOGICAL = "atomic-physiological"
    COMPUTED_CONTEXTUAL = "computed-contextual"
    COMPUTED_PREDICTIVE = "computed-predictive"
    LATENT = "latent"

    @property
    def family(self) -> str:
        """Top-level class: atomic, computed, or latent."""
        return self.value.split("-")[0]

    @property
    def subtype(self) -> Optional[str]:
        """Leaf qualifier within atomic/computed; None for latent."""
        parts = self.value.split("-", 1)
        return parts[1] if len(parts) == 2 else None


@dataclass(frozen=True)
class Hioa:
    """Attacker-created evidence informing a psychological tactic."""

    id: str
    description: str
    psych_tactic: str
    hkc_stage: HkcStage
    linked_ioa_ids: frozenset[str] = frozenset()
    source_artifact: Optional[str] = None

    def __post_init__(self):
        if not self.description:
            raise ValueError("Hioa description must be non-empty")
        object.__setattr__(self, "linked_ioa_ids", frozenset(self.linked_ioa_ids))


@dataclass(frozen=True)
class TechnicalIndicator:
    id: str
    kind: IndicatorKind
    value: str
    created_by_attacker: bool = True


@dataclass(frozen=True)
class Hioc:
    """Observed evidence of a person's dysregulation.

    ``value`` is stored verbatim (scalar plus unit, or a qualitative label)
    and never interpreted; ``subject_ref`` must be pseudonymous.
    """

    id: str
    category: HiocCategory
    subject_ref: str
    measurement_source: MeasurementSource
    observable: str
    timestamp: datetime
    value: Optional[str] = None
    related_hioa_ids: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "timestamp", utc_second(self.timestamp))
        object.__setattr__(self, "related_hioa_ids", tuple(self.related_hioa_ids))


@dataclass(frozen=True)
class PredictiveModelRef:
    """A published statistical relation used as a predictive indicator."""

    id: str
    statement: str
    predictor: str
    outcome: str
    direction: str  # "positive" | "negative"
    citation: str = ""

    def __post_init__(self):
        if not self.statement:
            raise ValueError("statement must be non-empty")
        if self.direction not in ("positive", "negative"):
            raise ValueError(f"direction must be positive or negative, got {self.direction!r}")


@dataclass(frozen=True)
class Exposure:
    """A subject's exposure to an attack indicator at a point in time.

    ``subject_ref`` None means the exposure is not tied to one subject and
    pairs with observations from any subject.
    """

    hioa_id: str
    time: datetime
    subject_ref: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "time", utc_second(self.time))


@dataclass(frozen=True)
class CorrelationPair:
    """An exposure matched to a later observation within the window."""

    hioa_id: str
    hioc_id: str
    lag: int  # seconds, 0 <= lag <= window


def _normalize_term(term: str) -> str:
    return " ".join(term.lower().replace("/", " ").replace("_", " ").split())


def _load_rule_table(path: Path) -> dict[str, HiocCategory]:
    table: dict[str, HiocCategory] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" not in line:
            raise ValueError(f"{path.name}:{lineno}: expected observable<TAB>category")
        observable, category = line.split("\t", 1)
        table[_normalize_term(observable)] = HiocCategory(category.strip())
    return table


def _builtin_rules_path() -> Path:
    return Path(resources.files("killplane").joinpath("data/hioc_rules.tsv"))


_rule_cache: dict[str, HiocCategory] | None = None


def classification_rules(path: Optional[Path] = None) -> dict[str, HiocCategory]:
    """The observable-to-category rule table; bundled by default, extendable via file."""
    global _rule_cache
    if path is not None:
        return _load_rule_table(path)
    if _rule_cache is None:
        _rule_cache = _load_rule_table(_builtin_rules_path())
    return _rule_cache


def classify_hioc(observable: str, rules: Optional[dict[str, HiocCategory]] = None) -> HiocCategory:
    """Classify an observable into its compromise-indicator category.

    Lookup is case-insensitive on normalized terms. Unknown observables
    raise; callers may extend the rule table rather than guess.
    """
    if not observable or not observable.strip():
        raise ValueError("observable must be non-empty")
    table = rules if rules is not None else classification_rules()
    key = _normalize_term(observable)
    if key not in table:
        raise UnclassifiableObservableError(observable)
    return table[key]


def link_hioa(hioa: Hioa, indicator_ids: Sequence[str]) -> Hioa:
    """Return a copy with the technical-indicator ids unioned in."""
    if not indicator_ids:
        raise EmptyLinkError("at least one technical-indicator id is required")
    return replace(hioa, linked_ioa_ids=hioa.linked_ioa_ids | frozenset(indicator_ids))


def correlate_exposure(
    exposures: Iterable[Exposure],
    observations: Iterable[Hioc],
    window: int,
) -> list[CorrelationPair]:
    """Pair each exposure with every subject-matched observation inside the window.

    A pair exists when 0 <= observation.timestamp - exposure.time <= window.
    Output is sorted by lag ascending, ties by (hioa_id, hioc_id).
    """
    if window <= 0:
        raise InvalidWindowError(f"window must be positive, got {window}")
    pairs: list[CorrelationPair] = []
    observations = list(observations)
    for exposure in exposures:
        for obs in observations:
            if exposure.subject_ref is not None and exposure.subject_ref != obs.subject_ref:
                continue
            lag = int((obs.timestamp - exposure.time).total_seconds())
            if 0 <= lag <= window:
                pairs.append(CorrelationPair(exposure.hioa_id, obs.id, lag))
    pairs.sort(key=lambda p: (p.lag, p.hioa_id, p.hioc_id))
    return pairs
