"""Sociotechnical kill-plane modeling engine.

Represents attack campaigns as ordered events on a two-dimensional plane
(technical kill-chain phase by human-layer stage, with a zero-click band),
classifies human-layer indicators, and computes lifecycle analytics.
"""

from .chains import (
    AXIS_CONTRASTS,
    AxisContrast,
    CkcPhase,
    GRID_CELLS,
    HkcStage,
    HumanAxisPosition,
    PlaneCoordinate,
    STAGE_DESCRIPTORS,
    StageDescriptor,
    ZERO_CLICK,
    ZeroClick,
    all_coordinates,
    human_axis_from_token,
    human_axis_label,
    human_axis_ordinal,
    human_axis_token,
    is_zero_click,
    stage_descriptor,
)
from .campaign import (
    Campaign,
    CampaignEvent,
    DAY,
    HOUR,
    MONTH,
    OccupancyMatrix,
    ValidationReport,
    Violation,
    format_duration,
    interaction_ratio,
    plane_occupancy,
    project_axis,
    project_to_ckc,
    project_to_hkc,
    validate_campaign,
)
from .indicators import (
    CorrelationPair,
    DEFAULT_CORRELATION_WINDOW,
    Exposure,
    Hioa,
    Hioc,
    HiocCategory,
    IndicatorKind,
    MeasurementSource,
    PredictiveModelRef,
    TechnicalIndicator,
    classify_hioc,
    classification_rules,
    correlate_exposure,
    link_hioa,
)
from .analytics import (
    ConformanceReport,
    DEFAULT_ZERO_CLICK_WEIGHT,
    DisruptionCandidate,
    LifecycleProfile,
    PhingoCard,
    ResponseWindow,
    analysis_report,
    builtin_profiles,
    campaign_duration,
    check_profile,
    critical_stage,
    default_phingo_vocabulary,
    disruption_candidates,
    generate_phingo_cards,
    profile_by_label,
    response_window_check,
)
from .interop import (
    BundleContents,
    PlaybookImport,
    TechniqueRef,
    export_bundle,
    import_bundle,
    import_playbook,
    load_campaign,
    load_profiles,
    parse_technique_id,
    save_campaign,
    save_profiles,
)
from .render import RenderSpec, render_plane
from . import errors

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
