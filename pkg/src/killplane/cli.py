"""Command-line workbench: validate, project, analyze, render, and deal cards.

Exit codes: 0 success, 1 usage or I/O error (including unparseable
documents), 2 domain violations (invalid campaigns, analytics domain
errors). Diagnostics go to standard error; results go to standard output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .analytics import (
    DEFAULT_ZERO_CLICK_WEIGHT,
    analysis_report,
    builtin_profiles,
    default_phingo_vocabulary,
    generate_phingo_cards,
    profile_by_label,
)
from .campaign import Campaign, project_axis, validate_campaign
from .errors import (
    CampaignValidationError,
    DocumentParseError,
    DocumentSchemaError,
    EmptyCampaignError,
    InsufficientVocabularyError,
    NoHumanLayerError,
    UndatedCampaignError,
)
from .interop import load_campaign
from .render import RenderSpec, render_plane


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; this CLI reserves 2 for domain errors."""

    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="killplane", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a campaign file's invariants")
    p_validate.add_argument("path", type=Path)
    p_validate.add_argument("--format", choices=("text", "json"), default="text")
    p_validate.set_defaults(func=cmd_validate)

    p_project = sub.add_parser("project", help="collapse a campaign onto one axis")
    p_project.add_argument("path", type=Path)
    p_project.add_argument("--axis", choices=("ckc", "hkc"), required=True)
    p_project.add_argument("--format", choices=("text", "json"), default="text")
    p_project.set_defaults(func=cmd_project)

    p_analyze = sub.add_parser("analyze", help="lifecycle and disruption analytics")
    p_analyze.add_argument("path", type=Path)
    p_analyze.add_argument("--profile", help="lifecycle profile label to check against")
    p_analyze.add_argument(
        "--w0",
        type=float,
        default=DEFAULT_ZERO_CLICK_WEIGHT,
        help="zero-click disruption weight in [0, 1]",
    )
    p_analyze.add_argument("--format", choices=("text", "json"), default="text")
    p_analyze.set_defaults(func=cmd_analyze)

    p_render = sub.add_parser("render", help="render the plane grid as SVG")
    p_render.add_argument("path", type=Path)
    p_render.add_argument("--out", type=Path, required=True)
    p_render.add_argument("--cell-size", type=int, default=64)
    p_render.add_argument("--margin", type=int, default=24)
    p_render.add_argument("--no-labels", action="store_true")
    p_render.add_argument("--no-counts", action="store_true")
    p_render.set_defaults(func=cmd_render)

    p_phingo = sub.add_parser("phingo", help="deal tactic training cards")
    p_phingo.add_argument(
        "--vocab",
        default="builtin",
        help="path to a label file (one per line) or 'builtin'",
    )
    p_phingo.add_argument("-n", "--n-cards", type=int, default=1)
    p_phingo.add_argument("--seed", type=int, required=True)
    p_phingo.add_argument("--out", type=Path, required=True)
    p_phingo.set_defaults(func=cmd_phingo)

    return parser


def _load(path: Path) -> Campaign:
    return load_campaign(path.read_text(encoding="utf-8"))


def cmd_validate(args) -> int:
    report = validate_campaign(_load(args.path))
    if args.format == "json":
        payload = {
            "valid": report.ok,
            "violations": [{"code": v.code, "message": v.message} for v in report.violations],
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for violation in report.violations:
            print(violation.message)
    return 0 if report.ok else 2


def cmd_project(args) -> int:
    tokens = project_axis(_load(args.path), args.axis)
    if args.format == "json":
        print(json.dumps({"axis": args.axis, "sequence": tokens}, indent=2, sort_keys=True))
    else:
        for token in tokens:
            print(token)
    return 0


def cmd_analyze(args) -> int:
    campaign = _load(args.path)
    label = args.profile or campaign.scam_type
    if args.profile is not None and profile_by_label(args.profile) is None:
        known = ", ".join(p.scam_type for p in builtin_profiles())
        raise UsageError(f"unknown profile {args.profile!r} (known: {known})")
    report = analysis_report(campaign, profile_label=label, zero_click_weight=args.w0)
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
        return 0

    print(f"campaign: {report['name']} ({report['campaign_id']})")
    print(f"events: {report['event_count']} (zero-click {report['zero_click_events']})")
    print(f"occupied cells: {report['occupied_cells']}")
    print(f"interaction ratio: {report['interaction_ratio']:.2f}")
    print(f"duration: {report['duration_display']} ({report['duration_seconds']} s)")
    print(f"critical stage: {report['critical_stage']}")
    conformance = report["conformance"]
    if conformance is not None:
        print(f"profile: {report['profile']}")
        print(f"duration in bounds: {'yes' if conformance['duration_in_bounds'] else 'no'}")
        print(
            "critical stage matches: "
            f"{'yes' if conformance['critical_stage_matches'] else 'no'}"
        )
    print("top disruption candidates:")
    for i, entry in enumerate(report["disruption"], 1):
        print(
            f"  {i}. ({entry['ckc']}, {entry['human']}) "
            f"score {entry['score']:.4f} [{entry['rationale']}]"
        )
    return 0


def cmd_render(args) -> int:
    spec = RenderSpec(
        cell_size=args.cell_size,
        margin=args.margin,
        show_labels=not args.no_labels,
        show_counts=not args.no_counts,
    )
    svg = render_plane(_load(args.path), spec)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(svg, encoding="utf-8")
    return 0


def cmd_phingo(args) -> int:
    if args.vocab == "builtin":
        vocabulary = default_phingo_vocabulary()
    else:
        lines = Path(args.vocab).read_text(encoding="utf-8").splitlines()
        vocabulary = [ln.strip() for ln in lines if ln.strip() and not ln.startswith("#")]
    cards = generate_phingo_cards(vocabulary, args.n_cards, args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    for i, card in enumerate(cards, 1):
        text = "\n".join("\t".join(row) for row in card.rows()) + "\n"
        (args.out / f"card_{i:03d}.txt").write_text(text, encoding="utf-8")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (OSError, DocumentParseError, DocumentSchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CampaignValidationError as exc:
        for violation in exc.report.violations:
            print(violation.message, file=sys.stderr)
        return 2
    except (
        EmptyCampaignError,
        NoHumanLayerError,
        UndatedCampaignError,
        InsufficientVocabularyError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
