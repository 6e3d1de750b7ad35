"""Story and component exports: self-contained HTML, PDF, JSON, CSV, SVG,
and embeddable fragments."""

from __future__ import annotations

from dataclasses import dataclass

from ..evaluate import RenderPayload
from ..story import Story, serialize_story
from .html import export_component_embed, render_component_page, render_story_html
from .pdf import render_story_pdf
from .sanitize import sanitize_html
from .svg import EmptySeries, export_component_svg
from .tabular import NotTabular, export_component_csv

SNAPSHOT = "snapshot"  # data embedded at export time (default: citable)
LIVE = "live"          # exported page re-queries the endpoint at view time

MEDIA_TYPES = {
    "html": "text/html; charset=utf-8",
    "pdf": "application/pdf",
    "json": "application/json",
    "csv": "text/csv; charset=utf-8",
    "svg": "image/svg+xml",
}


class MissingPayload(ValueError):
    """Snapshot export requested but a data component was not evaluated."""


class UnsupportedFormat(ValueError):
    pass


@dataclass(frozen=True)
class SnapshotPolicy:
    mode: str = SNAPSHOT

    def __post_init__(self):
        if self.mode not in (SNAPSHOT, LIVE):
            raise ValueError(f"unknown snapshot mode {self.mode!r}")


@dataclass(frozen=True)
class ExportBundle:
    format: str
    data: bytes
    media_type: str
    suggested_filename: str

    def __post_init__(self):
        if not self.data:
            raise ValueError("export produced no bytes")


# Components that must be evaluated before a snapshot export.
PAYLOAD_TYPES = ("counter", "chart", "table", "map")


def export_story(
    story: Story,
    payloads: dict[str, RenderPayload],
    format: str,
    policy: SnapshotPolicy = SnapshotPolicy(),
) -> ExportBundle:
    """Render a story into one of the document export formats.

    JSON ignores payloads entirely (it is the story configuration);
    snapshot HTML/PDF require a payload for every data component.
    """
    if format not in ("html", "pdf", "json"):
        raise UnsupportedFormat(format)
    if format != "json" and policy.mode == SNAPSHOT:
        for comp in story.components:
            if comp.type in PAYLOAD_TYPES and comp.id not in payloads:
                raise MissingPayload(comp.id)

    if format == "json":
        data = serialize_story(story)
    elif format == "html":
        data = render_story_html(story, payloads, live=policy.mode == LIVE)
    else:
        suffix = " (live queries omitted)" if policy.mode == LIVE else ""
        data = render_story_pdf(
            story, {} if policy.mode == LIVE else payloads, title_suffix=suffix
        )
    return ExportBundle(
        format=format,
        data=data,
        media_type=MEDIA_TYPES[format],
        suggested_filename=f"{story.id}.{format}",
    )


def component_filename(story: Story, component_id: str, extension: str) -> str:
    return f"{story.id}-{component_id}.{extension}"


__all__ = [
    "ExportBundle",
    "EmptySeries",
    "LIVE",
    "MEDIA_TYPES",
    "MissingPayload",
    "NotTabular",
    "PAYLOAD_TYPES",
    "SNAPSHOT",
    "SnapshotPolicy",
    "UnsupportedFormat",
    "component_filename",
    "export_component_csv",
    "export_component_embed",
    "export_component_svg",
    "export_story",
    "render_component_page",
    "render_story_html",
    "render_story_pdf",
    "sanitize_html",
]
