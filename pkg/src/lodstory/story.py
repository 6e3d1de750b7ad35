"""Story document model: an ordered list of components plus metadata, with
edit operations and a stable JSON serialization (schema version 1).

The JSON form is the single source of truth: it is the persistence format,
the JSON export, and the publication payload.
"""

from __future__ import annotations

import json
import re
import urllib.parse
from dataclasses import dataclass, field, replace
from typing import Union

from .celltypes import (
    CHART_LABEL_VAR,
    CHART_VALUE_VAR,
    MAP_COORDS_VAR,
    MAP_LAT_VAR,
    MAP_LON_VAR,
)
from .gateway import NotSelectQuery, extract_select_variables

SCHEMA_VERSION = 1
CHART_KINDS = ("bar", "line", "scatter", "doughnut")
TEMPLATES = ("statistics",)

# Palette applied to new stories; documented in the story-format reference.
DEFAULT_PALETTE = (
    "#4E79A7", "#F28E2B", "#E15759", "#76B7B2", "#59A14F", "#EDC948",
)

SEARCH_PLACEHOLDER = "$SEARCH"
VALUE_PLACEHOLDER = "$VALUE"

_PALETTE_RE = re.compile(r"^#[0-9A-Fa-f]{6}$")
_SLUG_RE = re.compile(r"^[a-z0-9]+(-[a-z0-9]+)*$")


class StoryError(Exception):
    """Base for story-model failures."""


class InvalidEndpointUrl(StoryError):
    pass


class EmptyTitle(StoryError):
    pass


class UnknownTemplate(StoryError):
    pass


class UnknownComponent(StoryError):
    pass


class InvalidPosition(StoryError):
    pass


class BrokenActionReference(StoryError):
    """An action's source is missing, later in the list, or not chainable."""


class DuplicateComponentId(StoryError):
    pass


class SchemaVersionUnsupported(StoryError):
    pass


class SchemaViolation(StoryError):
    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


# ---------------------------------------------------------------------------
# Components
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TextComponent:
    type = "text"
    id: str
    html: str


@dataclass(frozen=True)
class CounterComponent:
    type = "counter"
    id: str
    label: str
    query: str


@dataclass(frozen=True)
class ChartComponent:
    type = "chart"
    id: str
    chart_kind: str
    title: str
    query: str

    def __post_init__(self):
        if self.chart_kind not in CHART_KINDS:
            raise ValueError(f"unknown chart kind {self.chart_kind!r}")


@dataclass(frozen=True)
class TableComponent:
    type = "table"
    id: str
    title: str
    query: str


@dataclass(frozen=True)
class MapComponent:
    type = "map"
    id: str
    query: str
    filter_vars: tuple[str, ...] = ()


@dataclass(frozen=True)
class TextSearchComponent:
    type = "text_search"
    id: str
    query_template: str


@dataclass(frozen=True)
class ActionComponent:
    type = "action"
    id: str
    label: str
    query_template: str
    source: str  # id of an earlier text_search or action
    column: str  # variable whose cell value feeds the template


Component = Union[
    TextComponent, CounterComponent, ChartComponent, TableComponent,
    MapComponent, TextSearchComponent, ActionComponent,
]

CHAINABLE_TYPES = ("text_search", "action")
DATA_TYPES = ("counter", "chart", "table", "map", "text_search", "action")


def _check_components(components: tuple[Component, ...]) -> None:
    seen: dict[str, str] = {}
    for comp in components:
        if not comp.id:
            raise SchemaViolation("components", "component id must be non-empty")
        if comp.id in seen:
            raise DuplicateComponentId(comp.id)
        if comp.type == "action":
            source_type = seen.get(comp.source)
            if source_type is None:
                raise BrokenActionReference(
                    f"action {comp.id!r} sources {comp.source!r}, which does not precede it"
                )
            if source_type not in CHAINABLE_TYPES:
                raise BrokenActionReference(
                    f"action {comp.id!r} sources a {source_type} component"
                )
        seen[comp.id] = comp.type


@dataclass(frozen=True)
class Story:
    id: str
    title: str
    endpoint: str
    subtitle: str | None = None
    description: str | None = None
    section: str | None = None
    palette: tuple[str, ...] = DEFAULT_PALETTE
    components: tuple[Component, ...] = ()
    # Bookkeeping for optimistic concurrency, not part of the story's value.
    revision: int = field(default=0, compare=False)

    def __post_init__(self):
        if not self.title:
            raise EmptyTitle("story title must be non-empty")
        for color in self.palette:
            if not _PALETTE_RE.match(color):
                raise ValueError(f"palette entry {color!r} is not #RRGGBB")
        _check_components(self.components)

    def component(self, component_id: str) -> Component:
        for comp in self.components:
            if comp.id == component_id:
                return comp
        raise UnknownComponent(component_id)


# ---------------------------------------------------------------------------
# Edits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AddComponent:
    component: Component
    position: int


@dataclass(frozen=True)
class UpdateComponent:
    id: str
    component: Component


@dataclass(frozen=True)
class RemoveComponent:
    id: str


@dataclass(frozen=True)
class MoveComponent:
    id: str
    position: int


Edit = Union[AddComponent, UpdateComponent, RemoveComponent, MoveComponent]


def _index_of(components: list[Component], component_id: str) -> int:
    for i, comp in enumerate(components):
        if comp.id == component_id:
            return i
    raise UnknownComponent(component_id)


def apply_edit(story: Story, edit: Edit) -> Story:
    """Return a new story with the edit applied and revision bumped by one.

    Action references are revalidated after every edit; an edit that would
    orphan or forward-reference an action source raises BrokenActionReference
    and leaves the input untouched.
    """
    comps = list(story.components)
    if isinstance(edit, AddComponent):
        if not 0 <= edit.position <= len(comps):
            raise InvalidPosition(f"add position {edit.position} outside [0, {len(comps)}]")
        comps.insert(edit.position, edit.component)
    elif isinstance(edit, UpdateComponent):
        i = _index_of(comps, edit.id)
        comps[i] = replace(edit.component, id=edit.id)
    elif isinstance(edit, RemoveComponent):
        del comps[_index_of(comps, edit.id)]
    elif isinstance(edit, MoveComponent):
        if not 0 <= edit.position <= len(comps):
            raise InvalidPosition(f"move position {edit.position} outside [0, {len(comps)}]")
        i = _index_of(comps, edit.id)
        comp = comps.pop(i)
        comps.insert(min(edit.position, len(comps)), comp)
    else:
        raise TypeError(f"unknown edit {edit!r}")
    return replace(story, components=tuple(comps), revision=story.revision + 1)


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def slugify(title: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", title.lower()).strip("-")
    return slug or "story"


def create_story(
    *,
    template: str = "statistics",
    title: str,
    endpoint: str,
    section: str | None = None,
    taken_ids: "set[str] | frozenset[str] | tuple[str, ...]" = (),
) -> Story:
    """Build an empty story. The id is a slug of the title, suffixed with
    -2, -3, ... while it collides with taken_ids."""
    if template not in TEMPLATES:
        raise UnknownTemplate(template)
    if not title or not title.strip():
        raise EmptyTitle("title must be non-empty")
    parsed = urllib.parse.urlparse(endpoint)
    if parsed.scheme not in ("http", "https") or not parsed.netloc:
        raise InvalidEndpointUrl(endpoint)

    base = slugify(title)
    slug, n = base, 1
    taken = set(taken_ids)
    while slug in taken:
        n += 1
        slug = f"{base}-{n}"
    return Story(id=slug, title=title.strip(), endpoint=endpoint, section=section)


# ---------------------------------------------------------------------------
# Serialization (schema version 1, stable key order)
# ---------------------------------------------------------------------------

def component_to_doc(comp: Component) -> dict:
    doc: dict = {"id": comp.id, "type": comp.type}
    if isinstance(comp, TextComponent):
        doc["html"] = comp.html
    elif isinstance(comp, CounterComponent):
        doc["label"] = comp.label
        doc["query"] = comp.query
    elif isinstance(comp, ChartComponent):
        doc["chart_kind"] = comp.chart_kind
        doc["title"] = comp.title
        doc["query"] = comp.query
    elif isinstance(comp, TableComponent):
        doc["title"] = comp.title
        doc["query"] = comp.query
    elif isinstance(comp, MapComponent):
        doc["query"] = comp.query
        doc["filter_vars"] = list(comp.filter_vars)
    elif isinstance(comp, TextSearchComponent):
        doc["query_template"] = comp.query_template
    elif isinstance(comp, ActionComponent):
        doc["label"] = comp.label
        doc["query_template"] = comp.query_template
        doc["source"] = comp.source
        doc["column"] = comp.column
    return doc


def story_to_doc(story: Story) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "id": story.id,
        "title": story.title,
        "subtitle": story.subtitle,
        "description": story.description,
        "endpoint": story.endpoint,
        "section": story.section,
        "palette": list(story.palette),
        "components": [component_to_doc(c) for c in story.components],
    }


def serialize_story(story: Story) -> bytes:
    """Emit the story as schema-version-1 JSON bytes, deterministically."""
    return (json.dumps(story_to_doc(story), ensure_ascii=False, indent=2) + "\n").encode("utf-8")


_COMPONENT_FIELDS = {
    "text": ("html",),
    "counter": ("label", "query"),
    "chart": ("chart_kind", "title", "query"),
    "table": ("title", "query"),
    "map": ("query", "filter_vars"),
    "text_search": ("query_template",),
    "action": ("label", "query_template", "source", "column"),
}


def _expect(doc: dict, key: str, types, path: str, *, optional: bool = False):
    if key not in doc:
        if optional:
            return None
        raise SchemaViolation(f"{path}.{key}", "missing")
    value = doc[key]
    if optional and value is None:
        return None
    if not isinstance(value, types):
        raise SchemaViolation(f"{path}.{key}", f"expected {types}, got {type(value).__name__}")
    return value


def component_from_doc(doc: dict, path: str) -> Component:
    if not isinstance(doc, dict):
        raise SchemaViolation(path, "component must be an object")
    ctype = _expect(doc, "type", str, path)
    if ctype not in _COMPONENT_FIELDS:
        raise SchemaViolation(f"{path}.type", f"unknown component type {ctype!r}")
    cid = _expect(doc, "id", str, path)
    if not cid:
        raise SchemaViolation(f"{path}.id", "must be non-empty")
    allowed = {"id", "type", *_COMPONENT_FIELDS[ctype]}
    extra = set(doc) - allowed
    if extra:
        raise SchemaViolation(path, f"unexpected keys {sorted(extra)}")

    if ctype == "text":
        return TextComponent(id=cid, html=_expect(doc, "html", str, path))
    if ctype == "counter":
        comp = CounterComponent(
            id=cid, label=_expect(doc, "label", str, path),
            query=_expect(doc, "query", str, path),
        )
    elif ctype == "chart":
        kind = _expect(doc, "chart_kind", str, path)
        if kind not in CHART_KINDS:
            raise SchemaViolation(f"{path}.chart_kind", f"must be one of {CHART_KINDS}")
        comp = ChartComponent(
            id=cid, chart_kind=kind,
            title=_expect(doc, "title", str, path),
            query=_expect(doc, "query", str, path),
        )
    elif ctype == "table":
        comp = TableComponent(
            id=cid, title=_expect(doc, "title", str, path),
            query=_expect(doc, "query", str, path),
        )
    elif ctype == "map":
        filter_vars = _expect(doc, "filter_vars", list, path)
        if not all(isinstance(v, str) for v in filter_vars):
            raise SchemaViolation(f"{path}.filter_vars", "entries must be strings")
        comp = MapComponent(
            id=cid, query=_expect(doc, "query", str, path),
            filter_vars=tuple(filter_vars),
        )
    elif ctype == "text_search":
        comp = TextSearchComponent(id=cid, query_template=_expect(doc, "query_template", str, path))
    else:
        comp = ActionComponent(
            id=cid, label=_expect(doc, "label", str, path),
            query_template=_expect(doc, "query_template", str, path),
            source=_expect(doc, "source", str, path),
            column=_expect(doc, "column", str, path),
        )

    # Component invariants on persisted documents: data variants carry a
    # non-empty query or template (in-memory drafts may still be blank).
    if ctype in ("counter", "chart", "table", "map") and not comp.query.strip():
        raise SchemaViolation(f"{path}.query", "must be non-empty")
    if ctype == "text_search" and SEARCH_PLACEHOLDER not in comp.query_template:
        raise SchemaViolation(f"{path}.query_template", f"must contain {SEARCH_PLACEHOLDER}")
    if ctype == "action":
        if VALUE_PLACEHOLDER not in comp.query_template:
            raise SchemaViolation(f"{path}.query_template", f"must contain {VALUE_PLACEHOLDER}")
        if not comp.column:
            raise SchemaViolation(f"{path}.column", "must be non-empty")
    return comp


def deserialize_story(data: bytes) -> Story:
    """Parse and fully validate schema-version-1 story JSON."""
    try:
        doc = json.loads(data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaViolation("$", f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaViolation("$", "top-level value must be an object")

    version = doc.get("version")
    if version is None:
        raise SchemaViolation("version", "missing")
    if version != SCHEMA_VERSION:
        raise SchemaVersionUnsupported(f"schema version {version!r} not supported")

    allowed = {"version", "id", "title", "subtitle", "description",
               "endpoint", "section", "palette", "components"}
    extra = set(doc) - allowed
    if extra:
        raise SchemaViolation("$", f"unexpected keys {sorted(extra)}")

    story_id = _expect(doc, "id", str, "$")
    if not _SLUG_RE.match(story_id):
        raise SchemaViolation("$.id", "must be a lowercase hyphenated slug")
    title = _expect(doc, "title", str, "$")
    if not title:
        raise SchemaViolation("$.title", "must be non-empty")
    endpoint = _expect(doc, "endpoint", str, "$")
    parsed = urllib.parse.urlparse(endpoint)
    if parsed.scheme not in ("http", "https") or not parsed.netloc:
        raise SchemaViolation("$.endpoint", "must be an absolute http(s) URL")

    palette = _expect(doc, "palette", list, "$")
    for k, color in enumerate(palette):
        if not isinstance(color, str) or not _PALETTE_RE.match(color):
            raise SchemaViolation(f"$.palette[{k}]", "must match #RRGGBB")

    comps_doc = _expect(doc, "components", list, "$")
    components = tuple(
        component_from_doc(c, f"components[{k}]") for k, c in enumerate(comps_doc)
    )
    seen: dict[str, str] = {}
    for k, comp in enumerate(components):
        if comp.id in seen:
            raise SchemaViolation(f"components[{k}].id", f"duplicate component id {comp.id!r}")
        if comp.type == "action":
            source_type = seen.get(comp.source)
            if source_type is None:
                raise SchemaViolation(
                    f"components[{k}].source",
                    f"action {comp.id!r} sources {comp.source!r}, "
                    "which does not precede it",
                )
            if source_type not in CHAINABLE_TYPES:
                raise SchemaViolation(
                    f"components[{k}].source",
                    f"action {comp.id!r} may only source text_search or action "
                    f"components, not {source_type}",
                )
        seen[comp.id] = comp.type

    return Story(
        id=story_id,
        title=title,
        endpoint=endpoint,
        subtitle=_expect(doc, "subtitle", str, "$", optional=True),
        description=_expect(doc, "description", str, "$", optional=True),
        section=_expect(doc, "section", str, "$", optional=True),
        palette=tuple(palette),
        components=components,
    )


# ---------------------------------------------------------------------------
# Lint
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    component_id: str | None
    message: str


def validate_story(story: Story) -> list[Diagnostic]:
    """Non-throwing lint pass over a story; publication requires that no
    error-severity diagnostics remain."""
    out: list[Diagnostic] = []

    def error(cid, msg):
        out.append(Diagnostic("error", cid, msg))

    def warn(cid, msg):
        out.append(Diagnostic("warning", cid, msg))

    parsed = urllib.parse.urlparse(story.endpoint)
    if parsed.scheme not in ("http", "https") or not parsed.netloc:
        error(None, f"endpoint is not an absolute http(s) URL: {story.endpoint!r}")

    has_chart = False
    for comp in story.components:
        if comp.type in ("counter", "chart", "table", "map"):
            if not comp.query.strip():
                error(comp.id, f"{comp.type} has an empty query")
                continue
        if comp.type in ("text_search", "action"):
            placeholder = SEARCH_PLACEHOLDER if comp.type == "text_search" else VALUE_PLACEHOLDER
            if not comp.query_template.strip():
                error(comp.id, f"{comp.type} has an empty query template")
                continue
            if placeholder not in comp.query_template:
                error(comp.id, f"{comp.type} template does not contain {placeholder}")
            continue

        if comp.type == "chart":
            has_chart = True
            try:
                projected = extract_select_variables(comp.query)
            except NotSelectQuery:
                error(comp.id, "chart query is not a SELECT query")
                continue
            missing = [v for v in (CHART_LABEL_VAR, CHART_VALUE_VAR) if v not in projected]
            if missing:
                warn(comp.id, "chart query does not project "
                              + " and ".join(f"?{v}" for v in missing))
        elif comp.type == "map":
            try:
                projected = extract_select_variables(comp.query)
            except NotSelectQuery:
                error(comp.id, "map query is not a SELECT query")
                continue
            has_pair = MAP_LAT_VAR in projected and MAP_LON_VAR in projected
            if not has_pair and MAP_COORDS_VAR not in projected:
                warn(comp.id, f"map query projects neither ?{MAP_LAT_VAR}/?{MAP_LON_VAR} "
                              f"nor ?{MAP_COORDS_VAR}")
        elif comp.type == "counter":
            try:
                extract_select_variables(comp.query)
            except NotSelectQuery:
                error(comp.id, "counter query is not a SELECT query")

    if has_chart and len(story.palette) < 2:
        warn(None, "palette has fewer than 2 colors; chart series will repeat")
    return out
