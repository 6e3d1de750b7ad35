"""Turns result sets into render payloads per component kind, and
instantiates query templates for text-search / action chains."""

from __future__ import annotations

import logging
import re
import urllib.parse
from dataclasses import dataclass

from .celltypes import (
    CHART_LABEL_VAR,
    CHART_VALUE_VAR,
    LocatedRow,
    OutOfRange,
    TypedCell,
    classify_cell,
    parse_geo,
    parse_number,
)
from .gateway import Cell, ResultSet, SparqlQuery, _scan_tokens
from .story import SEARCH_PLACEHOLDER, VALUE_PLACEHOLDER

logger = logging.getLogger(__name__)


class EvaluationError(Exception):
    """Base for payload-evaluation failures."""


class NoRows(EvaluationError):
    pass


class NotNumeric(EvaluationError):
    pass


class MissingVariable(EvaluationError):
    def __init__(self, var: str):
        super().__init__(f"result set does not project ?{var}")
        self.var = var


class NonNumericX(EvaluationError):
    """Scatter charts need numeric labels for the x axis."""


class PlaceholderMissing(EvaluationError):
    pass


class UnescapableValue(EvaluationError):
    pass


# ---------------------------------------------------------------------------
# Payloads
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CardPayload:
    kind = "card"
    value: float
    label: str


@dataclass(frozen=True)
class SeriesPayload:
    kind = "series"
    chart_kind: str
    labels: tuple[str, ...]
    values: tuple[float, ...]
    dropped: int = 0

    def __post_init__(self):
        if len(self.labels) != len(self.values):
            raise ValueError("labels and values must have equal length")


@dataclass(frozen=True)
class TypedTablePayload:
    kind = "typed_table"
    vars: tuple[str, ...]
    rows: tuple[dict[str, TypedCell], ...]


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lon: float
    metadata: dict[str, Cell]


@dataclass(frozen=True)
class GeoSetPayload:
    kind = "geo_set"
    points: tuple[GeoPoint, ...]
    facets: dict[str, tuple[str, ...]]
    dropped: int = 0


RenderPayload = CardPayload | SeriesPayload | TypedTablePayload | GeoSetPayload


# ---------------------------------------------------------------------------
# Evaluators
# ---------------------------------------------------------------------------

def eval_counter(rs: ResultSet, label: str) -> CardPayload:
    """Card from the first projected variable of the first row.

    Extra rows or variables are ignored (logged); a counter query is
    expected to return a single aggregate.
    """
    if not rs.rows:
        raise NoRows("counter query returned no rows")
    if not rs.vars:
        raise NotNumeric("counter query projects no variables")
    first_var = rs.vars[0]
    cell = rs.rows[0].get(first_var)
    number = parse_number(cell) if cell is not None else None
    if number is None:
        raise NotNumeric(f"?{first_var} of the first row is not numeric")
    if len(rs.rows) > 1 or len(rs.vars) > 1:
        logger.warning(
            "counter %r: ignoring %d extra row(s) and %d extra variable(s)",
            label, len(rs.rows) - 1, len(rs.vars) - 1,
        )
    return CardPayload(value=number, label=label)


def eval_chart(rs: ResultSet, chart_kind: str) -> SeriesPayload:
    """Series from the ?label / ?value convention columns.

    Rows missing either variable, or with a non-numeric value, are dropped
    and counted. Scatter charts use the label as a numeric x axis: a
    present-but-non-numeric label is a configuration error, not messy data.
    """
    for required in (CHART_LABEL_VAR, CHART_VALUE_VAR):
        if required not in rs.vars:
            raise MissingVariable(required)
    labels: list[str] = []
    values: list[float] = []
    dropped = 0
    for row in rs.rows:
        label_cell = row.get(CHART_LABEL_VAR)
        value_cell = row.get(CHART_VALUE_VAR)
        value = parse_number(value_cell) if value_cell is not None else None
        if label_cell is None or value is None:
            dropped += 1
            continue
        if chart_kind == "scatter" and parse_number(label_cell) is None:
            raise NonNumericX(f"scatter label {label_cell.value!r} is not numeric")
        labels.append(label_cell.value)
        values.append(value)
    return SeriesPayload(
        chart_kind=chart_kind, labels=tuple(labels), values=tuple(values), dropped=dropped
    )


def eval_table(rs: ResultSet) -> TypedTablePayload:
    """Every cell classified for rendering; column order follows the query."""
    rows = tuple(
        {var: classify_cell(cell) for var, cell in row.items()} for row in rs.rows
    )
    return TypedTablePayload(vars=rs.vars, rows=rows)


def eval_map(rs: ResultSet, filter_vars: tuple[str, ...] | list[str]) -> GeoSetPayload:
    """Geolocated points plus facet values for the chosen filter variables.

    Rows without a parseable (in-range) location are dropped and counted;
    facets are distinct values of each filter variable over retained points.
    """
    points: list[GeoPoint] = []
    dropped = 0
    for row in rs.rows:
        try:
            located: LocatedRow | None = parse_geo(row)
        except OutOfRange:
            located = None
        if located is None:
            dropped += 1
            continue
        points.append(GeoPoint(lat=located.lat, lon=located.lon, metadata=located.metadata))

    facets: dict[str, tuple[str, ...]] = {}
    for var in filter_vars:
        distinct = {p.metadata[var].value for p in points if var in p.metadata}
        facets[var] = tuple(sorted(distinct))
    return GeoSetPayload(points=tuple(points), facets=facets, dropped=dropped)


# ---------------------------------------------------------------------------
# Query templates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QueryTemplate:
    """Query text with one placeholder token, $SEARCH or $VALUE."""

    text: str
    placeholder: str

    @classmethod
    def from_text(cls, text: str) -> "QueryTemplate":
        has_search = SEARCH_PLACEHOLDER in text
        has_value = VALUE_PLACEHOLDER in text
        if has_search and has_value:
            raise PlaceholderMissing(
                f"template mixes {SEARCH_PLACEHOLDER} and {VALUE_PLACEHOLDER}"
            )
        if has_search:
            return cls(text=text, placeholder=SEARCH_PLACEHOLDER)
        if has_value:
            return cls(text=text, placeholder=VALUE_PLACEHOLDER)
        raise PlaceholderMissing(
            f"template contains neither {SEARCH_PLACEHOLDER} nor {VALUE_PLACEHOLDER}"
        )


# IRIs may not contain control characters, space, or these delimiters.
_IRI_FORBIDDEN = re.compile(r'[\x00-\x20<>"{}|^`\\]')
_ABSOLUTE_IRI = re.compile(r"^[A-Za-z][A-Za-z0-9+.-]*:")

_LITERAL_ESCAPES = {
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
}


def escape_literal(value: str) -> str:
    """Quote a string as a SPARQL literal term."""
    if "\x00" in value:
        raise UnescapableValue("value contains NUL")
    escaped = "".join(_LITERAL_ESCAPES.get(ch, ch) for ch in value)
    return f'"{escaped}"'


def escape_iri(value: str) -> str:
    """Wrap an absolute IRI in angle brackets, rejecting illegal characters."""
    if not _ABSOLUTE_IRI.match(value):
        raise UnescapableValue(f"not an absolute IRI: {value!r}")
    if _IRI_FORBIDDEN.search(value):
        raise UnescapableValue("IRI contains forbidden characters")
    return f"<{value}>"


def looks_like_iri(value: str) -> bool:
    """True when a user-typed value should be treated as an IRI term."""
    if _IRI_FORBIDDEN.search(value):
        return False
    parsed = urllib.parse.urlparse(value)
    return parsed.scheme in ("http", "https", "urn") and bool(parsed.netloc or parsed.path)


def instantiate_template(
    tpl: QueryTemplate, user_value: str, *, as_iri: bool | None = None
) -> SparqlQuery:
    """Replace every placeholder occurrence with a safely escaped term.

    as_iri=True emits <iri>, as_iri=False a quoted literal; None detects
    IRI shape (values clicked from URI cells should pass as_iri=True).
    The result is re-scanned to confirm no placeholder survives outside
    string/IRI tokens.
    """
    token_re = re.compile(re.escape(tpl.placeholder) + r"(?![A-Za-z0-9_])")
    if not token_re.search(tpl.text):
        raise PlaceholderMissing(f"template does not contain {tpl.placeholder}")
    if as_iri is None:
        as_iri = looks_like_iri(user_value)
    term = escape_iri(user_value) if as_iri else escape_literal(user_value)
    instantiated = token_re.sub(lambda _: term, tpl.text)

    for kind, val, _ in _scan_tokens(instantiated):
        if kind == "var" and f"${val}" == tpl.placeholder:
            raise UnescapableValue("placeholder survived instantiation")
    return SparqlQuery.from_text(instantiated)


# ---------------------------------------------------------------------------
# Wire format for payloads (preview API, embeds, HTML snapshot data)
# ---------------------------------------------------------------------------

def typed_cell_to_doc(cell: TypedCell) -> dict:
    render = cell.render
    doc: dict = {"render": render.kind, "value": cell.raw.value}
    if render.kind == "number":
        doc["number"] = render.value
    elif render.kind in ("link", "audio", "video", "image"):
        doc["url"] = render.url
    elif render.kind == "geo":
        doc["lat"] = render.lat
        doc["lon"] = render.lon
    return doc


def payload_to_doc(payload: RenderPayload) -> dict:
    if isinstance(payload, CardPayload):
        return {"kind": "card", "value": payload.value, "label": payload.label}
    if isinstance(payload, SeriesPayload):
        return {
            "kind": "series",
            "chart_kind": payload.chart_kind,
            "labels": list(payload.labels),
            "values": list(payload.values),
            "dropped": payload.dropped,
        }
    if isinstance(payload, TypedTablePayload):
        return {
            "kind": "typed_table",
            "vars": list(payload.vars),
            "rows": [
                [typed_cell_to_doc(row[v]) if v in row else None for v in payload.vars]
                for row in payload.rows
            ],
        }
    if isinstance(payload, GeoSetPayload):
        return {
            "kind": "geo_set",
            "points": [
                {
                    "lat": p.lat,
                    "lon": p.lon,
                    "metadata": {k: c.value for k, c in sorted(p.metadata.items())},
                }
                for p in payload.points
            ],
            "facets": {var: list(vals) for var, vals in payload.facets.items()},
            "dropped": payload.dropped,
        }
    raise TypeError(f"unknown payload {payload!r}")
