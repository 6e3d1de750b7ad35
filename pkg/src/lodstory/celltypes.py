"""Render semantics for raw result cells (number, link, media, geo, text)
and the variable-naming conventions that drive component rendering."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .gateway import Cell

# Variable-naming conventions. These names are a documented contract: the
# UI info boxes and the story-format reference quote them verbatim.
CHART_LABEL_VAR = "label"
CHART_VALUE_VAR = "value"
MAP_LAT_VAR = "lat"
MAP_LON_VAR = "long"
MAP_COORDS_VAR = "coordinates"
MAP_NAME_VAR = "name"

NAMING_CONVENTION_DOCS = {
    CHART_LABEL_VAR: 'charts read the category (x-axis) from the "label" variable',
    CHART_VALUE_VAR: 'charts and counters read the numeric value from the "value" variable',
    MAP_LAT_VAR: 'maps read the decimal latitude from the "lat" variable',
    MAP_LON_VAR: 'maps read the decimal longitude from the "long" variable',
    MAP_COORDS_VAR: 'maps alternatively read a single "coordinates" variable, '
                    'either "lat,lon" decimals or WKT "POINT(lon lat)"',
    MAP_NAME_VAR: 'maps label each point with the "name" variable',
    "filters": "any additional map variable becomes a filter facet",
}

XSD = "http://www.w3.org/2001/XMLSchema#"
NUMERIC_DATATYPES = frozenset(
    XSD + local
    for local in (
        "integer", "decimal", "double", "float", "int", "long", "short", "byte",
        "nonNegativeInteger", "nonPositiveInteger", "positiveInteger",
        "negativeInteger", "unsignedInt", "unsignedLong", "unsignedShort",
        "unsignedByte",
    )
)

AUDIO_SUFFIXES = (".mp3", ".wav", ".ogg")
VIDEO_SUFFIXES = (".mp4", ".webm")
IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg", ".gif", ".svg")
VIDEO_HOST_RE = re.compile(
    r"^https?://(www\.)?(youtube\.com/watch|youtu\.be/|vimeo\.com/\d)", re.I
)

# Strict numeral: no thousands separators, no inf/nan words.
_NUMERAL_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")
_URL_RE = re.compile(r"^https?://\S+$", re.I)
_WKT_POINT_RE = re.compile(
    r"^\s*POINT\s*\(\s*([+-]?\d+(?:\.\d+)?)\s+([+-]?\d+(?:\.\d+)?)\s*\)\s*$", re.I
)


class OutOfRange(ValueError):
    """Coordinates outside valid degree ranges."""


@dataclass(frozen=True)
class Render:
    kind: str  # number | link | audio | video | image | geo | text


@dataclass(frozen=True)
class NumberRender(Render):
    kind: str = field(default="number", init=False)
    value: float = 0.0


@dataclass(frozen=True)
class UrlRender(Render):
    """link / audio / video / image: a URL plus an optional label."""

    kind: str = "link"
    url: str = ""
    label: str | None = None


@dataclass(frozen=True)
class GeoRender(Render):
    kind: str = field(default="geo", init=False)
    lat: float = 0.0
    lon: float = 0.0


@dataclass(frozen=True)
class TextRender(Render):
    kind: str = field(default="text", init=False)
    text: str = ""


@dataclass(frozen=True)
class TypedCell:
    raw: Cell
    render: Render


@dataclass(frozen=True)
class LocatedRow:
    """A row's parsed map location plus its leftover metadata cells."""

    lat: float
    lon: float
    metadata: dict[str, Cell]


def parse_number(cell: Cell) -> float | None:
    """Numeric value of a cell, or None if it has none.

    Accepts literals with numeric XSD datatypes and bare plain numerals;
    thousands separators and lang-tagged text never qualify.
    """
    if cell.kind != "literal" or cell.lang is not None:
        return None
    text = cell.value.strip()
    if cell.datatype is not None and cell.datatype not in NUMERIC_DATATYPES:
        return None
    if not _NUMERAL_RE.match(text):
        return None
    try:
        return float(text)
    except ValueError:
        return None


def _media_render(url: str) -> UrlRender:
    path = url.split("#", 1)[0].split("?", 1)[0].lower()
    if path.endswith(AUDIO_SUFFIXES):
        return UrlRender(kind="audio", url=url)
    if path.endswith(VIDEO_SUFFIXES) or VIDEO_HOST_RE.match(url):
        return UrlRender(kind="video", url=url)
    if path.endswith(IMAGE_SUFFIXES):
        return UrlRender(kind="image", url=url)
    return UrlRender(kind="link", url=url)


def classify_cell(cell: Cell) -> TypedCell:
    """Interpret a raw cell for rendering. Total: falls back to text."""
    number = parse_number(cell)
    if number is not None:
        return TypedCell(raw=cell, render=NumberRender(value=number))
    if cell.kind == "uri":
        return TypedCell(raw=cell, render=_media_render(cell.value))
    if cell.kind == "literal" and cell.lang is None and _URL_RE.match(cell.value):
        return TypedCell(raw=cell, render=_media_render(cell.value))
    return TypedCell(raw=cell, render=TextRender(text=cell.value))


def _check_range(lat: float, lon: float) -> None:
    if not (-90.0 <= lat <= 90.0):
        raise OutOfRange(f"latitude {lat} outside [-90, 90]")
    if not (-180.0 <= lon <= 180.0):
        raise OutOfRange(f"longitude {lon} outside [-180, 180]")


def _decimal(cell: Cell | None) -> float | None:
    if cell is None:
        return None
    return parse_number(cell)


def parse_geo(row: dict[str, Cell]) -> LocatedRow | None:
    """Extract a geographic point from a row per the map conventions.

    Reads the "lat"/"long" pair, or a single "coordinates" value as either
    "lat,lon" decimals or WKT "POINT(lon lat)". Returns None when no
    parseable location is present; raises OutOfRange on bad degrees.
    Variables consumed as location never reappear in the metadata.
    """
    lat = _decimal(row.get(MAP_LAT_VAR))
    lon = _decimal(row.get(MAP_LON_VAR))
    if lat is not None and lon is not None:
        _check_range(lat, lon)
        meta = {k: v for k, v in row.items() if k not in (MAP_LAT_VAR, MAP_LON_VAR)}
        return LocatedRow(lat=lat, lon=lon, metadata=meta)

    coords = row.get(MAP_COORDS_VAR)
    if coords is not None:
        point = _parse_coordinates(coords.value)
        if point is not None:
            _check_range(*point)
            meta = {k: v for k, v in row.items() if k != MAP_COORDS_VAR}
            return LocatedRow(lat=point[0], lon=point[1], metadata=meta)
    return None


def _parse_coordinates(text: str) -> tuple[float, float] | None:
    wkt = _WKT_POINT_RE.match(text)
    if wkt:
        # WKT axis order is lon-lat.
        return float(wkt.group(2)), float(wkt.group(1))
    parts = text.split(",")
    if len(parts) == 2:
        a, b = parts[0].strip(), parts[1].strip()
        if _NUMERAL_RE.match(a) and _NUMERAL_RE.match(b):
            return float(a), float(b)
    return None
