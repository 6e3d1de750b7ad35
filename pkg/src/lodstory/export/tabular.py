"""CSV export for table and series payloads (RFC 4180 quoting, CRLF)."""

from __future__ import annotations

import csv
import io

from ..evaluate import RenderPayload, SeriesPayload, TypedTablePayload


class NotTabular(TypeError):
    """Payload has no tabular form (cards, geo sets)."""


def format_value(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(value)


def export_component_csv(payload: RenderPayload) -> bytes:
    """Serialize a typed table or series to CSV bytes."""
    buffer = io.StringIO()
    writer = csv.writer(buffer)  # excel dialect: RFC 4180 quoting, CRLF
    if isinstance(payload, TypedTablePayload):
        writer.writerow(payload.vars)
        for row in payload.rows:
            writer.writerow(
                [row[v].raw.value if v in row else "" for v in payload.vars]
            )
    elif isinstance(payload, SeriesPayload):
        writer.writerow(["label", "value"])
        for label, value in zip(payload.labels, payload.values):
            writer.writerow([label, format_value(value)])
    else:
        raise NotTabular(f"{type(payload).__name__} has no CSV form")
    return buffer.getvalue().encode("utf-8")
