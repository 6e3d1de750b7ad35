"""SPARQL protocol client: runs SELECT queries over HTTP against arbitrary
endpoints and parses the JSON results format into typed result sets.

Only the SPARQL JSON results media type is consumed; anything else is
rejected as malformed so downstream code deals with exactly one shape.
"""

from __future__ import annotations

import json
import re
import threading
import time
import urllib.parse
from dataclasses import dataclass

import requests

from . import __version__

RESULTS_JSON_MEDIA_TYPE = "application/sparql-results+json"
USER_AGENT = f"lodstory/{__version__}"
RDF_LANGSTRING = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString"

DEFAULT_TIMEOUT = 30.0
DEFAULT_MAX_ROWS = 10000

# Queries at or below this many bytes travel as GET; larger ones as form POST
# to avoid URL-length failures.
GET_SIZE_LIMIT = 2000


class GatewayError(Exception):
    """Base for endpoint/protocol failures."""


class EndpointUnreachable(GatewayError):
    """Network-level failure: DNS, refused connection, timeout."""


class EndpointRejected(GatewayError):
    """Endpoint answered with an HTTP error status."""

    def __init__(self, status: int, body_excerpt: str):
        super().__init__(f"endpoint returned HTTP {status}: {body_excerpt!r}")
        self.status = status
        self.body_excerpt = body_excerpt


class MalformedResults(GatewayError):
    """Response body is not a valid SPARQL JSON results document."""


class NotSelectQuery(GatewayError):
    """Query text does not contain a SELECT form."""


@dataclass(frozen=True)
class EndpointRef:
    """A SPARQL endpoint plus the caps applied when querying it.

    method is "auto" (GET for small queries, form POST for large ones),
    or "get"/"post" to force one transport.
    """

    url: str
    timeout: float = DEFAULT_TIMEOUT
    max_rows: int = DEFAULT_MAX_ROWS
    method: str = "auto"

    def __post_init__(self):
        parsed = urllib.parse.urlparse(self.url)
        if parsed.scheme not in ("http", "https") or not parsed.netloc:
            raise ValueError(f"endpoint url must be absolute http(s): {self.url!r}")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_rows <= 0:
            raise ValueError("max_rows must be positive")
        if self.method not in ("auto", "get", "post"):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass(frozen=True)
class SparqlQuery:
    """A SELECT query with its projection recomputed from the text.

    Use from_text(); projected_vars is never taken from user input.
    """

    text: str
    projected_vars: tuple[str, ...] = ()

    @classmethod
    def from_text(cls, text: str) -> "SparqlQuery":
        if not text or not text.strip():
            raise NotSelectQuery("empty query text")
        try:
            projected = tuple(extract_select_variables(text))
        except NotSelectQuery:
            # No recognizable projection; the endpoint judges validity.
            projected = ()
        return cls(text=text, projected_vars=projected)


@dataclass(frozen=True)
class Cell:
    """One RDF term in a result row."""

    kind: str  # "uri" | "blank" | "literal"
    value: str
    lang: str | None = None
    datatype: str | None = None

    def __post_init__(self):
        if self.kind not in ("uri", "blank", "literal"):
            raise ValueError(f"unknown cell kind {self.kind!r}")
        if self.lang is not None and self.datatype is not None:
            raise ValueError("cell cannot carry both lang and datatype")
        if self.kind != "literal" and (self.lang or self.datatype):
            raise ValueError("only literals carry lang/datatype")


@dataclass(frozen=True)
class ResultSet:
    """Parsed SELECT results: ordered variables, rows of partial bindings."""

    vars: tuple[str, ...]
    rows: tuple[dict[str, Cell], ...] = ()
    truncated: bool = False

    def __post_init__(self):
        known = set(self.vars)
        for row in self.rows:
            extra = set(row) - known
            if extra:
                raise ValueError(f"row binds variables not in head: {sorted(extra)}")


@dataclass(frozen=True)
class ProbeReport:
    reachable: bool
    latency: float
    supports_json: bool


# ---------------------------------------------------------------------------
# Projection extraction (tolerant lexical scan, not a SPARQL grammar)
# ---------------------------------------------------------------------------

_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_VARNAME_RE = re.compile(r"[A-Za-z0-9_À-￿]+")


def _scan_tokens(text: str):
    """Yield (kind, value, pos) tokens, skipping comments, string literals
    and IRIs so a "?fake" inside a string never looks like a variable.

    kinds: "var" (name without the ? / $), "word", "punct".
    """
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
        elif ch == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif ch == "<":
            j = text.find(">", i + 1)
            i = n if j < 0 else j + 1
        elif ch in "\"'":
            if text.startswith(ch * 3, i):
                quote, qlen = ch * 3, 3
            else:
                quote, qlen = ch, 1
            i += qlen
            while i < n:
                if text[i] == "\\":
                    i += 2
                elif text.startswith(quote, i):
                    i += qlen
                    break
                else:
                    i += 1
        elif ch in "?$":
            m = _VARNAME_RE.match(text, i + 1)
            if m:
                yield ("var", m.group(0), i)
                i = m.end()
            else:
                yield ("punct", ch, i)
                i += 1
        else:
            m = _WORD_RE.match(text, i)
            if m:
                yield ("word", m.group(0), i)
                i = m.end()
            else:
                yield ("punct", ch, i)
                i += 1


def extract_select_variables(query_text: str) -> list[str]:
    """Return the projected variable names of a SELECT query, in order.

    Handles plain ``?v`` projections, ``(expr AS ?v)`` aliases, and
    ``SELECT *`` (pattern variables in first-appearance order). Lexical
    scan only: the endpoint stays the authority on query validity.
    """
    tokens = list(_scan_tokens(query_text))
    select_at = next(
        (k for k, (kind, val, _) in enumerate(tokens)
         if kind == "word" and val.upper() == "SELECT"),
        None,
    )
    if select_at is None:
        raise NotSelectQuery("no SELECT keyword found")

    names: list[str] = []
    star = False
    i = select_at + 1
    while i < len(tokens):
        kind, val, _ = tokens[i]
        if kind == "word":
            upper = val.upper()
            if upper in ("DISTINCT", "REDUCED"):
                i += 1
                continue
            break  # WHERE, FROM, ...
        if kind == "punct" and val == "{":
            break
        if kind == "punct" and val == "*":
            star = True
            i += 1
            continue
        if kind == "var":
            if val not in names:
                names.append(val)
            i += 1
            continue
        if kind == "punct" and val == "(":
            depth = 1
            alias = None
            j = i + 1
            while j < len(tokens) and depth > 0:
                k2, v2, _ = tokens[j]
                if k2 == "punct" and v2 == "(":
                    depth += 1
                elif k2 == "punct" and v2 == ")":
                    depth -= 1
                elif k2 == "word" and v2.upper() == "AS" and depth == 1:
                    if j + 1 < len(tokens) and tokens[j + 1][0] == "var":
                        alias = tokens[j + 1][1]
                j += 1
            if alias and alias not in names:
                names.append(alias)
            i = j
            continue
        i += 1

    if star:
        for kind, val, _ in tokens[i:]:
            if kind == "var" and val not in names:
                names.append(val)
    return names


def _leading_query_form(query_text: str) -> str | None:
    """First query-form keyword after the prologue, uppercased."""
    for kind, val, _ in _scan_tokens(query_text):
        if kind != "word":
            continue
        upper = val.upper()
        if upper in ("PREFIX", "BASE"):
            continue
        if upper in ("SELECT", "ASK", "CONSTRUCT", "DESCRIBE"):
            return upper
        # prefix names etc. between PREFIX declarations
    return None


def _require_select(query_text: str) -> None:
    # Only recognizably different query forms are blocked here; anything
    # else (typos included) goes to the endpoint, the authority on validity.
    form = _leading_query_form(query_text)
    if form in ("ASK", "CONSTRUCT", "DESCRIBE"):
        raise NotSelectQuery(f"expected a SELECT query, found {form}")


# ---------------------------------------------------------------------------
# Results document parsing / serialization
# ---------------------------------------------------------------------------

def parse_results_json(body: bytes) -> ResultSet:
    """Parse a SPARQL JSON results document into a ResultSet.

    Variable order follows head.vars; a binding may omit variables
    (OPTIONAL patterns). Anything off-grammar raises MalformedResults.
    """
    try:
        text = body.decode("utf-8") if isinstance(body, (bytes, bytearray)) else body
    except UnicodeDecodeError as exc:
        raise MalformedResults(f"body is not UTF-8: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedResults(f"body is not JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedResults("top-level value is not an object")

    head = doc.get("head")
    if not isinstance(head, dict):
        raise MalformedResults("missing or invalid 'head'")
    head_vars = head.get("vars", [])
    if not isinstance(head_vars, list) or not all(isinstance(v, str) for v in head_vars):
        raise MalformedResults("'head.vars' must be a list of strings")

    results = doc.get("results")
    if not isinstance(results, dict):
        raise MalformedResults("missing or invalid 'results'")
    bindings = results.get("bindings")
    if not isinstance(bindings, list):
        raise MalformedResults("'results.bindings' must be a list")

    known = set(head_vars)
    rows: list[dict[str, Cell]] = []
    for k, binding in enumerate(bindings):
        if not isinstance(binding, dict):
            raise MalformedResults(f"binding {k} is not an object")
        row: dict[str, Cell] = {}
        for var, term in binding.items():
            if var not in known:
                raise MalformedResults(f"binding {k} uses unknown variable {var!r}")
            row[var] = _parse_term(term, f"bindings[{k}].{var}")
        rows.append(row)
    return ResultSet(vars=tuple(head_vars), rows=tuple(rows), truncated=False)


def _parse_term(term, where: str) -> Cell:
    if not isinstance(term, dict):
        raise MalformedResults(f"{where}: term is not an object")
    ttype = term.get("type")
    value = term.get("value")
    if not isinstance(value, str):
        raise MalformedResults(f"{where}: missing string 'value'")
    if ttype == "uri":
        return Cell(kind="uri", value=value)
    if ttype == "bnode":
        return Cell(kind="blank", value=value)
    if ttype == "literal":
        lang = term.get("xml:lang")
        datatype = term.get("datatype")
        if lang is not None and datatype is not None:
            if datatype == RDF_LANGSTRING:
                datatype = None
            else:
                raise MalformedResults(f"{where}: literal has both lang and datatype")
        return Cell(kind="literal", value=value, lang=lang, datatype=datatype)
    raise MalformedResults(f"{where}: unknown term type {ttype!r}")


def serialize_results_json(rs: ResultSet) -> bytes:
    """Serialize a ResultSet back into canonical SPARQL JSON results bytes.

    Inverse of parse_results_json; deterministic key order so two
    serializations of equal result sets are byte-identical.
    """
    bindings = []
    for row in rs.rows:
        binding = {}
        for var in rs.vars:
            cell = row.get(var)
            if cell is None:
                continue
            if cell.kind == "uri":
                term = {"type": "uri", "value": cell.value}
            elif cell.kind == "blank":
                term = {"type": "bnode", "value": cell.value}
            else:
                term = {"type": "literal", "value": cell.value}
                if cell.lang is not None:
                    term["xml:lang"] = cell.lang
                if cell.datatype is not None:
                    term["datatype"] = cell.datatype
            binding[var] = term
        bindings.append(binding)
    doc = {"head": {"vars": list(rs.vars)}, "results": {"bindings": bindings}}
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


# ---------------------------------------------------------------------------
# HTTP transport
# ---------------------------------------------------------------------------

_outbound_lock = threading.Lock()
_outbound_limit = 8
_outbound_semaphore = threading.BoundedSemaphore(_outbound_limit)


def set_outbound_limit(limit: int) -> int:
    """Cap concurrent in-flight endpoint requests; returns the old cap."""
    global _outbound_limit, _outbound_semaphore
    if limit < 1:
        raise ValueError("limit must be >= 1")
    with _outbound_lock:
        old = _outbound_limit
        _outbound_limit = limit
        _outbound_semaphore = threading.BoundedSemaphore(limit)
    return old


def _request(endpoint: EndpointRef, query_text: str) -> requests.Response:
    headers = {"Accept": RESULTS_JSON_MEDIA_TYPE, "User-Agent": USER_AGENT}
    use_get = endpoint.method == "get" or (
        endpoint.method == "auto" and len(query_text.encode("utf-8")) <= GET_SIZE_LIMIT
    )
    semaphore = _outbound_semaphore
    with semaphore:
        try:
            if use_get:
                return requests.get(
                    endpoint.url, params={"query": query_text},
                    headers=headers, timeout=endpoint.timeout,
                )
            return requests.post(
                endpoint.url, data={"query": query_text},
                headers=headers, timeout=endpoint.timeout,
            )
        except requests.RequestException as exc:
            raise EndpointUnreachable(f"{endpoint.url}: {exc}") from exc


def execute_select(endpoint: EndpointRef, query: SparqlQuery) -> ResultSet:
    """Run a SELECT query and return the parsed, capped result set."""
    _require_select(query.text)
    resp = _request(endpoint, query.text)
    if resp.status_code >= 400:
        excerpt = resp.text[:500]
        raise EndpointRejected(resp.status_code, excerpt)
    rs = parse_results_json(resp.content)
    if len(rs.rows) > endpoint.max_rows:
        return ResultSet(
            vars=rs.vars, rows=rs.rows[: endpoint.max_rows], truncated=True
        )
    return rs


def probe_endpoint(endpoint: EndpointRef) -> ProbeReport:
    """Check an endpoint with a trivial one-row SELECT.

    Never raises: failures are encoded into the report.
    """
    start = time.monotonic()
    try:
        resp = _request(endpoint, "SELECT * WHERE { ?s ?p ?o } LIMIT 1")
    except GatewayError:
        return ProbeReport(reachable=False, latency=time.monotonic() - start, supports_json=False)
    latency = time.monotonic() - start
    supports_json = False
    if resp.status_code < 400:
        try:
            parse_results_json(resp.content)
            supports_json = True
        except MalformedResults:
            supports_json = False
    return ProbeReport(reachable=True, latency=latency, supports_json=supports_json)
