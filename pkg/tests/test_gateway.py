import concurrent.futures
import json
import random
import re

import pytest
from hypothesis import given, settings, strategies as st

from lodstory import gateway
from lodstory.gateway import (
    Cell,
    EndpointRef,
    EndpointRejected,
    EndpointUnreachable,
    MalformedResults,
    NotSelectQuery,
    ResultSet,
    SparqlQuery,
    extract_select_variables,
    parse_results_json,
    probe_endpoint,
    serialize_results_json,
)
from lodstory.testing import MockSparqlServer

from .generators import rand_result_set


# ---------------------------------------------------------------------------
# extract_select_variables
# ---------------------------------------------------------------------------

def reference_projection_scan(query: str) -> list[str]:
    """Independent brute-force oracle: blank out comments/strings/IRIs one
    character at a time, then read the projection with plain regexes."""
    chars = list(query)
    i, n = 0, len(query)
    while i < n:
        ch = query[i]
        if ch == "#":
            while i < n and query[i] != "\n":
                chars[i] = " "
                i += 1
        elif ch == "<":
            j = i
            while j < n and query[j] != ">":
                j += 1
            for k in range(i, min(j + 1, n)):
                chars[k] = " "
            i = j + 1
        elif ch in "\"'":
            quote = query[i : i + 3] if query[i : i + 3] == ch * 3 else ch
            j = i + len(quote)
            while j < n:
                if query[j] == "\\":
                    j += 2
                    continue
                if query[j : j + len(quote)] == quote:
                    j += len(quote)
                    break
                j += 1
            for k in range(i, min(j, n)):
                chars[k] = " "
            i = j
        else:
            i += 1
    blanked = "".join(chars)

    m = re.search(r"\bSELECT\b", blanked, re.I)
    if m is None:
        raise NotSelectQuery("no SELECT")
    rest = blanked[m.end():]
    stop = re.search(r"\bWHERE\b|\bFROM\b|\{", rest, re.I)
    head = rest[: stop.start()] if stop else rest
    tail = rest[stop.start():] if stop else ""

    names: list[str] = []
    star = "*" in re.sub(r"\([^)]*\)", "", head)
    for chunk in re.split(r"(\([^()]*(?:\([^()]*\)[^()]*)*\))", head):
        if chunk.startswith("("):
            alias = re.findall(r"\bAS\s+[?$](\w+)", chunk, re.I)
            if alias and alias[-1] not in names:
                names.append(alias[-1])
        else:
            for var in re.findall(r"[?$](\w+)", chunk):
                if var not in names:
                    names.append(var)
    if star:
        for var in re.findall(r"[?$](\w+)", tail):
            if var not in names:
                names.append(var)
    return names


CORPUS = [
    "SELECT ?label ?value WHERE { ?s ?p ?o }",
    "SELECT (COUNT(?x) AS ?n) WHERE { ?x a ?c }",
    "SELECT * WHERE { ?s ?p ?o }",
    "select ?a ?b where { ?a ?p ?b }",
    "SELECT DISTINCT ?town WHERE { ?b <http://ex.org/town> ?town }",
    "SELECT REDUCED ?x WHERE { ?x ?y ?z }",
    "PREFIX ex: <http://ex.org/> SELECT ?s WHERE { ?s ex:p ?o }",
    "SELECT ?s # comment with ?fake\nWHERE { ?s ?p ?o }",
    'SELECT ?s WHERE { ?s ?p "a string with ?fake inside" }',
    "SELECT ?s WHERE { ?s ?p 'single ?fake quoted' }",
    'SELECT ?s WHERE { ?s ?p """triple ?fake\nquoted""" }',
    "SELECT ?s WHERE { { ?s ?p ?o } UNION { ?s ?q ?o } }",
    "SELECT * WHERE { ?a ?b ?c . OPTIONAL { ?a ?d ?e } }",
    "SELECT (SUM(?v) AS ?total) (COUNT(*) AS ?rows) WHERE { ?x ?p ?v }",
    "SELECT ?s (MAX(?v) AS ?top) WHERE { ?s ?p ?v } GROUP BY ?s",
    "SELECT ?s\nWHERE {\n  ?s ?p ?o .\n  FILTER(?o > 3)\n}",
    "SELECT ?one ?two ?three WHERE { ?one ?two ?three } LIMIT 5",
    "SELECT $dollar WHERE { $dollar ?p ?o }",
    "SELECT ?s WHERE { ?s <http://ex.org/has?query=?notvar> ?o }",
    "SELECT * WHERE { ?z ?y ?x . { ?x ?w ?v } UNION { ?v ?u ?t } }",
    "BASE <http://ex.org/> SELECT ?s WHERE { ?s ?p ?o }",
    "# leading comment ?fake\nSELECT ?real WHERE { ?real ?p ?o }",
    "SELECT ((?a) AS ?aliased) WHERE { ?a ?p ?o }",
    "SELECT ?s WHERE { ?s ?p ?o . FILTER(CONTAINS(STR(?o), \"?fake\")) }",
    "SELECT * WHERE { ?s a <http://ex.org/Class> }",
    "SELECT ?s ?s ?o WHERE { ?s ?p ?o }",
]


def _mutate(rng: random.Random, query: str) -> str:
    decorations = [
        lambda q: "# ?fake header\n" + q,
        lambda q: q.replace("WHERE", "WHERE # trailing ?fake\n", 1),
        lambda q: q + " # tail comment ?fake",
        lambda q: q.replace("SELECT", "SELECT\n", 1),
        lambda q: "PREFIX x: <http://ex.org/x?y=?z> " + q,
    ]
    return rng.choice(decorations)(query)


def test_extract_examples():
    assert extract_select_variables("SELECT ?label ?value WHERE { ?s ?p ?o }") == ["label", "value"]
    assert extract_select_variables("SELECT (COUNT(?x) AS ?n) WHERE { ?x ?p ?o }") == ["n"]
    assert extract_select_variables("SELECT * WHERE { ?s ?p ?o }") == ["s", "p", "o"]


def test_extract_rejects_non_select():
    with pytest.raises(NotSelectQuery):
        extract_select_variables("ASK { ?s ?p ?o }")


def test_extract_matches_reference_scanner_on_corpus():
    rng = random.Random(7)
    corpus = list(CORPUS)
    while len(corpus) < 60:
        corpus.append(_mutate(rng, rng.choice(CORPUS)))
    assert len(corpus) >= 50
    for query in corpus:
        assert extract_select_variables(query) == reference_projection_scan(query), query


def test_query_from_text_recomputes_projection():
    q = SparqlQuery.from_text("SELECT ?a ?b WHERE { ?a ?p ?b }")
    assert q.projected_vars == ("a", "b")
    with pytest.raises(NotSelectQuery):
        SparqlQuery.from_text("   ")


# ---------------------------------------------------------------------------
# parse_results_json
# ---------------------------------------------------------------------------

def test_parse_empty_document():
    rs = parse_results_json(b'{"head":{"vars":[]},"results":{"bindings":[]}}')
    assert rs.vars == () and rs.rows == () and rs.truncated is False


def test_parse_typed_literal():
    doc = {
        "head": {"vars": ["p"]},
        "results": {"bindings": [
            {"p": {"type": "literal", "value": "5",
                   "datatype": "http://www.w3.org/2001/XMLSchema#integer"}}
        ]},
    }
    rs = parse_results_json(json.dumps(doc).encode())
    assert len(rs.rows) == 1
    cell = rs.rows[0]["p"]
    assert cell.kind == "literal" and cell.value == "5"
    assert cell.datatype == "http://www.w3.org/2001/XMLSchema#integer"


def test_parse_optional_binding_missing_var():
    doc = {
        "head": {"vars": ["a", "b"]},
        "results": {"bindings": [{"a": {"type": "uri", "value": "http://x.org/1"}}]},
    }
    rs = parse_results_json(json.dumps(doc).encode())
    assert rs.vars == ("a", "b")
    assert "b" not in rs.rows[0]


def test_parse_all_term_kinds():
    doc = {
        "head": {"vars": ["u", "b", "p", "l", "t"]},
        "results": {"bindings": [{
            "u": {"type": "uri", "value": "http://x.org/u"},
            "b": {"type": "bnode", "value": "b0"},
            "p": {"type": "literal", "value": "plain"},
            "l": {"type": "literal", "value": "ciao", "xml:lang": "it"},
            "t": {"type": "literal", "value": "7",
                  "datatype": "http://www.w3.org/2001/XMLSchema#integer"},
        }]},
    }
    rs = parse_results_json(json.dumps(doc).encode())
    row = rs.rows[0]
    assert row["u"].kind == "uri"
    assert row["b"].kind == "blank"
    assert row["p"].lang is None and row["p"].datatype is None
    assert row["l"].lang == "it"
    assert row["t"].datatype.endswith("integer")


def test_parse_langstring_datatype_collapses_to_lang():
    doc = {
        "head": {"vars": ["x"]},
        "results": {"bindings": [{
            "x": {"type": "literal", "value": "hi", "xml:lang": "en",
                  "datatype": "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString"},
        }]},
    }
    cell = parse_results_json(json.dumps(doc).encode()).rows[0]["x"]
    assert cell.lang == "en" and cell.datatype is None


MALFORMED = [
    b"\xff\xfe\x00broken",                                     # not UTF-8
    b"this is not json",                                       # not JSON
    b'{"results":{"bindings":[]}}',                            # missing head
    b'{"head":{"vars":[]}}',                                   # missing results
    b'{"head":{"vars":["x"]},"results":{"bindings":[{"x":{"type":"squiggle","value":"?"}}]}}',
    b'{"head":{"vars":[]},"results":{"bindings":[{"y":{"type":"uri","value":"u"}}]}}',
    b'{"head":{"vars":["x"]},"results":{"bindings":"nope"}}',
]


@pytest.mark.parametrize("body", MALFORMED)
def test_parse_malformed(body):
    with pytest.raises(MalformedResults):
        parse_results_json(body)


cells = st.one_of(
    st.builds(lambda v: Cell(kind="uri", value="http://x.org/" + v),
              st.text(alphabet="abc123", min_size=1, max_size=8)),
    st.builds(lambda v: Cell(kind="blank", value=v),
              st.text(alphabet="ab01", min_size=1, max_size=6)),
    st.builds(
        lambda v, extra: Cell(
            kind="literal", value=v,
            lang="en" if extra == "lang" else None,
            datatype="http://www.w3.org/2001/XMLSchema#integer" if extra == "dt" else None,
        ),
        st.text(max_size=12), st.sampled_from(["plain", "lang", "dt"]),
    ),
)


@st.composite
def result_sets(draw):
    vars_ = draw(st.lists(
        st.text(alphabet="abcdefg", min_size=1, max_size=5),
        max_size=4, unique=True,
    ))
    rows = draw(st.lists(
        st.dictionaries(st.sampled_from(vars_) if vars_ else st.nothing(), cells, max_size=len(vars_)),
        max_size=8,
    ))
    return ResultSet(vars=tuple(vars_), rows=tuple(rows), truncated=False)


@settings(max_examples=200, deadline=None)
@given(result_sets())
def test_roundtrip_serialize_parse(rs):
    assert parse_results_json(serialize_results_json(rs)) == rs


def test_roundtrip_with_seeded_generator():
    rng = random.Random(42)
    for _ in range(300):
        rs = rand_result_set(rng)
        assert parse_results_json(serialize_results_json(rs)) == rs


def test_rows_only_bind_head_vars_property():
    rng = random.Random(9)
    for _ in range(100):
        rs = rand_result_set(rng)
        for row in rs.rows:
            assert set(row) <= set(rs.vars)


# ---------------------------------------------------------------------------
# execute_select against the bundled endpoint
# ---------------------------------------------------------------------------

def test_execute_limit_three(bells_endpoint, bells_graph):
    assert len(bells_graph) >= 3  # brute-force enumeration of fixture triples
    rs = gateway.execute_select(
        bells_endpoint, SparqlQuery.from_text("SELECT ?s WHERE { ?s ?p ?o } LIMIT 3")
    )
    assert rs.vars == ("s",)
    assert len(rs.rows) == 3
    assert rs.truncated is False


def test_execute_empty_match(bells_endpoint):
    rs = gateway.execute_select(
        bells_endpoint,
        SparqlQuery.from_text("SELECT ?x WHERE { ?x a <http://example.org/Nothing> }"),
    )
    assert rs.rows == () and rs.truncated is False


def test_execute_syntax_error_rejected(bells_endpoint):
    with pytest.raises(EndpointRejected) as exc:
        gateway.execute_select(
            bells_endpoint, SparqlQuery("SELEKT ?s WHERE { ?s ?p ?o }", ("s",))
        )
    assert exc.value.status == 400
    assert exc.value.body_excerpt


def test_execute_rejects_ask_locally(bells_endpoint):
    with pytest.raises(NotSelectQuery):
        gateway.execute_select(
            bells_endpoint, SparqlQuery("ASK { ?s ?p ?o }", ())
        )


def test_truncation_against_fixture_count(bells_server, bells_graph):
    full = len(bells_graph)  # oracle: every triple matches ?s ?p ?o
    query = SparqlQuery.from_text("SELECT ?s ?p ?o WHERE { ?s ?p ?o }")

    capped = EndpointRef(url=bells_server.url, max_rows=10)
    rs = gateway.execute_select(capped, query)
    assert len(rs.rows) == 10 and rs.truncated is (full > 10)

    roomy = EndpointRef(url=bells_server.url, max_rows=full + 1)
    rs = gateway.execute_select(roomy, query)
    assert len(rs.rows) == full and rs.truncated is False

    exact = EndpointRef(url=bells_server.url, max_rows=full)
    rs = gateway.execute_select(exact, query)
    assert len(rs.rows) == full and rs.truncated is False


def test_large_query_uses_post(bells_server):
    padding = "# " + "x" * 2500 + "\n"
    query = SparqlQuery.from_text(padding + "SELECT ?s WHERE { ?s ?p ?o } LIMIT 2")
    rs = gateway.execute_select(EndpointRef(url=bells_server.url), query)
    assert len(rs.rows) == 2


def test_unreachable_endpoint():
    endpoint = EndpointRef(url="http://127.0.0.1:1/sparql", timeout=2.0)
    with pytest.raises(EndpointUnreachable):
        gateway.execute_select(
            endpoint, SparqlQuery.from_text("SELECT ?s WHERE { ?s ?p ?o }")
        )


def test_probe_fixture_endpoint(bells_endpoint):
    report = probe_endpoint(bells_endpoint)
    assert report.reachable is True
    assert report.supports_json is True
    assert report.latency > 0


def test_probe_closed_port():
    report = probe_endpoint(EndpointRef(url="http://127.0.0.1:1/sparql", timeout=2.0))
    assert report.reachable is False
    assert report.supports_json is False


def test_probe_html_only_endpoint():
    with MockSparqlServer(mode="html_only") as server:
        report = probe_endpoint(EndpointRef(url=server.url))
    assert report.reachable is True
    assert report.supports_json is False


def test_outbound_bound_limits_concurrency(bells_graph):
    with MockSparqlServer(bells_graph, delay=0.05) as server:
        endpoint = EndpointRef(url=server.url)
        query = SparqlQuery.from_text("SELECT ?s WHERE { ?s ?p ?o } LIMIT 1")
        old = gateway.set_outbound_limit(2)
        try:
            with concurrent.futures.ThreadPoolExecutor(max_workers=6) as pool:
                list(pool.map(
                    lambda _: gateway.execute_select(endpoint, query), range(6)
                ))
        finally:
            gateway.set_outbound_limit(old)
        assert server.max_active <= 2
        assert server.request_count == 6


def test_endpoint_ref_validation():
    with pytest.raises(ValueError):
        EndpointRef(url="ftp://example.org/sparql")
    with pytest.raises(ValueError):
        EndpointRef(url="not a url")
    with pytest.raises(ValueError):
        EndpointRef(url="http://x.org/sparql", timeout=0)
    with pytest.raises(ValueError):
        EndpointRef(url="http://x.org/sparql", max_rows=0)
