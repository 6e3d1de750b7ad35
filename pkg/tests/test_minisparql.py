"""Direct tests for the bundled SELECT engine. The engine backs most of
the suite, so its own semantics get pinned here: joins, OPTIONAL, UNION,
filters, aggregation, modifiers, and strict string tokenization."""

import pytest

from lodstory.gateway import Cell
from lodstory.testing.graph import plain, typed, uri
from lodstory.testing.minisparql import QueryError, evaluate

EX = "http://example.org/"


def triple(s, p, o):
    return (uri(EX + s), uri(EX + p), o)


GRAPH = [
    triple("a", "name", plain("Alpha")),
    triple("a", "size", typed("3", "integer")),
    triple("a", "tag", plain("old")),
    triple("b", "name", plain("Beta")),
    triple("b", "size", typed("7", "integer")),
    triple("c", "name", plain("Gamma")),
    triple("a", "link", uri(EX + "b")),
]


def rows(query, graph=GRAPH):
    rs = evaluate(query, graph)
    return [
        {var: row[var].value for var in rs.vars if var in row} for row in rs.rows
    ]


def test_basic_join():
    got = rows(
        f"SELECT ?n ?s WHERE {{ ?x <{EX}name> ?n . ?x <{EX}size> ?s }} ORDER BY ?n"
    )
    assert got == [{"n": "Alpha", "s": "3"}, {"n": "Beta", "s": "7"}]


def test_predicate_object_abbreviations():
    got = rows(
        f"SELECT ?n ?s WHERE {{ ?x <{EX}name> ?n ; <{EX}size> ?s }} ORDER BY ?s"
    )
    assert [g["n"] for g in got] == ["Alpha", "Beta"]


def test_optional_left_join():
    got = rows(
        f"SELECT ?n ?t WHERE {{ ?x <{EX}name> ?n . "
        f"OPTIONAL {{ ?x <{EX}tag> ?t }} }} ORDER BY ?n"
    )
    assert got == [
        {"n": "Alpha", "t": "old"}, {"n": "Beta"}, {"n": "Gamma"},
    ]


def test_union_concatenates_branches():
    got = rows(
        f"SELECT ?v WHERE {{ {{ ?x <{EX}tag> ?v }} UNION {{ ?x <{EX}size> ?v }} }} ORDER BY ?v"
    )
    assert [g["v"] for g in got] == ["3", "7", "old"]


def test_filter_numeric_comparison():
    got = rows(
        f"SELECT ?n WHERE {{ ?x <{EX}name> ?n ; <{EX}size> ?s . FILTER(?s > 3) }}"
    )
    assert [g["n"] for g in got] == ["Beta"]


def test_filter_contains_and_logical_ops():
    got = rows(
        f"SELECT ?n WHERE {{ ?x <{EX}name> ?n . "
        f'FILTER(CONTAINS(?n, "a") && !CONTAINS(?n, "G")) }} ORDER BY ?n'
    )
    assert [g["n"] for g in got] == ["Alpha", "Beta"]


def test_filter_unbound_var_drops_row():
    got = rows(
        f"SELECT ?n WHERE {{ ?x <{EX}name> ?n . "
        f"OPTIONAL {{ ?x <{EX}tag> ?t }} FILTER(?t = \"old\") }}"
    )
    assert [g["n"] for g in got] == ["Alpha"]


def test_group_by_count():
    graph = GRAPH + [triple("b", "tag", plain("old"))]
    got = rows(
        f"SELECT ?t (COUNT(?x) AS ?n) WHERE {{ ?x <{EX}tag> ?t }} GROUP BY ?t",
        graph,
    )
    assert got == [{"t": "old", "n": "2"}]


def test_count_without_group_by_on_empty_graph():
    got = rows("SELECT (COUNT(?x) AS ?n) WHERE { ?x ?p ?o }", [])
    assert got == [{"n": "0"}]


def test_distinct():
    got = rows(f"SELECT DISTINCT ?p WHERE {{ ?s ?p ?o }}")
    assert len(got) == len({g["p"] for g in got})


def test_order_desc_limit_offset():
    got = rows(
        f"SELECT ?s WHERE {{ ?x <{EX}size> ?s }} ORDER BY DESC(?s) LIMIT 1"
    )
    assert got == [{"s": "7"}]
    got = rows(
        f"SELECT ?s WHERE {{ ?x <{EX}size> ?s }} ORDER BY ?s OFFSET 1"
    )
    assert got == [{"s": "7"}]


def test_prefix_resolution():
    got = rows(
        f"PREFIX ex: <{EX}>\nSELECT ?n WHERE {{ ex:a ex:name ?n }}"
    )
    assert got == [{"n": "Alpha"}]


def test_concrete_subject_lookup():
    got = rows(f"SELECT ?p ?o WHERE {{ <{EX}a> ?p ?o }}")
    assert len(got) == sum(1 for s, _, _ in GRAPH if s.value == EX + "a")


def test_string_escapes_decode():
    graph = [triple("q", "name", plain('say "hi"\nplease'))]
    got = rows(
        f'SELECT ?x WHERE {{ ?x <{EX}name> "say \\"hi\\"\\nplease" }}', graph
    )
    assert len(got) == 1


def test_lang_and_datatype_literals_match_exactly():
    graph = [
        triple("q", "motto", Cell(kind="literal", value="vox", lang="la")),
        triple("r", "motto", plain("vox")),
    ]
    got = rows(f'SELECT ?x WHERE {{ ?x <{EX}motto> "vox"@la }}', graph)
    assert len(got) == 1
    got = rows(f'SELECT ?x WHERE {{ ?x <{EX}motto> "vox" }}', graph)
    assert len(got) == 1


@pytest.mark.parametrize("bad", [
    "SELEKT ?x WHERE { ?x ?p ?o }",
    "SELECT ?x WHERE { ?x ?p ?o",                      # unterminated group
    'SELECT ?x WHERE { ?x ?p "unterminated }',          # unterminated string
    'SELECT ?x WHERE { ?x ?p "bad \\q escape" }',       # unknown escape
    "SELECT WHERE { ?x ?p ?o }",                        # empty projection
    "SELECT ?x WHERE { ?x ?p ?o } trailing",
    "SELECT (SUM(?v) AS ?t) WHERE { ?x ?p ?v }",        # unsupported aggregate
    "SELECT ?x (COUNT(?y) AS ?n) WHERE { ?x ?p ?y }",   # ?x not grouped
    "SELECT * (COUNT(?y) AS ?n) WHERE { ?x ?p ?y } GROUP BY ?x",
    "PREFIX broken SELECT ?x WHERE { ?x ?p ?o }",
])
def test_rejected_queries(bad):
    with pytest.raises(QueryError):
        evaluate(bad, GRAPH)


def test_newline_in_single_quoted_string_rejected():
    with pytest.raises(QueryError):
        evaluate('SELECT ?x WHERE { ?x ?p "line\nbreak" }', GRAPH)


def test_triple_quoted_string_allows_newlines():
    graph = [triple("q", "name", plain("line\nbreak"))]
    got = rows(f'SELECT ?x WHERE {{ ?x <{EX}name> """line\nbreak""" }}', graph)
    assert len(got) == 1


def test_unicode_escapes():
    graph = [triple("q", "name", plain("cafè"))]
    got = rows(f'SELECT ?x WHERE {{ ?x <{EX}name> "caf\\u00e8" }}', graph)
    assert len(got) == 1


def test_random_bgps_match_bruteforce_join():
    """Differential check: random one/two-pattern BGPs evaluated by the
    engine must match an independent nested-loop join over the graph."""
    import random

    from lodstory.testing.graph import build_bells_graph

    graph = build_bells_graph()
    rng = random.Random(606)
    terms = [t for triple_ in graph[:60] for t in triple_]

    def random_pattern(variables):
        pattern = []
        for position in range(3):
            if rng.random() < 0.5:
                pattern.append(rng.choice(variables))
            else:
                pool = [t for t in terms if position != 1 or t.kind == "uri"]
                pattern.append(rng.choice(pool))
        return tuple(pattern)

    def bruteforce(patterns, variables):
        solutions = [{}]
        for pattern in patterns:
            next_solutions = []
            for sol in solutions:
                for triple_ in graph:
                    binding = dict(sol)
                    ok = True
                    for term, actual in zip(pattern, triple_):
                        if isinstance(term, str):  # variable name
                            if term in binding and binding[term] != actual:
                                ok = False
                                break
                            binding[term] = actual
                        elif term != actual:
                            ok = False
                            break
                    if ok:
                        next_solutions.append(binding)
            solutions = next_solutions
        return sorted(
            tuple(str(sol.get(v)) for v in variables) for sol in solutions
        )

    def to_sparql(patterns):
        def text(term):
            if isinstance(term, str):
                return f"?{term}"
            if term.kind == "uri":
                return f"<{term.value}>"
            if term.kind == "blank":
                return f"?blank_{term.value}"  # engine has no bnode syntax
            suffix = ""
            if term.lang:
                suffix = f"@{term.lang}"
            elif term.datatype:
                suffix = f"^^<{term.datatype}>"
            escaped = term.value.replace("\\", "\\\\").replace('"', '\\"')
            return f'"{escaped}"{suffix}'

        lines = " . ".join(" ".join(text(t) for t in p) for p in patterns)
        return f"SELECT ?v0 ?v1 WHERE {{ {lines} }}"

    checked = 0
    for _ in range(80):
        variables = ["v0", "v1"]
        patterns = [random_pattern(variables) for _ in range(rng.randint(1, 2))]
        used = {t for p in patterns for t in p if isinstance(t, str)}
        if not used or any(
            isinstance(t, Cell) and t.kind == "blank" for p in patterns for t in p
        ):
            continue
        query = to_sparql(patterns)
        rs = evaluate(query, graph)
        got = sorted(
            tuple(
                str(row.get(v)) if v in row else "None" for v in ("v0", "v1")
            )
            for row in rs.rows
        )
        expected = bruteforce(patterns, ["v0", "v1"])
        assert got == expected, query
        checked += 1
    assert checked >= 40
