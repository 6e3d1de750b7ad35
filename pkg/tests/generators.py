"""Deterministic random generators for stories and result sets, shared by
property tests and the acceptance suite."""

from __future__ import annotations

import random
import string

from lodstory.gateway import Cell, ResultSet
from lodstory.story import (
    ActionComponent,
    CHART_KINDS,
    ChartComponent,
    CounterComponent,
    MapComponent,
    Story,
    TableComponent,
    TextComponent,
    TextSearchComponent,
)

_WORDS = (
    "bells", "liguria", "provinces", "towers", "bronze", "chimes", "history",
    "genova", "savona", "foundry", "echo", "valley", "museo", "campane",
)


def rand_text(rng: random.Random, max_words: int = 6) -> str:
    return " ".join(rng.choice(_WORDS) for _ in range(rng.randint(1, max_words)))


def rand_slug(rng: random.Random) -> str:
    return "-".join(rng.choice(_WORDS) for _ in range(rng.randint(1, 3)))


def rand_query(rng: random.Random) -> str:
    var = rng.choice(["s", "label", "name", "value"])
    return f"SELECT ?{var} WHERE {{ ?{var} ?p ?o }} LIMIT {rng.randint(1, 50)}"


def rand_component(rng: random.Random, cid: str, chainable_ids: list[str]):
    kinds = ["text", "counter", "chart", "table", "map", "text_search"]
    if chainable_ids:
        kinds.append("action")
    kind = rng.choice(kinds)
    if kind == "text":
        return TextComponent(id=cid, html=f"<p>{rand_text(rng)}</p>")
    if kind == "counter":
        return CounterComponent(id=cid, label=rand_text(rng, 3), query=rand_query(rng))
    if kind == "chart":
        return ChartComponent(
            id=cid, chart_kind=rng.choice(CHART_KINDS),
            title=rand_text(rng, 4), query=rand_query(rng),
        )
    if kind == "table":
        return TableComponent(id=cid, title=rand_text(rng, 4), query=rand_query(rng))
    if kind == "map":
        n_filters = rng.randint(0, 3)
        return MapComponent(
            id=cid, query=rand_query(rng),
            filter_vars=tuple(f"f{i}" for i in range(n_filters)),
        )
    if kind == "text_search":
        return TextSearchComponent(
            id=cid,
            query_template="SELECT ?name WHERE { ?s ?p ?name . "
                           'FILTER(CONTAINS(STR(?name), $SEARCH)) }',
        )
    return ActionComponent(
        id=cid, label=rand_text(rng, 3),
        query_template="SELECT ?p ?o WHERE { $VALUE ?p ?o }",
        source=rng.choice(chainable_ids),
        column=rng.choice(["name", "s", "o"]),
    )


def rand_story(rng: random.Random) -> Story:
    n = rng.randint(0, 8)
    components = []
    chainable: list[str] = []
    for i in range(n):
        cid = f"c{i + 1}"
        comp = rand_component(rng, cid, chainable)
        components.append(comp)
        if comp.type in ("text_search", "action"):
            chainable.append(cid)
    palette_n = rng.randint(0, 6)
    palette = tuple(
        "#" + "".join(rng.choice("0123456789ABCDEFabcdef") for _ in range(6))
        for _ in range(palette_n)
    )
    return Story(
        id=rand_slug(rng),
        title=rand_text(rng).title() + " Storìa è" * rng.randint(0, 1),
        endpoint=f"http://127.0.0.1:{rng.randint(1024, 65535)}/sparql",
        subtitle=rand_text(rng) if rng.random() < 0.5 else None,
        description=rand_text(rng, 12) if rng.random() < 0.5 else None,
        section=rng.choice(["Bells", "Organs", None]),
        palette=palette,
        components=tuple(components),
    )


def rand_cell(rng: random.Random) -> Cell:
    kind = rng.choice(["uri", "blank", "literal", "literal", "literal"])
    if kind == "uri":
        return Cell(kind="uri", value="http://example.org/" + rand_slug(rng))
    if kind == "blank":
        return Cell(kind="blank", value="b" + str(rng.randint(0, 999)))
    choice = rng.random()
    value = rand_text(rng, 3) if choice < 0.6 else str(rng.randint(-1000, 1000))
    if choice < 0.2:
        return Cell(kind="literal", value=value, lang=rng.choice(["en", "it", "la"]))
    if choice < 0.4:
        return Cell(
            kind="literal", value=value,
            datatype="http://www.w3.org/2001/XMLSchema#" + rng.choice(["string", "integer"]),
        )
    return Cell(kind="literal", value=value)


def rand_result_set(rng: random.Random) -> ResultSet:
    n_vars = rng.randint(0, 5)
    vars_ = tuple(
        rng.choice(string.ascii_lowercase) + str(i) for i in range(n_vars)
    )
    rows = []
    for _ in range(rng.randint(0, 12)):
        row = {v: rand_cell(rng) for v in vars_ if rng.random() < 0.8}
        rows.append(row)
    return ResultSet(vars=vars_, rows=tuple(rows), truncated=False)
