import json
import random

import pytest

from lodstory.story import (
    AddComponent,
    BrokenActionReference,
    ChartComponent,
    CounterComponent,
    DuplicateComponentId,
    EmptyTitle,
    InvalidEndpointUrl,
    InvalidPosition,
    MoveComponent,
    RemoveComponent,
    SchemaVersionUnsupported,
    SchemaViolation,
    Story,
    TextComponent,
    TextSearchComponent,
    ActionComponent,
    UnknownComponent,
    UnknownTemplate,
    UpdateComponent,
    apply_edit,
    create_story,
    deserialize_story,
    serialize_story,
    validate_story,
)

from .generators import rand_story

ENDPOINT = "http://127.0.0.1:9999/sparql"


def chart(cid="chart-1", kind="bar", query="SELECT ?label ?value WHERE { ?s ?p ?o }"):
    return ChartComponent(id=cid, chart_kind=kind, title="Bells", query=query)


def search(cid="search-1"):
    return TextSearchComponent(
        id=cid,
        query_template='SELECT ?name WHERE { ?s ?p ?name . FILTER(CONTAINS(STR(?name), $SEARCH)) }',
    )


def action(cid="action-1", source="search-1"):
    return ActionComponent(
        id=cid, label="Details",
        query_template="SELECT ?p ?o WHERE { $VALUE ?p ?o }",
        source=source, column="name",
    )


# ---------------------------------------------------------------------------
# create_story
# ---------------------------------------------------------------------------

def test_create_story_basics():
    story = create_story(template="statistics", title="Bells of Liguria", endpoint=ENDPOINT)
    assert story.id == "bells-of-liguria"
    assert story.components == ()
    assert story.revision == 0
    assert len(story.palette) == 6


def test_create_story_empty_title():
    with pytest.raises(EmptyTitle):
        create_story(title="", endpoint=ENDPOINT)
    with pytest.raises(EmptyTitle):
        create_story(title="   ", endpoint=ENDPOINT)


def test_create_story_bad_endpoint():
    with pytest.raises(InvalidEndpointUrl):
        create_story(title="Bells", endpoint="not-a-url")


def test_create_story_unknown_template():
    with pytest.raises(UnknownTemplate):
        create_story(template="gallery", title="Bells", endpoint=ENDPOINT)


def test_slug_dedup_sequence():
    # oracle: sequential generation over a growing taken set
    taken: set[str] = set()
    ids = []
    for _ in range(4):
        story = create_story(title="Bells", endpoint=ENDPOINT, taken_ids=taken)
        ids.append(story.id)
        taken.add(story.id)
    assert ids == ["bells", "bells-2", "bells-3", "bells-4"]


def test_slug_strips_punctuation():
    story = create_story(title="  Bells!!  of -- Liguria ", endpoint=ENDPOINT)
    assert story.id == "bells-of-liguria"


# ---------------------------------------------------------------------------
# apply_edit
# ---------------------------------------------------------------------------

def empty_story():
    return create_story(title="Edit Target", endpoint=ENDPOINT)


def test_add_to_empty_story():
    story = apply_edit(empty_story(), AddComponent(chart(), 0))
    assert [c.id for c in story.components] == ["chart-1"]
    assert story.revision == 1


def test_add_position_out_of_range():
    with pytest.raises(InvalidPosition):
        apply_edit(empty_story(), AddComponent(chart(), 1))


def test_move_third_to_front():
    story = empty_story()
    for i, comp in enumerate([chart("a"), chart("b"), chart("c")]):
        story = apply_edit(story, AddComponent(comp, i))
    moved = apply_edit(story, MoveComponent("c", 0))
    assert [c.id for c in moved.components] == ["c", "a", "b"]


def test_remove_sourced_search_breaks_reference():
    story = empty_story()
    story = apply_edit(story, AddComponent(search(), 0))
    story = apply_edit(story, AddComponent(action(), 1))
    with pytest.raises(BrokenActionReference):
        apply_edit(story, RemoveComponent("search-1"))


def test_move_action_before_source_breaks_reference():
    story = empty_story()
    story = apply_edit(story, AddComponent(search(), 0))
    story = apply_edit(story, AddComponent(action(), 1))
    with pytest.raises(BrokenActionReference):
        apply_edit(story, MoveComponent("action-1", 0))


def test_update_keeps_position_and_id():
    story = empty_story()
    story = apply_edit(story, AddComponent(chart("a"), 0))
    story = apply_edit(story, AddComponent(chart("b"), 1))
    updated = apply_edit(story, UpdateComponent("a", chart("a", kind="line")))
    assert [c.id for c in updated.components] == ["a", "b"]
    assert updated.components[0].chart_kind == "line"


def test_unknown_component_edit():
    with pytest.raises(UnknownComponent):
        apply_edit(empty_story(), RemoveComponent("ghost"))


def test_duplicate_add_rejected():
    story = apply_edit(empty_story(), AddComponent(chart("dup"), 0))
    with pytest.raises(DuplicateComponentId):
        apply_edit(story, AddComponent(chart("dup"), 1))


def test_revision_strictly_increments():
    story = empty_story()
    for i in range(5):
        story = apply_edit(story, AddComponent(chart(f"c{i}"), i))
        assert story.revision == i + 1


def _reference_model(edits):
    """Oracle: the same edit semantics over a plain python list of ids."""
    ids: list[str] = []
    for label, *args in edits:
        if label == "add":
            cid, pos = args
            ids.insert(pos, cid)
        elif label == "remove":
            ids.remove(args[0])
        elif label == "move":
            cid, pos = args
            ids.remove(cid)
            ids.insert(min(pos, len(ids)), cid)
    return ids


def test_random_edit_sequences_match_reference_model():
    rng = random.Random(2024)
    for _ in range(200):
        story = empty_story()
        trace = []
        counter = 0
        for _ in range(rng.randint(1, 12)):
            ids = [c.id for c in story.components]
            choices = ["add"] + (["remove", "move"] if ids else [])
            op = rng.choice(choices)
            if op == "add":
                counter += 1
                cid = f"n{counter}"
                pos = rng.randint(0, len(ids))
                story = apply_edit(story, AddComponent(chart(cid), pos))
                trace.append(("add", cid, pos))
            elif op == "remove":
                cid = rng.choice(ids)
                story = apply_edit(story, RemoveComponent(cid))
                trace.append(("remove", cid))
            else:
                cid = rng.choice(ids)
                pos = rng.randint(0, len(ids))
                story = apply_edit(story, MoveComponent(cid, pos))
                trace.append(("move", cid, pos))
        assert [c.id for c in story.components] == _reference_model(trace)
        assert story.revision == len(trace)


def test_action_integrity_after_every_edit():
    rng = random.Random(77)
    for _ in range(100):
        story = rand_story(rng)
        seen: dict[str, str] = {}
        for comp in story.components:
            if comp.type == "action":
                assert comp.source in seen
                assert seen[comp.source] in ("text_search", "action")
            seen[comp.id] = comp.type


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_serialize_empty_story():
    story = create_story(title="Empty", endpoint=ENDPOINT)
    doc = json.loads(serialize_story(story))
    assert doc["version"] == 1
    assert doc["components"] == []
    assert list(doc)[:3] == ["version", "id", "title"]


def test_serialize_chart_carries_type_and_kind():
    story = apply_edit(
        create_story(title="Charts", endpoint=ENDPOINT), AddComponent(chart(), 0)
    )
    doc = json.loads(serialize_story(story))
    comp = doc["components"][0]
    assert comp["type"] == "chart"
    assert comp["chart_kind"] == "bar"


def test_roundtrip_random_stories():
    rng = random.Random(1)
    for _ in range(300):
        story = rand_story(rng)
        assert deserialize_story(serialize_story(story)) == story


def test_deserialize_version_99():
    with pytest.raises(SchemaVersionUnsupported):
        deserialize_story(b'{"version": 99}')


def test_deserialize_missing_action_source_path():
    story = create_story(title="Broken", endpoint=ENDPOINT)
    doc = json.loads(serialize_story(story))
    doc["components"] = [
        {"id": "a1", "type": "action", "label": "x",
         "query_template": "SELECT ?p WHERE { $VALUE ?p ?o }",
         "source": "missing", "column": "name"},
    ]
    with pytest.raises(SchemaViolation) as exc:
        deserialize_story(json.dumps(doc).encode())
    assert exc.value.path == "components[0].source"


def test_deserialize_rejects_bad_palette():
    story = create_story(title="Palette", endpoint=ENDPOINT)
    doc = json.loads(serialize_story(story))
    doc["palette"] = ["#12345"]
    with pytest.raises(SchemaViolation):
        deserialize_story(json.dumps(doc).encode())


def test_deserialize_rejects_unknown_keys():
    story = create_story(title="Strict", endpoint=ENDPOINT)
    doc = json.loads(serialize_story(story))
    doc["surprise"] = True
    with pytest.raises(SchemaViolation):
        deserialize_story(json.dumps(doc).encode())


def test_deserialize_rejects_empty_query():
    doc = {
        "version": 1, "id": "x", "title": "X", "subtitle": None,
        "description": None, "endpoint": ENDPOINT, "section": None,
        "palette": [], "components": [
            {"id": "c1", "type": "counter", "label": "n", "query": "  "}
        ],
    }
    with pytest.raises(SchemaViolation):
        deserialize_story(json.dumps(doc).encode())


def test_deserialize_not_json():
    with pytest.raises(SchemaViolation):
        deserialize_story(b"}{nope")


# ---------------------------------------------------------------------------
# validate_story
# ---------------------------------------------------------------------------

def test_validate_clean_story():
    story = empty_story()
    story = apply_edit(story, AddComponent(chart(), 0))
    story = apply_edit(story, AddComponent(TextComponent(id="t", html="<p>x</p>"), 1))
    assert validate_story(story) == []


def test_validate_chart_missing_conventions():
    story = apply_edit(
        empty_story(),
        AddComponent(chart(query="SELECT ?x WHERE { ?x ?p ?o }"), 0),
    )
    diags = validate_story(story)
    assert any(
        d.severity == "warning" and "?label" in d.message and "?value" in d.message
        for d in diags
    )


def test_validate_empty_counter_query_is_error():
    story = apply_edit(
        empty_story(),
        AddComponent(CounterComponent(id="n", label="Bells", query=""), 0),
    )
    diags = validate_story(story)
    assert any(d.severity == "error" and d.component_id == "n" for d in diags)


def test_validate_map_without_location_vars():
    from lodstory.story import MapComponent

    story = apply_edit(
        empty_story(),
        AddComponent(MapComponent(id="m", query="SELECT ?x WHERE { ?x ?p ?o }"), 0),
    )
    diags = validate_story(story)
    assert any(d.severity == "warning" and d.component_id == "m" for d in diags)


def test_validate_template_without_placeholder():
    story = apply_edit(
        empty_story(),
        AddComponent(
            TextSearchComponent(id="s", query_template="SELECT ?x WHERE { ?x ?p ?o }"), 0
        ),
    )
    diags = validate_story(story)
    assert any(d.severity == "error" and "$SEARCH" in d.message for d in diags)
