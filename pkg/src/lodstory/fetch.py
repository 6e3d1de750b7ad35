"""Runs a story's component queries against its endpoint and evaluates the
results into render payloads. Shared by the service routes, publication,
and the CLI snapshot/export paths."""

from __future__ import annotations

import concurrent.futures

from .evaluate import (
    EvaluationError,
    QueryTemplate,
    RenderPayload,
    eval_chart,
    eval_counter,
    eval_map,
    eval_table,
    instantiate_template,
)
from .gateway import EndpointRef, GatewayError, ResultSet, SparqlQuery, execute_select
from .story import Component, Story

FETCH_WORKERS = 4


class ComponentFetchError(Exception):
    """A component's query could not be executed or evaluated."""

    def __init__(self, component_id: str, cause: Exception):
        super().__init__(f"component {component_id!r}: {cause}")
        self.component_id = component_id
        self.cause = cause


def run_component_query(
    comp: Component, endpoint: EndpointRef, *,
    value: str | None = None, value_is_iri: bool | None = None,
) -> ResultSet:
    if comp.type in ("text_search", "action"):
        if value is None:
            raise EvaluationError(f"{comp.type} needs a value to instantiate its query")
        template = QueryTemplate.from_text(comp.query_template)
        query = instantiate_template(template, value, as_iri=value_is_iri)
    else:
        query = SparqlQuery.from_text(comp.query)
    return execute_select(endpoint, query)


def evaluate_component(
    comp: Component, endpoint: EndpointRef, *,
    value: str | None = None, value_is_iri: bool | None = None,
) -> RenderPayload:
    """Query and evaluate one data component. Text components have no payload."""
    if comp.type == "text":
        raise EvaluationError("text components are not evaluated")
    rs = run_component_query(comp, endpoint, value=value, value_is_iri=value_is_iri)
    if comp.type == "counter":
        return eval_counter(rs, comp.label)
    if comp.type == "chart":
        return eval_chart(rs, comp.chart_kind)
    if comp.type == "map":
        return eval_map(rs, comp.filter_vars)
    # table, text_search, action all render as typed tables
    return eval_table(rs)


def fetch_story_payloads(
    story: Story, *, timeout: float | None = None, max_rows: int | None = None,
) -> dict[str, RenderPayload]:
    """Evaluate every pre-evaluable data component (counter/chart/table/map)
    of a story, in parallel under the gateway's outbound bound."""
    kwargs = {}
    if timeout is not None:
        kwargs["timeout"] = timeout
    if max_rows is not None:
        kwargs["max_rows"] = max_rows
    endpoint = EndpointRef(url=story.endpoint, **kwargs)
    targets = [c for c in story.components if c.type in ("counter", "chart", "table", "map")]
    if not targets:
        return {}

    def one(comp: Component):
        try:
            return comp.id, evaluate_component(comp, endpoint)
        except (GatewayError, EvaluationError, ValueError) as exc:
            raise ComponentFetchError(comp.id, exc) from exc

    with concurrent.futures.ThreadPoolExecutor(
        max_workers=min(FETCH_WORKERS, len(targets))
    ) as pool:
        return dict(pool.map(one, targets))
