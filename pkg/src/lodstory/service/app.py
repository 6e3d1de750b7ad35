"""HTTP API over the story store, evaluators, exports, and publication.

Routes (JSON bodies unless noted):
  GET  /api/stories                  list stories visible to the caller
  POST /api/stories                  create from the setup form fields
  GET|PUT|DELETE /api/stories/{id}   read / optimistic update / delete
  POST /api/stories/{id}/publish     publish per the caller's tier
  GET  /api/stories/{id}/export?format=html|pdf|json[&policy=live]
  GET  /api/stories/{id}/components/{cid}/export?format=csv|svg
  POST /api/preview                  evaluate one component body
  POST /api/sparql                   rate-limited, cached query proxy
  GET  /embed/{story}/{component}    standalone component page
  GET  /api/sections                 published-site index
"""

from __future__ import annotations

import uuid

from fastapi import Depends, FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .. import evaluate as ev
from .. import gateway
from ..export import (
    MissingPayload,
    NotTabular,
    SnapshotPolicy,
    UnsupportedFormat,
    component_filename,
    export_component_csv,
    export_component_svg,
    export_story,
    render_component_page,
)
from ..export.svg import EmptySeries
from ..fetch import ComponentFetchError, evaluate_component, fetch_story_payloads
from ..gateway import EndpointRef, SparqlQuery
from ..story import (
    SchemaVersionUnsupported,
    SchemaViolation,
    StoryError,
    component_from_doc,
    create_story,
    deserialize_story,
    serialize_story,
    story_to_doc,
    validate_story,
)
from .auth import MEMBER_TIER, FileAuthProvider, NullAuthProvider, Principal, authenticate
from .config import ServiceConfig
from .proxy import RateLimited, RateLimiter, TtlCache
from .publish import (
    EXTERNAL_CATALOGUE,
    MAIN_SITE,
    PublishTarget,
    PublishTargetUnavailable,
    load_site_index,
    publish_story,
    unpublish_story,
)
from .store import AlreadyExists, NotFound, RevisionConflict, SessionStore, StoryStore

SESSION_HEADER = "X-Session-Id"
SESSION_COOKIE = "lodstory_session"


class AuthRequired(Exception):
    pass


class Forbidden(Exception):
    pass


class ValidationFailed(Exception):
    def __init__(self, diagnostics):
        super().__init__("story has error-severity diagnostics")
        self.diagnostics = diagnostics


_ERROR_MAP = [
    (NotFound, 404, "not_found"),
    (AuthRequired, 401, "auth_required"),
    (Forbidden, 403, "forbidden"),
    (RevisionConflict, 409, "revision_conflict"),
    (AlreadyExists, 409, "already_exists"),
    (RateLimited, 429, "rate_limited"),
    (SchemaVersionUnsupported, 422, "schema_version_unsupported"),
    (SchemaViolation, 422, "schema_violation"),
    (gateway.NotSelectQuery, 400, "not_select_query"),
    (gateway.EndpointRejected, 502, "endpoint_rejected"),
    (gateway.EndpointUnreachable, 502, "endpoint_unreachable"),
    (gateway.MalformedResults, 502, "malformed_results"),
    (UnsupportedFormat, 400, "unsupported_format"),
    (NotTabular, 400, "not_tabular"),
    (EmptySeries, 422, "empty_series"),
    (MissingPayload, 422, "missing_payload"),
    (PublishTargetUnavailable, 503, "publish_target_unavailable"),
    (ev.EvaluationError, 422, "evaluation_failed"),
    (StoryError, 422, "invalid_story"),
    (ValueError, 422, "invalid_request"),
]


def _error_response(exc: Exception) -> JSONResponse:
    if isinstance(exc, ValidationFailed):
        return JSONResponse(
            status_code=422,
            content={
                "error": "validation_failed",
                "detail": [
                    {"severity": d.severity, "component_id": d.component_id,
                     "message": d.message}
                    for d in exc.diagnostics
                ],
            },
        )
    if isinstance(exc, ComponentFetchError):
        status = 422 if isinstance(exc.cause, ev.EvaluationError) else 502
        return JSONResponse(
            status_code=status,
            content={
                "error": "component_failed",
                "component_id": exc.component_id,
                "detail": str(exc.cause),
            },
        )
    for etype, status, code in _ERROR_MAP:
        if isinstance(exc, etype):
            return JSONResponse(
                status_code=status, content={"error": code, "detail": str(exc)}
            )
    raise exc


class _Context:
    def __init__(self, principal: Principal, invalid_token: bool, session_id: str | None):
        self.principal = principal
        self.invalid_token = invalid_token
        self.session_id = session_id

    def require_valid_token(self):
        if self.invalid_token:
            raise AuthRequired("the presented token is invalid")

    def rate_key(self, request: Request) -> str:
        if self.principal.subject:
            return self.principal.subject
        if self.session_id:
            return f"session:{self.session_id}"
        client = request.client
        return f"host:{client.host if client else 'unknown'}"


def create_app(config: ServiceConfig) -> FastAPI:
    config.ensure_directories()
    store = StoryStore(config.content_dir)
    sessions = SessionStore()
    provider = (
        FileAuthProvider(config.tokens_file) if config.tokens_file else NullAuthProvider()
    )
    limiter = RateLimiter(config.rate_limit_per_sec)
    cache = TtlCache(config.cache_ttl)
    main_target = PublishTarget(
        kind=MAIN_SITE, root=config.main_site_root, base_url=config.main_site_url
    )
    external_target = PublishTarget(
        kind=EXTERNAL_CATALOGUE, root=config.external_root, base_url=config.external_url
    )

    app = FastAPI(title="lodstory", docs_url=None, redoc_url=None)
    app.state.config = config
    app.state.store = store
    app.state.limiter = limiter
    app.state.cache = cache

    def context(request: Request) -> _Context:
        principal, invalid = authenticate(request.headers.get("Authorization"), provider)
        session_id = request.headers.get(SESSION_HEADER) or request.cookies.get(SESSION_COOKIE)
        return _Context(principal, invalid, session_id)

    def endpoint_ref(url: str) -> EndpointRef:
        return EndpointRef(url=url, timeout=config.query_timeout, max_rows=config.max_rows)

    def load_stored(ctx: _Context, story_id: str):
        """Session scope first for anonymous callers, then the shared store."""
        if ctx.principal.is_anonymous and ctx.session_id:
            try:
                return sessions.get(ctx.session_id, story_id), True
            except NotFound:
                pass
        return store.get(story_id), False

    def may_mutate(ctx: _Context, owner: str | None, in_session: bool) -> bool:
        if in_session:
            return True  # session scope is the caller's own
        principal = ctx.principal
        if principal.is_anonymous:
            return False
        return principal.tier == MEMBER_TIER or principal.subject == owner

    def _handle(request: Request, exc: Exception):
        return _error_response(exc)

    for exc_type in (ValidationFailed, ComponentFetchError,
                     *(etype for etype, _, _ in _ERROR_MAP)):
        app.add_exception_handler(exc_type, _handle)

    # -- stories ------------------------------------------------------------

    @app.get("/api/stories")
    def list_stories(ctx: _Context = Depends(context)):
        if ctx.principal.is_anonymous:
            stored = sessions.list(ctx.session_id) if ctx.session_id else []
        else:
            stored = store.list()
        return {
            "stories": [
                {
                    "id": s.story.id,
                    "title": s.story.title,
                    "section": s.story.section,
                    "revision": s.revision,
                    "owner": s.owner,
                }
                for s in stored
            ]
        }

    @app.post("/api/stories", status_code=201)
    async def create(request: Request, response: Response,
                     ctx: _Context = Depends(context)):
        ctx.require_valid_token()
        body = await request.json()
        if ctx.principal.is_anonymous:
            session_id = ctx.session_id or uuid.uuid4().hex
            taken = set(sessions.ids(session_id)) | set(store.ids())
        else:
            session_id = None
            taken = set(store.ids())
        story = create_story(
            template=body.get("template", "statistics"),
            title=body.get("title", ""),
            endpoint=body.get("endpoint", ""),
            section=body.get("section"),
            taken_ids=taken,
        )
        if ctx.principal.is_anonymous:
            stored = sessions.create(session_id, story)
            response.headers[SESSION_HEADER] = session_id
            response.set_cookie(SESSION_COOKIE, session_id, httponly=True)
        else:
            stored = store.create(story, owner=ctx.principal.subject)
        return {"story": story_to_doc(stored.story), "revision": stored.revision,
                "owner": stored.owner}

    @app.get("/api/stories/{story_id}")
    def read(story_id: str, ctx: _Context = Depends(context)):
        stored, _ = load_stored(ctx, story_id)
        return {"story": story_to_doc(stored.story), "revision": stored.revision,
                "owner": stored.owner}

    @app.put("/api/stories/{story_id}")
    async def update(story_id: str, request: Request,
                     ctx: _Context = Depends(context)):
        ctx.require_valid_token()
        body = await request.json()
        if "story" not in body or "revision" not in body:
            raise SchemaViolation("$", "body must carry 'story' and 'revision'")
        story = deserialize_story_from_doc(body["story"])
        if story.id != story_id:
            raise SchemaViolation("$.story.id", "story id must match the URL")
        revision = int(body["revision"])
        stored, in_session = load_stored(ctx, story_id)
        if not may_mutate(ctx, stored.owner, in_session):
            _forbid(ctx)
        if in_session:
            new = sessions.update(ctx.session_id, story, revision)
        else:
            new = store.update(story, revision)
        return {"revision": new.revision}

    @app.delete("/api/stories/{story_id}", status_code=204)
    def delete(story_id: str, ctx: _Context = Depends(context)):
        ctx.require_valid_token()
        stored, in_session = load_stored(ctx, story_id)
        if not may_mutate(ctx, stored.owner, in_session):
            _forbid(ctx)
        if in_session:
            sessions.delete(ctx.session_id, story_id)
        else:
            store.delete(story_id)
            for target in (main_target, external_target):
                unpublish_story(story_id, target)
        return Response(status_code=204)

    def _forbid(ctx: _Context):
        if ctx.principal.is_anonymous:
            raise AuthRequired("authentication required")
        raise Forbidden("not the owner of this story")

    # -- publication ----------------------------------------------------------

    @app.post("/api/stories/{story_id}/publish")
    def publish(story_id: str, ctx: _Context = Depends(context)):
        ctx.require_valid_token()
        if ctx.principal.is_anonymous:
            raise AuthRequired("publication requires authentication")
        stored = store.get(story_id)
        if ctx.principal.tier != MEMBER_TIER and stored.owner != ctx.principal.subject:
            raise Forbidden("only members may publish stories they do not own")
        diagnostics = validate_story(stored.story)
        if any(d.severity == "error" for d in diagnostics):
            raise ValidationFailed(diagnostics)
        payloads = fetch_story_payloads(
            stored.story, timeout=config.query_timeout, max_rows=config.max_rows
        )
        target = main_target if ctx.principal.tier == MEMBER_TIER else external_target
        url = publish_story(stored.story, payloads, target)
        return {"url": url, "target": target.kind}

    @app.get("/api/sections")
    def sections():
        return load_site_index(main_target)

    # -- exports ----------------------------------------------------------------

    @app.get("/api/stories/{story_id}/export")
    def export(story_id: str, format: str, policy: str = "snapshot",
               ctx: _Context = Depends(context)):
        stored, _ = load_stored(ctx, story_id)
        snapshot = SnapshotPolicy(policy)
        payloads = {}
        if format in ("html", "pdf") and snapshot.mode == "snapshot":
            payloads = fetch_story_payloads(
                stored.story, timeout=config.query_timeout, max_rows=config.max_rows
            )
        bundle = export_story(stored.story, payloads, format, snapshot)
        return Response(
            content=bundle.data,
            media_type=bundle.media_type,
            headers={
                "Content-Disposition":
                    f'attachment; filename="{bundle.suggested_filename}"'
            },
        )

    @app.get("/api/stories/{story_id}/components/{component_id}/export")
    def export_component(story_id: str, component_id: str, format: str,
                         ctx: _Context = Depends(context)):
        stored, _ = load_stored(ctx, story_id)
        comp = stored.story.component(component_id)
        payload = evaluate_component(comp, endpoint_ref(stored.story.endpoint))
        if format == "csv":
            data = export_component_csv(payload)
            media = "text/csv; charset=utf-8"
        elif format == "svg":
            if not isinstance(payload, ev.SeriesPayload):
                raise UnsupportedFormat("svg export applies to chart components")
            data = export_component_svg(
                payload, payload.chart_kind, stored.story.palette,
                title=getattr(comp, "title", ""),
            )
            media = "image/svg+xml"
        else:
            raise UnsupportedFormat(format)
        return Response(
            content=data,
            media_type=media,
            headers={
                "Content-Disposition":
                    'attachment; filename="'
                    + component_filename(stored.story, component_id, format) + '"'
            },
        )

    # -- preview -------------------------------------------------------------

    @app.post("/api/preview")
    async def preview(request: Request, ctx: _Context = Depends(context)):
        body = await request.json()
        endpoint_url = body.get("endpoint", "")
        comp_doc = dict(body.get("component") or {})
        comp_doc.setdefault("id", "preview")
        comp = component_from_doc(comp_doc, "component")
        value = body.get("value")
        value_kind = body.get("value_kind", "auto")
        value_is_iri = {"uri": True, "literal": False}.get(value_kind)
        payload = evaluate_component(
            comp, endpoint_ref(endpoint_url), value=value, value_is_iri=value_is_iri
        )
        return {"payload": ev.payload_to_doc(payload)}

    # -- SPARQL proxy ----------------------------------------------------------

    @app.post("/api/sparql")
    async def sparql_proxy(request: Request, ctx: _Context = Depends(context)):
        body = await request.json()
        endpoint_url = body.get("endpoint", "")
        query_text = body.get("query", "")
        request.app.state.limiter.check(ctx.rate_key(request))
        cache = request.app.state.cache
        key = (endpoint_url, query_text)
        cached = cache.get(key)
        if cached is not None:
            return Response(content=cached, media_type=gateway.RESULTS_JSON_MEDIA_TYPE,
                            headers={"X-Cache": "hit"})
        rs = gateway.execute_select(
            endpoint_ref(endpoint_url), SparqlQuery.from_text(query_text)
        )
        data = gateway.serialize_results_json(rs)
        cache.put(key, data)
        headers = {"X-Cache": "miss"}
        if rs.truncated:
            headers["X-Truncated"] = "true"
        return Response(content=data, media_type=gateway.RESULTS_JSON_MEDIA_TYPE,
                        headers=headers)

    # -- embed -------------------------------------------------------------------

    @app.get("/embed/{story_id}/{component_id}")
    def embed(story_id: str, component_id: str, ctx: _Context = Depends(context)):
        stored, _ = load_stored(ctx, story_id)
        comp = stored.story.component(component_id)
        payload = None
        if comp.type in ("counter", "chart", "table", "map"):
            payload = evaluate_component(comp, endpoint_ref(stored.story.endpoint))
        page = render_component_page(stored.story, component_id, payload)
        return Response(content=page, media_type="text/html; charset=utf-8")

    # -- static sites ------------------------------------------------------------

    if config.main_site_url.startswith("/"):
        app.mount(config.main_site_url,
                  StaticFiles(directory=config.main_site_root, html=True),
                  name="site")
    if config.external_url.startswith("/"):
        app.mount(config.external_url,
                  StaticFiles(directory=config.external_root, html=True),
                  name="catalogue")
    if config.ui_dir and config.ui_dir.is_dir():
        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app


def deserialize_story_from_doc(doc: dict):
    import json as _json

    return deserialize_story(_json.dumps(doc).encode("utf-8"))
