"""Batch entry point: validate, export, snapshot, scaffold, and serve
stories without a browser.

Exit codes: 0 success, 1 validation errors, 2 I/O failures, 3 endpoint
failures (the message names the failing component).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .export import SnapshotPolicy, export_story
from .fetch import ComponentFetchError, fetch_story_payloads, run_component_query
from .gateway import EndpointRef, GatewayError, serialize_results_json
from .story import (
    Diagnostic,
    StoryError,
    create_story,
    deserialize_story,
    serialize_story,
    validate_story,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_ENDPOINT = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lodstory",
        description="Create, validate, export, and publish SPARQL-backed data stories.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    validate = sub.add_parser("validate", help="lint a story JSON file")
    validate.add_argument("story")
    validate.add_argument("--json-diagnostics", action="store_true",
                          help="machine-readable diagnostics on stdout")

    export = sub.add_parser("export", help="export a story document")
    export.add_argument("story")
    export.add_argument("--format", required=True, choices=["html", "pdf", "json"])
    export.add_argument("--out", required=True, help="output path, or - for stdout")
    export.add_argument("--live", action="store_true",
                        help="exported page re-queries the endpoint at view time")

    snapshot = sub.add_parser("snapshot", help="fetch per-component results JSON")
    snapshot.add_argument("story")
    snapshot.add_argument("--out", required=True, help="output directory")

    serve = sub.add_parser("serve", help="run the catalogue service")
    serve.add_argument("--config", help="JSON config file (defaults to environment)")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    new = sub.add_parser("new", help="scaffold a story JSON file")
    new.add_argument("--title", required=True)
    new.add_argument("--endpoint", required=True)
    new.add_argument("--section")
    new.add_argument("--out", default="-", help="output path, or - for stdout")
    return parser


def _load_story(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        print(f"cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)
    try:
        return deserialize_story(data)
    except StoryError as exc:
        print(f"invalid story file: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)


def _write_out(path: str, data: bytes) -> None:
    try:
        if path == "-":
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
        else:
            Path(path).write_bytes(data)
    except OSError as exc:
        print(f"cannot write {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)


def _print_diagnostics(diags: list[Diagnostic], as_json: bool) -> None:
    if as_json:
        print(json.dumps(
            [{"severity": d.severity, "component_id": d.component_id,
              "message": d.message} for d in diags]
        ))
        return
    for d in diags:
        scope = f" [{d.component_id}]" if d.component_id else ""
        print(f"{d.severity}{scope}: {d.message}")


def _cmd_validate(args) -> int:
    story = _load_story(args.story)
    diags = validate_story(story)
    _print_diagnostics(diags, args.json_diagnostics)
    errors = sum(1 for d in diags if d.severity == "error")
    if not args.json_diagnostics:
        print(f"{len(diags)} diagnostic(s), {errors} error(s)")
    return EXIT_VALIDATION if errors else EXIT_OK


def _cmd_export(args) -> int:
    story = _load_story(args.story)
    policy = SnapshotPolicy("live" if args.live else "snapshot")
    payloads = {}
    if args.format in ("html", "pdf") and policy.mode == "snapshot":
        try:
            payloads = fetch_story_payloads(story)
        except ComponentFetchError as exc:
            print(f"endpoint failure in component {exc.component_id!r}: {exc.cause}",
                  file=sys.stderr)
            return EXIT_ENDPOINT
    bundle = export_story(story, payloads, args.format, policy)
    _write_out(args.out, bundle.data)
    if args.out != "-":
        print(f"wrote {args.out} ({len(bundle.data)} bytes, {bundle.media_type})")
    return EXIT_OK


def _cmd_snapshot(args) -> int:
    story = _load_story(args.story)
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"cannot create {out_dir}: {exc}", file=sys.stderr)
        return EXIT_IO
    endpoint = EndpointRef(url=story.endpoint)
    written = 0
    for comp in story.components:
        if comp.type not in ("counter", "chart", "table", "map"):
            continue
        try:
            rs = run_component_query(comp, endpoint)
        except GatewayError as exc:
            print(f"endpoint failure in component {comp.id!r}: {exc}", file=sys.stderr)
            return EXIT_ENDPOINT
        _write_out(str(out_dir / f"{comp.id}.json"), serialize_results_json(rs))
        written += 1
    print(f"wrote {written} result file(s) to {out_dir}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app
    from .service.config import ServiceConfig

    config = (
        ServiceConfig.from_file(args.config) if args.config else ServiceConfig.from_env()
    )
    app = create_app(config)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def _cmd_new(args) -> int:
    try:
        story = create_story(
            title=args.title, endpoint=args.endpoint, section=args.section
        )
    except StoryError as exc:
        print(f"cannot create story: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    _write_out(args.out, serialize_story(story))
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "export": _cmd_export,
    "snapshot": _cmd_snapshot,
    "serve": _cmd_serve,
    "new": _cmd_new,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    return _COMMANDS[args.subcommand](args)


if __name__ == "__main__":
    sys.exit(main())
