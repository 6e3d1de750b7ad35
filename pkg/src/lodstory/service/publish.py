"""Publication to static-site targets.

Members publish to the main site under /stories/{section-slug}/{story-id}/;
external users publish to a flat separate catalogue. Every published story
directory holds the snapshot HTML, the story JSON, and a small meta file
whose first-publication timestamp makes republishing byte-idempotent.
"""

from __future__ import annotations

import json
import shutil
import threading
from dataclasses import dataclass
from pathlib import Path

from ..evaluate import RenderPayload
from ..export import SnapshotPolicy, export_story
from ..story import Story, deserialize_story, slugify

MAIN_SITE = "main_site"
EXTERNAL_CATALOGUE = "external_catalogue"
DEFAULT_SECTION = "General"


class PublishTargetUnavailable(Exception):
    pass


@dataclass(frozen=True)
class PublishTarget:
    kind: str  # main_site | external_catalogue
    root: Path
    base_url: str

    def __post_init__(self):
        if self.kind not in (MAIN_SITE, EXTERNAL_CATALOGUE):
            raise ValueError(f"unknown publish target kind {self.kind!r}")


_target_locks: dict[str, threading.Lock] = {}
_target_locks_guard = threading.Lock()


def _target_lock(target: PublishTarget) -> threading.Lock:
    key = str(target.root)
    with _target_locks_guard:
        return _target_locks.setdefault(key, threading.Lock())


def _story_dir(target: PublishTarget, story: Story) -> Path:
    if target.kind == MAIN_SITE:
        section = slugify(story.section or DEFAULT_SECTION)
        return target.root / "stories" / section / story.id
    return target.root / story.id


def story_url(target: PublishTarget, story: Story) -> str:
    base = target.base_url.rstrip("/")
    if target.kind == MAIN_SITE:
        section = slugify(story.section or DEFAULT_SECTION)
        return f"{base}/stories/{section}/{story.id}/"
    return f"{base}/{story.id}/"


def publish_story(
    story: Story, payloads: dict[str, RenderPayload], target: PublishTarget,
    *, clock=None,
) -> str:
    """Write the snapshot HTML (plus story JSON) under the target and
    return the public URL. Republishing is idempotent: the first
    publication timestamp is preserved so index ordering never shifts."""
    import time

    clock = clock or time.time
    with _target_lock(target):
        try:
            directory = _story_dir(target, story)
            directory.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise PublishTargetUnavailable(f"{target.root}: {exc}") from exc

        bundle = export_story(story, payloads, "html", SnapshotPolicy("snapshot"))
        (directory / "index.html").write_bytes(bundle.data)
        (directory / "story.json").write_bytes(
            export_story(story, {}, "json").data
        )
        meta_path = directory / "meta.json"
        if not meta_path.exists():
            meta = {"published_at": round(clock(), 3)}
            meta_path.write_text(json.dumps(meta), encoding="utf-8")
    rebuild_site_index(target)
    return story_url(target, story)


def unpublish_story(story_id: str, target: PublishTarget) -> bool:
    """Remove a published story directory; returns whether one existed."""
    removed = False
    with _target_lock(target):
        if target.kind == MAIN_SITE:
            candidates = list((target.root / "stories").glob(f"*/{story_id}"))
        else:
            path = target.root / story_id
            candidates = [path] if path.exists() else []
        for path in candidates:
            shutil.rmtree(path)
            removed = True
    if removed:
        rebuild_site_index(target)
    return removed


def _published_entries(target: PublishTarget):
    pattern = "stories/*/*/story.json" if target.kind == MAIN_SITE else "*/story.json"
    for story_json in sorted(target.root.glob(pattern)):
        directory = story_json.parent
        story = deserialize_story(story_json.read_bytes())
        published_at = 0.0
        meta_path = directory / "meta.json"
        if meta_path.exists():
            published_at = float(
                json.loads(meta_path.read_text(encoding="utf-8")).get("published_at", 0.0)
            )
        yield story, published_at


def rebuild_site_index(target: PublishTarget) -> dict:
    """Scan published stories and write index.json at the target root.

    Main-site entries group by section (title ascending); stories within a
    section order by publication time, then id. The external catalogue has
    no section grouping: one flat section."""
    if not target.root.is_dir():
        raise PublishTargetUnavailable(str(target.root))
    sections: dict[str, list[tuple[float, str, dict]]] = {}
    for story, published_at in _published_entries(target):
        title = (
            (story.section or DEFAULT_SECTION)
            if target.kind == MAIN_SITE else "Published stories"
        )
        entry = {
            "id": story.id,
            "title": story.title,
            "url": story_url(target, story),
        }
        sections.setdefault(title, []).append((published_at, story.id, entry))

    index = {
        "sections": [
            {
                "section": title,
                "stories": [entry for _, _, entry in sorted(sections[title])],
            }
            for title in sorted(sections)
        ]
    }
    (target.root / "index.json").write_text(
        json.dumps(index, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    return index


def load_site_index(target: PublishTarget) -> dict:
    path = target.root / "index.json"
    if not path.exists():
        return {"sections": []}
    return json.loads(path.read_text(encoding="utf-8"))
