"""File-backed story store with optimistic concurrency.

Each story is a pair of files in the content directory: {id}.json (the
schema-exact story document) and {id}.meta.json (revision, owner). Writes
go through a per-story lock and an atomic replace; updates must present
the revision they were based on.

Anonymous drafts never touch the filesystem: they live in a per-session
in-memory scope and disappear with it.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
import threading
from dataclasses import dataclass
from pathlib import Path

from ..story import Story, deserialize_story, serialize_story

_ID_RE = re.compile(r"^[a-z0-9][a-z0-9-]*$")


class NotFound(KeyError):
    pass


class AlreadyExists(ValueError):
    pass


class RevisionConflict(Exception):
    def __init__(self, expected: int, actual: int):
        super().__init__(f"update based on revision {expected}, store has {actual}")
        self.expected = expected
        self.actual = actual


@dataclass(frozen=True)
class StoredStory:
    story: Story
    revision: int
    owner: str | None


class StoryStore:
    def __init__(self, content_dir: str | Path):
        self.content_dir = Path(content_dir)
        self.content_dir.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock(self, story_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(story_id, threading.Lock())

    def _story_path(self, story_id: str) -> Path:
        if not _ID_RE.match(story_id):
            raise NotFound(story_id)
        return self.content_dir / f"{story_id}.json"

    def _meta_path(self, story_id: str) -> Path:
        return self.content_dir / f"{story_id}.meta.json"

    def _write(self, story: Story, revision: int, owner: str | None) -> None:
        story_path = self._story_path(story.id)
        data = serialize_story(story)
        meta = json.dumps({"revision": revision, "owner": owner}).encode("utf-8")
        for path, blob in ((story_path, data), (self._meta_path(story.id), meta)):
            fd, tmp = tempfile.mkstemp(dir=self.content_dir, suffix=".tmp")
            with os.fdopen(fd, "wb") as handle:
                handle.write(blob)
            os.replace(tmp, path)

    def _read(self, story_id: str) -> StoredStory:
        path = self._story_path(story_id)
        if not path.exists():
            raise NotFound(story_id)
        story = deserialize_story(path.read_bytes())
        revision, owner = 0, None
        meta_path = self._meta_path(story_id)
        if meta_path.exists():
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
            revision = int(meta.get("revision", 0))
            owner = meta.get("owner")
        return StoredStory(story=story, revision=revision, owner=owner)

    # -- public API -----------------------------------------------------------

    def ids(self) -> list[str]:
        return sorted(
            p.stem for p in self.content_dir.glob("*.json")
            if not p.name.endswith(".meta.json") and _ID_RE.match(p.stem)
        )

    def list(self) -> list[StoredStory]:
        return [self._read(story_id) for story_id in self.ids()]

    def get(self, story_id: str) -> StoredStory:
        with self._lock(story_id):
            return self._read(story_id)

    def create(self, story: Story, owner: str | None) -> StoredStory:
        with self._lock(story.id):
            if self._story_path(story.id).exists():
                raise AlreadyExists(story.id)
            self._write(story, 0, owner)
            return StoredStory(story=story, revision=0, owner=owner)

    def update(self, story: Story, expected_revision: int) -> StoredStory:
        with self._lock(story.id):
            current = self._read(story.id)
            if current.revision != expected_revision:
                raise RevisionConflict(expected_revision, current.revision)
            new_revision = expected_revision + 1
            self._write(story, new_revision, current.owner)
            return StoredStory(story=story, revision=new_revision, owner=current.owner)

    def delete(self, story_id: str) -> None:
        with self._lock(story_id):
            path = self._story_path(story_id)
            if not path.exists():
                raise NotFound(story_id)
            path.unlink()
            self._meta_path(story_id).unlink(missing_ok=True)


class SessionStore:
    """In-memory scope for anonymous drafts, keyed by session id."""

    def __init__(self):
        self._sessions: dict[str, dict[str, StoredStory]] = {}
        self._lock = threading.Lock()

    def _scope(self, session_id: str) -> dict[str, StoredStory]:
        with self._lock:
            return self._sessions.setdefault(session_id, {})

    def ids(self, session_id: str) -> list[str]:
        return sorted(self._scope(session_id))

    def list(self, session_id: str) -> list[StoredStory]:
        scope = self._scope(session_id)
        return [scope[k] for k in sorted(scope)]

    def get(self, session_id: str, story_id: str) -> StoredStory:
        scope = self._scope(session_id)
        if story_id not in scope:
            raise NotFound(story_id)
        return scope[story_id]

    def create(self, session_id: str, story: Story) -> StoredStory:
        with self._lock:
            scope = self._sessions.setdefault(session_id, {})
            if story.id in scope:
                raise AlreadyExists(story.id)
            stored = StoredStory(story=story, revision=0, owner=None)
            scope[story.id] = stored
            return stored

    def update(self, session_id: str, story: Story, expected_revision: int) -> StoredStory:
        with self._lock:
            scope = self._sessions.setdefault(session_id, {})
            if story.id not in scope:
                raise NotFound(story.id)
            current = scope[story.id]
            if current.revision != expected_revision:
                raise RevisionConflict(expected_revision, current.revision)
            stored = StoredStory(story=story, revision=expected_revision + 1, owner=None)
            scope[story.id] = stored
            return stored

    def delete(self, session_id: str, story_id: str) -> None:
        with self._lock:
            scope = self._sessions.setdefault(session_id, {})
            if story_id not in scope:
                raise NotFound(story_id)
            del scope[story_id]
