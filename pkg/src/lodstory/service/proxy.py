"""Rate limiting and response caching for the SPARQL proxy route."""

from __future__ import annotations

import threading
import time


class RateLimited(Exception):
    pass


class RateLimiter:
    """Token bucket per key: `rate` requests per second, burst of the same
    size. The clock is injectable for deterministic tests."""

    def __init__(self, rate: float, time_fn=time.monotonic):
        self.rate = rate
        self.capacity = rate
        self._time = time_fn
        self._buckets: dict[str, tuple[float, float]] = {}  # key -> (tokens, stamp)
        self._lock = threading.Lock()

    def check(self, key: str) -> None:
        now = self._time()
        with self._lock:
            tokens, stamp = self._buckets.get(key, (self.capacity, now))
            tokens = min(self.capacity, tokens + (now - stamp) * self.rate)
            if tokens < 1.0:
                self._buckets[key] = (tokens, now)
                raise RateLimited(key)
            self._buckets[key] = (tokens - 1.0, now)


class TtlCache:
    """Tiny TTL cache for proxied query responses."""

    def __init__(self, ttl: float, time_fn=time.monotonic):
        self.ttl = ttl
        self._time = time_fn
        self._entries: dict[object, tuple[float, bytes]] = {}
        self._lock = threading.Lock()

    def get(self, key) -> bytes | None:
        now = self._time()
        with self._lock:
            entry = self._entries.get(key)
            if entry is None or entry[0] < now:
                self._entries.pop(key, None)
                return None
            return entry[1]

    def put(self, key, value: bytes) -> None:
        with self._lock:
            self._entries[key] = (self._time() + self.ttl, value)
