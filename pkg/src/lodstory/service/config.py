"""Service configuration, read from the environment or a JSON file."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

ENV_PREFIX = "LODSTORY_"


@dataclass(frozen=True)
class ServiceConfig:
    content_dir: Path
    main_site_root: Path
    external_root: Path
    main_site_url: str = "/site"
    external_url: str = "/catalogue"
    base_url: str = ""  # public base of this service (embed fragments)
    tokens_file: Path | None = None
    rate_limit_per_sec: float = 10.0
    cache_ttl: float = 60.0
    query_timeout: float = 30.0
    max_rows: int = 10000
    ui_dir: Path | None = None

    def ensure_directories(self) -> None:
        for path in (self.content_dir, self.main_site_root, self.external_root):
            path.mkdir(parents=True, exist_ok=True)

    @classmethod
    def from_mapping(cls, data: dict) -> "ServiceConfig":
        def path_or_none(key):
            return Path(data[key]) if data.get(key) else None

        return cls(
            content_dir=Path(data["content_dir"]),
            main_site_root=Path(data["main_site_root"]),
            external_root=Path(data["external_root"]),
            main_site_url=data.get("main_site_url", "/site"),
            external_url=data.get("external_url", "/catalogue"),
            base_url=data.get("base_url", ""),
            tokens_file=path_or_none("tokens_file"),
            rate_limit_per_sec=float(data.get("rate_limit_per_sec", 10.0)),
            cache_ttl=float(data.get("cache_ttl", 60.0)),
            query_timeout=float(data.get("query_timeout", 30.0)),
            max_rows=int(data.get("max_rows", 10000)),
            ui_dir=path_or_none("ui_dir"),
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        with open(path, encoding="utf-8") as handle:
            return cls.from_mapping(json.load(handle))

    @classmethod
    def from_env(cls, environ: dict | None = None) -> "ServiceConfig":
        env = environ if environ is not None else os.environ
        keys = (
            "content_dir", "main_site_root", "external_root", "main_site_url",
            "external_url", "base_url", "tokens_file", "rate_limit_per_sec",
            "cache_ttl", "query_timeout", "max_rows", "ui_dir",
        )
        data = {
            key: env[ENV_PREFIX + key.upper()]
            for key in keys
            if ENV_PREFIX + key.upper() in env
        }
        data.setdefault("content_dir", "./data/stories")
        data.setdefault("main_site_root", "./data/site")
        data.setdefault("external_root", "./data/catalogue")
        return cls.from_mapping(data)
