"""Tiered authentication: anonymous, external, and member principals.

The concrete identity source is pluggable behind AuthProvider; the bundled
file provider reads a static token table (dev/test deployments). A real
deployment points the provider at its organisation's identity service.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

ANONYMOUS_TIER = "anonymous"
EXTERNAL_TIER = "external"
MEMBER_TIER = "member"


class InvalidToken(Exception):
    pass


@dataclass(frozen=True)
class Principal:
    subject: str | None
    tier: str

    def __post_init__(self):
        if self.tier not in (ANONYMOUS_TIER, EXTERNAL_TIER, MEMBER_TIER):
            raise ValueError(f"unknown tier {self.tier!r}")
        if self.tier == ANONYMOUS_TIER and self.subject is not None:
            raise ValueError("anonymous principals carry no subject")
        if self.tier != ANONYMOUS_TIER and not self.subject:
            raise ValueError("authenticated principals need a subject")

    @property
    def is_anonymous(self) -> bool:
        return self.tier == ANONYMOUS_TIER


ANONYMOUS = Principal(subject=None, tier=ANONYMOUS_TIER)


class AuthProvider(Protocol):
    def verify(self, token: str) -> tuple[str, str]:
        """Return (subject, membership tier) or raise InvalidToken."""


class NullAuthProvider:
    """No identity source configured: every token is invalid."""

    def verify(self, token: str) -> tuple[str, str]:
        raise InvalidToken("no auth provider configured")


class FileAuthProvider:
    """Token table from a JSON file:
    {"<token>": {"subject": "alice", "member": true}, ...}"""

    def __init__(self, path: str | Path):
        with open(path, encoding="utf-8") as handle:
            table = json.load(handle)
        self._tokens: dict[str, tuple[str, str]] = {}
        for token, entry in table.items():
            tier = MEMBER_TIER if entry.get("member") else EXTERNAL_TIER
            self._tokens[token] = (entry["subject"], tier)

    def verify(self, token: str) -> tuple[str, str]:
        if token not in self._tokens:
            raise InvalidToken("unknown token")
        return self._tokens[token]


def authenticate(
    authorization: str | None, provider: AuthProvider
) -> tuple[Principal, bool]:
    """Resolve an Authorization header into a principal.

    Never raises: missing or invalid credentials degrade to anonymous.
    The second element reports whether a token was present but invalid
    (protected routes answer 401 in that case instead of proceeding)."""
    if not authorization:
        return ANONYMOUS, False
    parts = authorization.split(None, 1)
    if len(parts) != 2 or parts[0].lower() != "bearer" or not parts[1].strip():
        return ANONYMOUS, True
    try:
        subject, tier = provider.verify(parts[1].strip())
    except InvalidToken:
        return ANONYMOUS, True
    return Principal(subject=subject, tier=tier), False
