"""Allowlist HTML sanitizer for curated-text components.

Allowed: p, h1-h4, b, i, em, strong, a[href], ul, ol, li, br, blockquote,
img[src, alt]. Script/style elements are removed with their content; other
unknown tags are unwrapped; event handlers and unsafe URL schemes are
stripped. The output is what exports embed verbatim.
"""

from __future__ import annotations

import html
from html.parser import HTMLParser

ALLOWED_TAGS = frozenset(
    ["p", "h1", "h2", "h3", "h4", "b", "i", "em", "strong", "a",
     "ul", "ol", "li", "br", "blockquote", "img"]
)
ALLOWED_ATTRS = {"a": frozenset(["href"]), "img": frozenset(["src", "alt"])}
VOID_TAGS = frozenset(["br", "img"])
DROP_WITH_CONTENT = frozenset(["script", "style", "iframe", "object", "embed"])
_SAFE_SCHEMES = ("http:", "https:", "mailto:")


def _safe_url(value: str) -> bool:
    stripped = "".join(value.split()).lower()
    if ":" not in stripped:
        return True  # relative
    return stripped.startswith(_SAFE_SCHEMES)


class _Sanitizer(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.out: list[str] = []
        self.open_stack: list[str] = []
        self.suppress_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in DROP_WITH_CONTENT:
            if tag not in VOID_TAGS:
                self.suppress_depth += 1
            return
        if self.suppress_depth or tag not in ALLOWED_TAGS:
            return
        kept = []
        for name, value in attrs:
            if name in ALLOWED_ATTRS.get(tag, ()) and value is not None and _safe_url(value):
                kept.append(f' {name}="{html.escape(value, quote=True)}"')
        if tag in VOID_TAGS:
            self.out.append(f"<{tag}{''.join(kept)}/>")
        else:
            self.out.append(f"<{tag}{''.join(kept)}>")
            self.open_stack.append(tag)

    def handle_startendtag(self, tag, attrs):
        if tag in VOID_TAGS:
            self.handle_starttag(tag, attrs)

    def handle_endtag(self, tag):
        if tag in DROP_WITH_CONTENT:
            if self.suppress_depth:
                self.suppress_depth -= 1
            return
        if self.suppress_depth or tag not in ALLOWED_TAGS or tag in VOID_TAGS:
            return
        if tag in self.open_stack:
            # close intermediate unclosed tags up to this one
            while self.open_stack:
                top = self.open_stack.pop()
                self.out.append(f"</{top}>")
                if top == tag:
                    break

    def handle_data(self, data):
        if not self.suppress_depth:
            self.out.append(html.escape(data, quote=False))

    def finish(self) -> str:
        while self.open_stack:
            self.out.append(f"</{self.open_stack.pop()}>")
        return "".join(self.out)


def sanitize_html(raw: str) -> str:
    parser = _Sanitizer()
    parser.feed(raw)
    parser.close()
    return parser.finish()
