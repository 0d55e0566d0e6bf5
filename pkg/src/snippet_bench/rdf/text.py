"""Tokenization, local names and keyword matching."""

from __future__ import annotations

import re
from urllib.parse import urlsplit

_ALNUM_RUN = re.compile(r"[^\W_]+")


def tokenize(text: str) -> list[str]:
    """Split on non-alphanumerics and lower-to-upper camelCase boundaries, then lowercase."""
    tokens = []
    for run in _ALNUM_RUN.findall(text):
        start = 0
        for i in range(1, len(run)):
            if run[i - 1].islower() and run[i].isupper():
                tokens.append(run[start:i].lower())
                start = i
        tokens.append(run[start:].lower())
    return tokens


def local_name(iri: str) -> str:
    if "#" in iri:
        fragment = iri.split("#", 1)[1]
        if fragment:
            return fragment
        iri = iri.split("#", 1)[0]
    path = urlsplit(iri).path
    return path.rsplit("/", 1)[-1]


def contains_match(form_tokens: tuple[str, ...], keyword_tokens: tuple[str, ...]) -> bool:
    """True iff ``keyword_tokens`` occurs as a contiguous run inside ``form_tokens``."""
    n = len(keyword_tokens)
    if n == 0:
        return False
    if n == 1:
        return keyword_tokens[0] in form_tokens
    return any(form_tokens[i : i + n] == keyword_tokens for i in range(len(form_tokens) - n + 1))
