"""RDF terms and triples."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

IRI = "iri"
BNODE = "bnode"
LITERAL = "literal"

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label"


class DomainError(ValueError):
    """Raised when an operation is undefined for its input (e.g. an empty dataset)."""


@dataclass(frozen=True, slots=True, repr=False)
class Term:
    kind: str
    value: str
    datatype: Optional[str] = None
    lang: Optional[str] = None

    def __post_init__(self):
        if self.kind == IRI:
            if not self.value or any(c.isspace() for c in self.value):
                raise ValueError(f"invalid IRI: {self.value!r}")
        elif self.kind == BNODE:
            if not self.value:
                raise ValueError("blank node id must be non-empty")
        elif self.kind == LITERAL:
            if self.datatype is not None and self.lang is not None:
                raise ValueError("literal cannot carry both a datatype and a language tag")
        else:
            raise ValueError(f"unknown term kind: {self.kind!r}")
        if self.kind != LITERAL and (self.datatype is not None or self.lang is not None):
            raise ValueError("only literals carry datatype or language tag")

    @property
    def is_iri(self) -> bool:
        return self.kind == IRI

    @property
    def is_bnode(self) -> bool:
        return self.kind == BNODE

    @property
    def is_literal(self) -> bool:
        return self.kind == LITERAL

    def n3(self) -> str:
        if self.kind == IRI:
            return f"<{_escape_iri(self.value)}>"
        if self.kind == BNODE:
            return f"_:{self.value}"
        out = f'"{escape_string(self.value)}"'
        if self.lang is not None:
            out += f"@{self.lang}"
        elif self.datatype is not None:
            out += f"^^<{_escape_iri(self.datatype)}>"
        return out

    def sort_key(self) -> tuple:
        return (self.kind, self.value, self.datatype or "", self.lang or "")

    def __str__(self) -> str:
        return self.n3()

    def __repr__(self) -> str:
        return f"Term({self.n3()})"


def iri(value: str) -> Term:
    return Term(IRI, value)


def bnode(value: str) -> Term:
    return Term(BNODE, value)


def literal(value: str, datatype: str | None = None, lang: str | None = None) -> Term:
    return Term(LITERAL, value, datatype, lang)


@dataclass(frozen=True, slots=True, repr=False)
class Triple:
    s: Term
    p: Term
    o: Term

    def __post_init__(self):
        if self.s.is_literal:
            raise ValueError("subject cannot be a literal")
        if not self.p.is_iri:
            raise ValueError("predicate must be an IRI")

    def n3(self) -> str:
        return f"{self.s.n3()} {self.p.n3()} {self.o.n3()} ."

    def sort_key(self) -> tuple:
        return (self.s.sort_key(), self.p.sort_key(), self.o.sort_key())

    def __repr__(self) -> str:
        return f"Triple({self.n3()})"


_STRING_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def escape_string(value: str) -> str:
    return "".join(_STRING_ESCAPES.get(c, c) for c in value)


def _escape_iri(value: str) -> str:
    out = []
    for c in value:
        if c in "<>\"{}|^`\\" or ord(c) <= 0x20:
            out.append(f"\\u{ord(c):04X}")
        else:
            out.append(c)
    return "".join(out)
