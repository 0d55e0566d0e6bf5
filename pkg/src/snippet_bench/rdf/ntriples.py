"""Line-based N-Triples reader and writer.

Supports IRIs in angle brackets, blank nodes ``_:id``, literals with an
optional ``^^<datatype>`` or ``@lang`` suffix, ``#`` comments and blank lines.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Union

from .terms import BNODE, IRI, LITERAL, Term, Triple

_BNODE_RE = re.compile(r"_:(\w[\w\-.]*)")
_LANG_RE = re.compile(r"@([A-Za-z]+(?:-[A-Za-z0-9]+)*)")
_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


class NTriplesSyntaxError(SyntaxError):
    def __init__(self, line: int, column: int, reason: str):
        super().__init__(f"line {line}, column {column}: {reason}")
        self.line = line
        self.column = column
        self.reason = reason


@dataclass
class ParseReport:
    lines: int = 0
    triples: int = 0
    duplicates: int = 0
    skipped: list[NTriplesSyntaxError] = field(default_factory=list)

    @property
    def skipped_count(self) -> int:
        return len(self.skipped)


class _LineParser:
    def __init__(self, text: str, lineno: int):
        self.text = text
        self.pos = 0
        self.lineno = lineno

    def error(self, reason: str) -> NTriplesSyntaxError:
        return NTriplesSyntaxError(self.lineno, self.pos + 1, reason)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def iri(self) -> str:
        assert self.text[self.pos] == "<"
        self.pos += 1
        out = []
        while True:
            if self.pos >= len(self.text):
                raise self.error("unterminated IRI")
            c = self.text[self.pos]
            if c == ">":
                self.pos += 1
                break
            if c == "\\":
                out.append(self._unicode_escape())
                continue
            if c in ' <"{}|^`' or ord(c) <= 0x20:
                raise self.error(f"illegal character {c!r} in IRI")
            out.append(c)
            self.pos += 1
        value = "".join(out)
        if not value:
            raise self.error("empty IRI")
        return value

    def _unicode_escape(self) -> str:
        # self.text[self.pos] == "\\"
        kind = self.text[self.pos + 1 : self.pos + 2]
        width = {"u": 4, "U": 8}.get(kind)
        if width is None:
            raise self.error(f"invalid escape \\{kind}")
        digits = self.text[self.pos + 2 : self.pos + 2 + width]
        if len(digits) != width or not all(d in "0123456789abcdefABCDEF" for d in digits):
            raise self.error("malformed unicode escape")
        self.pos += 2 + width
        return chr(int(digits, 16))

    def string(self) -> str:
        assert self.text[self.pos] == '"'
        self.pos += 1
        out = []
        while True:
            if self.pos >= len(self.text):
                raise self.error("unterminated literal")
            c = self.text[self.pos]
            if c == '"':
                self.pos += 1
                return "".join(out)
            if c == "\\":
                nxt = self.text[self.pos + 1 : self.pos + 2]
                if nxt in _ECHAR:
                    out.append(_ECHAR[nxt])
                    self.pos += 2
                else:
                    out.append(self._unicode_escape())
                continue
            if c in "\n\r":
                raise self.error("newline in literal")
            out.append(c)
            self.pos += 1

    def term(self, position: str) -> Term:
        self.skip_ws()
        c = self.peek()
        if c == "<":
            return Term(IRI, self.iri())
        if c == "_" and position != "p":
            m = _BNODE_RE.match(self.text, self.pos)
            if not m:
                raise self.error("malformed blank node")
            label = m.group(1).rstrip(".")
            self.pos = m.start(1) + len(label)
            return Term(BNODE, label)
        if c == '"' and position == "o":
            lexical = self.string()
            if self.text.startswith("^^", self.pos):
                self.pos += 2
                if self.peek() != "<":
                    raise self.error("datatype must be an IRI")
                return Term(LITERAL, lexical, datatype=self.iri())
            if self.peek() == "@":
                m = _LANG_RE.match(self.text, self.pos)
                if not m:
                    raise self.error("malformed language tag")
                self.pos = m.end()
                return Term(LITERAL, lexical, lang=m.group(1))
            return Term(LITERAL, lexical)
        names = {"s": "subject", "p": "predicate", "o": "object"}
        raise self.error(f"unexpected {c!r} at start of {names[position]}" if c else "unexpected end of line")

    def triple(self) -> Triple:
        s = self.term("s")
        p = self.term("p")
        o = self.term("o")
        self.skip_ws()
        if self.peek() != ".":
            raise self.error("expected '.'")
        self.pos += 1
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] != "#":
            raise self.error("trailing content after '.'")
        return Triple(s, p, o)


def _is_blank(line: str) -> bool:
    stripped = line.strip()
    return not stripped or stripped.startswith("#")


def iter_triples(
    lines: Iterable[str], strict: bool = True, report: ParseReport | None = None
) -> Iterator[Triple]:
    """Yield triples line by line; malformed lines raise in strict mode and are
    recorded in ``report`` otherwise."""
    for lineno, raw in enumerate(lines, start=1):
        if report is not None:
            report.lines += 1
        line = raw.rstrip("\r\n")
        if _is_blank(line):
            continue
        try:
            yield _LineParser(line, lineno).triple()
        except NTriplesSyntaxError as exc:
            if strict:
                raise
            if report is not None:
                report.skipped.append(exc)
        except ValueError as exc:
            err = NTriplesSyntaxError(lineno, 1, str(exc))
            if strict:
                raise err from exc
            if report is not None:
                report.skipped.append(err)


Source = Union[bytes, str, IO[bytes], IO[str]]


def read_lines(source: Source) -> Iterable[str]:
    if isinstance(source, bytes):
        return source.decode("utf-8").split("\n")
    if isinstance(source, str):
        return source.split("\n")
    stream = source
    if isinstance(stream.read(0), bytes):
        stream = io.TextIOWrapper(stream, encoding="utf-8", newline="")
    return stream


def serialize_ntriples(triples: Iterable[Triple]) -> str:
    return "".join(t.n3() + "\n" for t in triples)


def parse_term(text: str) -> Term:
    """Parse a single N-Triples term such as ``<http://x>``, ``_:b0`` or ``"v"@en``."""
    parser = _LineParser(text.strip(), 1)
    term = parser.term("o")
    parser.skip_ws()
    if parser.pos != len(parser.text):
        raise parser.error("trailing content after term")
    return term
