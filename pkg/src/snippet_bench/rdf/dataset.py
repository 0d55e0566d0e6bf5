"""Immutable indexed triple store plus the query and snippet value types."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Union

from .ntriples import ParseReport, Source, iter_triples, read_lines
from .terms import RDF_TYPE, RDFS_LABEL, DomainError, Term, Triple, iri
from .text import contains_match, local_name, tokenize

MATCH_MODES = ("token", "substring")

_TYPE = iri(RDF_TYPE)
_LABEL = iri(RDFS_LABEL)


class Dataset:
    """A deduplicated, insertion-ordered set of triples with derived indexes.

    Every index is a pure function of ``triples``; the instance is never
    mutated after construction, so it can be shared freely between workers.
    """

    def __init__(self, triples: Iterable[Triple] = (), dataset_id: str = "", match: str = "token"):
        if match not in MATCH_MODES:
            raise ValueError(f"match must be one of {MATCH_MODES}, got {match!r}")
        self.id = dataset_id
        self.match = match
        self.parse_report: ParseReport | None = None

        index_of: dict[Triple, int] = {}
        for t in triples:
            if t not in index_of:
                index_of[t] = len(index_of)
        self.triples: tuple[Triple, ...] = tuple(index_of)
        self.index_of = index_of

        labels: dict[Term, list[str]] = defaultdict(list)
        class_counts: Counter[Term] = Counter()
        prop_counts: Counter[Term] = Counter()
        out_deg: Counter[Term] = Counter()
        in_deg: Counter[Term] = Counter()
        incident: dict[Term, list[int]] = defaultdict(list)
        for i, t in enumerate(self.triples):
            prop_counts[t.p] += 1
            out_deg[t.s] += 1
            in_deg[t.o] += 1
            incident[t.s].append(i)
            if not t.o.is_literal and t.o != t.s:
                incident[t.o].append(i)
            if t.p == _TYPE:
                class_counts[t.o] += 1
            elif t.p == _LABEL and t.o.is_literal:
                labels[t.s].append(t.o.value)

        self.labels = dict(labels)
        self.class_counts = class_counts
        self.type_total = sum(class_counts.values())
        self.prop_counts = prop_counts
        self.out_deg = out_deg
        self.in_deg = in_deg
        # non-literal endpoint -> indices of triples touching it
        self.incident = dict(incident)
        self.classes = frozenset(class_counts)
        self.entity_set = frozenset(
            r for t in self.triples for r in (t.s, t.o) if not r.is_literal and r not in self.classes
        )

        self._form_tokens: dict[Term, tuple[tuple[str, ...], ...]] = {}
        inverted_terms: dict[str, set[Term]] = defaultdict(set)
        for t in self.triples:
            for r in (t.s, t.p, t.o):
                if r in self._form_tokens:
                    continue
                toks = tuple(tuple(tokenize(f)) for f in sorted(self.text_forms(r)))
                self._form_tokens[r] = toks
                for form in toks:
                    for tok in form:
                        inverted_terms[tok].add(r)
        inverted_triples: dict[str, set[int]] = defaultdict(set)
        for i, t in enumerate(self.triples):
            for r in (t.s, t.p, t.o):
                for form in self._form_tokens[r]:
                    for tok in form:
                        inverted_triples[tok].add(i)
        self.inverted_terms = dict(inverted_terms)
        self.inverted_triples = dict(inverted_triples)

    def __len__(self) -> int:
        return len(self.triples)

    def __repr__(self) -> str:
        return f"Dataset(id={self.id!r}, triples={len(self.triples)})"

    @cached_property
    def triple_set(self) -> frozenset[Triple]:
        return frozenset(self.triples)

    @cached_property
    def terms(self) -> tuple[Term, ...]:
        return tuple(self._form_tokens)

    def text_forms(self, r: Term) -> set[str]:
        if r.is_literal:
            return {r.value}
        forms = set(self.labels.get(r, ()))
        if r.is_iri:
            name = local_name(r.value)
            if name:
                forms.add(name)
        return forms

    def form_tokens(self, r: Term) -> tuple[tuple[str, ...], ...]:
        cached = self._form_tokens.get(r)
        if cached is None:
            cached = tuple(tuple(tokenize(f)) for f in sorted(self.text_forms(r)))
        return cached

    def term_covers(self, r: Term, keyword: str) -> bool:
        if self.match == "substring":
            return any(keyword in f.lower() for f in self.text_forms(r))
        kw = tuple(tokenize(keyword))
        return any(contains_match(form, kw) for form in self.form_tokens(r))

    def terms_covering(self, keyword: str) -> set[Term]:
        """All terms of the dataset that cover ``keyword``."""
        if self.match == "substring":
            return {r for r in self.terms if self.term_covers(r, keyword)}
        kw = tuple(tokenize(keyword))
        if not kw:
            return set()
        return {r for r in self.inverted_terms.get(kw[0], ()) if self.term_covers(r, keyword)}

    def triples_covering(self, keyword: str) -> set[int]:
        """Indices of triples with a subject, predicate or object covering ``keyword``."""
        if self.match == "substring":
            return {i for r in self.terms_covering(keyword) for i in self._positions(r)}
        kw = tuple(tokenize(keyword))
        if not kw:
            return set()
        candidates = self.inverted_triples.get(kw[0], ())
        if len(kw) == 1:
            return set(candidates)
        return {i for i in candidates if covers(self, self.triples[i], keyword)}

    def _positions(self, r: Term) -> list[int]:
        return [i for i, t in enumerate(self.triples) if r in (t.s, t.p, t.o)]

    @cached_property
    def max_log_out(self) -> float:
        return max((math.log(self.out_deg[e] + 1) for e in self.entity_set), default=0.0)

    @cached_property
    def max_log_in(self) -> float:
        return max((math.log(self.in_deg[e] + 1) for e in self.entity_set), default=0.0)

    @cached_property
    def pagerank(self) -> dict[Term, float]:
        from ..graph import pagerank

        return pagerank(self)

    def index_state(self) -> dict:
        """Snapshot of every derived index, used to check rebuild determinism."""
        return {
            "triples": self.triples,
            "labels": self.labels,
            "class_counts": dict(self.class_counts),
            "prop_counts": dict(self.prop_counts),
            "out_deg": dict(self.out_deg),
            "in_deg": dict(self.in_deg),
            "incident": self.incident,
            "classes": self.classes,
            "entity_set": self.entity_set,
            "inverted_terms": self.inverted_terms,
            "inverted_triples": self.inverted_triples,
        }


def parse_ntriples(
    source: Source, strict: bool = True, dataset_id: str = "", match: str = "token"
) -> Dataset:
    """Parse N-Triples from bytes, text, or a stream into an indexed Dataset.

    In lenient mode (``strict=False``) malformed lines are skipped and listed
    in ``dataset.parse_report``.
    """
    report = ParseReport()
    triples = list(iter_triples(read_lines(source), strict=strict, report=report))
    d = Dataset(triples, dataset_id=dataset_id, match=match)
    report.triples = len(d.triples)
    report.duplicates = len(triples) - len(d.triples)
    d.parse_report = report
    return d


def load_ntriples(path: Union[str, Path], strict: bool = True, match: str = "token") -> Dataset:
    path = Path(path)
    with open(path, "rb") as fh:
        return parse_ntriples(fh, strict=strict, dataset_id=path.stem, match=match)


@dataclass(frozen=True)
class Query:
    keywords: tuple[str, ...]

    def __init__(self, keywords: Iterable[str]):
        seen: dict[str, None] = {}
        for kw in keywords:
            kw = kw.strip().lower()
            if not kw:
                raise ValueError("keywords must be non-empty strings")
            seen.setdefault(kw, None)
        if not seen:
            raise ValueError("a query needs at least one keyword")
        object.__setattr__(self, "keywords", tuple(seen))

    @classmethod
    def parse(cls, text: str) -> "Query":
        return cls(part for part in text.split(",") if part.strip())

    def __len__(self) -> int:
        return len(self.keywords)

    def __iter__(self):
        return iter(self.keywords)


@dataclass(frozen=True)
class Snippet:
    triples: frozenset[Triple] = field(default_factory=frozenset)
    isolated: frozenset[Term] = field(default_factory=frozenset)
    dataset_id: str = ""
    generator: str = ""

    def __post_init__(self):
        object.__setattr__(self, "triples", frozenset(self.triples))
        object.__setattr__(self, "isolated", frozenset(self.isolated))
        used = {r for t in self.triples for r in (t.s, t.p, t.o)}
        clash = used & self.isolated
        if clash:
            raise ValueError(f"isolated nodes already appear in the snippet's triples: {sorted(map(str, clash))}")

    def __len__(self) -> int:
        return len(self.triples)

    @property
    def is_empty(self) -> bool:
        return not self.triples and not self.isolated

    def ordered_triples(self, d: Dataset) -> list[Triple]:
        return sorted(self.triples, key=d.index_of.__getitem__)


def text_forms(d: Dataset, r: Term) -> set[str]:
    return d.text_forms(r)


def covers(d: Dataset, x: Union[Term, Triple], keyword: str) -> bool:
    if isinstance(x, Triple):
        return d.term_covers(x.s, keyword) or d.term_covers(x.p, keyword) or d.term_covers(x.o, keyword)
    return d.term_covers(x, keyword)


def class_frequency(d: Dataset, c: Term) -> float:
    if d.type_total == 0:
        raise DomainError("dataset has no rdf:type triple")
    return d.class_counts.get(c, 0) / d.type_total


def property_frequency(d: Dataset, p: Term) -> float:
    if not d.triples:
        raise DomainError("dataset is empty")
    return d.prop_counts.get(p, 0) / len(d.triples)


def degrees(d: Dataset, r: Term) -> tuple[int, int]:
    return d.out_deg.get(r, 0), d.in_deg.get(r, 0)


def entities(d: Dataset, scope: Union[Dataset, Snippet]) -> set[Term]:
    found = {r for t in scope.triples for r in (t.s, t.o) if not r.is_literal and r not in d.classes}
    if isinstance(scope, Snippet):
        found.update(r for r in scope.isolated if not r.is_literal and r not in d.classes)
    return found
