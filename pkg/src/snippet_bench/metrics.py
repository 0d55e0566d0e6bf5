"""Snippet quality metrics: keyword, connection, schema and data coverage."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from itertools import combinations

from .graph import components, subdivide
from .rdf import RDF_TYPE, Dataset, Query, Snippet, entities, iri

_TYPE = iri(RDF_TYPE)


def harmonic_mean(x: float, y: float) -> float:
    if x < 0 or y < 0:
        raise ValueError("harmonic mean needs non-negative arguments")
    if x + y == 0:
        return 0.0
    return 2 * x * y / (x + y)


@dataclass(frozen=True)
class MetricReport:
    co_kyw: float
    co_cnx: float
    co_skm: float
    co_dat: float
    snippet_triple_count: int = 0
    isolated_node_count: int = 0
    generator: str = ""
    runtime_millis: int = 0
    # set when the dataset has no rdf:type triple and the class side of co_skm is taken as 1
    vacuous_class_side: bool = False

    def scores(self) -> tuple[float, float, float, float]:
        return (self.co_kyw, self.co_cnx, self.co_skm, self.co_dat)

    def to_dict(self) -> dict:
        return asdict(self)


def _snippet_indices(d: Dataset, s: Snippet) -> set[int]:
    return {d.index_of[t] for t in s.triples}


def covered_keywords(d: Dataset, s: Snippet, q: Query) -> list[str]:
    indices = _snippet_indices(d, s)
    out = []
    for kw in q:
        if d.triples_covering(kw) & indices or any(d.term_covers(r, kw) for r in s.isolated):
            out.append(kw)
    return out


def co_kyw(d: Dataset, s: Snippet, q: Query) -> float:
    return len(covered_keywords(d, s, q)) / len(q)


def connected_pairs(
    d: Dataset, s: Snippet, q: Query, shared_predicates: bool = False
) -> list[tuple[str, str]]:
    """Keyword pairs with covering nodes in a common component of the subdivision graph."""
    g = subdivide(d, s, shared_predicates)
    labels = components(g)
    hit: dict[str, set[int]] = {kw: set() for kw in q}
    for node in g.nodes:
        term = g.node_terms[node]
        for kw in q:
            if d.term_covers(term, kw):
                hit[kw].add(labels.component_of[node])
    return [(a, b) for a, b in combinations(q.keywords, 2) if hit[a] & hit[b]]


def co_cnx(d: Dataset, s: Snippet, q: Query, shared_predicates: bool = False) -> float:
    m = len(q)
    if m == 1:
        return co_kyw(d, s, q)
    return len(connected_pairs(d, s, q, shared_predicates)) / math.comb(m, 2)


def schema_sums(d: Dataset, s: Snippet) -> tuple[float, float, bool]:
    """(class frequency mass, property frequency mass, vacuous-class flag) covered by ``s``."""
    if not d.triples:
        return 0.0, 0.0, False
    classes = {t.o for t in s.triples if t.p == _TYPE}
    props = {t.p for t in s.triples}
    prop_sum = sum(d.prop_counts[p] for p in props) / len(d.triples)
    if d.type_total == 0:
        return 1.0, prop_sum, True
    class_sum = sum(d.class_counts[c] for c in classes) / d.type_total
    return class_sum, prop_sum, False


def co_skm(d: Dataset, s: Snippet) -> float:
    if not s.triples:
        return 0.0
    class_sum, prop_sum, _ = schema_sums(d, s)
    return harmonic_mean(class_sum, prop_sum)


def degree_terms(d: Dataset, s: Snippet) -> tuple[float, float]:
    """Mean log-normalized out-degree and in-degree over the snippet's entities."""
    ents = entities(d, s)
    if not ents:
        return 0.0, 0.0
    out_term = in_term = 0.0
    if d.max_log_out > 0:
        out_term = math.fsum(math.log(d.out_deg[e] + 1) for e in ents) / (len(ents) * d.max_log_out)
    if d.max_log_in > 0:
        in_term = math.fsum(math.log(d.in_deg[e] + 1) for e in ents) / (len(ents) * d.max_log_in)
    return out_term, in_term


def co_dat(d: Dataset, s: Snippet) -> float:
    return harmonic_mean(*degree_terms(d, s))


def check_snippet(d: Dataset, s: Snippet):
    stray = s.triples - d.triple_set
    if stray:
        raise ValueError(f"{len(stray)} snippet triple(s) are not in the dataset")


def evaluate(
    d: Dataset, s: Snippet, q: Query, runtime_millis: int = 0, shared_predicates: bool = False
) -> MetricReport:
    check_snippet(d, s)
    kyw = co_kyw(d, s, q)
    cnx = kyw if len(q) == 1 else co_cnx(d, s, q, shared_predicates)
    return MetricReport(
        co_kyw=kyw,
        co_cnx=cnx,
        co_skm=co_skm(d, s),
        co_dat=co_dat(d, s),
        snippet_triple_count=len(s.triples),
        isolated_node_count=len(s.isolated),
        generator=s.generator,
        runtime_millis=runtime_millis,
        vacuous_class_side=bool(d.triples) and d.type_total == 0,
    )


def explain(d: Dataset, s: Snippet, q: Query, shared_predicates: bool = False) -> dict:
    """Per-metric breakdown of ``evaluate`` as plain JSON-ready data."""
    report = evaluate(d, s, q, shared_predicates=shared_predicates)
    class_sum, prop_sum, vacuous = schema_sums(d, s)
    out_term, in_term = degree_terms(d, s)
    ents = sorted(entities(d, s), key=lambda r: r.sort_key())
    per_entity = [
        {
            "entity": e.n3(),
            "out_degree": d.out_deg[e],
            "in_degree": d.in_deg[e],
            "out_ratio": math.log(d.out_deg[e] + 1) / d.max_log_out if d.max_log_out else 0.0,
            "in_ratio": math.log(d.in_deg[e] + 1) / d.max_log_in if d.max_log_in else 0.0,
        }
        for e in ents
    ]
    return {
        "scores": {"coKyw": report.co_kyw, "coCnx": report.co_cnx, "coSkm": report.co_skm, "coDat": report.co_dat},
        "coKyw": {"keywords": list(q.keywords), "covered": covered_keywords(d, s, q)},
        "coCnx": {
            "pairs": len(q) * (len(q) - 1) // 2,
            "connected": [list(p) for p in connected_pairs(d, s, q, shared_predicates)],
        },
        "coSkm": {
            "class_sum": class_sum,
            "property_sum": prop_sum,
            "vacuous_class_side": vacuous,
            "classes": sorted({t.o.n3() for t in s.triples if t.p == _TYPE}),
            "properties": sorted({t.p.n3() for t in s.triples}),
        },
        "coDat": {"out_term": out_term, "in_term": in_term, "entities": per_entity},
    }
