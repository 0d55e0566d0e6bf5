"""Query-biased snippets assembled from 1-radius stars under a node budget.

Every non-literal endpoint contributes the star of all triples touching it.
Stars are ranked by (keywords covered desc, node count asc, center term) and
merged greedily, skipping stars that add no new keyword once the snippet
is non-empty; a star that does not fit is trimmed leaf by leaf, keeping
keyword-covering triples first. Matched nodes left out for lack of budget
may still enter as isolated nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..graph import NodeRef, endpoint, node_term, predicate_node
from ..rdf import Dataset, Query, Snippet, Term
from .common import Deadline, GeneratorConfig, GeneratorResult, Status, derived, keyword_groups, node_sort_key

TAG = "tac"


@dataclass(frozen=True)
class Star:
    center: Term
    triples: tuple[int, ...]
    nodes: frozenset


def triple_nodes(d: Dataset, i: int) -> tuple[NodeRef, NodeRef, NodeRef]:
    t = d.triples[i]
    return endpoint(t.s, i), predicate_node(d, i), endpoint(t.o, i)


def _stars(d: Dataset) -> list[Star]:
    stars = []
    for center, idx in d.incident.items():
        nodes = frozenset(n for i in idx for n in triple_nodes(d, i))
        stars.append(Star(center, tuple(idx), nodes))
    return stars


def materialize_stars(d: Dataset) -> list[Star]:
    return derived(d, "stars", _stars)


class _Assembly:
    def __init__(self, d: Dataset, budget: int):
        self.d = d
        self.budget = budget
        self.triples: list[int] = []
        self.chosen: set[int] = set()
        self.triple_nodes: set[NodeRef] = set()
        self.isolated: dict[Term, None] = {}

    def node_count(self, extra: set[NodeRef] = frozenset(), drop: set[Term] = frozenset()) -> int:
        nodes = self.triple_nodes | extra
        iso = {NodeRef("term", r) for r in self.isolated if r not in drop}
        return len(nodes | iso)

    def try_add(self, i: int) -> bool:
        if i in self.chosen:
            return True
        t = self.d.triples[i]
        drop = {r for r in (t.s, t.p, t.o) if r in self.isolated}
        if self.node_count(set(triple_nodes(self.d, i)), drop) > self.budget:
            return False
        self.triples.append(i)
        self.chosen.add(i)
        self.triple_nodes.update(triple_nodes(self.d, i))
        for r in drop:
            del self.isolated[r]
        return True

    def try_isolate(self, r: Term) -> bool:
        if r in self.isolated:
            return True
        if any(r in (self.d.triples[i].s, self.d.triples[i].p, self.d.triples[i].o) for i in self.chosen):
            return True
        if self.node_count() + 1 > self.budget:
            return False
        self.isolated[r] = None
        return True

    @property
    def full(self) -> bool:
        return self.node_count() >= self.budget


def generate_tac(d: Dataset, q: Query, cfg: GeneratorConfig) -> GeneratorResult:
    deadline = Deadline(cfg.deadline_millis)
    covering = {kw: d.triples_covering(kw) for kw in q}
    groups = keyword_groups(d, q)

    def star_keywords(star: Star) -> set[str]:
        idx = set(star.triples)
        return {kw for kw, cov in covering.items() if cov & idx}

    ranked = []
    for n, star in enumerate(materialize_stars(d)):
        if n % 10_000 == 0 and deadline.expired():
            return _failure(d, deadline, Status.TIMED_OUT_FAILURE)
        kws = star_keywords(star)
        ranked.append(((-len(kws), len(star.nodes), star.center.sort_key()), star, kws))
    ranked.sort(key=lambda item: item[0])

    asm = _Assembly(d, cfg.node_budget)
    covered: set[str] = set()
    iterations = 0
    for _, star, kws in ranked:
        if deadline.expired():
            return _failure(d, deadline, Status.TIMED_OUT_FAILURE, iterations)
        if asm.full or (asm.triples or asm.isolated) and covered >= set(q):
            break
        if (asm.triples or asm.isolated) and not kws - covered:
            continue
        iterations += 1
        keyed = {i for i in star.triples if any(i in covering[kw] for kw in q)}
        rest = [i for i in star.triples if i not in keyed]
        added = [i for i in sorted(keyed) + sorted(rest) if asm.try_add(i)]
        for kw in kws:
            if covering[kw] & set(added):
                covered.add(kw)
        if not added and any(d.term_covers(star.center, kw) for kw in q.keywords if kw not in covered):
            if asm.try_isolate(star.center):
                covered.update(kw for kw in q if d.term_covers(star.center, kw))

    for kw in q:
        if kw in covered or asm.full:
            continue
        for node in sorted(groups[kw], key=node_sort_key):
            term = node_term(d, node)
            if asm.try_isolate(term):
                covered.update(k for k in q if d.term_covers(term, k))
                break

    if not asm.triples and not asm.isolated:
        return _failure(d, deadline, Status.NO_SOLUTION, iterations)
    snippet = Snippet(
        frozenset(d.triples[i] for i in asm.triples),
        frozenset(asm.isolated),
        dataset_id=d.id,
        generator=TAG,
    )
    return GeneratorResult(
        snippet=snippet,
        status=Status.COMPLETED,
        runtime_millis=deadline.elapsed_millis(),
        iterations=iterations,
        objective=len(covered) / len(q),
    )


def _failure(d: Dataset, deadline: Deadline, status: Status, iterations: int = 0) -> GeneratorResult:
    return GeneratorResult(
        snippet=Snippet(dataset_id=d.id, generator=TAG),
        status=status,
        runtime_millis=deadline.elapsed_millis(),
        iterations=iterations,
    )
