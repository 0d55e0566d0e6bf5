"""Illustrative, query-independent snippets: a greedy connected subgraph that
favours frequent classes and properties and high-PageRank entities."""

from __future__ import annotations

from ..metrics import harmonic_mean
from ..rdf import RDF_TYPE, Dataset, Snippet, iri
from .common import Deadline, GeneratorConfig, GeneratorResult, Status

_TYPE = iri(RDF_TYPE)
TAG = "illusnip"


class _State:
    """Incremental bookkeeping for F(S) = hm(schema coverage, mean normalized PageRank)."""

    def __init__(self, d: Dataset):
        self.d = d
        self.classes: set = set()
        self.props: set = set()
        self.entities: set = set()
        self.class_mass = 0
        self.prop_mass = 0
        self.rank_sum = 0.0
        self.nodes: set = set()
        ranks = d.pagerank
        top = max((ranks[e] for e in d.entity_set), default=0.0)
        self.norm_rank = {e: ranks[e] / top for e in d.entity_set} if top > 0 else {e: 0.0 for e in d.entity_set}

    def _score(self, class_mass: int, prop_mass: int, rank_sum: float, n_ents: int) -> float:
        d = self.d
        class_side = 1.0 if d.type_total == 0 else class_mass / d.type_total
        prop_side = prop_mass / len(d.triples)
        # an empty snippet has no schema coverage even under the vacuous class convention
        schema = harmonic_mean(class_side, prop_side) if prop_mass else 0.0
        data = rank_sum / n_ents if n_ents else 0.0
        return harmonic_mean(schema, data)

    def value(self) -> float:
        return self._score(self.class_mass, self.prop_mass, self.rank_sum, len(self.entities))

    def value_with(self, i: int) -> float:
        d = self.d
        t = d.triples[i]
        class_mass = self.class_mass
        if t.p == _TYPE and t.o not in self.classes:
            class_mass += d.class_counts[t.o]
        prop_mass = self.prop_mass
        if t.p not in self.props:
            prop_mass += d.prop_counts[t.p]
        rank_sum = self.rank_sum
        n_ents = len(self.entities)
        for r in {t.s, t.o}:
            if r in self.norm_rank and r not in self.entities:
                rank_sum += self.norm_rank[r]
                n_ents += 1
        return self._score(class_mass, prop_mass, rank_sum, n_ents)

    def add(self, i: int):
        d = self.d
        t = d.triples[i]
        if t.p == _TYPE and t.o not in self.classes:
            self.classes.add(t.o)
            self.class_mass += d.class_counts[t.o]
        if t.p not in self.props:
            self.props.add(t.p)
            self.prop_mass += d.prop_counts[t.p]
        for r in {t.s, t.o}:
            if r in self.norm_rank and r not in self.entities:
                self.entities.add(r)
                self.rank_sum += self.norm_rank[r]
            if not r.is_literal:
                self.nodes.add(r)


def generate_illusnip(d: Dataset, cfg: GeneratorConfig) -> GeneratorResult:
    if not d.triples:
        raise ValueError("IlluSnip needs a non-empty dataset")
    deadline = Deadline(cfg.deadline_millis)
    state = _State(d)

    # seed: best single triple, lowest index on ties
    best_i, best_f = 0, -1.0
    for i in range(len(d.triples)):
        f = state.value_with(i)
        if f > best_f:
            best_i, best_f = i, f
    chosen = [best_i]
    state.add(best_i)
    trace = [state.value()]
    frontier: set[int] = set()
    status = Status.COMPLETED

    def extend_frontier(i: int):
        t = d.triples[i]
        for r in (t.s, t.o):
            frontier.update(d.incident.get(r, ()))

    extend_frontier(best_i)
    taken = {best_i}
    steps = 0
    while len(chosen) < cfg.triple_budget:
        if deadline.expired():
            status = Status.TIMED_OUT_ANYTIME
            break
        current = state.value()
        pick, pick_f = -1, -1.0
        for i in sorted(frontier - taken):
            steps += 1
            if steps % 10_000 == 0 and deadline.expired():
                status = Status.TIMED_OUT_ANYTIME
                break
            f = state.value_with(i)
            if f > pick_f:
                pick, pick_f = i, f
        if status is Status.TIMED_OUT_ANYTIME or pick < 0 or pick_f < current:
            break
        chosen.append(pick)
        taken.add(pick)
        state.add(pick)
        extend_frontier(pick)
        trace.append(state.value())

    snippet = Snippet(frozenset(d.triples[i] for i in chosen), dataset_id=d.id, generator=TAG)
    return GeneratorResult(
        snippet=snippet,
        status=status,
        runtime_millis=deadline.elapsed_millis(),
        iterations=len(trace),
        objective=trace[-1],
        trace=trace,
    )


def objective(d: Dataset, triple_indices) -> float:
    """F evaluated from scratch; used by tests as an independent recomputation path."""
    state = _State(d)
    for i in triple_indices:
        state.add(i)
    return state.value()
