"""Shared generator plumbing: configuration, results, deadlines, keyword groups."""

from __future__ import annotations

import enum
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable

from ..graph import NodeRef, endpoint, predicate_node
from ..rdf import Dataset, Query, Snippet


class Status(str, enum.Enum):
    COMPLETED = "completed"
    TIMED_OUT_ANYTIME = "timed_out_anytime"
    TIMED_OUT_FAILURE = "timed_out_failure"
    NO_SOLUTION = "no_solution"

    @property
    def failed(self) -> bool:
        return self in (Status.TIMED_OUT_FAILURE, Status.NO_SOLUTION)


@dataclass(frozen=True)
class GeneratorConfig:
    triple_budget: int = 20
    node_budget: int = 20
    deadline_millis: int = 3_600_000
    ce_samples: int = 1000
    ce_elite_pct: float = 0.1
    ce_smoothing: float = 0.7
    ce_max_iters: int = 30
    gst_max_terminals: int = 10

    def __post_init__(self):
        if self.triple_budget < 1:
            raise ValueError("triple_budget must be >= 1")
        if self.node_budget < 1:
            raise ValueError("node_budget must be >= 1")
        if self.deadline_millis < 0:
            raise ValueError("deadline_millis must be >= 0")
        if self.ce_samples < 1:
            raise ValueError("ce_samples must be >= 1")
        if not 0 < self.ce_elite_pct < 1:
            raise ValueError("ce_elite_pct must lie in (0, 1)")
        if not 0 < self.ce_smoothing <= 1:
            raise ValueError("ce_smoothing must lie in (0, 1]")
        if self.ce_max_iters < 1:
            raise ValueError("ce_max_iters must be >= 1")
        if self.gst_max_terminals < 1:
            raise ValueError("gst_max_terminals must be >= 1")


@dataclass
class GeneratorResult:
    snippet: Snippet
    status: Status
    runtime_millis: int
    iterations: int
    objective: float = 0.0
    # best-so-far objective after each iteration
    trace: list[float] = field(default_factory=list)


class Deadline:
    def __init__(self, millis: int):
        self.start = time.perf_counter()
        self.limit = millis / 1000.0

    def expired(self, fraction: float = 1.0) -> bool:
        """True once ``fraction`` of the budget is spent."""
        return time.perf_counter() - self.start >= self.limit * fraction

    def elapsed_millis(self) -> int:
        return int(round((time.perf_counter() - self.start) * 1000))


def derived(d: Dataset, name: str, build: Callable[[Dataset], object]):
    """Memoize a generator-side index on the (immutable) dataset."""
    cache = d.__dict__.setdefault("_derived", {})
    if name not in cache:
        cache[name] = build(d)
    return cache[name]


@dataclass
class Occurrences:
    predicate: dict  # predicate term -> triple indices
    literal: dict  # literal term -> triple indices where it is the object


def _occurrences(d: Dataset) -> Occurrences:
    pred: dict = defaultdict(list)
    lit: dict = defaultdict(list)
    for i, t in enumerate(d.triples):
        pred[t.p].append(i)
        if t.o.is_literal:
            lit[t.o].append(i)
    return Occurrences(dict(pred), dict(lit))


def occurrences(d: Dataset) -> Occurrences:
    return derived(d, "occurrences", _occurrences)


def keyword_groups(d: Dataset, q: Query) -> dict[str, set[NodeRef]]:
    """Subdivision-graph nodes of the full dataset whose text forms cover each keyword."""
    occ = occurrences(d)
    groups: dict[str, set[NodeRef]] = {}
    for kw in q:
        nodes: set[NodeRef] = set()
        for r in d.terms_covering(kw):
            if r.is_literal:
                nodes.update(endpoint(r, i) for i in occ.literal.get(r, ()))
            elif r in d.incident:
                nodes.add(NodeRef("term", r))
            nodes.update(predicate_node(d, i) for i in occ.predicate.get(r, ()))
        groups[kw] = nodes
    return groups


def node_sort_key(node: NodeRef) -> tuple:
    if node.kind == "term":
        return (0, node.key.sort_key())
    return (1 if node.kind == "literal" else 2, node.key)
