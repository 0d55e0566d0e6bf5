"""Exact group Steiner tree over the subdivision graph of a dataset.

Dynamic programming over (node, keyword-subset) states in best-first order:
a state is grown along an edge or merged with a disjoint state at the same
node. Each triple contributes two half-edges (subject-predicate and
predicate-object) of half the triple's weight.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Optional

from ..graph import NodeRef, endpoint, node_term, predicate_node
from ..rdf import Dataset, Query, Snippet
from .common import Deadline, GeneratorConfig, GeneratorResult, Status, derived, keyword_groups

TAG = "gst"
# share of the deadline the search may use; freeing millions of states afterwards takes the rest
SEARCH_SHARE = 0.9

EdgeWeight = Callable[[Dataset, int], float]


@dataclass
class SearchGraph:
    nodes: list[NodeRef]
    index: dict[NodeRef, int]
    # adjacency: node -> [(neighbor, triple index, side)], side 0 = s-p half, 1 = p-o half
    adj: list[list[tuple[int, int, int]]]


def _search_graph(d: Dataset) -> SearchGraph:
    index: dict[NodeRef, int] = {}
    adj: list[list[tuple[int, int, int]]] = []

    def node(n: NodeRef) -> int:
        pos = index.get(n)
        if pos is None:
            pos = index[n] = len(adj)
            adj.append([])
        return pos

    for i, t in enumerate(d.triples):
        a, m, b = node(endpoint(t.s, i)), node(predicate_node(d, i)), node(endpoint(t.o, i))
        adj[a].append((m, i, 0))
        adj[m].append((a, i, 0))
        adj[m].append((b, i, 1))
        adj[b].append((m, i, 1))
    return SearchGraph(list(index), index, adj)


def search_graph(d: Dataset) -> SearchGraph:
    return derived(d, "search_graph", _search_graph)


@dataclass
class SteinerTree:
    weight: float
    root: int
    half_edges: set[tuple[int, int]]


def steiner_tree(
    graph: SearchGraph,
    groups: list[set[int]],
    half_weight: Callable[[int], float],
    deadline: Optional[Deadline] = None,
) -> Optional[SteinerTree]:
    """Minimum-weight tree touching every group; ``None`` if no such tree exists.

    Raises ``TimeoutError`` when ``deadline`` expires.
    """
    m = len(groups)
    full = (1 << m) - 1
    shift = m
    terminal_mask: dict[int, int] = {}
    for g, members in enumerate(groups):
        for v in members:
            terminal_mask[v] = terminal_mask.get(v, 0) | (1 << g)

    dist: dict[int, float] = {}
    parent: dict[int, tuple] = {}
    heap: list[tuple[float, int, int]] = []
    for v in sorted(terminal_mask):
        own = terminal_mask[v]
        sub = own
        while sub:
            key = (v << shift) | sub
            dist[key] = 0.0
            parent[key] = ("leaf",)
            heap.append((0.0, v, sub))
            sub = (sub - 1) & own
    heapq.heapify(heap)

    settled: dict[int, list[tuple[int, float]]] = {}
    done: set[int] = set()
    steps = 0
    while heap:
        cost, v, mask = heapq.heappop(heap)
        key = (v << shift) | mask
        if key in done:
            continue
        done.add(key)
        if mask == full:
            edges: set[tuple[int, int]] = set()
            _collect(parent, key, shift, edges)
            return SteinerTree(cost, v, edges)
        for u, ti, side in graph.adj[v]:
            # hub nodes can have thousands of neighbours, so count relaxations rather than pops
            steps += 1
            if deadline is not None and steps % 4096 == 0 and deadline.expired(SEARCH_SHARE):
                raise TimeoutError
            nkey = (u << shift) | mask
            if nkey in done:
                continue
            nc = cost + half_weight(ti)
            if nc < dist.get(nkey, float("inf")):
                dist[nkey] = nc
                parent[nkey] = ("grow", key, ti, side)
                heapq.heappush(heap, (nc, u, mask))
        here = settled.setdefault(v, [])
        for other, ocost in here:
            if other & mask:
                continue
            merged = mask | other
            nkey = (v << shift) | merged
            if nkey in done:
                continue
            nc = cost + ocost
            if nc < dist.get(nkey, float("inf")):
                dist[nkey] = nc
                parent[nkey] = ("merge", key, (v << shift) | other)
                heapq.heappush(heap, (nc, v, merged))
        here.append((mask, cost))
    return None


def _collect(parent: dict, key: int, shift: int, edges: set):
    stack = [key]
    while stack:
        k = stack.pop()
        step = parent[k]
        if step[0] == "grow":
            edges.add((step[2], step[3]))
            stack.append(step[1])
        elif step[0] == "merge":
            stack.extend(step[1:])


def generate_gst(
    d: Dataset, q: Query, cfg: GeneratorConfig, edge_weight: Optional[EdgeWeight] = None
) -> GeneratorResult:
    """``edge_weight(d, triple_index)`` is the cost of a whole triple (default 1)."""
    if len(q) > cfg.gst_max_terminals:
        raise ValueError(f"query has {len(q)} keywords; the exact search allows at most {cfg.gst_max_terminals}")
    deadline = Deadline(cfg.deadline_millis)
    graph = search_graph(d)
    named_groups = keyword_groups(d, q)
    groups = [{graph.index[n] for n in named_groups[kw]} for kw in q]
    if any(not g for g in groups):
        return _result(d, deadline, Status.NO_SOLUTION)

    if edge_weight is None:
        half = lambda ti: 0.5  # noqa: E731
    else:
        half = lambda ti: edge_weight(d, ti) / 2  # noqa: E731
    timed_out = False
    try:
        tree = steiner_tree(graph, groups, half, deadline)
    except TimeoutError:
        timed_out = True
    # measured outside the handler so the search state is already freed
    if timed_out:
        return _result(d, deadline, Status.TIMED_OUT_FAILURE)
    if tree is None:
        return _result(d, deadline, Status.NO_SOLUTION)

    triples = frozenset(d.triples[ti] for ti, _ in tree.half_edges)
    isolated = frozenset()
    if not tree.half_edges:
        isolated = frozenset({node_term(d, graph.nodes[tree.root])})
    snippet = Snippet(triples, isolated, dataset_id=d.id, generator=TAG)
    weight = sum(half(ti) for ti, _ in tree.half_edges)
    return GeneratorResult(
        snippet=snippet,
        status=Status.COMPLETED,
        runtime_millis=deadline.elapsed_millis(),
        iterations=1,
        objective=weight,
        trace=[weight],
    )


def _result(d: Dataset, deadline: Deadline, status: Status) -> GeneratorResult:
    return GeneratorResult(
        snippet=Snippet(dataset_id=d.id, generator=TAG),
        status=status,
        runtime_millis=deadline.elapsed_millis(),
        iterations=0,
    )
