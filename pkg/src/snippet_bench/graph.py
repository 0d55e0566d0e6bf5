"""Graph views of datasets and snippets: subdivision graphs, components, PageRank."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np
import scipy.sparse as sp

from .rdf import Dataset, DomainError, Snippet, Term


class NodeRef(NamedTuple):
    """A node of a subdivision graph.

    ``kind`` is ``"term"`` (an IRI, blank node or isolated term, keyed by the
    term), ``"literal"`` (a literal object occurrence, keyed by triple index) or
    ``"pred"`` (a predicate occurrence, keyed by triple index, or by the
    predicate term when predicate nodes are shared).
    """

    kind: str
    key: object


def endpoint(r: Term, triple_index: int) -> NodeRef:
    # literal occurrences never merge across triples
    if r.is_literal:
        return NodeRef("literal", triple_index)
    return NodeRef("term", r)


def predicate_node(d: Dataset, triple_index: int, shared: bool = False) -> NodeRef:
    if shared:
        return NodeRef("pred", d.triples[triple_index].p)
    return NodeRef("pred", triple_index)


def node_term(d: Dataset, node: NodeRef) -> Term:
    """The RDF term whose text forms label ``node``."""
    if node.kind == "term":
        return node.key
    if node.kind == "literal":
        return d.triples[node.key].o
    if isinstance(node.key, Term):
        return node.key
    return d.triples[node.key].p


@dataclass
class SubdivisionGraph:
    nodes: list[NodeRef] = field(default_factory=list)
    edges: list[tuple[int, int]] = field(default_factory=list)
    node_text: dict[NodeRef, set[str]] = field(default_factory=dict)
    node_terms: dict[NodeRef, Term] = field(default_factory=dict)

    def __post_init__(self):
        self.position = {n: i for i, n in enumerate(self.nodes)}

    def add_node(self, node: NodeRef, term: Term, text: set[str]) -> int:
        pos = self.position.get(node)
        if pos is None:
            pos = len(self.nodes)
            self.position[node] = pos
            self.nodes.append(node)
            self.node_terms[node] = term
            self.node_text[node] = text
        return pos

    def degree(self, node: NodeRef) -> int:
        i = self.position[node]
        return sum((a == i) + (b == i) for a, b in self.edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.nodes]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj


def subdivide(d: Dataset, s: Snippet, shared_predicates: bool = False) -> SubdivisionGraph:
    g = SubdivisionGraph()
    for i in sorted(d.index_of[t] for t in s.triples):
        t = d.triples[i]
        a = g.add_node(endpoint(t.s, i), t.s, d.text_forms(t.s))
        m = g.add_node(predicate_node(d, i, shared_predicates), t.p, d.text_forms(t.p))
        b = g.add_node(endpoint(t.o, i), t.o, d.text_forms(t.o))
        g.edges.append((a, m))
        g.edges.append((m, b))
    for r in sorted(s.isolated, key=Term.sort_key):
        g.add_node(NodeRef("term", r), r, d.text_forms(r))
    return g


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # smaller root wins so labels stay the smallest member index
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class ComponentLabeling:
    component_of: dict[NodeRef, int]
    count: int

    def same(self, a: NodeRef, b: NodeRef) -> bool:
        return self.component_of[a] == self.component_of[b]


def components(g: SubdivisionGraph) -> ComponentLabeling:
    """Connected components; each id is the smallest node position in its component."""
    uf = UnionFind(len(g.nodes))
    for a, b in g.edges:
        uf.union(a, b)
    labels = {n: uf.find(i) for i, n in enumerate(g.nodes)}
    return ComponentLabeling(labels, len(set(labels.values())))


def power_iteration(
    n: int, edges: Iterable[tuple[int, int]], damping: float = 0.85, iterations: int = 50
) -> np.ndarray:
    """PageRank over ``n`` nodes; parallel edges add weight, dangling mass spreads uniformly."""
    if n == 0:
        raise DomainError("PageRank of an empty graph")
    if not 0 < damping < 1:
        raise ValueError("damping must lie in (0, 1)")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    edges = list(edges)
    src = np.fromiter((a for a, _ in edges), dtype=np.int64, count=len(edges))
    dst = np.fromiter((b for _, b in edges), dtype=np.int64, count=len(edges))
    out_w = np.bincount(src, minlength=n).astype(float)
    weights = 1.0 / out_w[src] if len(edges) else np.zeros(0)
    # column-stochastic transition over non-dangling sources
    m = sp.csr_matrix((weights, (dst, src)), shape=(n, n))
    dangling = out_w == 0
    rank = np.full(n, 1.0 / n)
    for _ in range(iterations):
        spread = rank[dangling].sum() / n
        rank = damping * (m @ rank + spread) + (1.0 - damping) / n
        rank /= rank.sum()
    return rank


def pagerank(d: Dataset, damping: float = 0.85, iterations: int = 50) -> dict[Term, float]:
    if not d.triples:
        raise DomainError("PageRank of an empty dataset")
    index: dict[Term, int] = {}
    edges = []
    for t in d.triples:
        a = index.setdefault(t.s, len(index))
        b = index.setdefault(t.o, len(index))
        edges.append((a, b))
    scores = power_iteration(len(index), edges, damping, iterations)
    return {r: float(scores[i]) for r, i in index.items()}
