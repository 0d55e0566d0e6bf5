"""Independent reference implementations used as test oracles.

These work from plain lists of triples with straightforward loops and share no
logic with the package beyond the Term/Triple value types. They favour
obviousness over speed.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from snippet_bench.rdf import RDF_TYPE, RDFS_LABEL

# ---------------------------------------------------------------- text


def naive_tokens(text: str) -> list[str]:
    tokens, cur, prev = [], "", ""
    for ch in text:
        if ch.isalnum() and ch != "_":
            if cur and prev.islower() and ch.isupper():
                tokens.append(cur)
                cur = ""
            cur += ch
        elif cur:
            tokens.append(cur)
            cur = ""
        prev = ch
    if cur:
        tokens.append(cur)
    return [t.lower() for t in tokens]


def naive_local_name(iri: str) -> str:
    if "#" in iri and iri.split("#", 1)[1]:
        return iri.split("#", 1)[1]
    rest = iri.split("#", 1)[0].split("?", 1)[0]
    if "://" in rest:
        rest = rest.split("://", 1)[1]
        if "/" not in rest:
            return ""
        rest = rest.split("/", 1)[1]
    return rest.split("/")[-1]


def naive_forms(triples, r) -> set[str]:
    if r.is_literal:
        return {r.value}
    forms = {t.o.value for t in triples if t.s == r and t.p.value == RDFS_LABEL and t.o.is_literal}
    if r.is_iri and naive_local_name(r.value):
        forms.add(naive_local_name(r.value))
    return forms


def naive_term_covers(triples, r, keyword: str) -> bool:
    kw = naive_tokens(keyword)
    if not kw:
        return False
    for form in naive_forms(triples, r):
        toks = naive_tokens(form)
        for i in range(len(toks) - len(kw) + 1):
            if toks[i : i + len(kw)] == kw:
                return True
    return False


def naive_triple_covers(triples, t, keyword: str) -> bool:
    return any(naive_term_covers(triples, r, keyword) for r in (t.s, t.p, t.o))


def cover_table(triples, keywords) -> dict:
    """term -> set of keywords it covers, for every term of ``triples``."""
    labels: dict = {}
    for t in triples:
        if t.p.value == RDFS_LABEL and t.o.is_literal:
            labels.setdefault(t.s, set()).add(t.o.value)
    kw_tokens = {kw: naive_tokens(kw) for kw in keywords}
    table = {}
    for r in {r for t in triples for r in (t.s, t.p, t.o)}:
        if r.is_literal:
            forms = {r.value}
        else:
            forms = set(labels.get(r, ()))
            if r.is_iri and naive_local_name(r.value):
                forms.add(naive_local_name(r.value))
        toks = [naive_tokens(f) for f in forms]
        table[r] = {
            kw
            for kw, kt in kw_tokens.items()
            if kt and any(f[i : i + len(kt)] == kt for f in toks for i in range(len(f) - len(kt) + 1))
        }
    return table


# ---------------------------------------------------------------- graphs


def subdivision(snippet_triples, isolated=()):
    """Node list and edge list of the subdivision graph built from scratch.

    Literal objects and predicates get one node per triple; other endpoints
    are shared by term. Returns (nodes, edges, term_of_node).
    """
    nodes, terms, edges = [], [], []
    where = {}

    def node(key, term):
        if key not in where:
            where[key] = len(nodes)
            nodes.append(key)
            terms.append(term)
        return where[key]

    for n, t in enumerate(snippet_triples):
        a = node(("t", t.s), t.s)
        m = node(("p", n), t.p)
        b = node(("lit", n) if t.o.is_literal else ("t", t.o), t.o)
        edges += [(a, m), (m, b)]
    for r in isolated:
        node(("t", r), r)
    return nodes, edges, terms


def reachability(n: int, edges) -> np.ndarray:
    """Boolean transitive closure of an undirected graph by repeated squaring."""
    reach = np.eye(n, dtype=bool)
    for a, b in edges:
        reach[a, b] = reach[b, a] = True
    while True:
        nxt = (reach.astype(np.int64) @ reach.astype(np.int64)) > 0
        if (nxt == reach).all():
            return reach
        reach = nxt


def closure_components(n: int, edges) -> int:
    reach = reachability(n, edges)
    return len({tuple(row) for row in reach})


# ---------------------------------------------------------------- metrics


def hm(x: float, y: float) -> float:
    return 0.0 if x + y == 0 else 2 * x * y / (x + y)


def oracle_co_kyw(triples, snippet, isolated, keywords) -> float:
    hit = 0
    for kw in keywords:
        if any(naive_triple_covers(triples, t, kw) for t in snippet) or any(
            naive_term_covers(triples, r, kw) for r in isolated
        ):
            hit += 1
    return hit / len(keywords)


def oracle_co_cnx(triples, snippet, isolated, keywords, table=None) -> float:
    """Connected keyword pairs over C(m, 2); ``table`` is an optional precomputed cover_table."""
    if len(keywords) == 1:
        return oracle_co_kyw(triples, snippet, isolated, keywords)
    snippet = list(snippet)
    nodes, edges, terms = subdivision(snippet, sorted(isolated, key=str))
    reach = reachability(len(nodes), edges) if nodes else np.zeros((0, 0), dtype=bool)
    if table is None:
        table = {r: {kw for kw in keywords if naive_term_covers(triples, r, kw)} for r in set(terms)}
    hits = {kw: [i for i, r in enumerate(terms) if kw in table[r]] for kw in keywords}
    good = 0
    for a, b in combinations(keywords, 2):
        if any(reach[u, v] for u in hits[a] for v in hits[b]):
            good += 1
    return good / math.comb(len(keywords), 2)


def oracle_co_skm(triples, snippet) -> float:
    if not snippet:
        return 0.0
    types = [t for t in triples if t.p.value == RDF_TYPE]
    prop_side = sum(sum(1 for t in triples if t.p == p) for p in {t.p for t in snippet}) / len(triples)
    if not types:
        class_side = 1.0
    else:
        cls = {t.o for t in snippet if t.p.value == RDF_TYPE}
        class_side = sum(sum(1 for t in types if t.o == c) for c in cls) / len(types)
    return hm(class_side, prop_side)


def oracle_entities(triples, scope, isolated=()):
    classes = {t.o for t in triples if t.p.value == RDF_TYPE}
    ents = {r for t in scope for r in (t.s, t.o)} | set(isolated)
    return {r for r in ents if not r.is_literal and r not in classes}


def oracle_co_dat(triples, snippet, isolated=()) -> float:
    ents = oracle_entities(triples, snippet, isolated)
    if not ents:
        return 0.0
    every = oracle_entities(triples, triples)

    def out_deg(e):
        return sum(1 for t in triples if t.s == e)

    def in_deg(e):
        return sum(1 for t in triples if t.o == e)

    sides = []
    for deg in (out_deg, in_deg):
        top = max(math.log(deg(e) + 1) for e in every)
        sides.append(0.0 if top == 0 else sum(math.log(deg(e) + 1) / top for e in ents) / len(ents))
    return hm(*sides)


# ---------------------------------------------------------------- steiner


def brute_force_steiner(triples, keywords) -> float | None:
    """Minimum total half-edge weight of a connected node set touching every keyword group.

    With unit half-edges of weight 0.5, a tree on node set U weighs
    0.5 * (|U| - 1); connected sets are enumerated by increasing size.
    """
    nodes, edges, terms = subdivision(triples)
    adj = [set() for _ in nodes]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    groups = [{i for i, r in enumerate(terms) if naive_term_covers(triples, r, kw)} for kw in keywords]
    if any(not g for g in groups):
        return None

    def hits_all(members):
        return all(g & members for g in groups)

    layer = {frozenset([v]) for v in range(len(nodes))}
    size = 1
    while layer:
        if any(hits_all(s) for s in layer):
            return 0.5 * (size - 1)
        layer = {s | {u} for s in layer for v in s for u in adj[v] if u not in s}
        size += 1
    return None


def weakly_connected(snippet_triples) -> bool:
    """Connectivity of the triples' entity graph, joining triples through non-literal endpoints."""
    snippet_triples = list(snippet_triples)
    if len(snippet_triples) <= 1:
        return True
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        ends = {r for r in (snippet_triples[i].s, snippet_triples[i].o) if not r.is_literal}
        for j, t in enumerate(snippet_triples):
            if j not in seen and ends & {t.s, t.o}:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(snippet_triples)
