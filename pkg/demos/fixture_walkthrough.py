"""Score a few hand-picked snippets of the eight-triple cities graph.

Run from the repository root:  python3 demos/fixture_walkthrough.py
"""

import json
from pathlib import Path

from snippet_bench import Query, Snippet, evaluate, explain, load_ntriples
from snippet_bench.rdf import iri

ROOT = Path(__file__).resolve().parents[1]
d = load_ntriples(ROOT / "fixtures" / "fixture-a.nt")
q = Query(["munich", "europe"])
print(f"{len(d)} triples, query {list(q)}")

for t in d.triples:
    print("  ", t)

X = "http://x.org/"
munich_in = next(t for t in d.triples if t.s == iri(X + "Munich") and t.o == iri(X + "Germany"))
part_of = next(t for t in d.triples if t.s == iri(X + "Germany") and t.o == iri(X + "Europe"))

candidates = {
    "path munich -> germany -> europe": Snippet(frozenset([munich_in, part_of])),
    "only the part-of edge": Snippet(frozenset([part_of])),
    "part-of edge plus isolated Munich": Snippet(frozenset([part_of]), frozenset([iri(X + "Munich")])),
    "whole dataset": Snippet(frozenset(d.triples)),
}

print(f"\n{'snippet':40s} coKyw  coCnx  coSkm  coDat")
for name, s in candidates.items():
    r = evaluate(d, s, q)
    print(f"{name:40s} " + "  ".join(f"{v:.3f}" for v in r.scores()))

# the isolated node covers "munich" but is not linked to "europe"
print("\nbreakdown for the isolated-node snippet:")
print(json.dumps(explain(d, candidates["part-of edge plus isolated Munich"], q), indent=2))
