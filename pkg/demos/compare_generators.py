"""Run all four generators on one synthetic dataset and print their scores.

Run from the repository root:  python3 demos/compare_generators.py [path.nt] [keyword ...]
"""

import sys
from pathlib import Path

from snippet_bench import GENERATOR_NAMES, GeneratorConfig, Query, evaluate, load_ntriples, run_generator
from snippet_bench.generators import preprocess
from snippet_bench.synthetic import covered_query

ROOT = Path(__file__).resolve().parents[1]
path = Path(sys.argv[1]) if len(sys.argv) > 1 else ROOT / "fixtures" / "bench" / "synth-01200.nt"
d = load_ntriples(path)
q = Query(sys.argv[2:]) if len(sys.argv) > 2 else covered_query(d, seed=7, size=3)
cfg = GeneratorConfig(triple_budget=20, node_budget=20, deadline_millis=10_000)

print(f"{path.name}: {len(d)} triples, query {list(q)}")
preprocess(d)  # indexes are built once, outside the timed calls

print(f"\n{'generator':10s} {'status':20s} triples  coKyw  coCnx  coSkm  coDat  ms")
for name in GENERATOR_NAMES:
    res = run_generator(name, d, q, cfg, seed=42)
    r = evaluate(d, res.snippet, q)
    scores = "  ".join(f"{v:.3f}" for v in r.scores())
    print(f"{name:10s} {res.status.value:20s} {len(res.snippet.triples):7d}  {scores}  {res.runtime_millis}")

gst = run_generator("gst", d, q, cfg)
print("\nsteiner snippet:")
for t in sorted(gst.snippet.triples, key=str):
    print("  ", t)
