"""Regenerate the bundled benchmark datasets and the 10-pair manifest.

    python fixtures/make_fixtures.py
"""

import json
from pathlib import Path

from snippet_bench.rdf import serialize_ntriples
from snippet_bench.synthetic import covered_query, random_dataset

HERE = Path(__file__).parent
SIZES = (120, 250, 500, 800, 1200, 2000, 3000, 5000, 8000, 10000)
KEYWORDS = (1, 2, 2, 3, 2, 4, 2, 3, 2, 2)


def main():
    bench = HERE / "bench"
    bench.mkdir(exist_ok=True)
    pairs = []
    for n, (size, m) in enumerate(zip(SIZES, KEYWORDS)):
        name = f"synth-{size:05d}"
        d = random_dataset(1000 + n, size, name=name)
        (bench / f"{name}.nt").write_text(serialize_ntriples(d.triples), encoding="utf-8")
        q = covered_query(d, 2000 + n, m)
        pairs.append(
            {"pairId": f"p{n:02d}", "datasetPath": f"bench/{name}.nt", "keywords": list(q.keywords), "group": f"{m}-keyword"}
        )
    (HERE / "pairs.json").write_text(json.dumps({"pairs": pairs}, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
