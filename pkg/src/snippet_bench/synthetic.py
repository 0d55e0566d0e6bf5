"""Seeded synthetic RDF datasets with skewed class, property and degree distributions."""

from __future__ import annotations

import random

from .rdf import RDF_TYPE, RDFS_LABEL, Dataset, Query, Triple, iri, literal

_SYLLABLES = (
    "ka ri mo ten sa lo vi dur po men ta gel ru fin ba so ne lim cor da pe vos "
    "tra mi quo zen hal ber nu ost kel vin ar bel"
).split()


def make_vocabulary(rng: random.Random, size: int) -> list[str]:
    words: dict[str, None] = {}
    while len(words) < size:
        words.setdefault("".join(rng.choice(_SYLLABLES) for _ in range(rng.randint(2, 3))), None)
    return list(words)


def _zipf_index(rng: random.Random, n: int, skew: float = 1.1) -> int:
    weights = [1.0 / (i + 1) ** skew for i in range(n)]
    return rng.choices(range(n), weights=weights)[0]


def random_dataset(
    seed: int,
    n_triples: int,
    *,
    n_classes: int | None = None,
    n_properties: int | None = None,
    vocabulary: int | None = None,
    label_rate: float = 0.6,
    literal_rate: float = 0.25,
    name: str = "synthetic",
) -> Dataset:
    """A dataset of roughly ``n_triples`` triples drawn from a seeded generator.

    Entities get a type and (usually) a label; remaining triples link entities
    with preferential attachment or attach literal values.
    """
    rng = random.Random(seed)
    n_entities = max(2, n_triples // 5)
    n_classes = n_classes or max(1, min(30, n_triples // 40 + 1))
    n_properties = n_properties or max(2, min(40, n_triples // 30 + 2))
    words = make_vocabulary(rng, vocabulary or max(12, min(4000, n_triples // 2)))
    base = f"http://example.org/{name}/"
    rdf_type, rdfs_label = iri(RDF_TYPE), iri(RDFS_LABEL)

    classes = [iri(f"{base}ontology/{words[i % len(words)].capitalize()}{i}") for i in range(n_classes)]
    props = [iri(f"{base}ontology/has{words[-1 - i % len(words)].capitalize()}") for i in range(n_properties)]
    entities = [iri(f"{base}resource/{rng.choice(words).capitalize()}_{i}") for i in range(n_entities)]

    triples: list[Triple] = []
    seen: set[Triple] = set()

    def emit(t: Triple):
        if t not in seen and len(triples) < n_triples:
            seen.add(t)
            triples.append(t)

    popularity = [1.0] * n_entities
    for e in entities:
        emit(Triple(e, rdf_type, classes[_zipf_index(rng, n_classes)]))
        if rng.random() < label_rate:
            phrase = " ".join(rng.choice(words) for _ in range(rng.randint(1, 3)))
            emit(Triple(e, rdfs_label, literal(phrase.title())))
    attempts = 0
    while len(triples) < n_triples and attempts < 20 * n_triples:
        attempts += 1
        s = entities[rng.randrange(n_entities)]
        p = props[_zipf_index(rng, n_properties)]
        if rng.random() < literal_rate:
            emit(Triple(s, p, literal(" ".join(rng.choice(words) for _ in range(rng.randint(1, 4))))))
        else:
            j = rng.choices(range(n_entities), weights=popularity)[0]
            popularity[j] += 1.0
            emit(Triple(s, p, entities[j]))
    return Dataset(triples, dataset_id=name)


def covered_query(d: Dataset, seed: int, size: int) -> Query:
    """A query of ``size`` keywords, each occurring in some label of ``d``."""
    rng = random.Random(seed)
    pool = sorted({tok for forms in d.labels.values() for form in forms for tok in form.lower().split()})
    return Query(rng.sample(pool, min(size, len(pool))))
