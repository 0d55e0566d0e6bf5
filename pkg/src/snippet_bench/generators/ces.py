"""Cross-entropy selection of triples treated as pseudo-sentences.

Each triple becomes the token sequence of its subject, predicate and object
names. Subsets of k triples are sampled from per-triple inclusion
probabilities and scored by the product of query relevance, TF-IDF cosine
similarity to the whole dataset, diversity and length preference; the
probabilities are then pulled toward the elite samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..rdf import Dataset, Query, Snippet, Term, local_name, tokenize
from .common import Deadline, GeneratorConfig, GeneratorResult, Status, derived

TAG = "ces"
RELEVANCE_FLOOR = 0.01
CONVERGENCE_TOL = 1e-4
BATCH = 100
DENSE_JACCARD_LIMIT = 2500  # below this many triples, all pairwise Jaccard values are precomputed


def display_name(d: Dataset, r: Term) -> str:
    if r.is_literal:
        return r.value
    labels = d.labels.get(r)
    if labels:
        return labels[0]
    return local_name(r.value) if r.is_iri else ""


@dataclass
class SentenceModel:
    counts: sp.csr_matrix  # triples x vocabulary, token counts weighted by idf
    presence: sp.csr_matrix  # triples x vocabulary, 0/1
    set_sizes: np.ndarray
    lengths: np.ndarray
    dataset_vector: np.ndarray
    dataset_norm: float
    length_scale: float
    jaccard: np.ndarray | None = None


def _sentence_model(d: Dataset) -> SentenceModel:
    vocab: dict[str, int] = {}
    rows, cols = [], []
    lengths = np.zeros(len(d.triples))
    for i, t in enumerate(d.triples):
        toks = []
        for r in (t.s, t.p, t.o):
            toks.extend(tokenize(display_name(d, r)))
        lengths[i] = len(toks)
        for tok in toks:
            rows.append(i)
            cols.append(vocab.setdefault(tok, len(vocab)))
    n, v = len(d.triples), max(len(vocab), 1)
    tf = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, v))
    tf.sum_duplicates()
    presence = tf.copy()
    presence.data[:] = 1.0
    df = np.asarray(presence.sum(axis=0)).ravel()
    idf = np.log((1.0 + n) / (1.0 + df)) + 1.0
    weighted = (tf @ sp.diags(idf)).tocsr()
    dataset_vector = np.asarray(weighted.sum(axis=0)).ravel()
    scale = float(np.percentile(lengths, 95)) if n else 1.0
    jaccard = None
    if n <= DENSE_JACCARD_LIMIT:
        inter = (presence @ presence.T).toarray()
        sizes = np.diag(inter)
        union = sizes[:, None] + sizes[None, :] - inter
        jaccard = np.divide(inter, union, out=np.zeros_like(inter), where=union > 0)
    return SentenceModel(
        jaccard=jaccard,
        counts=weighted,
        presence=presence.tocsr(),
        set_sizes=np.asarray(presence.sum(axis=1)).ravel(),
        lengths=lengths,
        dataset_vector=dataset_vector,
        dataset_norm=float(np.linalg.norm(dataset_vector)),
        length_scale=scale if scale > 0 else 1.0,
    )


def sentence_model(d: Dataset) -> SentenceModel:
    return derived(d, "ces_model", _sentence_model)


def keyword_matrix(d: Dataset, q: Query) -> np.ndarray:
    """Boolean (keywords x triples) coverage matrix."""
    k = np.zeros((len(q), len(d.triples)), dtype=bool)
    for j, kw in enumerate(q):
        idx = list(d.triples_covering(kw))
        k[j, idx] = True
    return k


def score_samples(model: SentenceModel, kw: np.ndarray, samples: np.ndarray) -> np.ndarray:
    """Objective of each row of ``samples`` (an int array of triple indices)."""
    n_samples, k = samples.shape
    n = model.counts.shape[0]

    relevance = kw[:, samples].any(axis=2).mean(axis=0) if kw.shape[0] else np.zeros(n_samples)
    relevance = np.maximum(relevance, RELEVANCE_FLOOR)

    indicator = sp.csr_matrix(
        (np.ones(samples.size), (np.repeat(np.arange(n_samples), k), samples.ravel())),
        shape=(n_samples, n),
    )
    vectors = indicator @ model.counts
    dots = vectors @ model.dataset_vector
    norms = np.sqrt(np.asarray(vectors.multiply(vectors).sum(axis=1)).ravel())
    denom = norms * model.dataset_norm
    cosine = np.divide(dots, denom, out=np.zeros(n_samples), where=denom > 0)

    diversity = np.ones(n_samples)
    if k > 1:
        first, second = np.triu_indices(k, 1)
        a = samples[:, first].ravel()
        b = samples[:, second].ravel()
        if model.jaccard is not None:
            jac = model.jaccard[a, b]
        else:
            inter = np.asarray(model.presence[a].multiply(model.presence[b]).sum(axis=1)).ravel()
            union = model.set_sizes[a] + model.set_sizes[b] - inter
            jac = np.divide(inter, union, out=np.zeros_like(inter), where=union > 0)
        diversity = 1.0 - jac.reshape(n_samples, len(first)).mean(axis=1)

    length = np.minimum(model.lengths[samples].mean(axis=1) / model.length_scale, 1.0)
    return relevance * cosine * diversity * length


def draw(rng: np.random.Generator, probs: np.ndarray, k: int, count: int) -> np.ndarray:
    """``count`` weighted k-subsets without replacement (Efraimidis-Spirakis keys)."""
    weights = np.maximum(probs / probs.sum(), 1e-300)
    keys = np.log(rng.random((count, len(probs)))) / weights
    top = np.argpartition(-keys, k - 1, axis=1)[:, :k]
    return np.sort(top, axis=1)


def generate_ces(d: Dataset, q: Query, cfg: GeneratorConfig, seed: int = 0) -> GeneratorResult:
    if not d.triples:
        raise ValueError("CES needs a non-empty dataset")
    deadline = Deadline(cfg.deadline_millis)
    n = len(d.triples)
    k = min(cfg.triple_budget, n)
    model = sentence_model(d)
    kw = keyword_matrix(d, q)

    if k == n:
        everything = np.arange(n)[None, :]
        value = float(score_samples(model, kw, everything)[0])
        return _result(d, everything[0], Status.COMPLETED, deadline, 1, value, [value])

    rng = np.random.default_rng(seed)
    probs = np.full(n, k / n)
    n_elite = max(1, math.ceil(cfg.ce_elite_pct * cfg.ce_samples))
    best_value, best_sample = -1.0, None
    trace: list[float] = []
    status = Status.COMPLETED
    iterations = 0
    while iterations < cfg.ce_max_iters:
        samples, values = [], []
        drawn = 0
        while drawn < cfg.ce_samples:
            if best_sample is not None and deadline.expired():
                status = Status.TIMED_OUT_ANYTIME
                break
            batch = draw(rng, probs, k, min(BATCH, cfg.ce_samples - drawn))
            scores = score_samples(model, kw, batch)
            samples.append(batch)
            values.append(scores)
            drawn += len(batch)
            top = int(np.argmax(scores))
            if scores[top] > best_value:
                best_value, best_sample = float(scores[top]), batch[top]
        iterations += 1
        trace.append(best_value)
        if status is Status.TIMED_OUT_ANYTIME:
            break
        samples_arr = np.concatenate(samples)
        values_arr = np.concatenate(values)
        elite = samples_arr[np.argsort(-values_arr, kind="stable")[:n_elite]]
        freq = np.bincount(elite.ravel(), minlength=n) / len(elite)
        updated = (1 - cfg.ce_smoothing) * probs + cfg.ce_smoothing * freq
        shift = float(np.max(np.abs(updated - probs)))
        probs = updated
        if shift < CONVERGENCE_TOL:
            break
        if deadline.expired():
            status = Status.TIMED_OUT_ANYTIME
            break
    return _result(d, best_sample, status, deadline, iterations, best_value, trace)


def _result(d, sample, status, deadline, iterations, value, trace) -> GeneratorResult:
    snippet = Snippet(frozenset(d.triples[int(i)] for i in sample), dataset_id=d.id, generator=TAG)
    return GeneratorResult(
        snippet=snippet,
        status=status,
        runtime_millis=deadline.elapsed_millis(),
        iterations=iterations,
        objective=value,
        trace=trace,
    )


def objective(d: Dataset, q: Query, triple_indices) -> float:
    """Objective of a single subset; exposed for exhaustive checks."""
    sample = np.asarray(sorted(triple_indices))[None, :]
    return float(score_samples(sentence_model(d), keyword_matrix(d, q), sample)[0])
