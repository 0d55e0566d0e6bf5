from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GERMANY_PART, MUNICH_IN, x
from oracles import brute_force_steiner, hm, oracle_co_kyw, oracle_entities, weakly_connected
from snippet_bench.generators import (
    GENERATOR_NAMES,
    GeneratorConfig,
    Status,
    keyword_groups,
    preprocess,
    run_generator,
)
from snippet_bench.generators import ces, gst, illusnip, tac
from snippet_bench.graph import NodeRef, subdivide
from snippet_bench.metrics import evaluate
from snippet_bench.rdf import RDF_TYPE, Dataset, Query, literal
from snippet_bench.synthetic import covered_query, random_dataset

MUNICH_EUROPE = Query(["munich", "europe"])


# ---------------------------------------------------------------- config


def test_config_defaults():
    cfg = GeneratorConfig()
    assert cfg.triple_budget == 20
    assert cfg.node_budget == 20
    assert cfg.deadline_millis == 3_600_000
    assert cfg.ce_samples == 1000
    assert cfg.ce_elite_pct == 0.1
    assert cfg.ce_smoothing == 0.7
    assert cfg.ce_max_iters == 30
    assert cfg.gst_max_terminals == 10


@pytest.mark.parametrize(
    "kwargs",
    [
        {"triple_budget": 0},
        {"node_budget": 0},
        {"ce_elite_pct": 0.0},
        {"ce_elite_pct": 1.0},
        {"ce_smoothing": 0.0},
        {"ce_smoothing": 1.5},
        {"ce_samples": 0},
        {"deadline_millis": -1},
        {"ce_max_iters": 0},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        GeneratorConfig(**kwargs)


def test_status_failure_classes():
    assert Status.TIMED_OUT_FAILURE.failed and Status.NO_SOLUTION.failed
    assert not Status.COMPLETED.failed and not Status.TIMED_OUT_ANYTIME.failed


def test_unknown_generator(fixture_a):
    with pytest.raises(ValueError):
        run_generator("bogus", fixture_a, MUNICH_EUROPE, GeneratorConfig())


# ---------------------------------------------------------------- keyword groups


def test_keyword_groups_examples(fixture_a):
    groups = keyword_groups(fixture_a, Query(["munich", "zzz", "located"]))
    label_row = fixture_a.triples.index(next(t for t in fixture_a.triples if t.o == literal("Munich")))
    assert groups["munich"] == {NodeRef("term", x("Munich")), NodeRef("literal", label_row)}
    assert groups["zzz"] == set()
    located_rows = {i for i, t in enumerate(fixture_a.triples) if t.p == x("locatedIn")}
    assert groups["located"] == {NodeRef("pred", i) for i in located_rows}


# ---------------------------------------------------------------- IlluSnip


def reference_f(d: Dataset, triples) -> float:
    """F recomputed from scratch: hm(schema coverage, mean normalized PageRank of entities)."""
    triples = list(triples)
    types = [t for t in d.triples if t.p.value == RDF_TYPE]
    props = {t.p for t in triples}
    prop_side = sum(sum(1 for t in d.triples if t.p == p) for p in props) / len(d.triples)
    if types:
        cls = {t.o for t in triples if t.p.value == RDF_TYPE}
        class_side = sum(sum(1 for t in types if t.o == c) for c in cls) / len(types)
    else:
        class_side = 1.0
    schema = hm(class_side, prop_side) if props else 0.0
    ranks = d.pagerank
    every = oracle_entities(d.triples, d.triples)
    top = max(ranks[e] for e in every) if every else 0.0
    ents = oracle_entities(d.triples, triples)
    data = sum(ranks[e] / top for e in ents) / len(ents) if ents and top > 0 else 0.0
    return hm(schema, data)


def connected_subsets(d: Dataset, size: int):
    for combo in itertools.combinations(range(len(d)), size):
        triples = [d.triples[i] for i in combo]
        if weakly_connected(triples):
            yield combo


def test_illusnip_fixture_k3(fixture_a):
    res = illusnip.generate_illusnip(fixture_a, GeneratorConfig(triple_budget=3))
    triples = res.snippet.triples
    assert res.status is Status.COMPLETED
    assert len(triples) == 3 and weakly_connected(triples)
    assert any(t.p.value == RDF_TYPE and t.o == x("City") for t in triples)
    located = [t for t in triples if t.p == x("locatedIn")]
    assert located and all(t.s in (x("Munich"), x("Berlin")) for t in located)
    assert any(t.s in {l.s for l in located} for t in triples if t.p.value == RDF_TYPE)
    f = reference_f(fixture_a, triples)
    assert f == pytest.approx(res.objective, abs=1e-12)
    best_single = max(reference_f(fixture_a, [t]) for t in fixture_a.triples)
    assert f > best_single
    # greedy never beats the exhaustive optimum over connected subsets of the same size
    best = max(reference_f(fixture_a, [fixture_a.triples[i] for i in c]) for c in connected_subsets(fixture_a, 3))
    assert f <= best + 1e-12


def test_illusnip_k1_is_best_single_triple(fixture_a):
    res = illusnip.generate_illusnip(fixture_a, GeneratorConfig(triple_budget=1))
    scores = [reference_f(fixture_a, [t]) for t in fixture_a.triples]
    best = max(range(len(scores)), key=lambda i: (scores[i], -i))
    assert res.snippet.triples == {fixture_a.triples[best]}


def test_illusnip_objective_helper(fixture_a):
    for combo in connected_subsets(fixture_a, 2):
        assert illusnip.objective(fixture_a, combo) == pytest.approx(
            reference_f(fixture_a, [fixture_a.triples[i] for i in combo]), abs=1e-12
        )


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 150), st.integers(1, 25))
def test_illusnip_contract(seed, n, k):
    d = random_dataset(seed, n)
    res = illusnip.generate_illusnip(d, GeneratorConfig(triple_budget=k))
    assert 1 <= len(res.snippet.triples) <= k
    assert weakly_connected(res.snippet.triples)
    assert all(b >= a for a, b in zip(res.trace, res.trace[1:]))
    assert res.objective == pytest.approx(reference_f(d, res.snippet.triples), abs=1e-9)


# ---------------------------------------------------------------- TA+C


def node_count(d, snippet) -> int:
    return len(subdivide(d, snippet).nodes)


def test_tac_fixture_examples(fixture_a):
    res = tac.generate_tac(fixture_a, MUNICH_EUROPE, GeneratorConfig())
    assert evaluate(fixture_a, res.snippet, MUNICH_EUROPE).co_kyw == 1.0
    assert node_count(fixture_a, res.snippet) <= 20

    res = tac.generate_tac(fixture_a, Query(["munich"]), GeneratorConfig(node_budget=1))
    assert res.snippet.triples == frozenset()
    assert res.snippet.isolated == {x("Munich")}
    assert evaluate(fixture_a, res.snippet, Query(["munich"])).co_kyw == 1.0


def test_tac_without_matches_returns_top_star(fixture_a):
    res = tac.generate_tac(fixture_a, Query(["zzz"]), GeneratorConfig())
    assert res.status is Status.COMPLETED
    assert evaluate(fixture_a, res.snippet, Query(["zzz"])).co_kyw == 0.0
    stars = tac.materialize_stars(fixture_a)
    top = min(stars, key=lambda s: (len(s.nodes), s.center.sort_key()))
    assert res.snippet.triples == {fixture_a.triples[i] for i in top.triples}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 200), st.integers(1, 30), st.integers(1, 4))
def test_tac_node_budget(seed, n, budget, m):
    d = random_dataset(seed, n)
    q = covered_query(d, seed, m) if d.labels else Query(["zzz"])
    res = tac.generate_tac(d, q, GeneratorConfig(node_budget=budget))
    assert res.status in (Status.COMPLETED, Status.NO_SOLUTION)
    assert node_count(d, res.snippet) <= budget
    assert res.snippet.triples <= d.triple_set


# ---------------------------------------------------------------- GST


def test_gst_fixture_examples(fixture_a):
    res = gst.generate_gst(fixture_a, MUNICH_EUROPE, GeneratorConfig())
    assert res.status is Status.COMPLETED
    assert res.objective == 2.0
    assert res.snippet.triples == {MUNICH_IN, GERMANY_PART}
    report = evaluate(fixture_a, res.snippet, MUNICH_EUROPE)
    assert (report.co_kyw, report.co_cnx) == (1.0, 1.0)
    assert brute_force_steiner(fixture_a.triples, ["munich", "europe"]) == 2.0

    res = gst.generate_gst(fixture_a, Query(["munich"]), GeneratorConfig())
    assert res.objective == 0.0 and not res.snippet.triples
    assert len(res.snippet.isolated) == 1

    res = gst.generate_gst(fixture_a, Query(["munich", "zzz"]), GeneratorConfig())
    assert res.status is Status.NO_SOLUTION and res.snippet.is_empty


def test_gst_disconnected_groups():
    d = Dataset(random_dataset(1, 10, name="left").triples + random_dataset(2, 10, name="right").triples)
    q = Query(["left", "right"])
    assert gst.generate_gst(d, q, GeneratorConfig()).status is Status.NO_SOLUTION


def test_gst_terminal_limit(fixture_a):
    with pytest.raises(ValueError):
        gst.generate_gst(fixture_a, MUNICH_EUROPE, GeneratorConfig(gst_max_terminals=1))


def test_gst_timeout_is_failure():
    d = random_dataset(5, 3000)
    q = covered_query(d, 5, 6)
    preprocess(d, ["gst"])
    res = gst.generate_gst(d, q, GeneratorConfig(deadline_millis=1))
    assert res.status in (Status.TIMED_OUT_FAILURE, Status.COMPLETED)
    if res.status is Status.TIMED_OUT_FAILURE:
        assert res.snippet.is_empty


def test_gst_custom_weights(fixture_a):
    # making the partOf triple expensive cannot change the answer: it is the only way to reach Europe
    heavy = lambda d, i: 5.0 if d.triples[i] == GERMANY_PART else 1.0  # noqa: E731
    res = gst.generate_gst(fixture_a, MUNICH_EUROPE, GeneratorConfig(), edge_weight=heavy)
    assert res.objective == 6.0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(3, 12), st.integers(1, 3))
def test_gst_matches_brute_force(seed, n, m):
    d = random_dataset(seed, n, vocabulary=8, label_rate=0.9)
    q = covered_query(d, seed, m) if d.labels else Query(["zzz"])
    res = gst.generate_gst(d, q, GeneratorConfig())
    expected = brute_force_steiner(d.triples, list(q))
    if expected is None:
        assert res.status is Status.NO_SOLUTION
    else:
        assert res.status is Status.COMPLETED
        assert res.objective == expected
        report = evaluate(d, res.snippet, q)
        assert report.co_kyw == 1.0 and report.co_cnx == 1.0


# ---------------------------------------------------------------- CES


def test_ces_fixture_finds_covering_subset(fixture_a):
    cfg = GeneratorConfig(triple_budget=3)
    res = ces.generate_ces(fixture_a, MUNICH_EUROPE, cfg, seed=7)
    assert len(res.snippet.triples) == 3
    assert oracle_co_kyw(fixture_a.triples, res.snippet.triples, (), list(MUNICH_EUROPE)) == 1.0
    # compare against the exhaustive optimum of the same objective
    values = {c: ces.objective(fixture_a, MUNICH_EUROPE, c) for c in itertools.combinations(range(8), 3)}
    best = max(values.values())
    assert res.objective <= best + 1e-12
    assert res.objective >= 0.9 * best
    argmax = max(values, key=values.get)
    assert oracle_co_kyw(fixture_a.triples, [fixture_a.triples[i] for i in argmax], (), list(MUNICH_EUROPE)) == 1.0


def test_ces_objective_terms(fixture_a):
    model = ces.sentence_model(fixture_a)
    kw = ces.keyword_matrix(fixture_a, MUNICH_EUROPE)
    rows = np.array([[0, 1, 2], [0, 0, 0]])
    scores = ces.score_samples(model, kw, rows[:1])
    assert scores.shape == (1,)
    # a subset that covers no keyword keeps the relevance floor rather than zero
    none = [i for i, t in enumerate(fixture_a.triples) if not kw[:, i].any()]
    assert ces.objective(fixture_a, MUNICH_EUROPE, none[:2]) > 0


def test_ces_whole_dataset_when_budget_exceeds(fixture_a):
    res = ces.generate_ces(fixture_a, MUNICH_EUROPE, GeneratorConfig(triple_budget=50), seed=1)
    assert res.snippet.triples == fixture_a.triple_set
    assert res.iterations == 1


def test_ces_is_deterministic():
    d = random_dataset(11, 150)
    q = covered_query(d, 11, 2)
    cfg = GeneratorConfig(ce_samples=200)
    a = ces.generate_ces(d, q, cfg, seed=42)
    b = ces.generate_ces(Dataset(d.triples, dataset_id=d.id), q, cfg, seed=42)
    assert a.snippet == b.snippet and a.trace == b.trace
    c = ces.generate_ces(d, q, cfg, seed=43)
    assert len(c.snippet.triples) == 20


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.integers(21, 200), st.integers(0, 2**31))
def test_ces_contract(seed, n, rng_seed):
    d = random_dataset(seed, n)
    q = covered_query(d, seed, 2) if d.labels else Query(["zzz"])
    res = ces.generate_ces(d, q, GeneratorConfig(ce_samples=100, ce_max_iters=5), seed=rng_seed)
    assert len(res.snippet.triples) == min(20, len(d))
    assert all(b >= a for a, b in zip(res.trace, res.trace[1:]))
    assert res.objective == pytest.approx(ces.objective(d, q, [d.index_of[t] for t in res.snippet.triples]))


def test_draw_gives_distinct_indices():
    rng = np.random.default_rng(0)
    probs = np.array([0.9, 0.05, 0.05, 0.0, 0.0])
    rows = ces.draw(rng, probs, 3, 50)
    assert rows.shape == (50, 3)
    assert all(len(set(r)) == 3 for r in rows)
    assert (rows[:, 0] == 0).mean() > 0.8


# ---------------------------------------------------------------- common interface


@pytest.mark.parametrize("name", GENERATOR_NAMES)
def test_every_generator_tags_and_is_repeatable(fixture_a, name):
    cfg = GeneratorConfig(ce_samples=200)
    a = run_generator(name, fixture_a, MUNICH_EUROPE, cfg, seed=3)
    b = run_generator(name, fixture_a, MUNICH_EUROPE, cfg, seed=3)
    assert a.snippet == b.snippet
    assert a.snippet.generator == name
    assert a.snippet.dataset_id == fixture_a.id
    assert a.runtime_millis >= 0


def test_anytime_generators_return_best_so_far():
    d = random_dataset(9, 4000)
    preprocess(d)
    q = covered_query(d, 9, 2)
    res = ces.generate_ces(d, q, GeneratorConfig(deadline_millis=1), seed=0)
    assert res.status is Status.TIMED_OUT_ANYTIME
    assert len(res.snippet.triples) == 20


def test_zero_deadline_statuses(fixture_a):
    cfg = GeneratorConfig(deadline_millis=0)
    res = illusnip.generate_illusnip(fixture_a, cfg)
    assert res.status is Status.TIMED_OUT_ANYTIME and len(res.snippet.triples) == 1
    res = tac.generate_tac(fixture_a, MUNICH_EUROPE, cfg)
    assert res.status is Status.TIMED_OUT_FAILURE and res.snippet.is_empty
    res = ces.generate_ces(fixture_a, MUNICH_EUROPE, GeneratorConfig(deadline_millis=0, triple_budget=3), seed=0)
    assert res.status is Status.TIMED_OUT_ANYTIME and len(res.snippet.triples) == 3
