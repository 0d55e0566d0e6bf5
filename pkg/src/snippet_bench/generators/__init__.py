"""Baseline snippet generators behind a common, deadline-aware interface."""

from __future__ import annotations

from ..rdf import Dataset, Query
from .ces import generate_ces, sentence_model
from .common import Deadline, GeneratorConfig, GeneratorResult, Status, keyword_groups, occurrences
from .gst import generate_gst, search_graph
from .illusnip import generate_illusnip
from .tac import generate_tac, materialize_stars

GENERATOR_NAMES = ("illusnip", "tac", "gst", "ces")


def run_generator(name: str, d: Dataset, q: Query, cfg: GeneratorConfig, seed: int = 0) -> GeneratorResult:
    if name == "illusnip":
        return generate_illusnip(d, cfg)
    if name == "tac":
        return generate_tac(d, q, cfg)
    if name == "gst":
        return generate_gst(d, q, cfg)
    if name == "ces":
        return generate_ces(d, q, cfg, seed)
    raise ValueError(f"unknown generator {name!r}; expected one of {GENERATOR_NAMES}")


def preprocess(d: Dataset, names=GENERATOR_NAMES):
    """Build the per-dataset indexes the generators need, outside any timed region."""
    if not d.triples:
        return
    occurrences(d)
    if "illusnip" in names:
        d.pagerank
    if "tac" in names:
        materialize_stars(d)
    if "gst" in names:
        search_graph(d)
    if "ces" in names:
        sentence_model(d)


__all__ = [
    "GENERATOR_NAMES",
    "Deadline",
    "GeneratorConfig",
    "GeneratorResult",
    "Status",
    "generate_ces",
    "generate_gst",
    "generate_illusnip",
    "generate_tac",
    "keyword_groups",
    "preprocess",
    "run_generator",
]
