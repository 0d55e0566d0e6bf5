"""Quality metrics and baseline generators for keyword-driven RDF dataset snippets."""

from .generators import GENERATOR_NAMES, GeneratorConfig, GeneratorResult, Status, run_generator
from .metrics import MetricReport, co_cnx, co_dat, co_kyw, co_skm, evaluate, explain
from .rdf import Dataset, Query, Snippet, Term, Triple, load_ntriples, parse_ntriples

__version__ = "0.1.0"

__all__ = [
    "GENERATOR_NAMES",
    "Dataset",
    "GeneratorConfig",
    "GeneratorResult",
    "MetricReport",
    "Query",
    "Snippet",
    "Status",
    "Term",
    "Triple",
    "co_cnx",
    "co_dat",
    "co_kyw",
    "co_skm",
    "evaluate",
    "explain",
    "load_ntriples",
    "parse_ntriples",
    "run_generator",
]
