"""``snippet-bench`` command line: batch runs and single-snippet evaluation."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .generators import GENERATOR_NAMES, GeneratorConfig
from .harness import AggregationError, ManifestError, aggregate, emit_report, load_manifest, run_experiment
from .metrics import evaluate, explain
from .rdf import MATCH_MODES, NTriplesSyntaxError, Query, Snippet, load_ntriples, parse_ntriples, parse_term

EXIT_OK, EXIT_USAGE, EXIT_MANIFEST, EXIT_ALL_FAILED = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="snippet-bench", description="Generate and evaluate RDF dataset snippets.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run generators over a manifest of query-dataset pairs")
    run.add_argument("--manifest", required=True, type=Path)
    run.add_argument("--generators", type=_csv_list, default=list(GENERATOR_NAMES))
    run.add_argument("--k", type=int, default=20, help="triple budget")
    run.add_argument("--node-budget", type=int, default=20)
    run.add_argument("--timeout-secs", type=float, default=60.0)
    run.add_argument("--seed", type=int, default=42)
    run.add_argument("--match", choices=MATCH_MODES, default="token")
    run.add_argument("--out", type=Path, default=Path("results"))
    run.add_argument("--format", type=_csv_list, default=["csv", "json"])
    run.add_argument("--parallelism", type=int, default=1)
    run.add_argument("--ce-samples", type=int, default=1000)
    run.add_argument("--shared-predicate-nodes", action="store_true")
    run.add_argument("--explain", action="store_true")
    run.add_argument("--dump-snippet", type=Path, default=None, metavar="DIR")

    ev = sub.add_parser("eval", help="score one snippet against a dataset and query")
    ev.add_argument("--dataset", required=True, type=Path)
    ev.add_argument("--snippet", required=True, type=Path)
    ev.add_argument("--isolated", type=Path, default=None)
    ev.add_argument("--keywords", required=True)
    ev.add_argument("--match", choices=MATCH_MODES, default="token")
    ev.add_argument("--shared-predicate-nodes", action="store_true")
    ev.add_argument("--explain", action="store_true")
    return parser


def _read_isolated(path: Path) -> list:
    raw = json.loads(path.read_text(encoding="utf-8"))
    items = raw.get("isolated", []) if isinstance(raw, dict) else raw
    return [parse_term(text) for text in items]


def cmd_eval(args) -> int:
    d = load_ntriples(args.dataset, strict=False, match=args.match)
    snippet_triples = parse_ntriples(args.snippet.read_bytes(), strict=True).triples
    isolated = _read_isolated(args.isolated) if args.isolated else []
    snippet = Snippet(frozenset(snippet_triples), frozenset(isolated), dataset_id=d.id)
    query = Query.parse(args.keywords)
    if args.explain:
        payload = explain(d, snippet, query, args.shared_predicate_nodes)
    else:
        payload = evaluate(d, snippet, query, shared_predicates=args.shared_predicate_nodes).to_dict()
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def config_from_args(args) -> GeneratorConfig:
    return GeneratorConfig(
        triple_budget=args.k,
        node_budget=args.node_budget,
        deadline_millis=int(round(args.timeout_secs * 1000)),
        ce_samples=args.ce_samples,
    )


def cmd_run(args) -> int:
    unknown = [g for g in args.generators if g not in GENERATOR_NAMES]
    if unknown:
        print(f"snippet-bench: unknown generators {unknown}", file=sys.stderr)
        return EXIT_USAGE
    bad_formats = [f for f in args.format if f not in ("csv", "json")]
    if bad_formats:
        print(f"snippet-bench: unknown formats {bad_formats}", file=sys.stderr)
        return EXIT_USAGE
    cfg = config_from_args(args)
    try:
        manifest = load_manifest(args.manifest)
    except ManifestError as exc:
        print(f"snippet-bench: {exc}", file=sys.stderr)
        return EXIT_MANIFEST
    records = run_experiment(
        manifest,
        args.generators,
        cfg,
        parallelism=args.parallelism,
        seed=args.seed,
        match=args.match,
        shared_predicates=args.shared_predicate_nodes,
        explain=args.explain,
        dump_dir=args.dump_snippet,
    )
    try:
        agg = aggregate(records, group_by="group")
    except AggregationError as exc:
        print(f"snippet-bench: {exc}", file=sys.stderr)
        return EXIT_ALL_FAILED
    emit_report(agg, records, args.format, args.out)
    print(f"{len(records)} runs, {agg.included_pairs} pairs included, {agg.excluded_pairs} excluded -> {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "eval":
            return cmd_eval(args)
        return cmd_run(args)
    except (ValueError, NTriplesSyntaxError, OSError) as exc:
        print(f"snippet-bench: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
