"""Batch runner: query-dataset pairs x generators -> metric records and reports."""

from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .generators import GENERATOR_NAMES, GeneratorConfig, Status, preprocess, run_generator
from .metrics import MetricReport, evaluate, explain
from .rdf import Dataset, Query, load_ntriples, serialize_ntriples

log = logging.getLogger(__name__)

METRIC_NAMES = ("coKyw", "coCnx", "coSkm", "coDat")
ERROR_STATUS = "error"


class ManifestError(ValueError):
    def __init__(self, entry, reason: str):
        super().__init__(f"manifest entry {entry}: {reason}")
        self.entry = entry
        self.reason = reason


class AggregationError(RuntimeError):
    pass


@dataclass(frozen=True)
class PairEntry:
    pair_id: str
    dataset_path: Path
    keywords: tuple[str, ...]
    group: str = ""


@dataclass(frozen=True)
class PairManifest:
    entries: tuple[PairEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def groups(self) -> list[str]:
        return list(dict.fromkeys(e.group for e in self.entries))


def load_manifest(path) -> PairManifest:
    """Read a ``{"pairs": [...]}`` manifest; dataset paths resolve relative to it."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ManifestError(str(path), f"cannot read manifest: {exc}") from exc
    pairs = raw.get("pairs") if isinstance(raw, dict) else None
    if not isinstance(pairs, list):
        raise ManifestError(str(path), 'expected an object with a "pairs" list')
    entries, seen = [], set()
    for n, item in enumerate(pairs):
        if not isinstance(item, dict):
            raise ManifestError(n, "entry must be an object")
        pair_id = item.get("pairId")
        if not isinstance(pair_id, str) or not pair_id:
            raise ManifestError(n, "missing pairId")
        if pair_id in seen:
            raise ManifestError(pair_id, "duplicate pairId")
        seen.add(pair_id)
        dataset_path = item.get("datasetPath")
        if not isinstance(dataset_path, str) or not dataset_path:
            raise ManifestError(pair_id, "missing datasetPath")
        keywords = item.get("keywords")
        if not isinstance(keywords, list) or not all(isinstance(k, str) for k in keywords):
            raise ManifestError(pair_id, "keywords must be a list of strings")
        try:
            query = Query(keywords)
        except ValueError as exc:
            raise ManifestError(pair_id, str(exc)) from exc
        entries.append(
            PairEntry(pair_id, path.parent / dataset_path, query.keywords, str(item.get("group", "")))
        )
    return PairManifest(tuple(entries))


@dataclass(frozen=True)
class DatasetStats:
    triple_count: int
    class_count: int
    property_count: int
    keyword_count: int


def dataset_stats(d: Dataset, q: Query) -> DatasetStats:
    return DatasetStats(len(d.triples), len(d.classes), len(d.prop_counts), len(q))


@dataclass
class RunRecord:
    pair_id: str
    group: str
    generator: str
    status: str
    report: Optional[MetricReport]
    runtime_millis: int
    snippet_triple_count: int
    isolated_node_count: int
    stats: Optional[DatasetStats]
    excluded: bool = False
    error: str = ""
    explain: Optional[dict] = field(default=None, repr=False, compare=False)

    @property
    def failed(self) -> bool:
        if self.status == ERROR_STATUS or Status(self.status).failed:
            return True
        return self.snippet_triple_count == 0 and self.isolated_node_count == 0

    def scores(self) -> tuple[float, ...]:
        return self.report.scores() if self.report else (math.nan,) * 4


@dataclass(frozen=True)
class RunOptions:
    generators: tuple[str, ...] = GENERATOR_NAMES
    config: GeneratorConfig = GeneratorConfig()
    seed: int = 42
    match: str = "token"
    shared_predicates: bool = False
    explain: bool = False
    dump_dir: Optional[Path] = None


_DATASETS: dict[tuple[str, str], Dataset] = {}


def _load_cached(path: Path, match: str) -> Dataset:
    key = (str(path), match)
    if key not in _DATASETS:
        _DATASETS.clear()
        _DATASETS[key] = load_ntriples(path, strict=False, match=match)
    return _DATASETS[key]


def run_pair(entry: PairEntry, options: RunOptions) -> list[RunRecord]:
    query = Query(entry.keywords)
    try:
        d = _load_cached(entry.dataset_path, options.match)
    except (OSError, ValueError) as exc:
        log.warning("pair %s: cannot load %s: %s", entry.pair_id, entry.dataset_path, exc)
        return _mark_excluded(
            [
                RunRecord(entry.pair_id, entry.group, g, ERROR_STATUS, None, 0, 0, 0, None, error=str(exc))
                for g in options.generators
            ]
        )
    stats = dataset_stats(d, query)
    preprocess(d, options.generators)
    records = []
    for name in options.generators:
        try:
            result = run_generator(name, d, query, options.config, options.seed)
        except ValueError as exc:
            records.append(
                RunRecord(entry.pair_id, entry.group, name, ERROR_STATUS, None, 0, 0, 0, stats, error=str(exc))
            )
            continue
        snippet = result.snippet
        report = evaluate(d, snippet, query, result.runtime_millis, options.shared_predicates)
        record = RunRecord(
            entry.pair_id,
            entry.group,
            name,
            result.status.value,
            report,
            result.runtime_millis,
            len(snippet.triples),
            len(snippet.isolated),
            stats,
        )
        if options.explain:
            record.explain = explain(d, snippet, query, options.shared_predicates)
        if options.dump_dir is not None:
            dump_snippet(d, snippet, Path(options.dump_dir) / f"{entry.pair_id}__{name}")
        records.append(record)
    return _mark_excluded(records)


def _mark_excluded(records: list[RunRecord]) -> list[RunRecord]:
    if any(r.failed for r in records):
        for r in records:
            r.excluded = True
    return records


def dump_snippet(d: Dataset, snippet, stem: Path):
    stem.parent.mkdir(parents=True, exist_ok=True)
    (stem.parent / f"{stem.name}.nt").write_text(serialize_ntriples(snippet.ordered_triples(d)), encoding="utf-8")
    isolated = sorted(r.n3() for r in snippet.isolated)
    (stem.parent / f"{stem.name}.isolated.json").write_text(
        json.dumps({"isolated": isolated}, indent=2) + "\n", encoding="utf-8"
    )


def run_experiment(
    manifest: PairManifest,
    generators: Sequence[str],
    cfg: GeneratorConfig,
    parallelism: int = 1,
    **kwargs,
) -> list[RunRecord]:
    """One record per (pair, generator), in manifest then generator order.

    A pair is flagged ``excluded`` when any requested generator fails or
    returns an empty snippet; failures never abort the batch.
    """
    if not generators:
        return []
    unknown = [g for g in generators if g not in GENERATOR_NAMES]
    if unknown:
        raise ValueError(f"unknown generators: {unknown}")
    options = RunOptions(generators=tuple(generators), config=cfg, **kwargs)
    if parallelism <= 1:
        batches = [run_pair(e, options) for e in manifest.entries]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            batches = list(pool.map(run_pair, manifest.entries, [options] * len(manifest.entries)))
    return [r for batch in batches for r in batch]


@dataclass
class Aggregation:
    overall: list[dict]
    by_group: list[dict]
    runtime: dict[str, dict]
    included_pairs: int
    excluded_pairs: int


def _mean_row(generator: str, group: str, records: list[RunRecord]) -> dict:
    scores = np.array([r.scores() for r in records], dtype=float)
    means = scores.mean(axis=0)
    row = {"generator": generator, "group": group, "pairs": len(records)}
    row.update({name: float(v) for name, v in zip(METRIC_NAMES, means)})
    return row


def aggregate(records: Iterable[RunRecord], group_by: str = "all") -> Aggregation:
    """Mean scores per generator over the pairs every generator handled."""
    if group_by not in ("all", "group"):
        raise ValueError("group_by must be 'all' or 'group'")
    records = list(records)
    included = [r for r in records if not r.excluded]
    pairs_total = {r.pair_id for r in records}
    if not included:
        raise AggregationError("every pair was excluded")
    generators = list(dict.fromkeys(r.generator for r in included))
    groups = list(dict.fromkeys(r.group for r in included))
    overall = [_mean_row(g, "all", [r for r in included if r.generator == g]) for g in generators]
    by_group = []
    if group_by == "group":
        for grp in groups:
            for g in generators:
                subset = [r for r in included if r.generator == g and r.group == grp]
                if subset:
                    by_group.append(_mean_row(g, grp, subset))
    runtime = {}
    for g in generators:
        times = np.array([r.runtime_millis for r in included if r.generator == g], dtype=float)
        runtime[g] = {
            "count": int(len(times)),
            "median_millis": float(np.median(times)),
            "p90_millis": float(np.percentile(times, 90)),
        }
    n_included = len({r.pair_id for r in included})
    return Aggregation(overall, by_group, runtime, n_included, len(pairs_total) - n_included)


RUN_COLUMNS = (
    "pairId",
    "group",
    "generator",
    "status",
    "excluded",
    *METRIC_NAMES,
    "snippetTriples",
    "isolatedNodes",
    "datasetTriples",
    "datasetClasses",
    "datasetProperties",
    "queryKeywords",
    "error",
)


def run_row(r: RunRecord) -> dict:
    stats = r.stats or DatasetStats(0, 0, 0, 0)
    row = {
        "pairId": r.pair_id,
        "group": r.group,
        "generator": r.generator,
        "status": r.status,
        "excluded": r.excluded,
    }
    for name, value in zip(METRIC_NAMES, r.scores()):
        row[name] = None if math.isnan(value) else value
    row.update(
        snippetTriples=r.snippet_triple_count,
        isolatedNodes=r.isolated_node_count,
        datasetTriples=stats.triple_count,
        datasetClasses=stats.class_count,
        datasetProperties=stats.property_count,
        queryKeywords=stats.keyword_count,
        error=r.error,
    )
    return row


def _write_csv(path: Path, columns: Sequence[str], rows: Iterable[dict]):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: "" if row.get(k) is None else row[k] for k in columns})


def _write_json(path: Path, payload):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, ensure_ascii=False)
        fh.write("\n")


def emit_report(
    aggregation: Aggregation, records: Sequence[RunRecord], formats: Sequence[str], out_dir
) -> list[Path]:
    """Write summary, per-run, radar and runtime files; returns the paths written.

    Wall-clock runtimes go only to ``runtime.csv`` and ``runtime_summary.json``
    so that every other file is reproducible byte for byte.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    written: list[Path] = []
    summary_columns = ("generator", "group", "pairs", *METRIC_NAMES)
    summary_rows = aggregation.overall + aggregation.by_group
    runs = [run_row(r) for r in records]
    for fmt in formats:
        if fmt == "csv":
            _write_csv(out / "summary.csv", summary_columns, summary_rows)
            _write_csv(out / "runs.csv", RUN_COLUMNS, runs)
        elif fmt == "json":
            _write_json(
                out / "summary.json",
                {
                    "includedPairs": aggregation.included_pairs,
                    "excludedPairs": aggregation.excluded_pairs,
                    "rows": summary_rows,
                },
            )
            _write_json(out / "runs.json", runs)
        else:
            raise ValueError(f"unknown format {fmt!r}")
        written += [out / f"summary.{fmt}", out / f"runs.{fmt}"]

    radar: dict[str, dict[str, list[float]]] = {}
    for row in aggregation.by_group:
        radar.setdefault(row["group"], {})[row["generator"]] = [row[m] for m in METRIC_NAMES]
    _write_json(out / "radar.json", {"metrics": list(METRIC_NAMES), "groups": radar})

    timed = [r for r in records if not r.excluded]
    rows = []
    for g in dict.fromkeys(r.generator for r in timed):
        ordered = sorted((r for r in timed if r.generator == g), key=lambda r: (r.runtime_millis, r.pair_id))
        rows += [
            {"generator": g, "rank": i + 1, "pairId": r.pair_id, "runtimeMillis": r.runtime_millis, "status": r.status}
            for i, r in enumerate(ordered)
        ]
    _write_csv(out / "runtime.csv", ("generator", "rank", "pairId", "runtimeMillis", "status"), rows)
    _write_json(out / "runtime_summary.json", aggregation.runtime)
    written += [out / "radar.json", out / "runtime.csv", out / "runtime_summary.json"]

    explained = [r for r in records if r.explain is not None]
    if explained:
        exp_dir = out / "explain"
        exp_dir.mkdir(exist_ok=True)
        for r in explained:
            path = exp_dir / f"{r.pair_id}__{r.generator}.json"
            _write_json(path, r.explain)
            written.append(path)
    return written

