"""End-to-end fuzzy record linkage: block, score, weight, estimate TS, cluster, report."""
from __future__ import annotations

import csv
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from . import baselines
from .blocking import CandidatePair, Dataset, block
from .clustering import assign_best, cluster_labels, fcm
from .config import LinkageConfig, LinkageType, LogicType
from .fahp import crisp_weights, fahp_geometric_mean
from .fuzzy_core import TFN, Interval, normalize
from .fwa import FwaInput, column_score_tfn, fwa_interval, fwa_tfn
from .inference import MamdaniController, build_partition, generate_rule_base, load_rules
from .similarity import ColumnSpec, Matcher, score_columns

log = logging.getLogger(__name__)

MATCH = "Match"
POSSIBLE = "Possible Match"
NON_MATCH = "Non-match"


def read_csv(path: str | Path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8-sig") as fh:
        return list(csv.DictReader(fh))


def read_truth(path: str | Path) -> set[tuple[int, int]]:
    with open(path, newline="", encoding="utf-8-sig") as fh:
        return {(int(r["left_id"]), int(r["right_id"])) for r in csv.DictReader(fh)}


@dataclass
class ScoredPairs:
    """Candidate pairs with their scores, total linkage score and cluster assignment."""

    pairs: list[CandidatePair]
    column_labels: list[str]
    raw_scores: np.ndarray  # (m, n) matcher output
    scores: np.ndarray  # (m, n) after Boolean binarization, else raw
    ts: np.ndarray
    weighted: np.ndarray | None = None  # (m, n) s_i * w_i, crisp linkage only
    memberships: np.ndarray | None = None  # (m, k) in label order
    labels: list[str] = field(default_factory=list)
    label_order: list[str] = field(default_factory=list)
    missing: list[list[str]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass
class LinkageReport:
    strategy: str
    counts: dict[str, int]
    total_pairs: int
    seconds: float
    diagnostics: list[str] = field(default_factory=list)

    def count(self, label: str) -> int:
        return self.counts.get(label, 0)


@dataclass
class LinkageRun:
    scored: ScoredPairs
    report: LinkageReport
    weights: list[float] | None = None
    fuzzy_weights: list[TFN] | None = None
    ts_tfn: TFN | None = None


# -- scoring ------------------------------------------------------------------


def score_candidates(
    A: Dataset, B: Dataset, pairs: Sequence[CandidatePair], columns: Sequence[ColumnSpec]
) -> tuple[np.ndarray, list[list[str]]]:
    """Per-column match scores for every pair, shape (m, n); also fills ``pair.scores``."""
    out = np.zeros((len(pairs), len(columns)))
    missing = []
    for row, p in enumerate(pairs):
        s, miss = score_columns(A[p.left_id], B[p.right_id], columns)
        p.scores = s
        out[row] = s
        missing.append(miss)
    return out, missing


def apply_boolean_logic(scores, thresholds: Sequence[float]) -> np.ndarray:
    """1 where a score reaches its column threshold, else 0."""
    s = np.asarray(scores, dtype=float)
    return (s >= np.asarray(thresholds, dtype=float)).astype(float)


def score_pair_crisp(scores, weights: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Weighted-average TS and the per-column weighted scores."""
    s = np.asarray(scores, dtype=float)
    w = np.asarray(weights, dtype=float)
    weighted = s * w
    # weights normalized in floating point may sum to 1 + ulp
    return np.clip(weighted.sum(axis=-1), 0.0, 1.0), weighted


def boolean_weights(config: LinkageConfig) -> list[float]:
    n = len(config.link_columns)
    if config.crisp_weight_vector is None:
        return [1.0 / n] * n
    return normalize(config.crisp_weight_vector)


def fuzzy_ts(
    config: LinkageConfig, raw_scores: np.ndarray, fuzzy_weights: Sequence[TFN]
) -> tuple[np.ndarray, TFN, list[str]]:
    """Mamdani-inferred TS per pair on partitions anchored by the fuzzy weighted average."""
    diagnostics = []
    score_tfns = [column_score_tfn(raw_scores[:, i]) for i in range(raw_scores.shape[1])]
    ts_tfn = fwa_tfn(score_tfns, fuzzy_weights)
    universe = fwa_interval(FwaInput(score_tfns, fuzzy_weights, config.fwa_alpha))
    terms = list(config.linguistic_terms)

    variables = []
    for i, label in enumerate(config.labels):
        var = build_partition(
            Interval(score_tfns[i].a, score_tfns[i].c), terms, label, config.partition_mode, raw_scores[:, i]
        )
        variables.append(var)
        diagnostics += var.diagnostics
    ts_var = build_partition(universe, terms, "score")
    diagnostics += ts_var.diagnostics

    if config.rule_base:
        rules = load_rules(config.rule_base, config.labels, terms)
    else:
        rules = generate_rule_base(config.labels, terms, crisp_weights(fuzzy_weights))
    ts, dead = MamdaniController(variables, ts_var, rules).infer(raw_scores)
    if dead.any():
        diagnostics.append(f"{int(dead.sum())} pair(s) fired no rule; TS set to the universe midpoint")
    return ts, ts_tfn, diagnostics


def estimate_ts(config: LinkageConfig, raw_scores: np.ndarray) -> dict[str, Any]:
    """Total linkage score for every pair under the configured logic and linkage types."""
    raw_scores = np.atleast_2d(raw_scores)
    if config.logic_type is LogicType.BOOLEAN:
        scores = apply_boolean_logic(raw_scores, config.thresholds)
        weights = boolean_weights(config)
        ts, weighted = score_pair_crisp(scores, weights)
        return dict(scores=scores, ts=ts, weighted=weighted, weights=weights, diagnostics=[])

    fuzzy_weights = fahp_geometric_mean(config.relevance_terms(), config.fuzzy_number_scale)
    if config.linkage_type is LinkageType.CRISP:
        weights = crisp_weights(fuzzy_weights)
        ts, weighted = score_pair_crisp(raw_scores, weights)
        return dict(scores=raw_scores, ts=ts, weighted=weighted, weights=weights,
                    fuzzy_weights=fuzzy_weights, diagnostics=[])

    if raw_scores.shape[0] == 0:
        return dict(scores=raw_scores, ts=np.zeros(0), fuzzy_weights=fuzzy_weights, diagnostics=[])
    ts, ts_tfn, diagnostics = fuzzy_ts(config, raw_scores, fuzzy_weights)
    return dict(scores=raw_scores, ts=ts, fuzzy_weights=fuzzy_weights, ts_tfn=ts_tfn, diagnostics=diagnostics)


def cluster_scores(config: LinkageConfig, ts: np.ndarray) -> tuple[list[str], np.ndarray, list[str], list[str]]:
    """FCM over TS; returns labels, memberships padded to the full label set, label order, diagnostics."""
    order = cluster_labels(config.cluster_count)
    if ts.size == 0:
        return [], np.zeros((0, len(order))), order, []
    f = config.fcm
    result = fcm(ts, config.cluster_count, f.fuzzifier, f.tol, f.max_iter, f.seed)
    used = cluster_labels(result.k, config.cluster_count)
    labels, u = assign_best(result, used)
    full = np.zeros((ts.size, len(order)))
    full[:, len(order) - result.k:] = u
    diagnostics = list(result.diagnostics)
    if not result.converged:
        diagnostics.append(f"fuzzy c-means stopped after {result.iterations} iterations without converging")
    return labels, full, order, diagnostics


def strategy_name(config: LinkageConfig) -> str:
    return f"frl_{config.logic_type.value.lower()}_{config.linkage_type.value}"


def count_labels(labels: Iterable[str], order: Sequence[str]) -> dict[str, int]:
    counts = {label: 0 for label in order}
    for label in labels:
        counts[label] = counts.get(label, 0) + 1
    return counts


def link_scored(
    config: LinkageConfig,
    pairs: list[CandidatePair],
    raw_scores: np.ndarray,
    missing: list[list[str]] | None = None,
    strategy: str | None = None,
) -> LinkageRun:
    """Run TS estimation and clustering on already-scored candidate pairs."""
    t0 = time.perf_counter()
    est = estimate_ts(config, raw_scores)
    labels, memberships, order, diag = cluster_scores(config, est["ts"])
    scored = ScoredPairs(
        pairs=pairs,
        column_labels=config.labels,
        raw_scores=raw_scores,
        scores=est["scores"],
        ts=est["ts"],
        weighted=est.get("weighted"),
        memberships=memberships,
        labels=labels,
        label_order=order,
        missing=missing or [[] for _ in pairs],
    )
    report = LinkageReport(
        strategy=strategy or strategy_name(config),
        counts=count_labels(labels, order),
        total_pairs=len(pairs),
        seconds=time.perf_counter() - t0,
        diagnostics=est["diagnostics"] + diag,
    )
    return LinkageRun(scored, report, est.get("weights"), est.get("fuzzy_weights"), est.get("ts_tfn"))


def prepare(config: LinkageConfig, A: Dataset, B: Dataset) -> tuple[list[CandidatePair], np.ndarray, list[list[str]]]:
    for side, data in (("left", A), ("right", B)):
        if not data:
            continue
        for col in config.link_columns:
            key = col.spec.left if side == "left" else col.spec.right
            if key not in data[0]:
                log.warning("link field %r missing from %s dataset; it will score 0", key, side)
    pairs = block(A, B, config.constraint)
    raw, missing = score_candidates(A, B, pairs, config.columns)
    return pairs, raw, missing


def run_linkage(config: LinkageConfig, A: Dataset, B: Dataset) -> LinkageRun:
    t0 = time.perf_counter()
    pairs, raw, missing = prepare(config, A, B)
    run = link_scored(config, pairs, raw, missing)
    run.report.seconds = time.perf_counter() - t0
    n_missing = sum(1 for m in missing if m)
    if n_missing:
        run.report.diagnostics.append(f"{n_missing} pair(s) had missing link fields scored as 0")
    return run


def run_linkage_files(config: LinkageConfig, left: str | Path, right: str | Path) -> LinkageRun:
    return run_linkage(config, read_csv(left), read_csv(right))


# -- baselines ----------------------------------------------------------------


def _exact_columns(config: LinkageConfig) -> list[ColumnSpec]:
    return [ColumnSpec(c.left, c.right, Matcher.EXACT, c.name) for c in config.columns]


def _binary_run(strategy: str, config: LinkageConfig, pairs, raw, result: baselines.LinkResult,
                diagnostics: list[str], t0: float) -> LinkageRun:
    order = cluster_labels(config.cluster_count) if config.cluster_count == 3 else [NON_MATCH, MATCH]
    labels = [MATCH if m else NON_MATCH for m in result.is_match]
    scored = ScoredPairs(pairs, config.labels, raw, raw, result.ts, labels=labels, label_order=order)
    report = LinkageReport(strategy, count_labels(labels, order), len(pairs), time.perf_counter() - t0, diagnostics)
    return LinkageRun(scored, report)


def run_deterministic(config: LinkageConfig, A: Dataset, B: Dataset,
                      pairs: list[CandidatePair] | None = None) -> LinkageRun:
    t0 = time.perf_counter()
    if pairs is None:
        pairs = block(A, B, config.constraint)
    exact, _ = score_candidates(A, B, pairs, _exact_columns(config))
    return _binary_run("deterministic", config, pairs, exact, baselines.deterministic_link(exact), [], t0)


def labeled_sample(
    pairs: Sequence[CandidatePair],
    raw_scores: np.ndarray,
    config: LinkageConfig,
    truth: set[tuple[int, int]] | None,
    seed: int,
) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Draw a labelled sample of candidate pairs for m/u estimation.

    Without ground truth, pairs scoring at or above every column threshold
    stand in for true matches.
    """
    diagnostics = []
    if truth is None:
        is_match = np.all(raw_scores >= np.asarray(config.thresholds), axis=1)
        diagnostics.append("no ground truth supplied; m/u sample labelled by per-column thresholds")
    else:
        is_match = np.array([p.key in truth for p in pairs], dtype=bool)
    rng = np.random.default_rng(seed)
    size = config.probabilistic.sample_size
    pos = np.flatnonzero(is_match)
    neg = np.flatnonzero(~is_match)
    pick_pos = rng.choice(pos, size=min(size, pos.size), replace=False) if pos.size else pos
    pick_neg = rng.choice(neg, size=min(size, neg.size), replace=False) if neg.size else neg
    idx = np.sort(np.concatenate([pick_pos, pick_neg]))
    return raw_scores[idx], is_match[idx], diagnostics


def run_probabilistic(config: LinkageConfig, A: Dataset, B: Dataset,
                      truth: set[tuple[int, int]] | None = None,
                      prepared: tuple | None = None) -> LinkageRun:
    t0 = time.perf_counter()
    pairs, raw, _ = prepared if prepared is not None else prepare(config, A, B)
    sample, labels, diagnostics = labeled_sample(pairs, raw, config, truth, config.fcm.seed)
    prob = config.probabilistic
    estimates = baselines.estimate_mu(sample, labels, prob.agreement_threshold)
    weights, dropped = baselines.probabilistic_weights(estimates)
    result = baselines.probabilistic_link(raw, weights, prob.cutoff)
    run = _binary_run("probabilistic", config, pairs, raw, result, diagnostics + dropped, t0)
    run.weights = weights
    return run


# -- orchestration --------------------------------------------------------------


COMPARE_MODES = (
    (LogicType.BOOLEAN, LinkageType.CRISP),
    (LogicType.FUZZY, LinkageType.CRISP),
    (LogicType.FUZZY, LinkageType.FUZZY),
)


def compare(
    config: LinkageConfig,
    A: Dataset,
    B: Dataset,
    truth: set[tuple[int, int]] | None = None,
) -> dict[str, LinkageRun]:
    """Every strategy over one shared candidate space, blocked and scored once."""
    t0 = time.perf_counter()
    prepared = prepare(config, A, B)
    prep_seconds = time.perf_counter() - t0
    pairs, raw, missing = prepared
    runs = {"deterministic": run_deterministic(config, A, B, pairs)}
    runs["probabilistic"] = run_probabilistic(config, A, B, truth, prepared)
    for logic, linkage in COMPARE_MODES:
        cfg = config.with_modes(logic, linkage)
        run = link_scored(cfg, pairs, raw, missing)
        run.report.seconds += prep_seconds
        runs[run.report.strategy] = run
    return runs


# -- output ---------------------------------------------------------------------


def _fmt(x: float) -> str:
    return repr(float(x))


def write_pairs_csv(scored: ScoredPairs, path: str | Path) -> None:
    header = ["left_id", "right_id", "mu_c"]
    header += [f"score_{c}" for c in scored.column_labels]
    if scored.weighted is not None:
        header += [f"weighted_{c}" for c in scored.column_labels]
    header.append("ts")
    if scored.memberships is not None:
        header += [f"membership_{label}" for label in scored.label_order]
    header.append("label")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for i, p in enumerate(scored.pairs):
            row: list[Any] = [p.left_id, p.right_id, _fmt(p.mu_c)]
            row += [_fmt(v) for v in scored.raw_scores[i]]
            if scored.weighted is not None:
                row += [_fmt(v) for v in scored.weighted[i]]
            row.append(_fmt(scored.ts[i]))
            if scored.memberships is not None:
                row += [_fmt(v) for v in scored.memberships[i]]
            row.append(scored.labels[i] if scored.labels else "")
            w.writerow(row)


REPORT_COLUMNS = (MATCH, POSSIBLE, NON_MATCH)


def report_rows(reports: Sequence[LinkageReport]) -> list[list[Any]]:
    rows = []
    for r in reports:
        counts = [r.count(label) for label in REPORT_COLUMNS]
        other = sum(v for k, v in r.counts.items() if k not in REPORT_COLUMNS)
        rows.append([r.strategy, *counts, other, r.total_pairs])
    return rows


def format_table(reports: Sequence[LinkageReport]) -> str:
    header = ["strategy", *REPORT_COLUMNS, "other", "total_pairs"]
    rows = [header] + [[str(c) for c in row] for row in report_rows(reports)]
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = []
    for k, row in enumerate(rows):
        cells = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells))
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def emit_report(reports: Sequence[LinkageReport], out_dir: str | Path | None = None) -> str:
    """Per-strategy Match / Possible Match / Non-match counts as CSV and a plain-text table.

    Timings are left out so repeated runs write identical files.
    """
    if not reports:
        raise ValueError("no completed runs to report")
    for r in reports:
        if sum(r.counts.values()) != r.total_pairs:
            raise AssertionError(f"{r.strategy}: label counts do not sum to {r.total_pairs}")
    table = format_table(reports)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "report.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["strategy", "matches", "possible_matches", "non_matches", "other", "total_pairs"])
            w.writerows(report_rows(reports))
        (out / "report.txt").write_text(table, encoding="utf-8")
    return table
