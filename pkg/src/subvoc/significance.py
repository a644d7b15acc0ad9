"""Paired bootstrap resampling, pairwise significance, and system ranking.

The bootstrap test is the paired sign-fraction variant: both systems are
rescored on the same resampled segment multisets, and the p-value is the
fraction of iterations whose score difference contradicts (ties included)
the sign of the full-set difference. The 95% interval of the difference is
reported alongside (empirical 2.5/97.5 percentiles, linear interpolation).

Random indices come from numpy's PCG64 generator; the algorithm identifier
is written into every result so runs replicate across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyTestSet, LineCountMismatch, MissingCell
from .metrics import (
    BLEU_ORDER,
    ScoreReport,
    corpus_bleu_from_sums,
    corpus_chrf_from_sums,
    corpus_ter_from_sums,
)

RNG_ALGORITHM = "numpy-pcg64"
ALPHA = 0.05
METRICS = ("bleu", "ter", "chrf2")
HIGHER_IS_BETTER = {"bleu": True, "ter": False, "chrf2": True}


def _score_from_summed_row(metric: str, row) -> float:
    if metric == "bleu":
        return corpus_bleu_from_sums(
            [int(v) for v in row[0:BLEU_ORDER]],
            [int(v) for v in row[BLEU_ORDER : 2 * BLEU_ORDER]],
            int(row[2 * BLEU_ORDER]),
            int(row[2 * BLEU_ORDER + 1]),
        )
    if metric == "ter":
        return corpus_ter_from_sums(int(row[0]), int(row[1]))
    if metric == "chrf2":
        triples = [
            (int(row[i]), int(row[i + 1]), int(row[i + 2]))
            for i in range(0, len(row), 3)
        ]
        return corpus_chrf_from_sums(triples)
    raise ValueError(f"unknown metric {metric!r}")


def segment_matrix(report: ScoreReport, metric: str) -> np.ndarray:
    if metric == "bleu":
        rows = [s.as_row() for s in report.bleu_segments]
    elif metric == "ter":
        rows = [s.as_row() for s in report.ter_segments]
    elif metric == "chrf2":
        rows = [s.as_row() for s in report.chrf_segments]
    else:
        raise ValueError(f"unknown metric {metric!r}")
    return np.asarray(rows, dtype=np.int64)


@dataclass(frozen=True)
class PairedSystemScores:
    """Index-aligned per-segment statistics for two systems on one test set."""

    metric: str
    system_a: np.ndarray
    system_b: np.ndarray

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if len(self.system_a) != len(self.system_b):
            raise LineCountMismatch(len(self.system_a), len(self.system_b))
        if len(self.system_a) == 0:
            raise EmptyTestSet("reports carry no per-segment statistics")

    @classmethod
    def from_reports(cls, metric: str, a: ScoreReport, b: ScoreReport):
        return cls(metric, segment_matrix(a, metric), segment_matrix(b, metric))


@dataclass(frozen=True)
class BootstrapResult:
    p_value: float
    significant: bool
    ci_low: float
    ci_high: float
    iterations: int
    sample_size: int
    seed: int
    full_difference: float
    rng_algorithm: str = RNG_ALGORITHM

    def to_dict(self) -> dict:
        return {
            "p_value": self.p_value,
            "significant": self.significant,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "iterations": self.iterations,
            "sample_size": self.sample_size,
            "seed": self.seed,
            "full_difference": self.full_difference,
            "rng_algorithm": self.rng_algorithm,
        }


def paired_bootstrap(
    paired: PairedSystemScores,
    iterations: int = 1000,
    sample_size: int = 300,
    seed: int = 0,
) -> BootstrapResult:
    """Resample segment indices with replacement and compare the two systems.

    Each iteration draws sample_size indices (shared by both systems),
    recomputes the corpus metric from summed statistics, and records the
    A-minus-B difference. A zero full-set difference makes the sign test
    degenerate and is reported as not significant with p_value 1.0.
    """
    if iterations < 1 or sample_size < 1:
        raise ValueError("iterations and sample_size must be positive")
    metric = paired.metric
    a, b = paired.system_a, paired.system_b
    full_diff = _score_from_summed_row(metric, a.sum(axis=0)) - _score_from_summed_row(
        metric, b.sum(axis=0)
    )
    rng = np.random.Generator(np.random.PCG64(seed))
    indices = rng.integers(0, len(a), size=(iterations, sample_size))
    diffs = np.empty(iterations, dtype=np.float64)
    for it in range(iterations):
        idx = indices[it]
        diffs[it] = _score_from_summed_row(metric, a[idx].sum(axis=0)) - _score_from_summed_row(
            metric, b[idx].sum(axis=0)
        )
    ci_low, ci_high = np.percentile(diffs, [2.5, 97.5])
    if full_diff == 0.0:
        p_value, significant = 1.0, False
    else:
        if full_diff > 0:
            contradictions = int(np.count_nonzero(diffs <= 0))
        else:
            contradictions = int(np.count_nonzero(diffs >= 0))
        p_value = contradictions / iterations
        significant = p_value < ALPHA
    return BootstrapResult(
        p_value=float(p_value),
        significant=significant,
        ci_low=float(ci_low),
        ci_high=float(ci_high),
        iterations=iterations,
        sample_size=sample_size,
        seed=seed,
        full_difference=float(full_diff),
    )


@dataclass(frozen=True)
class SignificanceMatrix:
    labels: tuple[str, ...]
    metric: str
    results: dict[tuple[str, str], BootstrapResult]

    def result_for(self, a: str, b: str) -> BootstrapResult:
        key = (a, b) if (a, b) in self.results else (b, a)
        return self.results[key]

    def is_significant(self, a: str, b: str) -> bool:
        return self.result_for(a, b).significant

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "labels": list(self.labels),
            "cells": [
                {"a": a, "b": b, **res.to_dict()}
                for (a, b), res in sorted(self.results.items())
            ],
        }

    def render(self) -> str:
        width = max((len(l) for l in self.labels), default=1) + 2
        head = " " * width + "".join(l.rjust(width) for l in self.labels)
        rows = [head]
        for a in self.labels:
            cells = []
            for b in self.labels:
                if a == b:
                    cells.append("-".rjust(width))
                else:
                    cells.append(("Y" if self.is_significant(a, b) else "n").rjust(width))
            rows.append(a.rjust(width) + "".join(cells))
        return "\n".join(rows)


def significance_matrix(
    systems: list[tuple[str, np.ndarray]],
    metric: str,
    iterations: int = 1000,
    sample_size: int = 300,
    seed: int = 0,
) -> SignificanceMatrix:
    """Pairwise bootstrap verdicts over all unordered system pairs.

    Every pair uses the same seed, so the matrix is symmetric under label
    swaps by construction.
    """
    lengths = {len(m) for _, m in systems}
    if len(lengths) > 1:
        raise ValueError("all systems must share one test set (equal segment counts)")
    results = {}
    for i, (label_a, stats_a) in enumerate(systems):
        for label_b, stats_b in systems[i + 1 :]:
            paired = PairedSystemScores(metric, stats_a, stats_b)
            results[(label_a, label_b)] = paired_bootstrap(
                paired, iterations, sample_size, seed
            )
    return SignificanceMatrix(tuple(l for l, _ in systems), metric, results)


# ---------------------------------------------------------------------------
# Ranking


@dataclass(frozen=True)
class ScoreRecord:
    label: str
    test_set: str
    metric: str
    value: float


@dataclass(frozen=True)
class RankTable:
    """Best-to-worst ordering with the mean ranks behind it.

    Aggregation rule: cells average duplicate (label, test set, metric)
    records (e.g. the same configuration fine-tuned from several base
    models); within each (test set, metric) column systems get average ranks
    (ties share the mean of their positions); systems are ordered by mean
    rank across columns, ties broken by mean BLEU, then label.
    """

    ordering: tuple[str, ...]
    mean_ranks: dict[str, float]
    columns: tuple[tuple[str, str], ...]
    cells: dict[tuple[str, str, str], float]

    def to_dict(self) -> dict:
        return {
            "aggregation": "mean rank over (test set, metric) columns; "
            "ties by mean BLEU, then label",
            "ordering": list(self.ordering),
            "mean_ranks": {l: self.mean_ranks[l] for l in self.ordering},
            "columns": [list(c) for c in self.columns],
        }

    def render(self) -> str:
        lines = ["rank  system        mean-rank"]
        for pos, label in enumerate(self.ordering, start=1):
            lines.append(f"{pos:>4}  {label:<12}  {self.mean_ranks[label]:.3f}")
        return "\n".join(lines)


def _column_ranks(values: list[float], higher_better: bool) -> list[float]:
    order = sorted(
        range(len(values)), key=lambda i: -values[i] if higher_better else values[i]
    )
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and math.isclose(
            values[order[j + 1]], values[order[i]], rel_tol=0.0, abs_tol=1e-12
        ):
            j += 1
        shared = (i + 1 + j + 1) / 2
        for k in range(i, j + 1):
            ranks[order[k]] = shared
        i = j + 1
    return ranks


def rank_systems(records: list[ScoreRecord]) -> RankTable:
    """Rank systems over every (test set, metric) column present.

    Raises MissingCell when a system lacks a score for a column any other
    system has.
    """
    if not records:
        raise ValueError("no score records to rank")
    sums: dict[tuple[str, str, str], list[float]] = {}
    for rec in records:
        sums.setdefault((rec.label, rec.test_set, rec.metric), []).append(rec.value)
    cells = {key: sum(vals) / len(vals) for key, vals in sums.items()}
    labels = sorted({key[0] for key in cells})
    test_sets = sorted({key[1] for key in cells})
    metrics_present = [m for m in METRICS if any(key[2] == m for key in cells)]
    columns = tuple(
        (ts, m) for ts in test_sets for m in metrics_present
    )
    for label in labels:
        for ts, m in columns:
            if (label, ts, m) not in cells:
                raise MissingCell(label, f"({ts}, {m})")
    totals = {l: 0.0 for l in labels}
    for ts, m in columns:
        values = [cells[(l, ts, m)] for l in labels]
        ranks = _column_ranks(values, HIGHER_IS_BETTER[m])
        for l, r in zip(labels, ranks):
            totals[l] += r
    mean_ranks = {l: totals[l] / len(columns) for l in labels}
    bleu_columns = [(ts, m) for ts, m in columns if m == "bleu"]

    def mean_bleu(label: str) -> float:
        if not bleu_columns:
            return 0.0
        return sum(cells[(label, ts, m)] for ts, m in bleu_columns) / len(bleu_columns)

    ordering = tuple(sorted(labels, key=lambda l: (mean_ranks[l], -mean_bleu(l), l)))
    return RankTable(ordering, mean_ranks, columns, cells)
