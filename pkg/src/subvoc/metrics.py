"""Corpus-level BLEU, TER, and chrF2 with per-segment sufficient statistics.

Conventions, fixed so scores are reproducible bit-for-bit:

* Text is lowercased first (when the lowercase flag is set, the default),
  then tokenized with the minimal "13a"-style punctuation splitting for BLEU
  and TER. chrF2 uses the untokenized line with all whitespace removed.
* BLEU: clipped n-gram precisions for n = 1..4 over summed statistics,
  brevity penalty min(1, exp(1 - ref_len/hyp_len)), no smoothing at corpus
  level. If any order has zero matches (or zero n-grams), the corpus score
  is 0.0.
* TER: per segment, a greedy block-shift search (each shift costs one edit,
  blocks must match their destination exactly, at most 10 shift rounds,
  block size <= 10, shift distance <= 50) plus remaining word-level edit
  distance; corpus score is total edits / total reference words * 100.
* chrF2: character n-grams of order 1..6, precision/recall averaged over
  orders with any n-grams on both sides, combined as F-beta with beta = 2.

Every corpus score is recomputable from the stored per-segment statistics,
which is what the significance module resamples.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .errors import EmptyReference, EmptyTestSet, FormatError, IoFailure

BLEU_ORDER = 4
CHRF_ORDER = 6
CHRF_BETA = 2
TER_MAX_SHIFT_ROUNDS = 10
TER_MAX_SHIFT_SIZE = 10
TER_MAX_SHIFT_DISTANCE = 50

REPORT_SCHEMA = "subvoc score report v1"


@dataclass(frozen=True)
class EvalPair:
    hypothesis: str
    reference: str


@dataclass(frozen=True)
class NGramStats:
    """BLEU sufficient statistics for one segment."""

    clipped: tuple[int, int, int, int]
    totals: tuple[int, int, int, int]
    hyp_len: int
    ref_len: int

    def __post_init__(self):
        for c, t in zip(self.clipped, self.totals):
            if c > t:
                raise ValueError("clipped matches cannot exceed totals")

    def as_row(self) -> list[int]:
        return [*self.clipped, *self.totals, self.hyp_len, self.ref_len]


@dataclass(frozen=True)
class TerStats:
    """TER sufficient statistics for one segment."""

    edits: int
    ref_len: int
    shift_capped: bool = False

    def as_row(self) -> list[int]:
        return [self.edits, self.ref_len]


@dataclass(frozen=True)
class ChrfStats:
    """chrF sufficient statistics for one segment: (hyp, ref, match) per order."""

    orders: tuple[tuple[int, int, int], ...]

    def as_row(self) -> list[int]:
        return [v for triple in self.orders for v in triple]


# The exact ASCII ranges the mteval-13a convention splits on; periods,
# commas, dashes, and apostrophes are deliberately excluded (the first three
# get digit-guarded rules, apostrophes stay attached).
_13A_SPLIT = re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])")
_NONDIGIT_DOT = re.compile(r"([^0-9])([\.,])")
_DOT_NONDIGIT = re.compile(r"([\.,])([^0-9])")
_DIGIT_DASH = re.compile(r"([0-9])(-)")


def tokenize_13a(line: str) -> list[str]:
    """Minimal punctuation-splitting tokenization, mteval-13a convention.

    ASCII punctuation and symbols split off as their own tokens, except that
    periods and commas stay attached between digits (decimal and thousands
    separators) and dashes split only after a digit. Non-ASCII punctuation
    stays attached, as the convention defines.
    """
    norm = (
        line.replace("<skipped>", "")
        .replace("&quot;", '"')
        .replace("&amp;", "&")
        .replace("&lt;", "<")
        .replace("&gt;", ">")
    )
    norm = f" {norm} "
    norm = _13A_SPLIT.sub(r" \1 ", norm)
    norm = _NONDIGIT_DOT.sub(r"\1 \2 ", norm)
    norm = _DOT_NONDIGIT.sub(r" \1 \2", norm)
    norm = _DIGIT_DASH.sub(r"\1 \2 ", norm)
    return norm.split()


def _prepare(line: str, lowercase: bool) -> str:
    return line.lower() if lowercase else line


# ---------------------------------------------------------------------------
# BLEU


def bleu_segment_stats(hypothesis: str, reference: str, lowercase: bool = True) -> NGramStats:
    hyp = tokenize_13a(_prepare(hypothesis, lowercase))
    ref = tokenize_13a(_prepare(reference, lowercase))
    clipped = []
    totals = []
    for n in range(1, BLEU_ORDER + 1):
        hyp_ngrams = Counter(tuple(hyp[i : i + n]) for i in range(len(hyp) - n + 1))
        ref_ngrams = Counter(tuple(ref[i : i + n]) for i in range(len(ref) - n + 1))
        totals.append(sum(hyp_ngrams.values()))
        clipped.append(sum(min(c, ref_ngrams.get(g, 0)) for g, c in hyp_ngrams.items()))
    return NGramStats(tuple(clipped), tuple(totals), len(hyp), len(ref))


def corpus_bleu_from_sums(
    clipped: list[int] | tuple[int, ...],
    totals: list[int] | tuple[int, ...],
    hyp_len: int,
    ref_len: int,
) -> float:
    if hyp_len == 0:
        return 0.0
    if any(t == 0 for t in totals) or any(c == 0 for c in clipped):
        return 0.0
    log_precision = sum(math.log(c / t) for c, t in zip(clipped, totals)) / BLEU_ORDER
    brevity = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    return 100.0 * brevity * math.exp(log_precision)


def corpus_bleu_from_stats(stats: list[NGramStats]) -> float:
    clipped = [0] * BLEU_ORDER
    totals = [0] * BLEU_ORDER
    hyp_len = 0
    ref_len = 0
    for s in stats:
        for i in range(BLEU_ORDER):
            clipped[i] += s.clipped[i]
            totals[i] += s.totals[i]
        hyp_len += s.hyp_len
        ref_len += s.ref_len
    return corpus_bleu_from_sums(clipped, totals, hyp_len, ref_len)


def segment_bleu(stats: NGramStats) -> float:
    """Sentence-level BLEU with add-one smoothing on zero higher-order matches.

    Corpus BLEU is the primary metric; this exists because unsmoothed
    per-segment BLEU is degenerate for short segments.
    """
    if stats.hyp_len == 0:
        return 0.0
    log_sum = 0.0
    effective = 0
    for n in range(BLEU_ORDER):
        c, t = stats.clipped[n], stats.totals[n]
        if t == 0:
            continue
        if c == 0:
            if n == 0:
                return 0.0
            c, t = c + 1, t + 1
        log_sum += math.log(c / t)
        effective += 1
    if effective == 0:
        return 0.0
    brevity = 1.0 if stats.hyp_len >= stats.ref_len else math.exp(
        1.0 - stats.ref_len / stats.hyp_len
    )
    return 100.0 * brevity * math.exp(log_sum / effective)


def bleu(pairs: list[EvalPair], lowercase: bool = True) -> tuple[float, list[NGramStats]]:
    if not pairs:
        raise EmptyTestSet("no hypothesis/reference pairs to score")
    stats = [bleu_segment_stats(p.hypothesis, p.reference, lowercase) for p in pairs]
    return corpus_bleu_from_stats(stats), stats


# ---------------------------------------------------------------------------
# TER


def _edit_distance(a: list[int], b: tuple[int, ...]) -> int:
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        cur = [i] + [0] * len(b)
        for j, y in enumerate(b, start=1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y))
        prev = cur
    return prev[-1]


def _prefix_rows(a: list[int], b: tuple[int, ...]) -> list[list[int]]:
    """DP rows for every prefix of a against b; rows[k][j] = dist(a[:k], b[:j])."""
    rows = [list(range(len(b) + 1))]
    prev = rows[0]
    for i, x in enumerate(a, start=1):
        cur = [i] + [0] * len(b)
        for j, y in enumerate(b, start=1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y))
        rows.append(cur)
        prev = cur
    return rows


def _continue_distance(
    start_row: list[int], tail: list[int], start: int, b: tuple[int, ...], limit: int
) -> int:
    """Finish an edit-distance DP from a precomputed prefix row.

    Returns the exact distance if it is <= limit, else any value > limit
    (abandoning as soon as a whole row exceeds the limit).
    """
    prev = start_row
    if min(prev) > limit:
        return limit + 1
    base_i = start
    for offset, x in enumerate(tail, start=1):
        i = base_i + offset
        cur = [i] + [0] * len(b)
        row_min = i
        for j, y in enumerate(b, start=1):
            value = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y))
            cur[j] = value
            if value < row_min:
                row_min = value
        if row_min > limit:
            return limit + 1
        prev = cur
    return prev[-1]


def _shift_candidates(hyp: list[int], ref: tuple[int, ...]):
    """Yield (start, destination, length) for blocks that match the reference
    exactly at the destination; same-position moves are no-ops and skipped."""
    for i in range(len(hyp)):
        for j in range(len(ref)):
            if i == j or abs(i - j) > TER_MAX_SHIFT_DISTANCE:
                continue
            if hyp[i] != ref[j]:
                continue
            length = 1
            while (
                length < TER_MAX_SHIFT_SIZE
                and i + length < len(hyp)
                and j + length < len(ref)
                and hyp[i + length] == ref[j + length]
            ):
                length += 1
            for l in range(1, length + 1):
                yield i, j, l


def ter_segment_stats(hypothesis: str, reference: str, lowercase: bool = True) -> TerStats:
    hyp_tokens = tokenize_13a(_prepare(hypothesis, lowercase))
    ref_tokens = tokenize_13a(_prepare(reference, lowercase))
    if not ref_tokens:
        # Epsilon-free convention: a zero-word reference contributes every
        # hypothesis word as an insertion and nothing to the denominator.
        return TerStats(len(hyp_tokens), 0)
    ids: dict[str, int] = {}
    hyp = [ids.setdefault(t, len(ids)) for t in hyp_tokens]
    ref = tuple(ids.setdefault(t, len(ids)) for t in ref_tokens)
    shifts = 0
    while shifts < TER_MAX_SHIFT_ROUNDS:
        rows = _prefix_rows(hyp, ref)
        base = rows[-1][-1]
        if base == 0:
            break
        best_delta = 0
        best_hyp = None
        for i, j, length in _shift_candidates(hyp, ref):
            shifted = hyp[:i] + hyp[i + length :]
            shifted[j:j] = hyp[i : i + length]
            # The prefix up to min(i, j) is unchanged by the move, so its DP
            # row is reusable; only a distance strictly below base -
            # best_delta can win.
            shared = min(i, j)
            limit = base - best_delta - 1
            dist = _continue_distance(rows[shared], shifted[shared:], shared, ref, limit)
            if dist <= limit:
                best_delta = base - dist
                best_hyp = shifted
        if best_hyp is None:
            break
        hyp = best_hyp
        shifts += 1
    return TerStats(shifts + _edit_distance(hyp, ref), len(ref), shifts == TER_MAX_SHIFT_ROUNDS)


def corpus_ter_from_sums(edits: int, ref_len: int) -> float:
    if ref_len == 0:
        raise EmptyReference("total reference length is zero; TER is undefined")
    return 100.0 * edits / ref_len


def corpus_ter_from_stats(stats: list[TerStats]) -> float:
    return corpus_ter_from_sums(sum(s.edits for s in stats), sum(s.ref_len for s in stats))


def ter(pairs: list[EvalPair], lowercase: bool = True) -> tuple[float, list[TerStats]]:
    if not pairs:
        raise EmptyTestSet("no hypothesis/reference pairs to score")
    stats = [ter_segment_stats(p.hypothesis, p.reference, lowercase) for p in pairs]
    return corpus_ter_from_stats(stats), stats


# ---------------------------------------------------------------------------
# chrF


_WS = re.compile(r"\s+")


def chrf_segment_stats(
    hypothesis: str, reference: str, char_order: int = CHRF_ORDER, lowercase: bool = True
) -> ChrfStats:
    hyp = _WS.sub("", _prepare(hypothesis, lowercase))
    ref = _WS.sub("", _prepare(reference, lowercase))
    orders = []
    for n in range(1, char_order + 1):
        hyp_ngrams = Counter(hyp[i : i + n] for i in range(len(hyp) - n + 1))
        ref_ngrams = Counter(ref[i : i + n] for i in range(len(ref) - n + 1))
        match = sum((hyp_ngrams & ref_ngrams).values())
        orders.append((sum(hyp_ngrams.values()), sum(ref_ngrams.values()), match))
    return ChrfStats(tuple(orders))


def corpus_chrf_from_sums(
    order_sums: list[tuple[int, int, int]], beta: float = CHRF_BETA
) -> float:
    precision_sum = 0.0
    recall_sum = 0.0
    effective = 0
    for hyp_total, ref_total, match in order_sums:
        if hyp_total > 0 and ref_total > 0:
            precision_sum += match / hyp_total
            recall_sum += match / ref_total
            effective += 1
    if effective == 0:
        return 0.0
    precision = precision_sum / effective
    recall = recall_sum / effective
    if precision + recall == 0.0:
        return 0.0
    beta_sq = beta * beta
    return 100.0 * (1 + beta_sq) * precision * recall / (beta_sq * precision + recall)


def corpus_chrf_from_stats(stats: list[ChrfStats], beta: float = CHRF_BETA) -> float:
    if not stats:
        return 0.0
    n_orders = len(stats[0].orders)
    sums = [[0, 0, 0] for _ in range(n_orders)]
    for s in stats:
        for i, (h, r, m) in enumerate(s.orders):
            sums[i][0] += h
            sums[i][1] += r
            sums[i][2] += m
    return corpus_chrf_from_sums([tuple(row) for row in sums], beta)


def chrf(
    pairs: list[EvalPair],
    char_order: int = CHRF_ORDER,
    beta: float = CHRF_BETA,
    lowercase: bool = True,
) -> tuple[float, list[ChrfStats]]:
    if not pairs:
        raise EmptyTestSet("no hypothesis/reference pairs to score")
    stats = [
        chrf_segment_stats(p.hypothesis, p.reference, char_order, lowercase)
        for p in pairs
    ]
    return corpus_chrf_from_stats(stats, beta), stats


# ---------------------------------------------------------------------------
# Combined report


@dataclass(frozen=True)
class ScoreReport:
    """All three corpus scores plus the per-segment statistics behind them."""

    bleu: float
    ter: float
    chrf2: float
    bleu_segments: tuple[NGramStats, ...]
    ter_segments: tuple[TerStats, ...]
    chrf_segments: tuple[ChrfStats, ...]
    lowercase: bool
    label: str | None = None
    test_set: str | None = None

    @property
    def segment_count(self) -> int:
        return len(self.bleu_segments)

    def display_scores(self) -> dict[str, float]:
        return {
            "bleu": round(self.bleu, 1),
            "ter": round(self.ter, 1),
            "chrf2": round(self.chrf2, 1),
        }

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "label": self.label,
            "test_set": self.test_set,
            "lowercase": self.lowercase,
            "segment_count": self.segment_count,
            "scores": {"bleu": self.bleu, "ter": self.ter, "chrf2": self.chrf2},
            "display": self.display_scores(),
            "bleu_segments": [s.as_row() for s in self.bleu_segments],
            "ter_segments": [s.as_row() for s in self.ter_segments],
            "ter_shift_cap": TER_MAX_SHIFT_ROUNDS,
            "ter_capped_segments": sum(1 for s in self.ter_segments if s.shift_capped),
            "chrf_segments": [s.as_row() for s in self.chrf_segments],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True)


def score(
    pairs: list[EvalPair],
    lowercase: bool = True,
    label: str | None = None,
    test_set: str | None = None,
) -> ScoreReport:
    bleu_score, bleu_stats = bleu(pairs, lowercase)
    ter_score, ter_stats = ter(pairs, lowercase)
    chrf_score, chrf_stats = chrf(pairs, lowercase=lowercase)
    return ScoreReport(
        bleu=bleu_score,
        ter=ter_score,
        chrf2=chrf_score,
        bleu_segments=tuple(bleu_stats),
        ter_segments=tuple(ter_stats),
        chrf_segments=tuple(chrf_stats),
        lowercase=lowercase,
        label=label,
        test_set=test_set,
    )


def report_from_dict(data: dict) -> ScoreReport:
    try:
        scores = data["scores"]
        bleu_rows = data.get("bleu_segments", [])
        ter_rows = data.get("ter_segments", [])
        chrf_rows = data.get("chrf_segments", [])
        bleu_segments = tuple(
            NGramStats(tuple(r[0:4]), tuple(r[4:8]), r[8], r[9]) for r in bleu_rows
        )
        ter_segments = tuple(TerStats(r[0], r[1]) for r in ter_rows)
        chrf_segments = tuple(
            ChrfStats(tuple(tuple(r[i : i + 3]) for i in range(0, len(r), 3)))
            for r in chrf_rows
        )
        return ScoreReport(
            bleu=float(scores["bleu"]),
            ter=float(scores["ter"]),
            chrf2=float(scores["chrf2"]),
            bleu_segments=bleu_segments,
            ter_segments=ter_segments,
            chrf_segments=chrf_segments,
            lowercase=bool(data.get("lowercase", True)),
            label=data.get("label"),
            test_set=data.get("test_set"),
        )
    except (KeyError, IndexError, TypeError) as exc:
        raise FormatError(0, f"malformed score report: {exc}") from exc


def load_report(path: str | Path) -> ScoreReport:
    try:
        data = json.loads(Path(path).read_bytes().decode("utf-8"))
    except OSError as exc:
        raise IoFailure(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(exc.lineno, f"{path}: {exc.msg}") from exc
    return report_from_dict(data)
