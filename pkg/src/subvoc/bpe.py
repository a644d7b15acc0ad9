"""Byte-pair encoding: learn merge rules, segment words, serialize models.

Learning follows the classic greedy formulation: every distinct word becomes a
character sequence terminated by an end-of-word symbol, and at each step the
most frequent adjacent symbol pair is fused into a new rule. Pair counts are
maintained incrementally (delta updates on merge) with a lazy max-heap, which
keeps the selected pair identical to a from-scratch recount at every step.

Segmentation is invertible: non-final subwords of a word carry the "@@"
continuation marker, and words that contain the reserved texts "@@" or "</w>"
are escaped on input and unescaped on desegmentation.
"""

from __future__ import annotations

import heapq
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import TokenStream
from .errors import DanglingMarker, EmptyInput, FormatError, IoFailure

END_OF_WORD = "</w>"
CONTINUATION = "@@"
MODEL_HEADER = "#subvoc bpe v1"

# Private-use sentinel for escaping the reserved texts inside real words.
_ESC = ""


def escape_word(word: str) -> str:
    return (
        word.replace(_ESC, _ESC + "0")
        .replace(CONTINUATION, _ESC + "A")
        .replace(END_OF_WORD, _ESC + "W")
    )


def unescape_word(text: str) -> str:
    return (
        text.replace(_ESC + "A", CONTINUATION)
        .replace(_ESC + "W", END_OF_WORD)
        .replace(_ESC + "0", _ESC)
    )


@dataclass(frozen=True)
class MergeRule:
    left: str
    right: str
    rank: int


@dataclass
class BpeModel:
    """Ordered merge rules plus the marker conventions they assume.

    Models are immutable after construction; the per-word segmentation cache
    only memoizes pure results.
    """

    merges: tuple[MergeRule, ...]
    end_of_word_symbol: str = END_OF_WORD
    continuation_marker: str = CONTINUATION
    _pair_ranks: dict = field(init=False, repr=False, compare=False)
    _cache: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ranks = {}
        for i, rule in enumerate(self.merges):
            if rule.rank != i:
                raise ValueError(f"merge ranks must be contiguous from 0, got {rule}")
            ranks[(rule.left, rule.right)] = i
        self._pair_ranks = ranks
        self._cache = {}

    def __len__(self) -> int:
        return len(self.merges)


@dataclass(frozen=True)
class SegmentedStream:
    """Sentences as subword sequences under a fixed marker convention."""

    sentences: tuple[tuple[str, ...], ...]
    continuation_marker: str = CONTINUATION

    def subword_count(self) -> int:
        return sum(len(s) for s in self.sentences)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)


def learn_bpe(tokens: TokenStream, num_merges: int) -> BpeModel:
    """Learn up to num_merges rules from the stream's word-frequency table.

    Stops early when no pair occurs more than once. Ties on pair frequency are
    broken by lexicographic order on the (left, right) symbol pair, so the
    rule list is reproducible across runs.
    """
    if num_merges < 0:
        raise ValueError("num_merges must be non-negative")
    word_freqs: Counter[str] = Counter()
    for sentence in tokens:
        word_freqs.update(sentence)
    if not word_freqs:
        raise EmptyInput("token stream has no tokens to learn from")
    pairs = _learn_from_word_table(word_freqs, num_merges)
    return BpeModel(tuple(MergeRule(l, r, i) for i, (l, r) in enumerate(pairs)))


def _learn_from_word_table(
    word_freqs: Counter[str], num_merges: int
) -> list[tuple[str, str]]:
    words: list[list[str]] = []
    freqs: list[int] = []
    for word, freq in word_freqs.items():
        words.append(list(escape_word(word)) + [END_OF_WORD])
        freqs.append(freq)

    stats: dict[tuple[str, str], int] = defaultdict(int)
    index: dict[tuple[str, str], dict[int, int]] = defaultdict(dict)
    for wi, syms in enumerate(words):
        f = freqs[wi]
        for pair in zip(syms, syms[1:]):
            stats[pair] += f
            index[pair][wi] = index[pair].get(wi, 0) + 1

    # Lazy max-heap: stale entries are skipped when their recorded count no
    # longer matches stats, so each pop yields the true (count, pair) maximum.
    heap = [(-c, p) for p, c in stats.items() if c >= 2]
    heapq.heapify(heap)

    merges: list[tuple[str, str]] = []
    while len(merges) < num_merges and heap:
        neg_count, pair = heapq.heappop(heap)
        if stats.get(pair, 0) != -neg_count:
            continue
        merges.append(pair)
        _merge_pair(pair, words, freqs, stats, index, heap)
    return merges


def _merge_pair(pair, words, freqs, stats, index, heap):
    left, right = pair
    new_sym = left + right
    affected = index.pop(pair)
    del stats[pair]
    for wi in affected:
        syms = words[wi]
        f = freqs[wi]
        old_pairs = Counter(zip(syms, syms[1:]))
        merged = []
        i = 0
        n = len(syms)
        while i < n:
            if syms[i] == left and i + 1 < n and syms[i + 1] == right:
                merged.append(new_sym)
                i += 2
            else:
                merged.append(syms[i])
                i += 1
        words[wi] = merged
        new_pairs = Counter(zip(merged, merged[1:]))
        for p in set(old_pairs) | set(new_pairs):
            if p == pair:
                continue
            occurrences = new_pairs.get(p, 0)
            if occurrences:
                index[p][wi] = occurrences
            else:
                index[p].pop(wi, None)
            delta = occurrences - old_pairs.get(p, 0)
            if delta:
                count = stats.get(p, 0) + delta * f
                if count:
                    stats[p] = count
                else:
                    stats.pop(p, None)
                if count >= 2:
                    heapq.heappush(heap, (-count, p))


def apply_bpe_word(model: BpeModel, word: str) -> list[str]:
    """Segment one word with the model's merge rules, in rank order.

    The word is split into characters plus the end-of-word symbol; at each
    step the lowest-ranked rule whose pair is adjacent anywhere is applied to
    all its occurrences.
    """
    if not word:
        raise ValueError("word must be non-empty")
    if any(ch.isspace() for ch in word):
        raise ValueError(f"word contains whitespace: {word!r}")
    cached = model._cache.get(word)
    if cached is None:
        cached = _segment_uncached(model, word)
        model._cache[word] = cached
    return list(cached)


def _segment_uncached(model: BpeModel, word: str) -> tuple[str, ...]:
    eow = model.end_of_word_symbol
    symbols = list(escape_word(word)) + [eow]
    ranks = model._pair_ranks
    if ranks:
        while len(symbols) > 1:
            best = None
            for p in zip(symbols, symbols[1:]):
                r = ranks.get(p)
                if r is not None and (best is None or r < best):
                    best = r
            if best is None:
                break
            rule = model.merges[best]
            left, right, fused = rule.left, rule.right, rule.left + rule.right
            merged = []
            i = 0
            n = len(symbols)
            while i < n:
                if symbols[i] == left and i + 1 < n and symbols[i + 1] == right:
                    merged.append(fused)
                    i += 2
                else:
                    merged.append(symbols[i])
                    i += 1
            symbols = merged
    if symbols[-1] == eow:
        symbols = symbols[:-1]
    elif symbols[-1].endswith(eow):
        symbols = symbols[:-1] + [symbols[-1][: -len(eow)]]
    marker = model.continuation_marker
    return tuple(s + marker for s in symbols[:-1]) + (symbols[-1],)


def apply_bpe_corpus(model: BpeModel, tokens: TokenStream) -> SegmentedStream:
    sentences = []
    for sentence in tokens:
        subwords: list[str] = []
        for token in sentence:
            subwords.extend(apply_bpe_word(model, token))
        sentences.append(tuple(subwords))
    return SegmentedStream(tuple(sentences), model.continuation_marker)


def desegment(subwords, marker: str = CONTINUATION) -> list[str]:
    """Rejoin a subword sequence into whole words (inverse of application)."""
    words: list[str] = []
    buf: list[str] = []
    for sw in subwords:
        if sw.endswith(marker):
            buf.append(sw[: -len(marker)])
        else:
            buf.append(sw)
            words.append(unescape_word("".join(buf)))
            buf = []
    if buf:
        raise DanglingMarker(
            f"sentence ends with a continuation marker: {buf[-1] + marker!r}"
        )
    return words


def save_bpe(model: BpeModel, path: str | Path) -> None:
    lines = [MODEL_HEADER]
    lines.extend(f"{r.left} {r.right}" for r in model.merges)
    try:
        Path(path).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))
    except OSError as exc:
        raise IoFailure(f"{path}: {exc}") from exc


def load_bpe(path: str | Path) -> BpeModel:
    try:
        text = Path(path).read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise IoFailure(f"{path}: not valid UTF-8 ({exc})") from exc
    except OSError as exc:
        raise IoFailure(f"{path}: {exc}") from exc
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != MODEL_HEADER:
        raise FormatError(1, f"expected header {MODEL_HEADER!r}")
    merges = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(" ")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise FormatError(lineno, f"expected 'left right', got {line!r}")
        merges.append(MergeRule(parts[0], parts[1], lineno - 2))
    return BpeModel(tuple(merges))
