"""Vocabulary construction, merging, serialization, and coverage reports."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .bpe import SegmentedStream
from .errors import DuplicateToken, FormatError, IoFailure


@dataclass(frozen=True)
class Vocabulary:
    """Subword-token frequency map with a canonical ordering.

    Iteration order is descending count, ties by lexicographic token order.
    """

    entries: dict[str, int]

    def __post_init__(self):
        for token, count in self.entries.items():
            if count < 1:
                raise ValueError(f"count for {token!r} must be >= 1, got {count}")

    def ordered(self) -> list[tuple[str, int]]:
        return sorted(self.entries.items(), key=lambda kv: (-kv[1], kv[0]))

    def total_count(self) -> int:
        return sum(self.entries.values())

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class CoverageReport:
    """How well a vocabulary covers a segmented stream's tokens."""

    token_coverage: float
    type_coverage: float
    oov_types: tuple[tuple[str, int], ...]

    def to_dict(self) -> dict:
        return {
            "token_coverage": self.token_coverage,
            "type_coverage": self.type_coverage,
            "oov_types": [[t, c] for t, c in self.oov_types],
        }


def build_vocab(segmented: SegmentedStream, min_count: int = 1) -> Vocabulary:
    """Count every subword in the stream.

    min_count filters rare tokens for practical use; it defaults to 1 (off)
    and stays off in all pipeline flows.
    """
    counts: Counter[str] = Counter()
    for sentence in segmented:
        counts.update(sentence)
    if min_count > 1:
        counts = Counter({t: c for t, c in counts.items() if c >= min_count})
    return Vocabulary(dict(counts))


def merge_vocab(a: Vocabulary, b: Vocabulary) -> Vocabulary:
    merged = dict(a.entries)
    for token, count in b.entries.items():
        merged[token] = merged.get(token, 0) + count
    return Vocabulary(merged)


def coverage(vocab: Vocabulary, segmented: SegmentedStream) -> CoverageReport:
    """Fraction of running tokens and distinct tokens found in the vocabulary.

    An empty stream is vacuously fully covered.
    """
    counts: Counter[str] = Counter()
    for sentence in segmented:
        counts.update(sentence)
    if not counts:
        return CoverageReport(1.0, 1.0, ())
    total_tokens = sum(counts.values())
    covered_tokens = sum(c for t, c in counts.items() if t in vocab)
    covered_types = sum(1 for t in counts if t in vocab)
    oov = sorted(
        ((t, c) for t, c in counts.items() if t not in vocab),
        key=lambda kv: (-kv[1], kv[0]),
    )
    return CoverageReport(
        covered_tokens / total_tokens, covered_types / len(counts), tuple(oov)
    )


def save_vocab(vocab: Vocabulary, path: str | Path) -> None:
    lines = [f"{token}\t{count}" for token, count in vocab.ordered()]
    text = "\n".join(lines)
    if lines:
        text += "\n"
    try:
        Path(path).write_bytes(text.encode("utf-8"))
    except OSError as exc:
        raise IoFailure(f"{path}: {exc}") from exc


def load_vocab(path: str | Path) -> Vocabulary:
    try:
        text = Path(path).read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise IoFailure(f"{path}: not valid UTF-8 ({exc})") from exc
    except OSError as exc:
        raise IoFailure(f"{path}: {exc}") from exc
    entries: dict[str, int] = {}
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for lineno, line in enumerate(lines, start=1):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0]:
            raise FormatError(lineno, f"expected 'token<TAB>count', got {line!r}")
        token, raw_count = parts
        try:
            count = int(raw_count)
        except ValueError:
            raise FormatError(lineno, f"count is not an integer: {raw_count!r}")
        if count < 1:
            raise FormatError(lineno, f"count must be >= 1, got {count}")
        if token in entries:
            raise DuplicateToken(token, lineno)
        entries[token] = count
    return Vocabulary(entries)
