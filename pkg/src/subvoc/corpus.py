"""Parallel corpus loading, validation, concatenation, and tokenization."""

from __future__ import annotations

import logging
import unicodedata
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import IoFailure, LineCountMismatch

logger = logging.getLogger(__name__)

_LINE_BREAKS = "\n\r\v\f\x1c\x1d\x1e\x85  "


class Side(Enum):
    SOURCE = "source"
    TARGET = "target"


@dataclass(frozen=True)
class ParallelCorpus:
    """Line-aligned source/target sentence store."""

    source_lines: tuple[str, ...]
    target_lines: tuple[str, ...]
    name: str

    def __post_init__(self):
        if len(self.source_lines) != len(self.target_lines):
            raise LineCountMismatch(len(self.source_lines), len(self.target_lines))
        for lines in (self.source_lines, self.target_lines):
            for line in lines:
                if any(ch in line for ch in _LINE_BREAKS):
                    raise IoFailure(
                        f"corpus {self.name!r}: line contains a line-break character"
                    )

    def __len__(self) -> int:
        return len(self.source_lines)

    def lines(self, side: Side) -> tuple[str, ...]:
        return self.source_lines if side is Side.SOURCE else self.target_lines

    def empty_line_count(self) -> int:
        return sum(1 for ln in self.source_lines if not ln) + sum(
            1 for ln in self.target_lines if not ln
        )


@dataclass(frozen=True)
class TokenStream:
    """Sentences as sequences of whitespace-free tokens."""

    sentences: tuple[tuple[str, ...], ...]

    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)


def read_lines(path: str | Path, normalize_nfc: bool = False) -> tuple[str, ...]:
    """Read a UTF-8 text file as lines; a single trailing newline is tolerated.

    Invalid byte sequences are a hard error so corrupt corpora surface early.
    """
    try:
        data = Path(path).read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise IoFailure(f"{path}: not valid UTF-8 ({exc})") from exc
    except OSError as exc:
        raise IoFailure(f"{path}: {exc}") from exc
    if data.endswith("\n"):
        data = data[:-1]
    if not data:
        return ()
    lines = data.split("\n")
    if normalize_nfc:
        lines = [unicodedata.normalize("NFC", ln) for ln in lines]
    return tuple(lines)


def write_lines(path: str | Path, lines: tuple[str, ...] | list[str]) -> None:
    text = "\n".join(lines)
    if lines:
        text += "\n"
    try:
        Path(path).write_bytes(text.encode("utf-8"))
    except OSError as exc:
        raise IoFailure(f"{path}: {exc}") from exc


def load_corpus(
    source_path: str | Path,
    target_path: str | Path,
    name: str,
    normalize_nfc: bool = False,
) -> ParallelCorpus:
    """Load a two-file parallel corpus, validating alignment.

    Unicode normalization is off by default; pass normalize_nfc=True for
    mixed-source data. Empty lines are preserved (they keep alignment) and
    only reported via a warning.
    """
    source = read_lines(source_path, normalize_nfc)
    target = read_lines(target_path, normalize_nfc)
    if len(source) != len(target):
        raise LineCountMismatch(len(source), len(target))
    corpus = ParallelCorpus(source, target, name)
    empties = corpus.empty_line_count()
    if empties:
        logger.warning("corpus %r contains %d empty line(s)", name, empties)
    return corpus


def save_corpus(
    corpus: ParallelCorpus, source_path: str | Path, target_path: str | Path
) -> None:
    write_lines(source_path, corpus.source_lines)
    write_lines(target_path, corpus.target_lines)


def concat_corpora(a: ParallelCorpus, b: ParallelCorpus) -> ParallelCorpus:
    return ParallelCorpus(
        a.source_lines + b.source_lines,
        a.target_lines + b.target_lines,
        f"{a.name}+{b.name}",
    )


def whitespace_tokenize(corpus: ParallelCorpus, side: Side) -> TokenStream:
    """Split each line of one side on runs of Unicode whitespace."""
    return TokenStream(tuple(tuple(line.split()) for line in corpus.lines(side)))
