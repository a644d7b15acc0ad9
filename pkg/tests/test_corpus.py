import logging
import random

import pytest

from subvoc.corpus import (
    ParallelCorpus,
    Side,
    concat_corpora,
    load_corpus,
    read_lines,
    save_corpus,
    whitespace_tokenize,
)
from subvoc.errors import IoFailure, LineCountMismatch

from .oracles import char_split_tokens


def write(path, text):
    path.write_bytes(text.encode("utf-8"))
    return path


def make_corpus(tmp_path, src_lines, tgt_lines, name="c"):
    src = write(tmp_path / "c.src", "".join(l + "\n" for l in src_lines))
    tgt = write(tmp_path / "c.tgt", "".join(l + "\n" for l in tgt_lines))
    return load_corpus(src, tgt, name)


def test_load_three_line_files(tmp_path):
    corpus = make_corpus(tmp_path, ["a b", "c", "d e f"], ["x", "y z", "w"])
    assert len(corpus) == 3
    assert corpus.source_lines == ("a b", "c", "d e f")
    assert corpus.target_lines == ("x", "y z", "w")


def test_load_dev2010_sized_files(tmp_path):
    lines = [f"sentence {i}" for i in range(887)]
    corpus = make_corpus(tmp_path, lines, lines)
    assert len(corpus) == 887


def test_line_count_mismatch(tmp_path):
    src = write(tmp_path / "a.src", "".join(f"{i}\n" for i in range(10)))
    tgt = write(tmp_path / "a.tgt", "".join(f"{i}\n" for i in range(9)))
    with pytest.raises(LineCountMismatch) as exc:
        load_corpus(src, tgt, "bad")
    assert exc.value.source_count == 10
    assert exc.value.target_count == 9


def test_missing_file(tmp_path):
    with pytest.raises(IoFailure):
        load_corpus(tmp_path / "nope.src", tmp_path / "nope.tgt", "x")


def test_invalid_utf8_is_hard_error(tmp_path):
    src = tmp_path / "bad.src"
    src.write_bytes(b"caf\xe9\n")
    tgt = write(tmp_path / "bad.tgt", "ok\n")
    with pytest.raises(IoFailure):
        load_corpus(src, tgt, "x")


def test_missing_trailing_newline_tolerated(tmp_path):
    src = write(tmp_path / "n.src", "a\nb")
    tgt = write(tmp_path / "n.tgt", "x\ny\n")
    corpus = load_corpus(src, tgt, "n")
    assert corpus.source_lines == ("a", "b")


def test_empty_lines_preserved_and_warned(tmp_path, caplog):
    with caplog.at_level(logging.WARNING, logger="subvoc.corpus"):
        corpus = make_corpus(tmp_path, ["a", "", "b"], ["x", "y", ""])
    assert len(corpus) == 3
    assert corpus.empty_line_count() == 2
    assert any("empty line" in rec.message for rec in caplog.records)


def test_nfc_flag(tmp_path):
    decomposed = "état"
    src = write(tmp_path / "u.src", decomposed + "\n")
    tgt = write(tmp_path / "u.tgt", "state\n")
    plain = load_corpus(src, tgt, "u")
    assert plain.source_lines[0] == decomposed
    normalized = load_corpus(src, tgt, "u", normalize_nfc=True)
    assert normalized.source_lines[0] == "état"


def test_round_trip_bytes(tmp_path):
    text = "a b\n\nl'homme est là\ntail"
    src = write(tmp_path / "r.src", text + "\n")
    tgt = write(tmp_path / "r.tgt", "1\n2\n3\n4\n")
    corpus = load_corpus(src, tgt, "r")
    out_src, out_tgt = tmp_path / "o.src", tmp_path / "o.tgt"
    save_corpus(corpus, out_src, out_tgt)
    assert out_src.read_bytes() == src.read_bytes()
    assert out_tgt.read_bytes() == tgt.read_bytes()


def test_concat_identity_and_order(tmp_path):
    corpus = make_corpus(tmp_path, ["a", "b"], ["x", "y"])
    empty = ParallelCorpus((), (), "empty")
    same = concat_corpora(corpus, empty)
    assert same.source_lines == corpus.source_lines
    assert same.target_lines == corpus.target_lines

    other = ParallelCorpus(("c", "d", "e"), ("z", "w", "v"), "other")
    both = concat_corpora(corpus, other)
    assert len(both) == 5
    assert both.source_lines == ("a", "b", "c", "d", "e")
    assert both.name == "c+other"


def test_concat_lengths_additive():
    a = ParallelCorpus(("s",) * 895, ("t",) * 895, "top5")
    b = ParallelCorpus(("s",) * 179, ("t",) * 179, "id")
    assert len(concat_corpora(a, b)) == 1074


def test_concat_associative():
    mk = lambda n, k: ParallelCorpus(
        tuple(f"{k}{i}" for i in range(n)), tuple(f"{k}{i}t" for i in range(n)), k
    )
    a, b, c = mk(2, "a"), mk(3, "b"), mk(1, "c")
    left = concat_corpora(concat_corpora(a, b), c)
    right = concat_corpora(a, concat_corpora(b, c))
    assert left.source_lines == right.source_lines
    assert left.target_lines == right.target_lines


def test_tokenize_examples():
    corpus = ParallelCorpus(("a  b", "", "l'homme est là"), ("", "", ""), "t")
    stream = whitespace_tokenize(corpus, Side.SOURCE)
    assert stream.sentences[0] == ("a", "b")
    assert stream.sentences[1] == ()
    assert list(stream.sentences[2]) == char_split_tokens("l'homme est là")


def test_tokenize_against_char_oracle_random():
    rng = random.Random(11)
    pieces = ["a", "bc", "élève", "x1", "-", "l'y"]
    spaces = [" ", "  ", "\t", " ", " \t "]
    for _ in range(50):
        line = "".join(
            rng.choice(pieces) + rng.choice(spaces) for _ in range(rng.randint(0, 8))
        )
        corpus = ParallelCorpus((line,), ("",), "r")
        got = list(whitespace_tokenize(corpus, Side.SOURCE).sentences[0])
        assert got == char_split_tokens(line)


def test_tokenize_idempotent_after_join():
    corpus = ParallelCorpus(("a   b  c", "d\te"), ("", ""), "t")
    stream = whitespace_tokenize(corpus, Side.SOURCE)
    rejoined = ParallelCorpus(
        tuple(" ".join(s) for s in stream.sentences), ("", ""), "again"
    )
    again = whitespace_tokenize(rejoined, Side.SOURCE)
    assert again.sentences == stream.sentences
    assert all(not any(ch.isspace() for ch in tok) for s in stream for tok in s)


def test_carriage_return_rejected(tmp_path):
    src = tmp_path / "crlf.src"
    src.write_bytes(b"a\r\nb\r\n")
    tgt = write(tmp_path / "crlf.tgt", "x\ny\n")
    with pytest.raises(IoFailure):
        load_corpus(src, tgt, "crlf")


def test_read_lines_empty_file(tmp_path):
    path = write(tmp_path / "e.txt", "")
    assert read_lines(path) == ()
