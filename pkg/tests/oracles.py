"""Independent reference implementations used only to check the real ones.

Everything here favors obviousness over speed: pair tables are rebuilt from
scratch at every step, searches are exhaustive, and no state is shared with
the code under test.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter

from subvoc.bpe import END_OF_WORD, escape_word


def brute_force_learn(word_table: dict[str, int], num_merges: int) -> list[tuple[str, str]]:
    """Greedy BPE learning that recounts every pair at every iteration."""
    words = {escape_word(w): f for w, f in word_table.items()}
    symbol_seqs = {w: list(w) + [END_OF_WORD] for w in words}
    merges: list[tuple[str, str]] = []
    while len(merges) < num_merges:
        counts: Counter[tuple[str, str]] = Counter()
        for w, freq in words.items():
            syms = symbol_seqs[w]
            for pair in zip(syms, syms[1:]):
                counts[pair] += freq
        if not counts:
            break
        best = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        if best[1] < 2:
            break
        pair = best[0]
        merges.append(pair)
        fused = pair[0] + pair[1]
        for w in words:
            syms = symbol_seqs[w]
            out = []
            i = 0
            while i < len(syms):
                if syms[i] == pair[0] and i + 1 < len(syms) and syms[i + 1] == pair[1]:
                    out.append(fused)
                    i += 2
                else:
                    out.append(syms[i])
                    i += 1
            symbol_seqs[w] = out
    return merges


def strict_rank_apply(merges: list[tuple[str, str]], word: str) -> list[str]:
    """Apply rules one by one in rank order, each exhaustively left-to-right."""
    symbols = list(escape_word(word)) + [END_OF_WORD]
    for left, right in merges:
        out = []
        i = 0
        while i < len(symbols):
            if symbols[i] == left and i + 1 < len(symbols) and symbols[i + 1] == right:
                out.append(left + right)
                i += 2
            else:
                out.append(symbols[i])
                i += 1
        symbols = out
    if symbols[-1] == END_OF_WORD:
        symbols = symbols[:-1]
    elif symbols[-1].endswith(END_OF_WORD):
        symbols = symbols[:-1] + [symbols[-1][: -len(END_OF_WORD)]]
    return [s + "@@" for s in symbols[:-1]] + [symbols[-1]]


def char_split_tokens(line: str) -> list[str]:
    """Whitespace tokenization done character by character."""
    tokens = []
    current = []
    for ch in line:
        if ch.isspace():
            if current:
                tokens.append("".join(current))
                current = []
        else:
            current.append(ch)
    if current:
        tokens.append("".join(current))
    return tokens


def count_tokens(sentences) -> dict[str, int]:
    counts: dict[str, int] = {}
    for sentence in sentences:
        for token in sentence:
            counts[token] = counts.get(token, 0) + 1
    return counts


def membership_coverage(vocab_tokens: set[str], sentences) -> tuple[float, float]:
    """Token and type coverage via a plain membership scan."""
    total = 0
    covered = 0
    seen: set[str] = set()
    seen_covered: set[str] = set()
    for sentence in sentences:
        for token in sentence:
            total += 1
            seen.add(token)
            if token in vocab_tokens:
                covered += 1
                seen_covered.add(token)
    if total == 0:
        return 1.0, 1.0
    return covered / total, len(seen_covered) / len(seen)


def levenshtein(a, b) -> int:
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        cur = [i] + [0] * len(b)
        for j, y in enumerate(b, start=1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y))
        prev = cur
    return prev[-1]


def exhaustive_ter_edits(hyp: list[str], ref: list[str]) -> int:
    """Minimum shifts + edit distance over every shift sequence (small inputs).

    Each shift moves a hypothesis block that matches the reference exactly at
    its destination, costing one edit, exactly as in the greedy search.
    """
    best = levenshtein(hyp, ref)
    seen: dict[tuple[str, ...], int] = {}

    def explore(current: list[str], shifts: int):
        nonlocal best
        key = tuple(current)
        if seen.get(key, math.inf) <= shifts:
            return
        seen[key] = shifts
        dist = levenshtein(current, ref)
        best = min(best, shifts + dist)
        if shifts + 1 >= best:
            return
        for i in range(len(current)):
            for j in range(len(ref)):
                if i == j or current[i] != ref[j]:
                    continue
                length = 1
                while (
                    i + length < len(current)
                    and j + length < len(ref)
                    and current[i + length] == ref[j + length]
                ):
                    length += 1
                for l in range(1, length + 1):
                    shifted = current[:i] + current[i + l :]
                    shifted[j:j] = current[i : i + l]
                    if shifted != current:
                        explore(shifted, shifts + 1)

    explore(list(hyp), 0)
    return best


def direct_chrf(hyp: str, ref: str, order: int = 6, beta: float = 2.0) -> float:
    """chrF computed directly from the formula, one pair, no shared code."""
    h = "".join(hyp.split())
    r = "".join(ref.split())
    precisions = []
    recalls = []
    for n in range(1, order + 1):
        h_grams = Counter(h[i : i + n] for i in range(len(h) - n + 1))
        r_grams = Counter(r[i : i + n] for i in range(len(r) - n + 1))
        overlap = sum(min(c, r_grams.get(g, 0)) for g, c in h_grams.items())
        h_total = sum(h_grams.values())
        r_total = sum(r_grams.values())
        if h_total > 0 and r_total > 0:
            precisions.append(overlap / h_total)
            recalls.append(overlap / r_total)
    if not precisions:
        return 0.0
    p = sum(precisions) / len(precisions)
    r_ = sum(recalls) / len(recalls)
    if p + r_ == 0:
        return 0.0
    return 100.0 * (1 + beta**2) * p * r_ / (beta**2 * p + r_)


def bleu_from_token_lists(pairs: list[tuple[list[str], list[str]]]) -> float:
    """Corpus BLEU computed straight from token lists (already normalized)."""
    clipped = [0] * 4
    totals = [0] * 4
    hyp_len = 0
    ref_len = 0
    for hyp, ref in pairs:
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, 5):
            h_grams = Counter(tuple(hyp[i : i + n]) for i in range(len(hyp) - n + 1))
            r_grams = Counter(tuple(ref[i : i + n]) for i in range(len(ref) - n + 1))
            totals[n - 1] += sum(h_grams.values())
            clipped[n - 1] += sum(min(c, r_grams.get(g, 0)) for g, c in h_grams.items())
    if hyp_len == 0 or any(t == 0 for t in totals) or any(c == 0 for c in clipped):
        return 0.0
    geo = math.exp(sum(math.log(c / t) for c, t in zip(clipped, totals)) / 4)
    bp = 1.0 if hyp_len >= ref_len else math.exp(1 - ref_len / hyp_len)
    return 100.0 * bp * geo


def all_triples():
    """All 27 (x, y, z) label triples, independently enumerated."""
    return list(itertools.product(("D", "E", "DE"), repeat=3))
