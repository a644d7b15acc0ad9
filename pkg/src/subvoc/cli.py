"""Command-line front end binding the toolkit modules into pipeline commands.

Exit codes: 0 success, 1 usage error, 2 data/format error, 3 internal error.
Machine-readable outputs are JSON; human-readable tables go to stdout and are
suppressed by --quiet. SUBVOC_SEED provides a global default seed, overridden
by --seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import traceback
from pathlib import Path

from . import __version__
from .bpe import SegmentedStream, apply_bpe_corpus, learn_bpe, load_bpe, save_bpe
from .corpus import TokenStream, read_lines, write_lines
from .errors import LineCountMismatch, SubvocError
from .metrics import EvalPair, load_report, score
from .planner import (
    CorpusPaths,
    Direction,
    BpeCache,
    DEFAULT_MERGES,
    load_manifest,
    plan_all,
    prepare,
    save_manifest,
)
from .significance import (
    METRICS,
    PairedSystemScores,
    ScoreRecord,
    paired_bootstrap,
    rank_systems,
    segment_matrix,
    significance_matrix,
)
from .vocab import build_vocab, coverage, load_vocab, merge_vocab, save_vocab


class _Parser(argparse.ArgumentParser):
    # Usage errors exit 1 (argparse's default of 2 is reserved for data errors).
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _seed_default(value: int | None) -> int:
    if value is not None:
        return value
    return int(os.environ.get("SUBVOC_SEED", "0"))


def _read_tokens(path: str) -> list[list[str]]:
    if path == "-":
        lines = sys.stdin.read().split("\n")
        if lines and lines[-1] == "":
            lines.pop()
    else:
        lines = list(read_lines(path))
    return [line.split() for line in lines]


def _write_text(path: str, lines: list[str]) -> None:
    if path == "-":
        for line in lines:
            sys.stdout.write(line + "\n")
    else:
        write_lines(path, lines)


def _segmented_from_file(path: str) -> SegmentedStream:
    return SegmentedStream(tuple(tuple(line.split()) for line in read_lines(path)))


def _write_json(path: str | None, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if path:
        Path(path).write_bytes(text.encode("utf-8"))
    else:
        sys.stdout.write(text)


def _cmd_learn_bpe(args) -> int:
    sentences = _read_tokens(args.input)
    model = learn_bpe(TokenStream(tuple(tuple(s) for s in sentences)), args.merges)
    save_bpe(model, args.output)
    if not args.quiet:
        print(f"learned {len(model)} merge rule(s) -> {args.output}")
    return 0


def _cmd_apply_bpe(args) -> int:
    model = load_bpe(args.model)
    sentences = _read_tokens(args.input)
    segmented = apply_bpe_corpus(model, TokenStream(tuple(tuple(s) for s in sentences)))
    _write_text(args.output, [" ".join(s) for s in segmented])
    return 0


def _cmd_plan(args) -> int:
    inputs = CorpusPaths(args.d_source, args.d_target, args.e_source, args.e_target)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifests = plan_all(inputs, out_dir, Direction(args.direction), args.merges)
    for manifest in manifests:
        save_manifest(manifest, out_dir / f"{manifest.config_id}.json")
    if not args.quiet:
        print(f"wrote {len(manifests)} manifest(s) to {out_dir}")
    return 0


def _cmd_prepare(args) -> int:
    cache = BpeCache()
    for manifest_path in args.manifest:
        manifest = load_manifest(manifest_path)
        prepared = prepare(manifest, cache)
        if not args.quiet:
            for suffix, report in prepared.coverage_reports.items():
                print(
                    f"{prepared.config_id} [{suffix}] token coverage "
                    f"{report.token_coverage:.4f}, type coverage {report.type_coverage:.4f}"
                )
    return 0


def _load_pairs(hyp_path: str, ref_path: str) -> list[EvalPair]:
    hyp_lines = read_lines(hyp_path)
    ref_lines = read_lines(ref_path)
    if len(hyp_lines) != len(ref_lines):
        raise LineCountMismatch(len(hyp_lines), len(ref_lines))
    return [EvalPair(h, r) for h, r in zip(hyp_lines, ref_lines)]


def _cmd_score(args) -> int:
    pairs = _load_pairs(args.hyp, args.ref)
    label = args.label or Path(args.hyp).stem
    test_set = args.test_set or Path(args.ref).stem
    report = score(pairs, lowercase=args.lowercase, label=label, test_set=test_set)
    if args.output:
        Path(args.output).write_bytes(
            (json.dumps(report.to_dict(), ensure_ascii=False, sort_keys=True) + "\n").encode("utf-8")
        )
    if not args.quiet:
        d = report.display_scores()
        print(f"BLEU {d['bleu']:.1f}  TER {d['ter']:.1f}  chrF2 {d['chrf2']:.1f}")
    return 0


def _cmd_compare(args) -> int:
    report_a = load_report(args.report_a)
    report_b = load_report(args.report_b)
    seed = _seed_default(args.seed)
    metrics = list(METRICS) if args.metric == "all" else [args.metric]
    results = {}
    for metric in metrics:
        paired = PairedSystemScores.from_reports(metric, report_a, report_b)
        result = paired_bootstrap(paired, args.iterations, args.sample_size, seed)
        results[metric] = result
        if not args.quiet:
            verdict = "significant" if result.significant else "not significant"
            print(
                f"{metric}: diff {result.full_difference:+.2f} "
                f"[{result.ci_low:+.2f}, {result.ci_high:+.2f}] "
                f"p={result.p_value:.3f} -> {verdict}"
            )
    if args.output:
        _write_json(args.output, {m: r.to_dict() for m, r in results.items()})
    return 0


def _cmd_matrix(args) -> int:
    systems = []
    for path in args.reports:
        report = load_report(path)
        label = report.label or Path(path).stem
        systems.append((label, segment_matrix(report, args.metric)))
    seed = _seed_default(args.seed)
    matrix = significance_matrix(
        systems, args.metric, args.iterations, args.sample_size, seed
    )
    if args.output:
        _write_json(args.output, matrix.to_dict())
    if not args.quiet:
        print(matrix.render())
    return 0


def _cmd_rank(args) -> int:
    records = []
    for path in args.reports:
        report = load_report(path)
        label = report.label or Path(path).stem
        test_set = report.test_set or "default"
        records.append(ScoreRecord(label, test_set, "bleu", report.bleu))
        records.append(ScoreRecord(label, test_set, "ter", report.ter))
        records.append(ScoreRecord(label, test_set, "chrf2", report.chrf2))
    table = rank_systems(records)
    if args.output:
        _write_json(args.output, table.to_dict())
    if not args.quiet:
        print(table.render())
    return 0


def _cmd_vocab(args) -> int:
    if args.vocab_cmd == "build":
        vocab = build_vocab(_segmented_from_file(args.input), args.min_count)
        save_vocab(vocab, args.output)
        if not args.quiet:
            print(f"{len(vocab)} type(s) -> {args.output}")
    elif args.vocab_cmd == "merge":
        merged = load_vocab(args.inputs[0])
        for path in args.inputs[1:]:
            merged = merge_vocab(merged, load_vocab(path))
        save_vocab(merged, args.output)
        if not args.quiet:
            print(f"{len(merged)} type(s) -> {args.output}")
    else:
        vocab = load_vocab(args.vocab)
        report = coverage(vocab, _segmented_from_file(args.input))
        if args.output:
            _write_json(args.output, report.to_dict())
        if not args.quiet:
            print(
                f"token coverage {report.token_coverage:.4f}, "
                f"type coverage {report.type_coverage:.4f}, "
                f"{len(report.oov_types)} OOV type(s)"
            )
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="subvoc", description=__doc__)
    parser.add_argument("--version", action="version", version=f"subvoc {__version__}")
    parser.add_argument("--quiet", action="store_true", help="suppress human-readable output")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("learn-bpe", help="learn BPE merge rules from tokenized text")
    p.add_argument("--input", required=True, help="text file, one sentence per line ('-' for stdin)")
    p.add_argument("--output", required=True, help="model file to write")
    p.add_argument("--merges", type=int, default=DEFAULT_MERGES)
    p.set_defaults(func=_cmd_learn_bpe)

    p = sub.add_parser("apply-bpe", help="segment text with a learned model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", default="-", help="text file ('-' for stdin)")
    p.add_argument("--output", default="-", help="output file ('-' for stdout)")
    p.set_defaults(func=_cmd_apply_bpe)

    p = sub.add_parser("plan", help="write manifests for all supported configurations")
    p.add_argument("--d-source", required=True)
    p.add_argument("--d-target", required=True)
    p.add_argument("--e-source", required=True)
    p.add_argument("--e-target", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--direction", choices=[d.value for d in Direction], default="forward")
    p.add_argument("--merges", type=int, default=DEFAULT_MERGES)
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("prepare", help="materialize one or more manifests")
    p.add_argument("--manifest", action="append", required=True, help="manifest file (repeatable)")
    p.set_defaults(func=_cmd_prepare)

    p = sub.add_parser("score", help="score a hypothesis file against a reference")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--lowercase", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--output", help="write the JSON score report here")
    p.add_argument("--label", help="system label recorded in the report")
    p.add_argument("--test-set", help="test-set label recorded in the report")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("compare", help="paired bootstrap significance between two reports")
    p.add_argument("--report-a", required=True)
    p.add_argument("--report-b", required=True)
    p.add_argument("--metric", choices=[*METRICS, "all"], default="all")
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--sample-size", type=int, default=300)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", help="write results as JSON here")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("matrix", help="pairwise significance matrix over score reports")
    p.add_argument("--reports", nargs="+", required=True)
    p.add_argument("--metric", choices=list(METRICS), default="bleu")
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--sample-size", type=int, default=300)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", help="write the matrix as JSON here")
    p.set_defaults(func=_cmd_matrix)

    p = sub.add_parser("rank", help="rank systems from score reports")
    p.add_argument("--reports", nargs="+", required=True)
    p.add_argument("--output", help="write the rank table as JSON here")
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("vocab", help="vocabulary operations")
    vocab_sub = p.add_subparsers(dest="vocab_cmd", required=True, parser_class=_Parser)
    b = vocab_sub.add_parser("build", help="count subwords in a segmented file")
    b.add_argument("--input", required=True)
    b.add_argument("--output", required=True)
    b.add_argument("--min-count", type=int, default=1)
    b.set_defaults(func=_cmd_vocab)
    m = vocab_sub.add_parser("merge", help="merge vocabulary files (counts add)")
    m.add_argument("--inputs", nargs="+", required=True)
    m.add_argument("--output", required=True)
    m.set_defaults(func=_cmd_vocab)
    c = vocab_sub.add_parser("coverage", help="coverage of a vocabulary over a segmented file")
    c.add_argument("--vocab", required=True)
    c.add_argument("--input", required=True)
    c.add_argument("--output", help="write the coverage report as JSON here")
    c.set_defaults(func=_cmd_vocab)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "command", None):
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except (SubvocError, OSError, UnicodeDecodeError) as exc:
        print(f"subvoc: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit:
        raise
    except Exception:
        traceback.print_exc()
        return 3


if __name__ == "__main__":
    sys.exit(main())
