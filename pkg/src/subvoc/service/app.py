"""FastAPI application wrapping the core package.

Run it with `subvoc serve` or `uvicorn subvoc.service.app:app`. Operations
that stream large corpora from disk (manifest preparation, model training at
full scale) belong to the CLI; the service covers the request-sized surface:
configuration queries, planning, desk-scale BPE, vocabulary algebra, scoring,
significance, and ranking.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..bpe import BpeModel, MergeRule, SegmentedStream, apply_bpe_corpus, learn_bpe
from ..corpus import TokenStream
from ..errors import SubvocError
from ..metrics import EvalPair, report_from_dict, score
from ..planner import (
    CANONICAL_TRIPLES,
    ConfigTriple,
    CorpusPaths,
    DataSource,
    Direction,
    is_valid,
    canonical_id,
    plan_all,
)
from ..significance import (
    METRICS,
    PairedSystemScores,
    ScoreRecord,
    paired_bootstrap,
    rank_systems,
)
from ..vocab import Vocabulary, build_vocab, coverage
from . import models

app = FastAPI(
    title="subvoc",
    version=__version__,
    description="Subword/vocabulary preparation and MT evaluation service",
)


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


def _parse_triple(x: str, y: str, z: str) -> ConfigTriple:
    try:
        return ConfigTriple(DataSource(x), DataSource(y), DataSource(z))
    except ValueError as exc:
        raise _bad_request(exc)


def _segmented(lines: list[str]) -> SegmentedStream:
    return SegmentedStream(tuple(tuple(line.split()) for line in lines))


@app.get("/health", response_model=models.HealthResponse)
def health():
    return models.HealthResponse(status="ok", version=__version__)


@app.get("/configs", response_model=models.ConfigListResponse)
def list_configs():
    configs = [
        models.ConfigInfo(config_id=cid, x=t.x.value, y=t.y.value, z=t.z.value)
        for cid, t in CANONICAL_TRIPLES.items()
    ]
    return models.ConfigListResponse(configs=configs)


@app.post("/configs/validate", response_model=models.ValidateResponse)
def validate_config(req: models.ValidateRequest):
    triple = _parse_triple(req.x, req.y, req.z)
    if not is_valid(triple):
        return models.ValidateResponse(valid=False, config_id=None)
    return models.ValidateResponse(valid=True, config_id=canonical_id(triple))


@app.post("/plan", response_model=models.PlanResponse)
def plan(req: models.PlanRequest):
    try:
        direction = Direction(req.direction)
    except ValueError as exc:
        raise _bad_request(exc)
    inputs = CorpusPaths(req.d_source, req.d_target, req.e_source, req.e_target)
    try:
        manifests = plan_all(inputs, req.out_dir, direction, req.merges)
    except SubvocError as exc:
        raise _bad_request(exc)
    return models.PlanResponse(manifests=[m.to_dict() for m in manifests])


@app.post("/bpe/learn", response_model=models.LearnBpeResponse)
def bpe_learn(req: models.LearnBpeRequest):
    stream = TokenStream(tuple(tuple(line.split()) for line in req.lines))
    try:
        model = learn_bpe(stream, req.merges)
    except SubvocError as exc:
        raise _bad_request(exc)
    return models.LearnBpeResponse(
        rules=[(r.left, r.right) for r in model.merges], count=len(model)
    )


@app.post("/bpe/apply", response_model=models.ApplyBpeResponse)
def bpe_apply(req: models.ApplyBpeRequest):
    model = BpeModel(
        tuple(MergeRule(left, right, i) for i, (left, right) in enumerate(req.rules))
    )
    stream = TokenStream(tuple(tuple(line.split()) for line in req.lines))
    segmented = apply_bpe_corpus(model, stream)
    return models.ApplyBpeResponse(segmented=[" ".join(s) for s in segmented])


@app.post("/vocab/build", response_model=models.VocabEntriesResponse)
def vocab_build(req: models.VocabBuildRequest):
    vocab = build_vocab(_segmented(req.segmented_lines), req.min_count)
    return models.VocabEntriesResponse(
        entries=vocab.ordered(), total_count=vocab.total_count()
    )


@app.post("/vocab/coverage", response_model=models.CoverageResponse)
def vocab_coverage(req: models.CoverageRequest):
    try:
        vocab = Vocabulary(dict(req.entries))
    except ValueError as exc:
        raise _bad_request(exc)
    report = coverage(vocab, _segmented(req.segmented_lines))
    return models.CoverageResponse(
        token_coverage=report.token_coverage,
        type_coverage=report.type_coverage,
        oov_types=list(report.oov_types),
    )


@app.post("/score")
def score_endpoint(req: models.ScoreRequest):
    if len(req.hypotheses) != len(req.references):
        raise HTTPException(
            status_code=400,
            detail=f"{len(req.hypotheses)} hypotheses vs {len(req.references)} references",
        )
    pairs = [EvalPair(h, r) for h, r in zip(req.hypotheses, req.references)]
    try:
        report = score(pairs, req.lowercase, req.label, req.test_set)
    except SubvocError as exc:
        raise _bad_request(exc)
    payload = report.to_dict()
    if not req.include_segments:
        for key in ("bleu_segments", "ter_segments", "chrf_segments"):
            del payload[key]
    return payload


@app.post("/compare", response_model=models.BootstrapResponse)
def compare(req: models.CompareRequest):
    if req.metric not in METRICS:
        raise HTTPException(status_code=400, detail=f"unknown metric {req.metric!r}")
    try:
        report_a = report_from_dict(req.report_a)
        report_b = report_from_dict(req.report_b)
        paired = PairedSystemScores.from_reports(req.metric, report_a, report_b)
        result = paired_bootstrap(paired, req.iterations, req.sample_size, req.seed)
    except (SubvocError, ValueError) as exc:
        raise _bad_request(exc)
    return models.BootstrapResponse(**result.to_dict())


@app.post("/rank", response_model=models.RankResponse)
def rank(req: models.RankRequest):
    records = [
        ScoreRecord(r.label, r.test_set, r.metric, r.value) for r in req.records
    ]
    try:
        table = rank_systems(records)
    except (SubvocError, ValueError) as exc:
        raise _bad_request(exc)
    return models.RankResponse(
        ordering=list(table.ordering),
        mean_ranks=table.mean_ranks,
        aggregation=table.to_dict()["aggregation"],
    )
