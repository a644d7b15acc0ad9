"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class ConfigInfo(BaseModel):
    config_id: str
    x: str
    y: str
    z: str


class ConfigListResponse(BaseModel):
    configs: list[ConfigInfo]


class ValidateRequest(BaseModel):
    x: str
    y: str
    z: str


class ValidateResponse(BaseModel):
    valid: bool
    config_id: str | None = None


class PlanRequest(BaseModel):
    d_source: str
    d_target: str
    e_source: str
    e_target: str
    out_dir: str
    direction: str = "forward"
    merges: int = Field(default=50_000, ge=0)


class PlanResponse(BaseModel):
    manifests: list[dict]


class LearnBpeRequest(BaseModel):
    lines: list[str]
    merges: int = Field(ge=0)


class LearnBpeResponse(BaseModel):
    rules: list[tuple[str, str]]
    count: int


class ApplyBpeRequest(BaseModel):
    rules: list[tuple[str, str]]
    lines: list[str]


class ApplyBpeResponse(BaseModel):
    segmented: list[str]


class VocabBuildRequest(BaseModel):
    segmented_lines: list[str]
    min_count: int = Field(default=1, ge=1)


class VocabEntriesResponse(BaseModel):
    entries: list[tuple[str, int]]
    total_count: int


class CoverageRequest(BaseModel):
    entries: list[tuple[str, int]]
    segmented_lines: list[str]


class CoverageResponse(BaseModel):
    token_coverage: float
    type_coverage: float
    oov_types: list[tuple[str, int]]


class ScoreRequest(BaseModel):
    hypotheses: list[str]
    references: list[str]
    lowercase: bool = True
    label: str | None = None
    test_set: str | None = None
    include_segments: bool = True


class CompareRequest(BaseModel):
    report_a: dict
    report_b: dict
    metric: str = "bleu"
    iterations: int = Field(default=1000, ge=1)
    sample_size: int = Field(default=300, ge=1)
    seed: int = 0


class BootstrapResponse(BaseModel):
    p_value: float
    significant: bool
    ci_low: float
    ci_high: float
    iterations: int
    sample_size: int
    seed: int
    full_difference: float
    rng_algorithm: str


class RankRecord(BaseModel):
    label: str
    test_set: str
    metric: str
    value: float


class RankRequest(BaseModel):
    records: list[RankRecord]


class RankResponse(BaseModel):
    ordering: list[str]
    mean_ranks: dict[str, float]
    aggregation: str
