"""Configuration space of fine-tuning setups and manifest materialization.

A configuration is a triple (x, y, z) over the data sources D (original
training data), E (fine-tuning data), and DE (their concatenation):

* x names the BPE model used to segment the data the vocabulary is built from,
* y names the data source of the vocabulary,
* z names the BPE model used to segment the fine-tuning data.

Of the 27 combinations, 11 are supported: a concatenation-trained BPE is only
used in the fully-combined setup (x = y = z = DE), and a combined vocabulary
requires one shared BPE for both roles (x = z).
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .bpe import BpeModel, apply_bpe_corpus, learn_bpe, save_bpe
from .corpus import (
    ParallelCorpus,
    Side,
    concat_corpora,
    load_corpus,
    whitespace_tokenize,
    write_lines,
)
from .errors import InvalidConfig, IoFailure
from .vocab import CoverageReport, build_vocab, coverage, save_vocab

logger = logging.getLogger(__name__)

DEFAULT_MERGES = 50_000

MANIFEST_SCHEMA = "subvoc manifest v1"


class DataSource(Enum):
    D = "D"
    E = "E"
    DE = "DE"


class Direction(Enum):
    FORWARD = "forward"
    REVERSE = "reverse"


@dataclass(frozen=True)
class ConfigTriple:
    x: DataSource
    y: DataSource
    z: DataSource

    def as_labels(self) -> tuple[str, str, str]:
        return (self.x.value, self.y.value, self.z.value)


_SOURCES = (DataSource.D, DataSource.E, DataSource.DE)

CANONICAL_TRIPLES: dict[str, ConfigTriple] = {
    "C1": ConfigTriple(DataSource.D, DataSource.D, DataSource.D),
    "C2": ConfigTriple(DataSource.E, DataSource.E, DataSource.E),
    "C3": ConfigTriple(DataSource.D, DataSource.E, DataSource.D),
    "C4": ConfigTriple(DataSource.E, DataSource.D, DataSource.E),
    "C5": ConfigTriple(DataSource.D, DataSource.D, DataSource.E),
    "C6": ConfigTriple(DataSource.E, DataSource.D, DataSource.D),
    "C7": ConfigTriple(DataSource.D, DataSource.E, DataSource.E),
    "C8": ConfigTriple(DataSource.E, DataSource.E, DataSource.D),
    "C9": ConfigTriple(DataSource.D, DataSource.DE, DataSource.D),
    "C10": ConfigTriple(DataSource.E, DataSource.DE, DataSource.E),
    "C11": ConfigTriple(DataSource.DE, DataSource.DE, DataSource.DE),
}

_TRIPLE_TO_ID = {triple: cid for cid, triple in CANONICAL_TRIPLES.items()}


def enumerate_all() -> list[ConfigTriple]:
    """All 27 triples, x-major, in the order D < E < DE."""
    return [
        ConfigTriple(x, y, z) for x in _SOURCES for y in _SOURCES for z in _SOURCES
    ]


def is_valid(triple: ConfigTriple) -> bool:
    x, y, z = triple.x, triple.y, triple.z
    if (x is DataSource.DE or z is DataSource.DE) and not (
        x is DataSource.DE and y is DataSource.DE and z is DataSource.DE
    ):
        return False
    if y is DataSource.DE and x is not z:
        return False
    return True


def filter_valid(triples: list[ConfigTriple]) -> list[ConfigTriple]:
    return [t for t in triples if is_valid(t)]


def canonical_id(triple: ConfigTriple) -> str:
    try:
        return _TRIPLE_TO_ID[triple]
    except KeyError:
        raise InvalidConfig(f"unsupported configuration {triple.as_labels()}")


def triple_for_id(config_id: str) -> ConfigTriple:
    try:
        return CANONICAL_TRIPLES[config_id]
    except KeyError:
        raise InvalidConfig(f"unknown configuration id {config_id!r}")


@dataclass(frozen=True)
class CorpusPaths:
    d_source: str
    d_target: str
    e_source: str
    e_target: str


@dataclass(frozen=True)
class ExperimentManifest:
    """Materialization plan for one configuration.

    Output paths name BPE models by the data source they are learned from, so
    configurations with x == z naturally share a single model file per side.
    With direction = reverse, the roles of D and E swap in every derived
    artifact while the triple semantics are preserved.
    """

    config_id: str
    triple: ConfigTriple
    direction: Direction
    merges: int
    inputs: CorpusPaths
    outputs: dict[str, str]

    def __post_init__(self):
        if canonical_id(self.triple) != self.config_id:
            raise InvalidConfig(
                f"config_id {self.config_id} does not match triple {self.triple.as_labels()}"
            )
        paths = list(self.outputs.values())
        if len(set(paths)) != len(paths):
            raise InvalidConfig("manifest output paths must be distinct")

    def to_dict(self) -> dict:
        x, y, z = self.triple.as_labels()
        return {
            "schema": MANIFEST_SCHEMA,
            "config_id": self.config_id,
            "x": x,
            "y": y,
            "z": z,
            "direction": self.direction.value,
            "merges": self.merges,
            "inputs": {
                "d_source": self.inputs.d_source,
                "d_target": self.inputs.d_target,
                "e_source": self.inputs.e_source,
                "e_target": self.inputs.e_target,
            },
            "outputs": dict(sorted(self.outputs.items())),
        }


_SIDE_SUFFIX = {Side.SOURCE: "src", Side.TARGET: "tgt"}


def _output_layout(triple: ConfigTriple, config_dir: Path) -> dict[str, str]:
    outputs: dict[str, str] = {}
    for side, suffix in _SIDE_SUFFIX.items():
        for source in dict.fromkeys((triple.x, triple.z)):
            key = f"bpe_{source.value.lower()}_{suffix}"
            outputs[key] = str(config_dir / f"bpe_{source.value.lower()}.{suffix}.model")
        outputs[f"vocab_{suffix}"] = str(config_dir / f"vocab.{suffix}.tsv")
        outputs[f"tuning_{suffix}"] = str(config_dir / f"tuning.{suffix}.txt")
        outputs[f"coverage_{suffix}"] = str(config_dir / f"coverage.{suffix}.json")
    return outputs


def build_manifest(
    triple: ConfigTriple,
    inputs: CorpusPaths,
    out_dir: str | Path,
    direction: Direction = Direction.FORWARD,
    merges: int = DEFAULT_MERGES,
) -> ExperimentManifest:
    if not is_valid(triple):
        raise InvalidConfig(f"unsupported configuration {triple.as_labels()}")
    for path in (inputs.d_source, inputs.d_target, inputs.e_source, inputs.e_target):
        if not Path(path).is_file():
            raise IoFailure(f"input corpus not found: {path}")
    config_id = canonical_id(triple)
    config_dir = Path(out_dir) / config_id
    return ExperimentManifest(
        config_id=config_id,
        triple=triple,
        direction=direction,
        merges=merges,
        inputs=inputs,
        outputs=_output_layout(triple, config_dir),
    )


def save_manifest(manifest: ExperimentManifest, path: str | Path) -> None:
    text = json.dumps(manifest.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)
    try:
        Path(path).write_bytes((text + "\n").encode("utf-8"))
    except OSError as exc:
        raise IoFailure(f"{path}: {exc}") from exc


def load_manifest(path: str | Path) -> ExperimentManifest:
    try:
        data = json.loads(Path(path).read_bytes().decode("utf-8"))
    except OSError as exc:
        raise IoFailure(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise IoFailure(f"{path}: invalid JSON ({exc.msg})") from exc
    try:
        triple = ConfigTriple(
            DataSource(data["x"]), DataSource(data["y"]), DataSource(data["z"])
        )
        return ExperimentManifest(
            config_id=data["config_id"],
            triple=triple,
            direction=Direction(data["direction"]),
            merges=int(data.get("merges", DEFAULT_MERGES)),
            inputs=CorpusPaths(**data["inputs"]),
            outputs=dict(data["outputs"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise IoFailure(f"{path}: malformed manifest ({exc})") from exc


class BpeCache:
    """Learned models keyed by (corpus digest, side, merge budget).

    Repeated configurations across manifests reuse models instead of
    relearning; learn_calls counts actual learning runs for diagnostics.
    """

    def __init__(self):
        self._models: dict[tuple[str, str, int], BpeModel] = {}
        self.learn_calls = 0

    def model_for(self, corpus: ParallelCorpus, side: Side, merges: int) -> BpeModel:
        digest = hashlib.sha256(
            "\n".join(corpus.lines(side)).encode("utf-8")
        ).hexdigest()
        key = (digest, side.value, merges)
        model = self._models.get(key)
        if model is None:
            self.learn_calls += 1
            model = learn_bpe(whitespace_tokenize(corpus, side), merges)
            self._models[key] = model
        return model


@dataclass(frozen=True)
class PreparedConfig:
    config_id: str
    outputs: dict[str, str]
    coverage_reports: dict[str, CoverageReport]
    models_learned: int


def prepare(manifest: ExperimentManifest, cache: BpeCache | None = None) -> PreparedConfig:
    """Materialize the manifest: BPE models, vocabularies, segmented tuning
    data, and coverage reports, per side.

    Identical BPE sources across the x and z roles are learned once and
    shared. Partial outputs are removed when preparation fails.
    """
    if cache is None:
        cache = BpeCache()
    if manifest.direction is Direction.FORWARD:
        d_files = (manifest.inputs.d_source, manifest.inputs.d_target)
        e_files = (manifest.inputs.e_source, manifest.inputs.e_target)
    else:
        d_files = (manifest.inputs.e_source, manifest.inputs.e_target)
        e_files = (manifest.inputs.d_source, manifest.inputs.d_target)
    corpus_d = load_corpus(d_files[0], d_files[1], "D")
    corpus_e = load_corpus(e_files[0], e_files[1], "E")
    data = {DataSource.D: corpus_d, DataSource.E: corpus_e}
    needed = {manifest.triple.x, manifest.triple.y, manifest.triple.z}
    if DataSource.DE in needed:
        data[DataSource.DE] = concat_corpora(corpus_d, corpus_e)

    config_dir = Path(next(iter(manifest.outputs.values()))).parent
    config_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    learned_before = cache.learn_calls
    reports: dict[str, CoverageReport] = {}
    try:
        for side, suffix in _SIDE_SUFFIX.items():
            x_model = cache.model_for(data[manifest.triple.x], side, manifest.merges)
            if manifest.triple.z is manifest.triple.x:
                z_model = x_model
            else:
                z_model = cache.model_for(data[manifest.triple.z], side, manifest.merges)

            for source, model in {manifest.triple.x: x_model, manifest.triple.z: z_model}.items():
                path = Path(manifest.outputs[f"bpe_{source.value.lower()}_{suffix}"])
                save_bpe(model, path)
                written.append(path)

            vocab_stream = apply_bpe_corpus(
                x_model, whitespace_tokenize(data[manifest.triple.y], side)
            )
            vocabulary = build_vocab(vocab_stream)
            vocab_path = Path(manifest.outputs[f"vocab_{suffix}"])
            save_vocab(vocabulary, vocab_path)
            written.append(vocab_path)

            tuning_stream = apply_bpe_corpus(z_model, whitespace_tokenize(corpus_e, side))
            tuning_path = Path(manifest.outputs[f"tuning_{suffix}"])
            write_lines(tuning_path, [" ".join(s) for s in tuning_stream])
            written.append(tuning_path)

            report = coverage(vocabulary, tuning_stream)
            reports[suffix] = report
            coverage_path = Path(manifest.outputs[f"coverage_{suffix}"])
            coverage_path.write_bytes(
                (json.dumps(report.to_dict(), ensure_ascii=False, sort_keys=True) + "\n").encode("utf-8")
            )
            written.append(coverage_path)
    except Exception:
        for path in written:
            path.unlink(missing_ok=True)
        try:
            config_dir.rmdir()
        except OSError:
            pass
        raise
    logger.info("prepared %s under %s", manifest.config_id, config_dir)
    return PreparedConfig(
        config_id=manifest.config_id,
        outputs=dict(manifest.outputs),
        coverage_reports=reports,
        models_learned=cache.learn_calls - learned_before,
    )


def plan_all(
    inputs: CorpusPaths,
    out_dir: str | Path,
    direction: Direction = Direction.FORWARD,
    merges: int = DEFAULT_MERGES,
) -> list[ExperimentManifest]:
    """Manifests for every supported configuration, in C1..C11 order."""
    triples = filter_valid(enumerate_all())
    manifests = [
        build_manifest(t, inputs, out_dir, direction, merges) for t in triples
    ]
    return sorted(manifests, key=lambda m: int(m.config_id[1:]))
