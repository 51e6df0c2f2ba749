"""End-to-end orchestration: extract -> basic filter -> quality gate -> dedup -> AI flagging -> assemble.

Each stage is also runnable on its own over JSON lines, so the funnel can be audited stage by stage.
Chaining the stages through their JSON-lines streams reproduces ``run_pipeline`` output exactly: the
assemble stage rebuilds the funnel counts from the reject logs under ``<out>/rejects/``.
"""

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, TextIO, Tuple, Union

from tqdm import tqdm

from .ai_detect import AIDetectionResult, AIDetector
from .assembly import (
    DATASET_FILE,
    MANIFEST_FILE,
    REPORTS_DIR,
    DatasetManifest,
    DatasetSample,
    Funnel,
    assign_splits,
    build_manifest,
    emit_reports,
    write_dataset,
    write_manifest,
)
from .basic_filter import apply_basic_filters
from .config import PipelineConfig, apply_overrides, load_config
from .dedup import choose_lsh_layout, deduplicate
from .errors import CurationError, OutputWriteError, SourceReadError, StageError, UsageError
from .extraction import extract_file
from .ingestion import discover_sources, load_repo_manifest
from .quality import QualityAssessment, assess_record
from .records import FunctionRecord, RepoSource, SourceFileRef

logger = logging.getLogger(__name__)

STAGES = ("extract", "filter", "score", "dedup", "aiflag", "assemble")
REJECTING_STAGES = ("filter", "score", "dedup", "aiflag")
REJECTS_DIR = "rejects"

BELOW_QUALITY_THRESHOLD = "below_quality_threshold"
AI_FLAGGED = "ai_flagged"

_CHUNK_SIZE = 16


@dataclass(frozen=True)
class Candidate:
    """A record moving through the stages, with whatever stage results it has picked up so far."""

    record: FunctionRecord
    quality: Optional[QualityAssessment] = None
    ai: Optional[AIDetectionResult] = None

    @property
    def id(self) -> str:
        return self.record.id

    def to_dict(self) -> Dict[str, Any]:
        data = self.record.to_dict()
        if self.quality is not None:
            data["quality"] = self.quality.to_dict()
        if self.ai is not None:
            data["ai"] = self.ai.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any], config: PipelineConfig) -> "Candidate":
        quality = data.get("quality")
        ai = data.get("ai")
        return cls(
            record=FunctionRecord.from_dict(data),
            quality=QualityAssessment.from_dict(quality, config.quality_weights) if quality else None,
            ai=AIDetectionResult.from_dict(ai) if ai else None,
        )


@dataclass
class RunSummary:
    manifest: DatasetManifest
    stage_seconds: Dict[str, float] = field(default_factory=dict)
    rejects: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)
    out_dir: Optional[Path] = None

    def log(self):
        funnel = self.manifest.funnel
        logger.info(
            f"Funnel: extracted={funnel.extracted} filter={funnel.after_stage1} score={funnel.after_stage2} "
            f"dedup={funnel.after_stage3} flagged={funnel.flagged} final={funnel.final}"
        )
        timings = ", ".join(f"{stage}={seconds:.2f}s" for stage, seconds in self.stage_seconds.items())
        logger.info(f"Stage timings: {timings}")


def funnel_from_rejects(reject_counts: Dict[str, int], final: int, flagged_retained: int) -> Funnel:
    """Rebuild the funnel by adding each stage's rejects back onto the final count, last stage first."""
    after_stage3 = final + reject_counts.get("aiflag", 0)
    after_stage2 = after_stage3 + reject_counts.get("dedup", 0)
    after_stage1 = after_stage2 + reject_counts.get("score", 0)
    extracted = after_stage1 + reject_counts.get("filter", 0)
    return Funnel(
        extracted=extracted,
        after_stage1=after_stage1,
        after_stage2=after_stage2,
        after_stage3=after_stage3,
        flagged=flagged_retained + reject_counts.get("aiflag", 0),
        final=final,
    )


def _parallel_map(fn: Callable, items: Sequence, workers: int, desc: str, unit: str) -> List:
    """Order-preserving map, fanned out over processes when ``workers`` > 1."""
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in tqdm(items, desc=desc, unit=unit, leave=False)]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        results = executor.map(fn, items, chunksize=_CHUNK_SIZE)
        return list(tqdm(results, total=len(items), desc=desc, unit=unit, leave=False))


def _extract_task(task: Tuple[RepoSource, SourceFileRef]) -> List[FunctionRecord]:
    repo, ref = task
    try:
        return extract_file(repo, ref)
    except SourceReadError as e:
        logger.warning(f"Skipping unreadable file: {e}")
        return []


def _score_task(record: FunctionRecord, config: PipelineConfig) -> QualityAssessment:
    return assess_record(record, config.quality_weights, config.min_quality_score)


def _detect_task(documentation: str, detector: AIDetector) -> AIDetectionResult:
    return detector(documentation)


class CurationPipeline:
    """Runs the curation stages with one config and one set of loaded phrase packs."""

    def __init__(self, config: PipelineConfig, detector: Optional[AIDetector] = None):
        self.config = config
        self.detector = detector or AIDetector(config)
        self.bands, self.rows = choose_lsh_layout(config.minhash_k, config.tau_lsh)

    # Stages

    def extract(self, repos: Sequence[RepoSource]) -> List[Candidate]:
        tasks = [(repo, ref) for repo in repos for ref in discover_sources(repo, self.config)]
        per_file = _parallel_map(_extract_task, tasks, self.config.workers, "extract", "file")
        records = [Candidate(record) for records in per_file for record in records]
        logger.info(f"Extracted {len(records)} functions from {len(tasks)} files in {len(repos)} repositories")
        return records

    def filter(self, candidates: Sequence[Candidate]) -> Tuple[List[Candidate], List[Dict[str, Any]]]:
        kept, rejects = [], []
        for candidate in candidates:
            verdict = apply_basic_filters(candidate.record, self.config)
            if verdict.passed:
                kept.append(candidate)
            else:
                rejects.append({"id": candidate.id, "reason": verdict.reason.value})
        logger.info(f"Basic filter: {len(kept)} kept, {len(rejects)} rejected")
        return kept, rejects

    def score(self, candidates: Sequence[Candidate]) -> Tuple[List[Candidate], List[Dict[str, Any]]]:
        assessments = _parallel_map(
            partial(_score_task, config=self.config),
            [c.record for c in candidates],
            self.config.workers,
            "score",
            "record",
        )
        kept, rejects = [], []
        for candidate, assessment in zip(candidates, assessments):
            if assessment.passed:
                kept.append(replace(candidate, quality=assessment))
            else:
                rejects.append({"id": candidate.id, "reason": BELOW_QUALITY_THRESHOLD, "score": assessment.score})
        logger.info(f"Quality gate (>= {self.config.min_quality_score}): {len(kept)} kept, {len(rejects)} rejected")
        return kept, rejects

    def dedup(self, candidates: Sequence[Candidate]) -> Tuple[List[Candidate], List[Dict[str, Any]]]:
        by_id = {c.id: c for c in candidates}
        survivors, rejections = deduplicate([c.record for c in candidates], self.config)
        rejects = [
            {"id": r.record_id, "reason": r.reason, "duplicate_of": r.duplicate_of, "similarity": r.similarity}
            for r in rejections
        ]
        return [by_id[record.id] for record in survivors], rejects

    def aiflag(self, candidates: Sequence[Candidate]) -> Tuple[List[Candidate], List[Dict[str, Any]]]:
        results = _parallel_map(
            partial(_detect_task, detector=self.detector),
            [c.record.documentation for c in candidates],
            self.config.workers,
            "aiflag",
            "record",
        )
        kept, rejects = [], []
        for candidate, result in zip(candidates, results):
            if result.flagged and self.config.ai_flag_action == "remove":
                rejects.append(
                    {"id": candidate.id, "reason": AI_FLAGGED, "score": result.score, "evidence": result.evidence}
                )
            else:
                kept.append(replace(candidate, ai=result))
        flagged = sum(1 for c in kept if c.ai.flagged) + len(rejects)
        logger.info(f"AI detection: {flagged} of {len(candidates)} flagged (action: {self.config.ai_flag_action})")
        return kept, rejects

    def assemble(
        self, candidates: Sequence[Candidate], out_dir: Union[str, Path], reject_counts: Dict[str, int]
    ) -> DatasetManifest:
        out_dir = Path(out_dir)
        samples = []
        for candidate in candidates:
            if candidate.quality is None or candidate.ai is None:
                raise StageError("assemble", f"{candidate.id} has not been scored and AI-checked")
            samples.append(DatasetSample(record=candidate.record, quality=candidate.quality, ai=candidate.ai))

        samples = assign_splits(samples, self.config.split_ratios, self.config.split_seed)
        flagged_retained = sum(1 for s in samples if s.ai.flagged)
        manifest = build_manifest(
            samples,
            config_snapshot=self.config.snapshot(),
            funnel=funnel_from_rejects(reject_counts, len(samples), flagged_retained),
            dedup={
                "k": self.config.minhash_k,
                "tau_lsh": self.config.tau_lsh,
                "bands": self.bands,
                "rows": self.rows,
                "seed": self.config.dedup_seed,
            },
            phrase_packs=self.detector.pack_versions,
        )
        write_dataset(samples, out_dir / DATASET_FILE)
        write_manifest(manifest, out_dir / MANIFEST_FILE)
        emit_reports(manifest, out_dir / REPORTS_DIR)
        return manifest

    # Drivers

    def run(self, repos: Sequence[RepoSource], out_dir: Union[str, Path]) -> RunSummary:
        out_dir = Path(out_dir)
        stage_seconds: Dict[str, float] = {}
        rejects: Dict[str, List[Dict[str, Any]]] = {}

        def timed(stage: str, fn: Callable, *args):
            start = time.perf_counter()
            try:
                result = fn(*args)
            except CurationError:
                raise
            except Exception as e:
                raise StageError(stage, str(e), e) from e
            stage_seconds[stage] = time.perf_counter() - start
            return result

        candidates = timed("extract", self.extract, repos)
        for stage in REJECTING_STAGES:
            candidates, rejects[stage] = timed(stage, getattr(self, stage), candidates)
            write_rejects(rejects[stage], out_dir, stage)

        reject_counts = {stage: len(rows) for stage, rows in rejects.items()}
        manifest = timed("assemble", self.assemble, candidates, out_dir, reject_counts)
        summary = RunSummary(manifest=manifest, stage_seconds=stage_seconds, rejects=rejects, out_dir=out_dir)
        summary.log()
        return summary

    def run_stage(
        self,
        stage: str,
        stream: Iterable[str],
        out_dir: Union[str, Path],
        repos: Optional[Sequence[RepoSource]] = None,
    ) -> Iterator[str]:
        """Run one stage over a JSON-lines stream and yield its JSON-lines output.

        ``extract`` ignores the stream and reads ``repos``; rejecting stages write
        ``<out_dir>/rejects/<stage>.jsonl``; ``assemble`` writes the dataset files and yields the dataset rows.
        """
        if stage not in STAGES:
            raise UsageError(f"unknown stage '{stage}'; expected one of {', '.join(STAGES)}")
        out_dir = Path(out_dir)

        try:
            if stage == "extract":
                if repos is None:
                    raise UsageError("the extract stage needs a repository manifest")
                output = self.extract(repos)
            else:
                candidates = list(read_candidates(stream, self.config, stage))
                if stage == "assemble":
                    self.assemble(candidates, out_dir, read_reject_counts(out_dir))
                    yield from (out_dir / DATASET_FILE).read_text(encoding="utf-8").splitlines()
                    return
                output, rejects = getattr(self, stage)(candidates)
                write_rejects(rejects, out_dir, stage)
        except CurationError:
            raise
        except Exception as e:
            raise StageError(stage, str(e), e) from e

        for candidate in output:
            yield json.dumps(candidate.to_dict(), ensure_ascii=False)


def read_candidates(stream: Iterable[str], config: PipelineConfig, stage: str) -> Iterator[Candidate]:
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            yield Candidate.from_dict(json.loads(line), config)
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            raise StageError(stage, f"input line {lineno} is not a valid record: {e}", e) from e


def write_rejects(rows: Sequence[Dict[str, Any]], out_dir: Union[str, Path], stage: str) -> Path:
    path = Path(out_dir) / REJECTS_DIR / f"{stage}.jsonl"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="\n") as f:
            for row in rows:
                f.write(json.dumps(row, ensure_ascii=False) + "\n")
    except OSError as e:
        raise OutputWriteError(path, e.strerror or str(e))
    return path


def read_reject_counts(out_dir: Union[str, Path]) -> Dict[str, int]:
    counts: Dict[str, int] = {}
    for stage in REJECTING_STAGES:
        path = Path(out_dir) / REJECTS_DIR / f"{stage}.jsonl"
        if not path.exists():
            logger.warning(f"No reject log for stage '{stage}' at {path}; counting zero rejects")
            counts[stage] = 0
            continue
        try:
            counts[stage] = sum(1 for line in path.read_text(encoding="utf-8").splitlines() if line.strip())
        except OSError as e:
            raise SourceReadError(path, e.strerror or str(e))
    return counts


def run_pipeline(
    config_path: Optional[Union[str, Path]],
    repo_manifest_path: Union[str, Path],
    out_dir: Union[str, Path],
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> RunSummary:
    """Run every stage in order and write the dataset, manifest, reports and reject logs under ``out_dir``."""
    config = apply_overrides(load_config(config_path), seed=seed, workers=workers)
    repos = load_repo_manifest(repo_manifest_path)
    return CurationPipeline(config).run(repos, out_dir)


def run_stage(
    stage: str,
    stream: Iterable[str],
    config: PipelineConfig,
    out_dir: Union[str, Path],
    repos: Optional[Sequence[RepoSource]] = None,
    output: Optional[TextIO] = None,
) -> int:
    """Run one stage, writing its JSON-lines output to ``output``. Returns the number of lines written."""
    if stage not in STAGES:
        raise UsageError(f"unknown stage '{stage}'; expected one of {', '.join(STAGES)}")
    written = 0
    for line in CurationPipeline(config).run_stage(stage, stream, out_dir, repos=repos):
        if output is not None:
            output.write(line + "\n")
        written += 1
    logger.info(f"Stage '{stage}' emitted {written} lines")
    return written
