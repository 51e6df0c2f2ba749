"""Final dataset assembly: language-stratified splits, corpus statistics, serialization and reports.

Every output is a pure function of the retained samples, the config and the seeds, so two runs over the
same corpus produce byte-identical files.
"""

import csv
import json
import logging
import math
import random
import statistics
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .ai_detect import AIDetectionResult
from .errors import OutputWriteError
from .quality import QualityAssessment
from .records import FunctionRecord, Language

logger = logging.getLogger(__name__)

PIPELINE_VERSION = "0.1.0"
SCHEMA_VERSION = 1
HISTOGRAM_BIN_WIDTH = 0.25
HISTOGRAM_BINS = 40  # [0, 10]
MIN_STRATIFIED_GROUP = 3

DATASET_FILE = "dataset.jsonl"
MANIFEST_FILE = "manifest.json"
REPORTS_DIR = "reports"


class Split(str, Enum):
    TRAIN = "train"
    VALIDATION = "validation"
    TEST = "test"


SPLIT_ORDER = (Split.TRAIN, Split.VALIDATION, Split.TEST)
LANGUAGE_ORDER = tuple(Language)


@dataclass(frozen=True)
class DatasetSample:
    record: FunctionRecord
    quality: QualityAssessment
    ai: AIDetectionResult
    split: Optional[Split] = None

    @property
    def id(self) -> str:
        return self.record.id

    def to_json_dict(self) -> Dict[str, Any]:
        record = self.record
        return {
            "id": record.id,
            "repo": record.repo_name,
            "path": record.path,
            "language": record.language.value,
            "name": record.name,
            "signature": record.signature,
            "code": record.code,
            "documentation": record.documentation,
            "start_line": record.start_line,
            "end_line": record.end_line,
            "complexity": record.complexity,
            "logical_lines": record.logical_lines,
            "has_type_annotations": record.has_type_annotations,
            "quality_score": self.quality.score,
            "quality_dimensions": self.quality.dimensions.to_dict(),
            "ai_score": self.ai.score,
            "ai_flagged": self.ai.flagged,
            "ai_evidence": self.ai.evidence,
            "split": self.split.value if self.split else None,
        }


@dataclass
class Funnel:
    extracted: int = 0
    after_stage1: int = 0
    after_stage2: int = 0
    after_stage3: int = 0
    flagged: int = 0
    final: int = 0

    def rows(self) -> List[Tuple[str, int]]:
        return [
            ("extracted", self.extracted),
            ("after_basic_filter", self.after_stage1),
            ("after_quality_gate", self.after_stage2),
            ("after_dedup", self.after_stage3),
            ("ai_flagged", self.flagged),
            ("final", self.final),
        ]


@dataclass
class CorpusStats:
    total: int = 0
    quality_mean: float = 0.0
    quality_median: float = 0.0
    quality_stddev: float = 0.0
    quality_min: float = 0.0
    quality_max: float = 0.0
    complexity_mean: float = 0.0
    complexity_median: float = 0.0
    annotated_count: int = 0
    annotation_rate: float = 0.0
    flagged_count: int = 0
    flagged_rate: float = 0.0
    language_counts: Dict[str, int] = field(default_factory=dict)
    language_rates: Dict[str, float] = field(default_factory=dict)
    repository_counts: Dict[str, int] = field(default_factory=dict)
    language_quality: Dict[str, Dict[str, float]] = field(default_factory=dict)
    quality_histogram: List[int] = field(default_factory=lambda: [0] * HISTOGRAM_BINS)


@dataclass
class DatasetManifest:
    config: Dict[str, Any]
    dedup: Dict[str, Any]
    phrase_packs: Dict[str, str]
    funnel: Funnel
    split_sizes: Dict[str, int]
    stats: CorpusStats
    pipeline_version: str = PIPELINE_VERSION
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pipeline_version": self.pipeline_version,
            "schema_version": self.schema_version,
            "config": self.config,
            "dedup": self.dedup,
            "phrase_packs": self.phrase_packs,
            "funnel": asdict(self.funnel),
            "split_sizes": self.split_sizes,
            "stats": asdict(self.stats),
        }


def _largest_remainder(total: int, ratios: Sequence[Fraction]) -> List[int]:
    quotas = [total * ratio for ratio in ratios]
    counts = [math.floor(q) for q in quotas]
    order = sorted(range(len(ratios)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[: total - sum(counts)]:
        counts[i] += 1
    return counts


def _split_counts(group_sizes: Dict[Language, int], ratios: Sequence[Fraction]) -> Dict[Language, List[int]]:
    """Per-language split sizes that hit the global largest-remainder totals.

    Each cell starts at the floor of its quota; the leftover units go to the cells with the largest
    fractional parts, subject to both the group's and the split's remaining capacity.
    """
    targets = _largest_remainder(sum(group_sizes.values()), ratios)
    quotas = {lang: [size * ratio for ratio in ratios] for lang, size in group_sizes.items()}
    counts = {lang: [math.floor(q) for q in cells] for lang, cells in quotas.items()}

    group_left = {lang: group_sizes[lang] - sum(counts[lang]) for lang in group_sizes}
    split_left = [targets[s] - sum(counts[lang][s] for lang in counts) for s in range(len(ratios))]

    cells = sorted(
        ((lang, s) for lang in group_sizes for s in range(len(ratios))),
        key=lambda c: (-(quotas[c[0]][c[1]] - counts[c[0]][c[1]]), LANGUAGE_ORDER.index(c[0]), c[1]),
    )
    for _ in range(2):
        for lang, s in cells:
            if group_left[lang] > 0 and split_left[s] > 0:
                counts[lang][s] += 1
                group_left[lang] -= 1
                split_left[s] -= 1
    return counts


def stratified_split(samples: Sequence[DatasetSample], ratios: Sequence[float], seed: int) -> Dict[str, Split]:
    """Assign every sample to train/validation/test, stratified by language.

    Within a language, ids are sorted then shuffled with a seed derived from ``seed`` and the language,
    and consumed in split order. Languages with fewer than three samples go entirely to train.
    """
    exact_ratios = [Fraction(str(ratio)) for ratio in ratios]
    groups: Dict[Language, List[str]] = defaultdict(list)
    for sample in samples:
        groups[sample.record.language].append(sample.id)

    assignment: Dict[str, Split] = {}
    stratified: Dict[Language, List[str]] = {}
    for language in LANGUAGE_ORDER:
        ids = sorted(groups.get(language, []))
        if not ids:
            continue
        if len(ids) < MIN_STRATIFIED_GROUP:
            logger.warning(f"Only {len(ids)} {language.value} samples; assigning all to train")
            assignment.update({sample_id: Split.TRAIN for sample_id in ids})
            continue
        random.Random(f"{seed}:{language.value}").shuffle(ids)
        stratified[language] = ids

    counts = _split_counts({lang: len(ids) for lang, ids in stratified.items()}, exact_ratios)
    for language, ids in stratified.items():
        cursor = 0
        for split, count in zip(SPLIT_ORDER, counts[language]):
            assignment.update({sample_id: split for sample_id in ids[cursor : cursor + count]})
            cursor += count
    return assignment


def assign_splits(samples: Sequence[DatasetSample], ratios: Sequence[float], seed: int) -> List[DatasetSample]:
    assignment = stratified_split(samples, ratios, seed)
    return [replace(sample, split=assignment[sample.id]) for sample in samples]


def _rate(count: int, total: int) -> float:
    return count / total if total else 0.0


def compute_stats(samples: Sequence[DatasetSample]) -> CorpusStats:
    if not samples:
        return CorpusStats()

    scores = [s.quality.score for s in samples]
    complexities = [s.record.complexity for s in samples]
    total = len(samples)
    annotated = sum(1 for s in samples if s.record.has_type_annotations)
    flagged = sum(1 for s in samples if s.ai.flagged)

    language_counter = Counter(s.record.language for s in samples)
    language_counts = {lang.value: language_counter[lang] for lang in LANGUAGE_ORDER if language_counter[lang]}
    repo_counter = Counter(s.record.repo_name for s in samples)

    language_quality: Dict[str, Dict[str, float]] = {}
    for lang in LANGUAGE_ORDER:
        lang_scores = [s.quality.score for s in samples if s.record.language is lang]
        if lang_scores:
            language_quality[lang.value] = {
                "count": len(lang_scores),
                "mean": statistics.fmean(lang_scores),
                "median": statistics.median_low(lang_scores),
                "stddev": statistics.pstdev(lang_scores),
                "min": min(lang_scores),
                "max": max(lang_scores),
            }

    histogram = [0] * HISTOGRAM_BINS
    for score in scores:
        histogram[min(HISTOGRAM_BINS - 1, max(0, math.floor(score / HISTOGRAM_BIN_WIDTH)))] += 1

    return CorpusStats(
        total=total,
        quality_mean=statistics.fmean(scores),
        quality_median=statistics.median_low(scores),
        quality_stddev=statistics.pstdev(scores),
        quality_min=min(scores),
        quality_max=max(scores),
        complexity_mean=statistics.fmean(complexities),
        complexity_median=statistics.median_low(complexities),
        annotated_count=annotated,
        annotation_rate=_rate(annotated, total),
        flagged_count=flagged,
        flagged_rate=_rate(flagged, total),
        language_counts=language_counts,
        language_rates={lang: _rate(count, total) for lang, count in language_counts.items()},
        repository_counts=dict(sorted(repo_counter.items(), key=lambda item: (-item[1], item[0]))),
        language_quality=language_quality,
        quality_histogram=histogram,
    )


def build_manifest(
    samples: Sequence[DatasetSample],
    config_snapshot: Dict[str, Any],
    funnel: Funnel,
    dedup: Dict[str, Any],
    phrase_packs: Dict[str, str],
) -> DatasetManifest:
    split_counter = Counter(s.split for s in samples)
    return DatasetManifest(
        config=config_snapshot,
        dedup=dedup,
        phrase_packs=dict(sorted(phrase_packs.items())),
        funnel=funnel,
        split_sizes={split.value: split_counter[split] for split in SPLIT_ORDER},
        stats=compute_stats(samples),
    )


def _open_for_write(path: Path):
    path.parent.mkdir(parents=True, exist_ok=True)
    return path.open("w", encoding="utf-8", newline="\n")


def write_dataset(samples: Sequence[DatasetSample], path: Union[str, Path]) -> Path:
    """Write one JSON object per line, sorted by sample id."""
    path = Path(path)
    try:
        with _open_for_write(path) as f:
            for sample in sorted(samples, key=lambda s: s.id):
                f.write(json.dumps(sample.to_json_dict(), ensure_ascii=False) + "\n")
    except OSError as e:
        raise OutputWriteError(path, e.strerror or str(e))
    logger.info(f"Wrote {len(samples)} samples to {path}")
    return path


def write_manifest(manifest: DatasetManifest, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        with _open_for_write(path) as f:
            f.write(json.dumps(manifest.to_dict(), indent=2, ensure_ascii=False) + "\n")
    except OSError as e:
        raise OutputWriteError(path, e.strerror or str(e))
    return path


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> Path:
    try:
        with _open_for_write(path) as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as e:
        raise OutputWriteError(path, e.strerror or str(e))
    return path


def _pct(count: int, total: int) -> str:
    return f"{100.0 * _rate(count, total):.2f}"


def emit_reports(manifest: DatasetManifest, out_dir: Union[str, Path]) -> List[Path]:
    """Write the CSV reports under ``out_dir``: language, histogram, per-language quality, funnel, repository."""
    out_dir = Path(out_dir)
    stats = manifest.stats
    written = []

    languages = sorted(stats.language_counts.items(), key=lambda item: (-item[1], item[0]))
    written.append(
        _write_csv(
            out_dir / "language_distribution.csv",
            ("language", "count", "share_percent"),
            [(lang, count, _pct(count, stats.total)) for lang, count in languages],
        )
    )

    written.append(
        _write_csv(
            out_dir / "quality_histogram.csv",
            ("bin_start", "bin_end", "count"),
            [
                (f"{i * HISTOGRAM_BIN_WIDTH:.2f}", f"{(i + 1) * HISTOGRAM_BIN_WIDTH:.2f}", count)
                for i, count in enumerate(stats.quality_histogram)
            ],
        )
    )

    written.append(
        _write_csv(
            out_dir / "per_language_quality.csv",
            ("language", "count", "mean", "median", "stddev", "min", "max"),
            [
                (lang, int(q["count"]), *(f"{q[key]:.4f}" for key in ("mean", "median", "stddev", "min", "max")))
                for lang, q in stats.language_quality.items()
            ],
        )
    )

    funnel = manifest.funnel
    written.append(
        _write_csv(
            out_dir / "funnel.csv",
            ("stage", "count", "retention_percent"),
            [(stage, count, _pct(count, funnel.extracted)) for stage, count in funnel.rows()],
        )
    )

    written.append(
        _write_csv(
            out_dir / "repository_distribution.csv",
            ("repository", "count", "share_percent"),
            [(repo, count, _pct(count, stats.total)) for repo, count in stats.repository_counts.items()],
        )
    )
    return written
