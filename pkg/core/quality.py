"""Stage 2: eight-dimension documentation quality score.

Each dimension is a heuristic on [0, 1]; the combined score is the weighted mean scaled to [0, 10].
"""

import math
import re
from dataclasses import astuple, dataclass, fields, replace
from typing import Dict

from .docstrings import ParsedDoc, parse_doc
from .errors import ConfigValidationError
from .records import FunctionRecord

# Opening words that signal a noun-phrase or self-referential summary rather than a verb.
NON_VERB_OPENERS = frozenset(
    {
        "a",
        "an",
        "the",
        "this",
        "that",
        "these",
        "those",
        "it",
        "its",
        "function",
        "method",
        "helper",
        "here",
        "we",
        "i",
    }
)

_SENTENCE_END = re.compile(r"(?<=[.!?])\s+")
_COMMENT_LINE = re.compile(r"^\s*(?:#|//)\s?(.*)$")
_CODE_LIKE = re.compile(
    r"(?:[;{}]\s*$|\)\s*$|\s=\s|^(?:return|if|for|while|def|var|let|const|import|print)\b)"
)

COMMENTED_CODE_MAX_RATIO = 0.3


@dataclass(frozen=True)
class QualityDimensions:
    completeness: float
    param_coverage: float
    return_coverage: float
    type_annotations: float
    clarity: float
    structural_consistency: float
    appropriate_complexity: float
    code_quality: float

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"Quality dimension {f.name} out of range: {value}")

    def to_dict(self) -> Dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class QualityWeights:
    completeness: float = 0.20
    param_coverage: float = 0.15
    return_coverage: float = 0.15
    type_annotations: float = 0.10
    clarity: float = 0.15
    structural_consistency: float = 0.10
    appropriate_complexity: float = 0.05
    code_quality: float = 0.10

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ConfigValidationError(f"weight_{f.name}", "quality weights must be strictly positive")

    @classmethod
    def uniform(cls, value: float = 1.0) -> "QualityWeights":
        return cls(*([value] * len(fields(cls))))


@dataclass(frozen=True)
class QualityAssessment:
    dimensions: QualityDimensions
    weights: QualityWeights
    score: float
    passed: bool

    def to_dict(self) -> Dict[str, object]:
        return {"score": self.score, "passed": self.passed, "dimensions": self.dimensions.to_dict()}

    @classmethod
    def from_dict(cls, data: Dict[str, object], weights: QualityWeights) -> "QualityAssessment":
        return cls(
            dimensions=QualityDimensions(**{k: float(v) for k, v in data["dimensions"].items()}),
            weights=weights,
            score=float(data["score"]),
            passed=bool(data["passed"]),
        )


def _describes_return(parsed: ParsedDoc) -> bool:
    return parsed.has_returns or re.match(r"returns?\b", parsed.summary, re.IGNORECASE) is not None


def _completeness(record: FunctionRecord, parsed: ParsedDoc) -> float:
    checks = [bool(parsed.summary)]
    if record.parameters:
        checks.append(parsed.has_params)
    if record.returns_value:
        checks.append(_describes_return(parsed))
    return sum(checks) / len(checks)


def _param_coverage(record: FunctionRecord, parsed: ParsedDoc) -> float:
    declared = set(record.parameters)
    if not declared:
        return 1.0
    return len(declared & set(parsed.params)) / len(declared)


def _return_coverage(record: FunctionRecord, parsed: ParsedDoc) -> float:
    if not record.returns_value:
        return 1.0
    return 1.0 if _describes_return(parsed) else 0.0


def _clarity(documentation: str, parsed: ParsedDoc) -> float:
    summary = parsed.summary
    first_sentence = _SENTENCE_END.split(summary, maxsplit=1)[0] if summary else ""
    words = first_sentence.split()
    opener = words[0].strip(".,:;()`'\"").lower() if words else ""

    checks = (
        len(words) >= 4,
        opener.isalpha() and opener not in NON_VERB_OPENERS,
        len(documentation.split()) > 1,
    )
    return sum(checks) / len(checks)


def _structural_consistency(record: FunctionRecord, parsed: ParsedDoc) -> float:
    if not parsed.params:
        return 1.0
    phantom = [name for name in parsed.params if name not in record.parameters]
    return 1.0 - len(phantom) / len(parsed.params)


def appropriate_complexity(complexity: int) -> float:
    """1.0 on [2, 10]; 0.2 at 1; linear from 1.0 at 10 down to 0.2 at 50 and beyond."""
    if 2 <= complexity <= 10:
        return 1.0
    if complexity < 2:
        return 0.2
    return max(0.2, 1.0 - 0.8 * (complexity - 10) / 40)


def commented_code_ratio(code: str) -> float:
    lines = [line for line in code.split("\n") if line.strip()]
    if not lines:
        return 0.0
    commented = 0
    for line in lines:
        match = _COMMENT_LINE.match(line)
        if match and _CODE_LIKE.search(match.group(1).strip()):
            commented += 1
    return commented / len(lines)


def _code_quality(record: FunctionRecord) -> float:
    short_name = record.name.split("::")[-1].lstrip("~")
    if record.parameters:
        descriptive = sum(1 for name in record.parameters if len(name.lstrip("_$")) > 1) / len(record.parameters)
    else:
        descriptive = 1.0
    checks = (
        1.0 if len(short_name) >= 3 else 0.0,
        descriptive,
        1.0 if commented_code_ratio(record.code) <= COMMENTED_CODE_MAX_RATIO else 0.0,
    )
    return sum(checks) / len(checks)


def assess_dimensions(record: FunctionRecord) -> QualityDimensions:
    parsed = parse_doc(record.documentation)
    return QualityDimensions(
        completeness=_completeness(record, parsed),
        param_coverage=_param_coverage(record, parsed),
        return_coverage=_return_coverage(record, parsed),
        type_annotations=1.0 if record.has_type_annotations else 0.0,
        clarity=_clarity(record.documentation, parsed),
        structural_consistency=_structural_consistency(record, parsed),
        appropriate_complexity=appropriate_complexity(record.complexity),
        code_quality=_code_quality(record),
    )


def combine_scores(dims: QualityDimensions, weights: QualityWeights) -> float:
    """Weighted mean of the dimensions, scaled to [0, 10]."""
    pairs = list(zip(astuple(weights), astuple(dims)))
    total_weight = math.fsum(w for w, _ in pairs)
    score = 10.0 * math.fsum(w * q for w, q in pairs) / total_weight
    return min(10.0, max(0.0, score))


def quality_gate(assessment: QualityAssessment, min_score: float) -> bool:
    return assessment.score >= min_score


def assess_record(record: FunctionRecord, weights: QualityWeights, min_score: float = 6.0) -> QualityAssessment:
    dims = assess_dimensions(record)
    score = combine_scores(dims, weights)
    assessment = QualityAssessment(dimensions=dims, weights=weights, score=score, passed=False)
    return replace(assessment, passed=quality_gate(assessment, min_score))
