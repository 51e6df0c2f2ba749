"""Stage 1: hard thresholds and name/content heuristics.

Criteria are checked in a fixed order and the first violation is reported, so every rejected record is
attributed to exactly one reason in the funnel.
"""

import re
from dataclasses import dataclass
from enum import Enum
from pathlib import PurePosixPath
from typing import List

from .config import PipelineConfig
from .docstrings import parse_doc
from .records import FunctionRecord


class FilterReason(str, Enum):
    MISSING_DOCUMENTATION = "missing_documentation"
    DOC_TOO_SHORT = "doc_too_short"
    DOC_TOO_LONG = "doc_too_long"
    COMPLEXITY_TOO_LOW = "complexity_too_low"
    COMPLEXITY_TOO_HIGH = "complexity_too_high"
    TOO_FEW_LOGICAL_LINES = "too_few_logical_lines"
    IS_TEST = "is_test"
    IS_TRIVIAL_ACCESSOR = "is_trivial_accessor"
    HAS_PLACEHOLDER = "has_placeholder"
    HAS_EXAMPLES = "has_examples"
    OK = "ok"


@dataclass(frozen=True)
class FilterVerdict:
    passed: bool
    reason: FilterReason

    @classmethod
    def ok(cls) -> "FilterVerdict":
        return cls(passed=True, reason=FilterReason.OK)

    @classmethod
    def fail(cls, reason: FilterReason) -> "FilterVerdict":
        return cls(passed=False, reason=reason)


DEFAULT_TEST_PATTERNS = ("test_", "test", "Test", "TEST", "_test")
DEFAULT_ACCESSOR_PREFIXES = ("get", "set", "is", "has")
DEFAULT_PLACEHOLDER_MARKERS = ("TODO", "FIXME", "XXX")

_CAMEL_BOUNDARY = re.compile(r"(?<=[a-z0-9])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])")


def split_identifier(name: str) -> List[str]:
    """Split an identifier at underscores and camelCase boundaries: ``getHTTPResponse`` -> get, HTTP, Response."""
    words: List[str] = []
    for chunk in re.split(r"[^A-Za-z0-9]+", name):
        if chunk:
            words.extend(part for part in _CAMEL_BOUNDARY.split(chunk) if part)
    return words


def _name_matches(name: str, pattern: str) -> bool:
    words = split_identifier(name)
    if not words:
        return False
    core = pattern.strip("_")
    if not core:
        return False
    if pattern.endswith("_") and not pattern.startswith("_"):
        return words[0] == core
    if pattern.startswith("_") and not pattern.endswith("_"):
        return words[-1] == core
    return words[0] == core or words[-1] == core


def _path_matches(path: str, patterns) -> bool:
    pure = PurePosixPath(path)
    segments = list(pure.parts[:-1]) + [pure.stem]
    cores = {p.strip("_").lower() for p in patterns if p.strip("_")}
    for segment in segments:
        for word in split_identifier(segment):
            word = word.lower()
            if word in cores or (word.endswith("s") and word[:-1] in cores):
                return True
    return False


def is_test_function(record: FunctionRecord, patterns=DEFAULT_TEST_PATTERNS) -> bool:
    """True when the name or the file path marks the function as test code.

    Name rule: ``test_`` must be the first word, ``_test`` the last word, and a bare pattern such as
    ``Test`` may be either; words come from underscore and camelCase splitting, so ``attestation`` is
    not a test. Path rule: any directory segment or the file stem containing a pattern word (plural
    ``tests`` included) marks every function in the file.
    """
    if any(_name_matches(record.name.split("::")[-1], pattern) for pattern in patterns):
        return True
    return _path_matches(record.path, patterns)


def is_trivial_accessor(
    record: FunctionRecord, prefixes=DEFAULT_ACCESSOR_PREFIXES, max_logical_lines: int = 3
) -> bool:
    words = split_identifier(record.name.split("::")[-1])
    if not words or words[0].lower() not in {p.lower() for p in prefixes}:
        return False
    return record.logical_lines <= max_logical_lines


def has_placeholder_text(documentation: str, markers=DEFAULT_PLACEHOLDER_MARKERS) -> bool:
    if not markers:
        return False
    pattern = r"(?<![A-Za-z0-9_])(?:" + "|".join(re.escape(m) for m in markers) + r")(?![A-Za-z0-9_])"
    return re.search(pattern, documentation) is not None


def apply_basic_filters(record: FunctionRecord, config: PipelineConfig) -> FilterVerdict:
    documentation = record.documentation
    if not documentation.strip():
        return FilterVerdict.fail(FilterReason.MISSING_DOCUMENTATION)
    if len(documentation) < config.min_doc_chars:
        return FilterVerdict.fail(FilterReason.DOC_TOO_SHORT)
    if len(documentation) > config.max_doc_chars:
        return FilterVerdict.fail(FilterReason.DOC_TOO_LONG)
    if record.complexity < config.min_complexity:
        return FilterVerdict.fail(FilterReason.COMPLEXITY_TOO_LOW)
    if record.complexity > config.max_complexity:
        return FilterVerdict.fail(FilterReason.COMPLEXITY_TOO_HIGH)
    if record.logical_lines < config.min_logical_lines:
        return FilterVerdict.fail(FilterReason.TOO_FEW_LOGICAL_LINES)
    if is_test_function(record, config.test_patterns):
        return FilterVerdict.fail(FilterReason.IS_TEST)
    if is_trivial_accessor(record, config.accessor_prefixes, config.accessor_max_logical_lines):
        return FilterVerdict.fail(FilterReason.IS_TRIVIAL_ACCESSOR)
    if has_placeholder_text(documentation, config.placeholder_markers):
        return FilterVerdict.fail(FilterReason.HAS_PLACEHOLDER)
    if config.exclude_doc_examples and parse_doc(documentation).has_examples:
        return FilterVerdict.fail(FilterReason.HAS_EXAMPLES)
    return FilterVerdict.ok()
