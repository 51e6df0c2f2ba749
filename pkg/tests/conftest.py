import hashlib
import json
import textwrap
from pathlib import Path

import pytest

from core.config import PipelineConfig
from core.ingestion import detect_language
from core.records import FunctionRecord, Language, RepoSource, SourceFileRef

GOOD_PYTHON_DOC = """Merge overlapping closed intervals into a sorted list.

Args:
    intervals: Pairs of (start, end) with start <= end.

Returns:
    Merged intervals sorted by start."""

GOOD_PYTHON_CODE = '''def merge_intervals(intervals: list) -> list:
    """Merge overlapping closed intervals into a sorted list."""
    merged = []
    for start, end in sorted(intervals):
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged'''


def make_record(**overrides) -> FunctionRecord:
    """A record that passes every Stage 1 check and scores well in Stage 2."""
    fields = dict(
        repo_name="toolbox",
        path="src/intervals.py",
        language=Language.PYTHON,
        name="merge_intervals",
        signature="def merge_intervals(intervals: list) -> list",
        code=GOOD_PYTHON_CODE,
        documentation=GOOD_PYTHON_DOC,
        start_line=1,
        end_line=9,
        complexity=4,
        logical_lines=7,
        has_type_annotations=True,
        parameters=("intervals",),
        returns_value=True,
    )
    fields.update(overrides)
    if "id" not in fields:
        fields["id"] = FunctionRecord.make_id(fields["repo_name"], fields["path"], fields["start_line"], fields["name"])
    return FunctionRecord(**fields)


@pytest.fixture
def config() -> PipelineConfig:
    return PipelineConfig()


@pytest.fixture
def write_source(tmp_path):
    """Write a dedented source file under ``tmp_path/repo`` and return its ``SourceFileRef``."""
    root = tmp_path / "repo"

    def _write(relative_path: str, source: str) -> SourceFileRef:
        path = root / relative_path
        path.parent.mkdir(parents=True, exist_ok=True)
        data = textwrap.dedent(source).lstrip("\n").encode("utf-8")
        path.write_bytes(data)
        return SourceFileRef(
            path=path,
            relative_path=relative_path,
            language=detect_language(relative_path),
            byte_size=len(data),
            content_digest=hashlib.sha256(data).hexdigest(),
        )

    return _write


@pytest.fixture
def repo(tmp_path) -> RepoSource:
    root = tmp_path / "repo"
    root.mkdir(parents=True, exist_ok=True)
    return RepoSource(repo_name="demo", root_path=root)


@pytest.fixture
def extract_source(repo, write_source):
    """Extract every function from one source snippet."""
    from core.extraction import extract_file

    def _extract(relative_path: str, source: str):
        return extract_file(repo, write_source(relative_path, source))

    return _extract


def write_repo_manifest(directory: Path, repos) -> Path:
    manifest = directory / "repos.json"
    manifest.write_text(json.dumps({"repositories": repos}), encoding="utf-8")
    return manifest
