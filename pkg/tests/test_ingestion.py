import hashlib

import pytest
from conftest import write_repo_manifest

from core.config import PipelineConfig
from core.errors import ConfigError, ConfigValidationError, SourceReadError
from core.ingestion import detect_language, discover_sources, is_ignored, load_repo_manifest
from core.records import Language, RepoSource


@pytest.mark.parametrize(
    "path, language",
    [
        ("src/util.py", Language.PYTHON),
        ("lib/foo.hpp", Language.CPP),
        ("a/B.java", Language.JAVA),
        ("ui/App.tsx", Language.TYPESCRIPT),
        ("index.JS", Language.JAVASCRIPT),
        ("README.md", None),
        ("Makefile", None),
    ],
)
def test_detect_language(path, language):
    assert detect_language(path) is language


def test_discover_drops_unsupported_extensions(tmp_path):
    for name in ("a.py", "b.java", "c.txt"):
        (tmp_path / name).write_text("x")
    refs = discover_sources(RepoSource("r", tmp_path), PipelineConfig())
    assert [ref.relative_path for ref in refs] == ["a.py", "b.java"]
    assert refs[0].content_digest == hashlib.sha256(b"x").hexdigest()
    assert refs[0].byte_size == 1


def test_discover_empty_directory(tmp_path):
    assert discover_sources(RepoSource("r", tmp_path), PipelineConfig()) == []


def test_discover_nested_tree_in_lexicographic_order(tmp_path):
    files = [
        "z.py",
        "a/b/c.ts",
        "a/b.js",
        "a/B.java",
        "m/n/o/p.cpp",
        "m/n/q.h",
        "m/x.hpp",
        "b.cc",
        "a/z/last.jsx",
        "a/a.cxx",
    ]
    for relative in files:
        path = tmp_path / relative
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("// x")
    refs = discover_sources(RepoSource("r", tmp_path), PipelineConfig())
    assert [ref.relative_path for ref in refs] == sorted(files)


def test_discover_skips_ignored_directories(tmp_path):
    for relative in ("src/keep.js", "node_modules/pkg/index.js", "src/build/gen.js"):
        path = tmp_path / relative
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("x")
    refs = discover_sources(RepoSource("r", tmp_path), PipelineConfig())
    assert [ref.relative_path for ref in refs] == ["src/keep.js"]


def test_discover_missing_root(tmp_path):
    with pytest.raises(SourceReadError) as excinfo:
        discover_sources(RepoSource("r", tmp_path / "missing"), PipelineConfig())
    assert "missing" in excinfo.value.path


def test_is_ignored_with_path_glob():
    assert is_ignored("gen/proto/a_pb.py", ("gen/proto/*",))
    assert not is_ignored("src/a.py", ("gen/proto/*",))


def test_load_repo_manifest_resolves_relative_roots(tmp_path):
    (tmp_path / "checkouts" / "alpha").mkdir(parents=True)
    manifest = write_repo_manifest(
        tmp_path, [{"repo_name": "alpha", "root_path": "checkouts/alpha", "license_tag": "MIT"}]
    )
    repos = load_repo_manifest(manifest)
    assert len(repos) == 1
    assert repos[0].root_path == (tmp_path / "checkouts" / "alpha").resolve()
    assert repos[0].license_tag == "MIT"


def test_load_repo_manifest_empty(tmp_path):
    assert load_repo_manifest(write_repo_manifest(tmp_path, [])) == []


def test_load_repo_manifest_duplicate_names(tmp_path):
    (tmp_path / "a").mkdir()
    manifest = write_repo_manifest(
        tmp_path, [{"repo_name": "a", "root_path": "a"}, {"repo_name": "a", "root_path": "a"}]
    )
    with pytest.raises(ConfigValidationError):
        load_repo_manifest(manifest)


def test_load_repo_manifest_missing_root(tmp_path):
    manifest = write_repo_manifest(tmp_path, [{"repo_name": "a", "root_path": "nowhere"}])
    with pytest.raises(SourceReadError):
        load_repo_manifest(manifest)


def test_load_repo_manifest_bad_shape(tmp_path):
    path = tmp_path / "repos.json"
    path.write_text('{"repositories": {"a": 1}}')
    with pytest.raises(ConfigError):
        load_repo_manifest(path)
