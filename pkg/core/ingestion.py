"""Repository discovery: read the repository manifest, walk local checkouts and detect languages."""

import fnmatch
import hashlib
import json
import logging
import os
from pathlib import Path, PurePosixPath
from typing import List, Optional, Union

from .config import PipelineConfig
from .errors import ConfigError, ConfigValidationError, SourceReadError
from .records import Language, RepoSource, SourceFileRef

logger = logging.getLogger(__name__)

EXTENSION_LANGUAGES = {
    ".py": Language.PYTHON,
    ".java": Language.JAVA,
    ".ts": Language.TYPESCRIPT,
    ".tsx": Language.TYPESCRIPT,
    ".js": Language.JAVASCRIPT,
    ".jsx": Language.JAVASCRIPT,
    ".cpp": Language.CPP,
    ".cc": Language.CPP,
    ".cxx": Language.CPP,
    ".h": Language.CPP,
    ".hpp": Language.CPP,
}


def detect_language(path: Union[str, Path]) -> Optional[Language]:
    return EXTENSION_LANGUAGES.get(PurePosixPath(str(path).replace("\\", "/")).suffix.lower())


def file_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def is_ignored(relative_path: str, ignore_globs) -> bool:
    """True if any directory segment, or the whole relative path, matches an ignore glob."""
    parts = PurePosixPath(relative_path).parts[:-1]
    for pattern in ignore_globs:
        if "/" in pattern:
            if fnmatch.fnmatchcase(relative_path, pattern):
                return True
        elif any(fnmatch.fnmatchcase(part, pattern) for part in parts):
            return True
    return False


def load_repo_manifest(path: Union[str, Path]) -> List[RepoSource]:
    """Load the repository manifest.

    Args:
        path: JSON document of the form ``{"repositories": [{"repo_name": ..., "root_path": ...}]}``.
            ``root_path`` is resolved relative to the manifest's directory.

    Returns:
        Repositories in manifest order.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8") or "{}")
    except OSError as e:
        raise SourceReadError(path, str(e))
    except json.JSONDecodeError as e:
        raise ConfigError("repositories", f"{path} is not valid JSON (line {e.lineno}): {e.msg}")

    entries = data.get("repositories", []) if isinstance(data, dict) else None
    if not isinstance(entries, list):
        raise ConfigError("repositories", "expected a list of repository entries")

    repos: List[RepoSource] = []
    seen = set()
    for entry in entries:
        if not isinstance(entry, dict):
            raise ConfigError("repositories", f"expected an object per repository, got {entry!r}")
        name = str(entry.get("repo_name", "")).strip()
        if not name:
            raise ConfigValidationError("repo_name", "repository names must be non-empty")
        if name in seen:
            raise ConfigValidationError("repo_name", f"duplicate repository name '{name}'")
        seen.add(name)

        root = Path(entry.get("root_path", ""))
        if not root.is_absolute():
            root = (path.parent / root).resolve()
        if not root.is_dir():
            raise SourceReadError(root, f"repository root for '{name}' is not a directory")

        repos.append(
            RepoSource(
                repo_name=name,
                root_path=root,
                license_tag=str(entry.get("license_tag", "")),
                domain_tag=str(entry.get("domain_tag", "")),
            )
        )
    return repos


def discover_sources(repo: RepoSource, config: PipelineConfig) -> List[SourceFileRef]:
    """List every supported source file in a repository checkout, in lexicographic path order."""
    root = Path(repo.root_path)
    if not root.is_dir():
        raise SourceReadError(root, "repository root is not a directory")

    def _raise(error: OSError):
        raise SourceReadError(error.filename or root, error.strerror or str(error))

    refs: List[SourceFileRef] = []
    for dirpath, dirnames, filenames in os.walk(root, onerror=_raise):
        dirnames[:] = sorted(
            d for d in dirnames if not any(fnmatch.fnmatchcase(d, p) for p in config.ignore_globs if "/" not in p)
        )
        for filename in filenames:
            full_path = Path(dirpath) / filename
            relative = full_path.relative_to(root).as_posix()
            language = detect_language(relative)
            if language is None or is_ignored(relative, config.ignore_globs):
                continue
            try:
                data = full_path.read_bytes()
            except OSError as e:
                raise SourceReadError(full_path, e.strerror or str(e))
            refs.append(
                SourceFileRef(
                    path=full_path,
                    relative_path=relative,
                    language=language,
                    byte_size=len(data),
                    content_digest=file_digest(data),
                )
            )

    refs.sort(key=lambda ref: ref.relative_path)
    logger.info(f"Discovered {len(refs)} source files in {repo.repo_name}")
    return refs
