"""Phrase packs for AI-content heuristics.

A pack is a plain-text file: one case-insensitive regular expression per line, ``#`` comments, and
optional ``# name:`` / ``# version:`` header comments. The shipped packs live next to this module.
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Pattern, Tuple, Union

from core.errors import ConfigError, SourceReadError

logger = logging.getLogger(__name__)

PACK_DIR = Path(__file__).parent / "phrase_packs"
GPT_STYLE_PACK = PACK_DIR / "gpt_style.txt"
GENERIC_PACK = PACK_DIR / "generic.txt"

_HEADER = re.compile(r"^#\s*(name|version)\s*:\s*(\S.*?)\s*$", re.IGNORECASE)


@dataclass(frozen=True)
class PhraseMatch:
    pattern: str
    text: str
    position: int


@dataclass(frozen=True)
class PhrasePack:
    name: str
    version: str
    patterns: Tuple[str, ...]
    compiled: Tuple[Pattern, ...]

    def __len__(self) -> int:
        return len(self.patterns)

    def matches(self, text: str) -> List[PhraseMatch]:
        """Every pattern that matches, at most once each, ordered by position in ``text``."""
        found = []
        for pattern, regex in zip(self.patterns, self.compiled):
            hit = regex.search(text)
            if hit:
                found.append(PhraseMatch(pattern=pattern, text=hit.group(0), position=hit.start()))
        return sorted(found, key=lambda m: m.position)

    def first_match(self, text: str) -> Optional[PhraseMatch]:
        found = self.matches(text)
        return found[0] if found else None


def parse_phrase_pack(text: str, default_name: str = "pack", source: str = "<memory>") -> PhrasePack:
    name, version = default_name, "unversioned"
    patterns: List[str] = []
    compiled: List[Pattern] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            header = _HEADER.match(line)
            if header:
                if header.group(1).lower() == "name":
                    name = header.group(2)
                else:
                    version = header.group(2)
            continue
        try:
            compiled.append(re.compile(line, re.IGNORECASE))
        except re.error as e:
            raise ConfigError(source, f"line {lineno}: invalid pattern {line!r}: {e}")
        patterns.append(line)
    return PhrasePack(name=name, version=version, patterns=tuple(patterns), compiled=tuple(compiled))


def load_phrase_pack(path: Union[str, Path]) -> PhrasePack:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise SourceReadError(path, e.strerror or str(e))
    pack = parse_phrase_pack(text, default_name=path.stem, source=str(path))
    logger.info(f"Loaded phrase pack {pack.name} v{pack.version} ({len(pack)} patterns) from {path}")
    return pack
