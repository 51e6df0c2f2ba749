"""Stage 4: heuristic AI-likelihood score for documentation.

Four binary heuristics each contribute a fixed increment; the capped sum is compared with ``tau_ai``.
Flagging marks a sample; whether flagged samples are kept is the pipeline's ``ai_flag_action``.
"""

import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from data.phrase_packs import GENERIC_PACK, GPT_STYLE_PACK, PhrasePack, load_phrase_pack

from .config import PipelineConfig
from .docstrings import DocSection, parse_doc

logger = logging.getLogger(__name__)

PERFECT_STRUCTURE_MIN_SECTIONS = 4
SUSPICIOUS_MIN_RUN = 4
GENERIC_MIN_MATCHES = 2
FLAG_TOLERANCE = 1e-9

_CANONICAL_SECTIONS = (
    DocSection.DESCRIPTION,
    DocSection.PARAMS,
    DocSection.RETURNS,
    DocSection.RAISES,
    DocSection.EXAMPLES,
)
_SKELETON_STRIP = re.compile(r"[\w\s]+")
_LIST_ITEM = re.compile(r"^(?:[-*•]|\d+[.)])\s")


class Heuristic(str, Enum):
    GPT_PHRASE = "gpt_phrase"
    SUSPICIOUS_STRUCTURE = "suspicious_structure"
    PERFECT_STRUCTURE = "perfect_structure"
    GENERIC_LANGUAGE = "generic_language"


@dataclass(frozen=True)
class HeuristicHit:
    heuristic: Heuristic
    alpha: float
    evidence: str


@dataclass(frozen=True)
class AIDetectionResult:
    score: float
    hits: Tuple[HeuristicHit, ...] = field(default_factory=tuple)
    flagged: bool = False

    @property
    def evidence(self) -> List[Dict[str, str]]:
        return [{"heuristic": hit.heuristic.value, "evidence": hit.evidence} for hit in self.hits]

    def to_dict(self) -> Dict[str, object]:
        return {
            "score": self.score,
            "flagged": self.flagged,
            "hits": [{"heuristic": h.heuristic.value, "alpha": h.alpha, "evidence": h.evidence} for h in self.hits],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "AIDetectionResult":
        hits = tuple(
            HeuristicHit(heuristic=Heuristic(h["heuristic"]), alpha=float(h["alpha"]), evidence=str(h["evidence"]))
            for h in data.get("hits", [])
        )
        return cls(score=float(data["score"]), hits=hits, flagged=bool(data["flagged"]))


def match_gpt_phrases(doc: str, phrase_pack: PhrasePack, alpha: float = 0.3) -> Optional[HeuristicHit]:
    """One hit however many pack phrases occur; the evidence is the earliest match."""
    if not doc:
        return None
    match = phrase_pack.first_match(doc)
    if match is None:
        return None
    return HeuristicHit(Heuristic.GPT_PHRASE, alpha, match.text)


def detect_perfect_structure(
    doc: str, alpha: float = 0.2, min_sections: int = PERFECT_STRUCTURE_MIN_SECTIONS
) -> Optional[HeuristicHit]:
    present = [section for section in _CANONICAL_SECTIONS if section in parse_doc(doc).sections]
    if len(present) < min_sections:
        return None
    return HeuristicHit(Heuristic.PERFECT_STRUCTURE, alpha, ", ".join(s.value for s in present))


def _skeleton(line: str) -> Optional[str]:
    """Punctuation left after removing words and spaces, for lines shaped like list or field entries."""
    skeleton = _SKELETON_STRIP.sub("", line)
    if ":" in skeleton or _LIST_ITEM.match(line):
        return skeleton
    return None


def _uniform_run(lines: Sequence[str], min_run: int) -> Optional[Tuple[str, int]]:
    best: Optional[Tuple[str, int]] = None
    previous, run = None, 0
    for raw in lines:
        line = raw.strip()
        skeleton = _skeleton(line) if line else None
        if skeleton is not None and skeleton == previous:
            run += 1
        else:
            previous, run = skeleton, 1 if skeleton is not None else 0
        if skeleton is not None and run >= min_run and (best is None or run > best[1]):
            best = (skeleton, run)
    return best


def _repeated_block(order: Sequence[DocSection]) -> Optional[Tuple[DocSection, ...]]:
    for width in range(2, len(order) // 2 + 1):
        for start in range(0, len(order) - 2 * width + 1):
            block = tuple(order[start : start + width])
            if block == tuple(order[start + width : start + 2 * width]):
                return block
    return None


def detect_suspicious_structure(
    doc: str, alpha: float = 0.2, min_run: int = SUSPICIOUS_MIN_RUN
) -> Optional[HeuristicHit]:
    """Uniform formatting or repeated section ordering.

    Fires on ``min_run`` consecutive lines sharing one punctuation skeleton (lines carrying a colon or a
    list marker; blank lines break a run), or on a section sequence that repeats back to back.
    """
    if not doc:
        return None
    run = _uniform_run(doc.split("\n"), min_run)
    if run is not None:
        return HeuristicHit(Heuristic.SUSPICIOUS_STRUCTURE, alpha, f"{run[1]} consecutive lines shaped {run[0]!r}")
    block = _repeated_block(parse_doc(doc).section_order)
    if block is not None:
        evidence = "repeated section order: " + ", ".join(section.value for section in block)
        return HeuristicHit(Heuristic.SUSPICIOUS_STRUCTURE, alpha, evidence)
    return None


def detect_generic_language(
    doc: str, generic_pack: PhrasePack, alpha: float = 0.1, min_matches: int = GENERIC_MIN_MATCHES
) -> Optional[HeuristicHit]:
    if not doc:
        return None
    found = generic_pack.matches(doc)
    if len(found) < min_matches:
        return None
    return HeuristicHit(Heuristic.GENERIC_LANGUAGE, alpha, "; ".join(m.text for m in found))


def combine_hits(hits: Sequence[HeuristicHit], tau_ai: float) -> AIDetectionResult:
    score = min(1.0, math.fsum(hit.alpha for hit in hits))
    return AIDetectionResult(score=score, hits=tuple(hits), flagged=score >= tau_ai - FLAG_TOLERANCE)


class AIDetector:
    """Runs the four heuristics with packs and increments taken from a ``PipelineConfig``."""

    def __init__(
        self,
        config: PipelineConfig,
        gpt_pack: Optional[PhrasePack] = None,
        generic_pack: Optional[PhrasePack] = None,
    ):
        self.config = config
        self.gpt_pack = gpt_pack or load_phrase_pack(
            config.resolve_pack_path(config.gpt_phrase_pack) or GPT_STYLE_PACK
        )
        self.generic_pack = generic_pack or load_phrase_pack(
            config.resolve_pack_path(config.generic_phrase_pack) or GENERIC_PACK
        )

    @property
    def pack_versions(self) -> Dict[str, str]:
        return {self.gpt_pack.name: self.gpt_pack.version, self.generic_pack.name: self.generic_pack.version}

    def __call__(self, doc: str) -> AIDetectionResult:
        config = self.config
        candidates = (
            match_gpt_phrases(doc, self.gpt_pack, config.alpha_gpt_phrase),
            detect_suspicious_structure(doc, config.alpha_suspicious_structure),
            detect_perfect_structure(doc, config.alpha_perfect_structure),
            detect_generic_language(doc, self.generic_pack, config.alpha_generic_language),
        )
        return combine_hits([hit for hit in candidates if hit is not None], config.tau_ai)


def ai_likelihood(doc: str, config: PipelineConfig, detector: Optional[AIDetector] = None) -> AIDetectionResult:
    """Score one documentation string. Pass a prebuilt ``detector`` to avoid reloading packs."""
    return (detector or AIDetector(config))(doc)
