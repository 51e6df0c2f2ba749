"""Stage 3: exact and near-duplicate removal.

Exact duplicates share the same normalized code (comments removed, whitespace collapsed). Near duplicates
are found with MinHash signatures over code token sets, bucketed by an LSH index and verified by signature
similarity. Both passes walk the corpus once, in order, keeping the first occurrence.
"""

import hashlib
import logging
import re
import textwrap
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from datasketch import LeanMinHash, MinHash, MinHashLSH

from .config import PipelineConfig
from .errors import DegenerateSampleError, SignatureMismatchError
from .languages import get_parser, get_profile
from .records import FunctionRecord, Language

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"[a-z0-9_]+")

# Java methods only parse inside a class body.
_JAVA_PREFIX = "class __Dedup__ {\n"
_JAVA_SUFFIX = "\n}"


@dataclass(frozen=True)
class NormalizedCode:
    text: str
    digest: str


@dataclass(frozen=True)
class MinHashSignature:
    components: np.ndarray
    k: int
    seed: int

    def __eq__(self, other):
        if not isinstance(other, MinHashSignature):
            return NotImplemented
        return self.k == other.k and self.seed == other.seed and np.array_equal(self.components, other.components)

    def __hash__(self):
        return hash((self.k, self.seed, self.components.tobytes()))


@dataclass(frozen=True)
class DuplicateRejection:
    record_id: str
    reason: str  # exact_duplicate | near_duplicate
    duplicate_of: str
    similarity: float


def _comment_ranges(root, kinds: FrozenSet[str], language: Language) -> List[Tuple[int, int]]:
    ranges: List[Tuple[int, int]] = []
    stack = [root]
    while stack:
        node = stack.pop()
        if node.type in kinds:
            ranges.append((node.start_byte, node.end_byte))
            continue
        if language is Language.PYTHON and node.type == "block":
            # A function's docstring is documentation, not code.
            statements = [c for c in node.named_children if c.type != "comment"]
            if statements and statements[0].type == "expression_statement" and statements[0].named_children:
                if statements[0].named_children[0].type in ("string", "concatenated_string"):
                    ranges.append((statements[0].start_byte, statements[0].end_byte))
        stack.extend(node.children)
    return sorted(ranges)


def normalize_code(code: str, language: Language) -> NormalizedCode:
    """Strip comments with the language grammar and collapse whitespace."""
    fragment = textwrap.dedent(code)
    prefix, suffix = (_JAVA_PREFIX, _JAVA_SUFFIX) if language is Language.JAVA else ("", "")
    source = (prefix + fragment + suffix).encode("utf-8")
    window = (len(prefix.encode("utf-8")), len(source) - len(suffix.encode("utf-8")))

    try:
        tree = get_parser(language).parse(source)
        ranges = _comment_ranges(tree.root_node, get_profile(language).comment_node_kinds, language)
    except Exception as e:
        logger.debug(f"Comment stripping failed ({e}); collapsing whitespace only")
        ranges = []

    pieces: List[bytes] = []
    cursor = window[0]
    for start, end in ranges:
        start, end = max(start, window[0]), min(end, window[1])
        if end <= cursor:
            continue
        if start > cursor:
            pieces.append(source[cursor:start])
        pieces.append(b" ")
        cursor = end
    pieces.append(source[cursor : window[1]])

    text = " ".join(b"".join(pieces).decode("utf-8", errors="replace").split())
    return NormalizedCode(text=text, digest=hashlib.sha256(text.encode("utf-8")).hexdigest())


def token_set(normalized: NormalizedCode) -> FrozenSet[str]:
    return frozenset(_TOKEN.findall(normalized.text.lower()))


@lru_cache(maxsize=8)
def _permutations(k: int, seed: int):
    return MinHash(num_perm=k, seed=seed).permutations


def minhash_signature(tokens: FrozenSet[str], k: int, seed: int) -> MinHashSignature:
    """k-component MinHash signature of a token set.

    All k hash functions derive from ``seed``; the same seed and tokens always give the same signature.
    """
    if not tokens:
        raise DegenerateSampleError("cannot compute a MinHash signature for an empty token set")
    minhash = MinHash(num_perm=k, seed=seed, permutations=_permutations(k, seed))
    minhash.update_batch([token.encode("utf-8") for token in sorted(tokens)])
    return MinHashSignature(components=minhash.hashvalues.copy(), k=k, seed=seed)


def jaccard_estimate(a: MinHashSignature, b: MinHashSignature) -> float:
    """Fraction of equal signature components."""
    if a.k != b.k or len(a.components) != len(b.components):
        raise SignatureMismatchError(f"signature lengths differ: {a.k} vs {b.k}")
    if a.seed != b.seed:
        raise SignatureMismatchError(f"signatures use different seeds: {a.seed} vs {b.seed}")
    return float(np.count_nonzero(a.components == b.components)) / a.k


def lsh_threshold(bands: int, rows: int) -> float:
    """Similarity at which the banding S-curve crosses one half, approximated as (1/b)^(1/r)."""
    return (1.0 / bands) ** (1.0 / rows)


def choose_lsh_layout(k: int, tau: float) -> Tuple[int, int]:
    """Pick (bands, rows) with bands * rows == k whose S-curve threshold is closest to tau."""
    best: Optional[Tuple[float, int, int]] = None
    for bands in range(1, k + 1):
        if k % bands:
            continue
        rows = k // bands
        candidate = (abs(lsh_threshold(bands, rows) - tau), bands, rows)
        if best is None or candidate < best:
            best = candidate
    return best[1], best[2]


class NearDuplicateIndex:
    """LSH index with signature verification, one bucket space per language unless merged."""

    def __init__(self, k: int, tau_lsh: float, seed: int, cross_language: bool = False):
        self.k = k
        self.tau_lsh = tau_lsh
        self.seed = seed
        self.cross_language = cross_language
        self.bands, self.rows = choose_lsh_layout(k, tau_lsh)
        self._indexes: Dict[str, MinHashLSH] = {}
        self._signatures: Dict[str, MinHashSignature] = {}
        self._order: Dict[str, int] = {}

    def _index_for(self, language: Language) -> MinHashLSH:
        key = "*" if self.cross_language else language.value
        if key not in self._indexes:
            self._indexes[key] = MinHashLSH(threshold=self.tau_lsh, num_perm=self.k, params=(self.bands, self.rows))
        return self._indexes[key]

    def __len__(self) -> int:
        return len(self._signatures)

    def find_duplicate(self, signature: MinHashSignature, language: Language) -> Optional[Tuple[str, float]]:
        """Return (earliest verified prior id, similarity), or None."""
        lean = LeanMinHash(seed=signature.seed, hashvalues=signature.components)
        verified = []
        for candidate in self._index_for(language).query(lean):
            similarity = jaccard_estimate(signature, self._signatures[candidate])
            if similarity >= self.tau_lsh:
                verified.append((self._order[candidate], candidate, similarity))
        if not verified:
            return None
        _, candidate, similarity = min(verified)
        return candidate, similarity

    def insert(self, record_id: str, signature: MinHashSignature, language: Language):
        self._index_for(language).insert(record_id, LeanMinHash(seed=signature.seed, hashvalues=signature.components))
        self._signatures[record_id] = signature
        self._order[record_id] = len(self._order)


def _normalize_all(records: Sequence[FunctionRecord]) -> List[NormalizedCode]:
    return [normalize_code(record.code, record.language) for record in records]


def find_exact_duplicates(
    records: Sequence[FunctionRecord], normalized: Optional[Sequence[NormalizedCode]] = None
) -> Tuple[List[FunctionRecord], List[DuplicateRejection]]:
    normalized = normalized if normalized is not None else _normalize_all(records)
    first_by_text: Dict[str, str] = {}
    survivors: List[FunctionRecord] = []
    rejections: List[DuplicateRejection] = []
    for record, norm in zip(records, normalized):
        original = first_by_text.get(norm.text)
        if original is not None:
            rejections.append(DuplicateRejection(record.id, "exact_duplicate", original, 1.0))
            continue
        first_by_text[norm.text] = record.id
        survivors.append(record)
    return survivors, rejections


def exact_dedup(records: Sequence[FunctionRecord]) -> List[FunctionRecord]:
    return find_exact_duplicates(records)[0]


def find_near_duplicates(
    records: Sequence[FunctionRecord],
    config: PipelineConfig,
    normalized: Optional[Sequence[NormalizedCode]] = None,
) -> Tuple[List[FunctionRecord], List[DuplicateRejection]]:
    normalized = normalized if normalized is not None else _normalize_all(records)
    index = NearDuplicateIndex(config.minhash_k, config.tau_lsh, config.dedup_seed, config.cross_language_dedup)
    survivors: List[FunctionRecord] = []
    rejections: List[DuplicateRejection] = []

    for record, norm in zip(records, normalized):
        tokens = token_set(norm)
        if not tokens:
            logger.debug(f"{record.id} has no tokens; retained without near-duplicate check")
            survivors.append(record)
            continue
        signature = minhash_signature(tokens, config.minhash_k, config.dedup_seed)
        match = index.find_duplicate(signature, record.language)
        if match is not None:
            rejections.append(DuplicateRejection(record.id, "near_duplicate", match[0], match[1]))
            continue
        index.insert(record.id, signature, record.language)
        survivors.append(record)
    return survivors, rejections


def near_dedup_pass(records: Sequence[FunctionRecord], config: PipelineConfig) -> List[FunctionRecord]:
    return find_near_duplicates(records, config)[0]


def deduplicate(
    records: Sequence[FunctionRecord],
    config: PipelineConfig,
    normalized: Optional[Sequence[NormalizedCode]] = None,
) -> Tuple[List[FunctionRecord], List[DuplicateRejection]]:
    """Exact dedup followed by near dedup; returns survivors in input order and every rejection."""
    normalized = list(normalized) if normalized is not None else _normalize_all(records)
    by_id = {record.id: norm for record, norm in zip(records, normalized)}

    after_exact, exact_rejections = find_exact_duplicates(records, normalized)
    survivors, near_rejections = find_near_duplicates(after_exact, config, [by_id[r.id] for r in after_exact])
    logger.info(
        f"Dedup: {len(exact_rejections)} exact and {len(near_rejections)} near duplicates removed, "
        f"{len(survivors)} retained"
    )
    return survivors, exact_rejections + near_rejections
