# Data layer: phrase packs used by the AI-content heuristics
from .phrase_packs import (
    GENERIC_PACK,
    GPT_STYLE_PACK,
    PACK_DIR,
    PhraseMatch,
    PhrasePack,
    load_phrase_pack,
    parse_phrase_pack,
)

__all__ = [
    "GENERIC_PACK",
    "GPT_STYLE_PACK",
    "PACK_DIR",
    "PhraseMatch",
    "PhrasePack",
    "load_phrase_pack",
    "parse_phrase_pack",
]
