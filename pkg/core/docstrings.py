"""Section-level parsing of documentation text.

Recognizes the common conventions across the five supported ecosystems:

- Google style: ``Args:`` / ``Returns:`` / ``Raises:`` / ``Examples:`` headers with indented entries.
- NumPy style: ``Parameters`` headers underlined with dashes.
- Sphinx fields: ``:param x:``, ``:returns:``, ``:raises ValueError:``.
- Javadoc / JSDoc / Doxygen tags: ``@param``, ``@return``, ``@throws``, ``@example``, ``\\param``, ``@brief``.

The parser only needs to answer structural questions (which sections exist, in which order, which
parameter names are documented), so it is deliberately forgiving and never raises.
"""

import inspect
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, List, Optional, Tuple


class DocSection(str, Enum):
    DESCRIPTION = "Description"
    PARAMS = "Params"
    RETURNS = "Returns"
    RAISES = "Raises"
    EXAMPLES = "Examples"


_HEADER_KINDS = {
    "description": DocSection.DESCRIPTION,
    "summary": DocSection.DESCRIPTION,
    "args": DocSection.PARAMS,
    "arguments": DocSection.PARAMS,
    "params": DocSection.PARAMS,
    "parameters": DocSection.PARAMS,
    "keyword args": DocSection.PARAMS,
    "keyword arguments": DocSection.PARAMS,
    "other parameters": DocSection.PARAMS,
    "returns": DocSection.RETURNS,
    "return": DocSection.RETURNS,
    "yields": DocSection.RETURNS,
    "yield": DocSection.RETURNS,
    "raises": DocSection.RAISES,
    "raise": DocSection.RAISES,
    "throws": DocSection.RAISES,
    "exceptions": DocSection.RAISES,
    "examples": DocSection.EXAMPLES,
    "example": DocSection.EXAMPLES,
}

_FIELD_KINDS = {
    "param": DocSection.PARAMS,
    "parameter": DocSection.PARAMS,
    "arg": DocSection.PARAMS,
    "argument": DocSection.PARAMS,
    "key": DocSection.PARAMS,
    "keyword": DocSection.PARAMS,
    "returns": DocSection.RETURNS,
    "return": DocSection.RETURNS,
    "yields": DocSection.RETURNS,
    "yield": DocSection.RETURNS,
    "retval": DocSection.RETURNS,
    "raises": DocSection.RAISES,
    "raise": DocSection.RAISES,
    "except": DocSection.RAISES,
    "exception": DocSection.RAISES,
    "throws": DocSection.RAISES,
    "throw": DocSection.RAISES,
    "example": DocSection.EXAMPLES,
    "examples": DocSection.EXAMPLES,
    "brief": DocSection.DESCRIPTION,
    "details": DocSection.DESCRIPTION,
    "description": DocSection.DESCRIPTION,
    "desc": DocSection.DESCRIPTION,
    "summary": DocSection.DESCRIPTION,
}

_HEADER_LINE = re.compile(r"^([A-Za-z][A-Za-z ]*?)\s*:\s*(.*)$")
_NUMPY_UNDERLINE = re.compile(r"^\s*-{3,}\s*$")
_SPHINX_FIELD = re.compile(r"^:(\w+)((?:\s+[^:]*?)?)\s*:(?:\s+(.*)|$)")
_TAG = re.compile(r"^[@\\](\w+)(?:\[[^\]]*\])?(?:\s+(.*)|$)")
_JSDOC_TYPE = re.compile(r"^\{[^}]*\}\s*")
_GOOGLE_ENTRY = re.compile(r"^(\*{0,2}[A-Za-z_][\w.]*)\s*(?:\([^)]*\))?\s*:(?:\s|$)")
_NUMPY_ENTRY = re.compile(r"^(\*{0,2}[A-Za-z_]\w*(?:\s*,\s*\*{0,2}[A-Za-z_]\w*)*)\s*(?::.*)?$")
_DOCTEST = re.compile(r"^>>>")


@dataclass(frozen=True)
class ParsedDoc:
    summary: str = ""
    params: Tuple[str, ...] = ()
    section_order: Tuple[DocSection, ...] = ()
    sections: FrozenSet[DocSection] = field(default_factory=frozenset)

    @property
    def has_description(self) -> bool:
        return DocSection.DESCRIPTION in self.sections

    @property
    def has_params(self) -> bool:
        return DocSection.PARAMS in self.sections

    @property
    def has_returns(self) -> bool:
        return DocSection.RETURNS in self.sections

    @property
    def has_raises(self) -> bool:
        return DocSection.RAISES in self.sections

    @property
    def has_examples(self) -> bool:
        return DocSection.EXAMPLES in self.sections


def _indent(line: str) -> int:
    return len(line) - len(line.lstrip())


def _normalize_param(raw: str) -> Optional[str]:
    name = raw.strip().lstrip("*").strip("[]<>")
    name = name.split("=", 1)[0].split(".", 1)[0].strip()
    return name if re.fullmatch(r"[A-Za-z_$][\w$]*", name) else None


def _param_from_field_args(args: str) -> Optional[str]:
    # ":param int x:" -> "x"; ":param x:" -> "x"
    words = args.split()
    return _normalize_param(words[-1]) if words else None


def _param_from_tag_text(text: str) -> Optional[str]:
    # "@param {string} [name=default] desc" -> "name"
    text = _JSDOC_TYPE.sub("", text.strip())
    words = text.split()
    return _normalize_param(words[0]) if words else None


def parse_doc(text: str) -> ParsedDoc:
    """Parse documentation prose into sections.

    Args:
        text: Delimiter-stripped documentation.

    Returns:
        The summary (first prose paragraph), documented parameter names in order of appearance, and the
        sequence of section kinds as they occur. Consecutive blocks of the same kind collapse into one.
    """
    if not text or not text.strip():
        return ParsedDoc()

    lines = inspect.cleandoc(text).splitlines()
    order: List[DocSection] = []
    params: List[str] = []
    summary_lines: List[str] = []
    summary_done = False

    current: Optional[DocSection] = None
    numpy_section = False
    section_indent = 0
    entry_indent: Optional[int] = None
    in_tag = False

    def enter(kind: DocSection):
        if not order or order[-1] is not kind:
            order.append(kind)

    def add_param(name: Optional[str]):
        if name and name not in params:
            params.append(name)

    i = 0
    while i < len(lines):
        line = lines[i]
        stripped = line.strip()
        indent = _indent(line)
        i += 1

        if not stripped:
            in_tag = False
            if summary_lines:
                summary_done = True
            continue

        # Indented content of a Google-style section.
        if current is not None and not numpy_section and indent > section_indent:
            if current is DocSection.PARAMS:
                match = _GOOGLE_ENTRY.match(stripped)
                if match and (entry_indent is None or indent == entry_indent):
                    entry_indent = indent
                    add_param(_normalize_param(match.group(1)))
            continue

        field_match = _SPHINX_FIELD.match(stripped)
        tag_match = None if field_match else _TAG.match(stripped)
        if field_match or tag_match:
            current, numpy_section, in_tag = None, False, True
            summary_done = summary_done or bool(summary_lines)
            name = (field_match or tag_match).group(1).lower()
            kind = _FIELD_KINDS.get(name)
            if kind is None:
                continue
            enter(kind)
            if kind is DocSection.PARAMS:
                if field_match:
                    add_param(_param_from_field_args(field_match.group(2) or ""))
                else:
                    add_param(_param_from_tag_text(tag_match.group(2) or ""))
            elif kind is DocSection.DESCRIPTION and tag_match and not summary_lines:
                summary_lines.append((tag_match.group(2) or "").strip())
            continue

        next_line = lines[i] if i < len(lines) else ""
        header_kind = _HEADER_KINDS.get(stripped.rstrip(":").strip().lower())
        if header_kind is not None and _NUMPY_UNDERLINE.match(next_line):
            enter(header_kind)
            current, numpy_section, section_indent, entry_indent, in_tag = header_kind, True, indent, None, False
            summary_done = summary_done or bool(summary_lines)
            i += 1
            continue

        header_match = _HEADER_LINE.match(stripped)
        if header_match and header_match.group(1).strip().lower() in _HEADER_KINDS:
            header_kind = _HEADER_KINDS[header_match.group(1).strip().lower()]
            enter(header_kind)
            current, numpy_section, section_indent, entry_indent, in_tag = header_kind, False, indent, None, False
            summary_done = summary_done or bool(summary_lines)
            continue

        if current is not None and numpy_section:
            if current is DocSection.PARAMS and indent == section_indent:
                match = _NUMPY_ENTRY.match(stripped)
                if match:
                    for name in match.group(1).split(","):
                        add_param(_normalize_param(name))
            continue

        if _DOCTEST.match(stripped):
            # Doctest output lines up to the next blank line belong to the example.
            enter(DocSection.EXAMPLES)
            current, numpy_section, in_tag = None, False, True
            continue

        if in_tag:
            continue

        current = None
        enter(DocSection.DESCRIPTION)
        if not summary_done:
            summary_lines.append(stripped)

    return ParsedDoc(
        summary=" ".join(part for part in summary_lines if part),
        params=tuple(params),
        section_order=tuple(order),
        sections=frozenset(order),
    )
