"""Function extraction from tree-sitter syntax trees.

Every named function or method definition becomes one ``FunctionRecord``. Anonymous functions (lambdas,
arrow functions, function expressions) are not extracted; their control flow counts toward the enclosing
function's complexity.
"""

import inspect
import logging
import re
from dataclasses import dataclass, replace
from typing import Iterator, List, Optional, Set, Tuple

from tree_sitter import Node, Tree

from .errors import SourceReadError
from .languages import DocAttachment, LanguageProfile, get_parser, get_profile
from .records import FunctionRecord, Language, RepoSource, SourceFileRef

logger = logging.getLogger(__name__)

_PARAM_NAME_FIELDS = ("name", "pattern", "declarator", "left")
_PARAM_SKIP_KINDS = frozenset(
    {
        "modifiers",
        "decorator",
        "marker_annotation",
        "annotation",
        "accessibility_modifier",
        "receiver_parameter",
        "keyword_separator",
        "positional_separator",
        "comment",
        "line_comment",
        "block_comment",
        "type",
        "type_annotation",
    }
)
_NAMED_KINDS = frozenset({"identifier", "property_identifier", "private_property_identifier", "field_identifier"})
_RETURN_KINDS = frozenset({"return_statement", "co_return_statement"})
_YIELD_KINDS = frozenset({"yield", "yield_expression", "co_yield_statement"})
_VOID_TYPES = frozenset({"void", "None", "never", "undefined"})
_PY_STRING = re.compile(r"^[rRuUbBfF]*(\"\"\"|'''|\"|')(.*)\1$", re.DOTALL)

# Comment syntax used by count_logical_lines: (line-comment prefixes, has /* */ blocks).
_COMMENT_SYNTAX = {
    Language.PYTHON: (("#",), False),
    Language.JAVA: (("//",), True),
    Language.JAVASCRIPT: (("//",), True),
    Language.TYPESCRIPT: (("//",), True),
    Language.CPP: (("//",), True),
}


@dataclass
class _FunctionParts:
    name: str
    params: Optional[Node]
    body: Node
    return_type: Optional[str]  # declared return type text, None when undeclared
    signature_end: int  # byte offset


def _text(node: Node, source: bytes) -> str:
    return source[node.start_byte : node.end_byte].decode("utf-8", errors="replace")


def _is_error(node: Node) -> bool:
    return node.type == "ERROR" or node.is_error


def slice_lines(text: str, start_line: int, end_line: int) -> str:
    """Return lines ``start_line..end_line`` (1-based, inclusive) of ``text`` joined by newlines."""
    lines = text.split("\n")
    return "\n".join(lines[start_line - 1 : end_line])


def parse_file(file: SourceFileRef, contents: str) -> Optional[Tree]:
    """Parse file contents with the grammar for the file's language.

    Syntax errors still yield a tree (with ERROR nodes). Returns None only when the parser itself
    fails, in which case the file is skipped.
    """
    tsx = file.relative_path.lower().endswith(".tsx")
    try:
        tree = get_parser(file.language, tsx).parse(contents.encode("utf-8"))
    except Exception as e:
        logger.warning(f"Parser failed on {file.relative_path}: {e}; skipping file")
        return None
    if tree.root_node.has_error:
        logger.debug(f"{file.relative_path} has syntax errors; error regions are skipped")
    return tree


def _iter_function_nodes(root: Node, profile: LanguageProfile) -> Iterator[Node]:
    stack = [root]
    while stack:
        node = stack.pop()
        if _is_error(node):
            continue
        if node.type in profile.function_node_kinds:
            yield node
        stack.extend(reversed(node.children))


def _cpp_function_declarator(node: Node) -> Optional[Node]:
    declarator = node.child_by_field_name("declarator")
    while declarator is not None and declarator.type != "function_declarator":
        inner = declarator.child_by_field_name("declarator")
        if inner is None:
            inner = next((c for c in declarator.named_children if c.type.endswith("declarator")), None)
        declarator = inner
    return declarator


def _cpp_parts(node: Node, body: Node, source: bytes) -> Optional[_FunctionParts]:
    outer = node.child_by_field_name("declarator")
    function_declarator = _cpp_function_declarator(node)
    if outer is None or function_declarator is None:
        return None
    name_node = function_declarator.child_by_field_name("declarator")
    if name_node is None:
        return None

    return_type = None
    type_node = node.child_by_field_name("type")
    if type_node is not None:
        return_type = _text(type_node, source)
        if outer.type != "function_declarator":
            # void* and friends
            return_type += "*"
    return _FunctionParts(
        name=" ".join(_text(name_node, source).split()),
        params=function_declarator.child_by_field_name("parameters"),
        body=body,
        return_type=return_type,
        signature_end=outer.end_byte,
    )


def _function_parts(node: Node, profile: LanguageProfile, source: bytes) -> Optional[_FunctionParts]:
    body = node.child_by_field_name("body")
    if body is None:
        return None
    if profile.language is Language.CPP:
        return _cpp_parts(node, body, source)

    name_node = node.child_by_field_name("name")
    if name_node is None or name_node.type not in _NAMED_KINDS:
        return None

    signature_end = body.start_byte
    if profile.language is Language.PYTHON:
        colons = [c for c in node.children if c.type == ":" and c.start_byte < body.start_byte]
        if colons:
            signature_end = colons[-1].start_byte
    type_node = node.child_by_field_name("type" if profile.language is Language.JAVA else "return_type")

    return _FunctionParts(
        name=_text(name_node, source),
        params=node.child_by_field_name("parameters"),
        body=body,
        return_type=_text(type_node, source) if type_node is not None else None,
        signature_end=signature_end,
    )


def _first_identifier(node: Node, source: bytes) -> Optional[str]:
    stack = [node]
    while stack:
        current = stack.pop()
        if current.type in _PARAM_SKIP_KINDS:
            continue
        if current.type == "identifier":
            return _text(current, source)
        stack.extend(reversed(current.named_children))
    return None


def _parameter_names(params: Optional[Node], profile: LanguageProfile, source: bytes) -> Tuple[str, ...]:
    if params is None:
        return ()
    names: List[str] = []
    for child in params.named_children:
        if child.type in _PARAM_SKIP_KINDS:
            continue
        name = None
        if child.type == "identifier":
            name = _text(child, source)
        else:
            for field_name in _PARAM_NAME_FIELDS:
                target = child.child_by_field_name(field_name)
                if target is not None:
                    name = _first_identifier(target, source)
                    break
            else:
                name = _first_identifier(child, source)
        if name and name not in profile.receiver_names:
            names.append(name)
    return tuple(names)


def _has_valued_return(body: Node, profile: LanguageProfile) -> bool:
    boundaries = profile.function_node_kinds | profile.nested_scope_kinds
    stack = list(body.children)
    while stack:
        node = stack.pop()
        if node.type in boundaries:
            continue
        if node.type in _YIELD_KINDS:
            return True
        if node.type in _RETURN_KINDS and any(not c.type.endswith("comment") for c in node.named_children):
            return True
        stack.extend(node.children)
    return False


def _returns_value(parts: _FunctionParts, profile: LanguageProfile) -> bool:
    if parts.return_type is not None:
        declared = parts.return_type.strip().lstrip(":").strip()
        return declared not in _VOID_TYPES
    return _has_valued_return(parts.body, profile)


def _python_docstring(body: Node, source: bytes) -> Tuple[str, Optional[Node]]:
    for statement in body.named_children:
        if statement.type == "comment":
            continue
        if statement.type == "expression_statement" and statement.named_children:
            literal = statement.named_children[0]
            if literal.type in ("string", "concatenated_string"):
                match = _PY_STRING.match(_text(literal, source).strip())
                if match:
                    return inspect.cleandoc(match.group(2)), statement
        break
    return "", None


def strip_comment_delimiters(comment: str) -> str:
    """Turn a raw block or line doc comment into prose: delimiters and leading asterisks removed, dedented."""
    text = comment.strip()
    lines = text.split("\n")
    if text.startswith("/*"):
        lines[0] = lines[0][3:]
        if lines[-1].rstrip().endswith("*/"):
            lines[-1] = lines[-1].rstrip()[:-2]
        lines = [re.sub(r"^\s*\*(?!/) ?", "", line) for line in lines]
    else:
        lines = [re.sub(r"^\s*//[/!]? ?", "", line) for line in lines]
    return inspect.cleandoc("\n".join(line.rstrip() for line in lines))


def _preceding_doc_comment(node: Node, profile: LanguageProfile, source: bytes) -> str:
    anchor = node
    while anchor.parent is not None and anchor.parent.type in profile.wrapper_node_kinds:
        anchor = anchor.parent

    previous = anchor.prev_sibling
    while previous is not None and previous.type == "decorator":
        anchor, previous = previous, previous.prev_sibling
    if previous is None or previous.type not in profile.comment_node_kinds:
        return ""
    if anchor.start_point[0] - previous.end_point[0] > 1:
        return ""

    raw = _text(previous, source)
    if raw.startswith(profile.doc_comment_markers) and raw.strip() != "/**/":
        return strip_comment_delimiters(raw)

    if not profile.line_doc_markers or not raw.startswith(profile.line_doc_markers):
        return ""
    # A run of consecutive line doc comments.
    run = [raw]
    current = previous
    candidate = current.prev_sibling
    while (
        candidate is not None
        and candidate.type in profile.comment_node_kinds
        and current.start_point[0] - candidate.end_point[0] == 1
        and _text(candidate, source).startswith(profile.line_doc_markers)
    ):
        run.append(_text(candidate, source))
        current, candidate = candidate, candidate.prev_sibling
    return strip_comment_delimiters("\n".join(reversed(run)))


def _is_default_label(label: Node) -> bool:
    """True for ``default:`` labels and for Python cases whose pattern always matches (``case _:``, ``case x:``)."""
    if not label.child_count or label.children[0].type != "case":
        return True
    patterns = [child for child in label.named_children if child.type == "case_pattern"]
    if len(patterns) != 1:
        return False
    pattern = patterns[0]
    text = (pattern.text or b"").decode("utf-8", errors="replace").strip()
    if text == "_":
        return True
    # A bare name is a capture pattern; dotted names are value patterns.
    return pattern.named_child_count == 1 and pattern.named_children[0].type == "dotted_name" and "." not in text


def compute_cyclomatic_complexity(node: Node, profile: LanguageProfile) -> int:
    """McCabe complexity: 1 + decision points in the function, excluding nested named functions.

    ``else`` branches, ``default`` labels and irrefutable Python cases add nothing; each other ``case``
    label, loop, catch clause, conditional expression and short-circuit operator adds one. A ``case``
    guard counts as its own decision.
    """
    complexity = 1
    stack = list(node.children)
    while stack:
        current = stack.pop()
        if current.type in profile.function_node_kinds:
            continue
        if current.type in profile.decision_node_kinds:
            complexity += 1
        elif current.type in profile.case_label_kinds:
            if not _is_default_label(current):
                complexity += 1
        elif current.type in profile.boolean_operator_kinds:
            operator = current.child_by_field_name("operator")
            if operator is not None and operator.type in profile.short_circuit_operators:
                complexity += 1
        stack.extend(current.children)
    return complexity


def count_logical_lines(code: str, language: Optional[Language] = None) -> int:
    """Count lines that are neither blank nor comment-only.

    Without a language both ``#`` and ``//`` line comments are recognized, plus ``/* */`` blocks.
    """
    line_prefixes, block_comments = _COMMENT_SYNTAX.get(language, (("#", "//"), True))
    count = 0
    in_block = False
    for raw in code.split("\n"):
        line = raw.strip()
        if in_block:
            end = line.find("*/")
            if end < 0:
                continue
            line = line[end + 2 :].strip()
            in_block = False
        while block_comments and line.startswith("/*"):
            end = line.find("*/", 2)
            if end < 0:
                in_block = True
                line = ""
                break
            line = line[end + 2 :].strip()
        if not line or line.startswith(line_prefixes):
            continue
        count += 1
    return count


def _param_span(signature: str) -> Tuple[str, str]:
    """Split a signature into (parameter list text, text after the closing paren)."""
    start = signature.find("(")
    if start < 0:
        return "", ""
    depth = 0
    for index in range(start, len(signature)):
        char = signature[index]
        if char in "([{":
            depth += 1
        elif char in ")]}":
            depth -= 1
            if depth == 0:
                return signature[start + 1 : index], signature[index + 1 :]
    return signature[start + 1 :], ""


def _has_top_level_colon(params: str) -> bool:
    depth = 0
    for char in params:
        if char in "([{<":
            depth += 1
        elif char in ")]}>":
            depth = max(0, depth - 1)
        elif char == ":" and depth == 0:
            return True
    return False


def detect_type_annotations(record: FunctionRecord) -> bool:
    """True when the function carries parameter or return type information.

    Java and C++ signatures are typed by construction. Python and TypeScript need annotation syntax in
    the signature; JavaScript needs JSDoc type tags (``@param {T}``, ``@returns {T}``, ``@type {T}``).
    """
    if get_profile(record.language).statically_typed:
        return True
    if record.language is Language.JAVASCRIPT:
        return re.search(r"@(?:param|returns?|type)\s*\{", record.documentation) is not None

    params, rest = _param_span(record.signature)
    if _has_top_level_colon(params):
        return True
    rest = rest.strip()
    if record.language is Language.PYTHON:
        return rest.startswith("->")
    return rest.startswith(":")


def _logical_lines(code: str, language: Language, docstring_rows: Optional[Tuple[int, int]]) -> int:
    if docstring_rows is None:
        return count_logical_lines(code, language)
    lines = code.split("\n")
    first, last = docstring_rows
    for row in range(max(first, 1), min(last, len(lines) - 1) + 1):
        lines[row] = ""
    return count_logical_lines("\n".join(lines), language)


def extract_functions(
    tree: Tree, profile: LanguageProfile, file: SourceFileRef, source: bytes, repo_name: str = ""
) -> List[FunctionRecord]:
    """Extract one record per named function, in source order.

    Args:
        tree: Tree returned by ``parse_file`` for this file.
        profile: Grammar profile for ``file.language``.
        file: The file the tree was parsed from.
        source: The exact bytes that were parsed.
        repo_name: Owning repository, used in the record id.
    """
    text = source.decode("utf-8", errors="replace")
    records: List[FunctionRecord] = []
    seen_ids: Set[str] = set()

    for node in _iter_function_nodes(tree.root_node, profile):
        if node.has_error:
            logger.debug(f"Skipping malformed function at {file.relative_path}:{node.start_point[0] + 1}")
            continue
        parts = _function_parts(node, profile, source)
        if parts is None:
            continue

        start_line = node.start_point[0] + 1
        end_line = node.end_point[0] + 1
        code = slice_lines(text, start_line, end_line)

        docstring_rows = None
        if profile.doc_attachment_rule is DocAttachment.DOCSTRING_INSIDE_BODY:
            documentation, statement = _python_docstring(parts.body, source)
            if statement is not None:
                first_row = node.start_point[0]
                docstring_rows = (statement.start_point[0] - first_row, statement.end_point[0] - first_row)
        else:
            documentation = _preceding_doc_comment(node, profile, source)

        signature = " ".join(source[node.start_byte : parts.signature_end].decode("utf-8", errors="replace").split())
        signature = signature.rstrip(":{ ")

        record_id = FunctionRecord.make_id(repo_name, file.relative_path, start_line, parts.name)
        if record_id in seen_ids:
            record_id = FunctionRecord.make_id(
                repo_name, file.relative_path, start_line, parts.name, start_column=node.start_point[1] + 1
            )
        seen_ids.add(record_id)

        record = FunctionRecord(
            id=record_id,
            repo_name=repo_name,
            path=file.relative_path,
            language=profile.language,
            name=parts.name,
            signature=signature,
            code=code,
            documentation=documentation,
            start_line=start_line,
            end_line=end_line,
            complexity=compute_cyclomatic_complexity(node, profile),
            logical_lines=_logical_lines(code, profile.language, docstring_rows),
            has_type_annotations=False,
            parameters=_parameter_names(parts.params, profile, source),
            returns_value=_returns_value(parts, profile),
        )
        records.append(replace(record, has_type_annotations=detect_type_annotations(record)))

    return records


def extract_file(repo: RepoSource, file: SourceFileRef) -> List[FunctionRecord]:
    """Read, parse and extract one source file."""
    try:
        data = file.path.read_bytes()
    except OSError as e:
        raise SourceReadError(file.path, e.strerror or str(e))

    contents = data.decode("utf-8", errors="replace")
    tree = parse_file(file, contents)
    if tree is None:
        return []
    records = extract_functions(tree, get_profile(file.language), file, contents.encode("utf-8"), repo.repo_name)
    logger.debug(f"Extracted {len(records)} functions from {repo.repo_name}:{file.relative_path}")
    return records
