"""Per-language grammar profiles.

A profile names the tree-sitter node kinds extraction cares about: which nodes are function definitions,
which count as decision points for cyclomatic complexity, which are comments, and how documentation
attaches to a definition.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, FrozenSet, Tuple

from tree_sitter import Language as Grammar
from tree_sitter import Parser

from .records import Language


class DocAttachment(str, Enum):
    DOCSTRING_INSIDE_BODY = "docstring-inside-body"
    COMMENT_PRECEDING_DEFINITION = "comment-preceding-definition"


@dataclass(frozen=True)
class LanguageProfile:
    language: Language
    doc_attachment_rule: DocAttachment
    # Block doc comments start with one of these; line doc comments with one of line_doc_markers.
    doc_comment_markers: Tuple[str, ...]
    line_doc_markers: Tuple[str, ...]
    decision_node_kinds: FrozenSet[str]
    comment_node_kinds: FrozenSet[str]
    function_node_kinds: FrozenSet[str]
    # Nodes that wrap a definition and sit between it and its doc comment (export, template<...>).
    wrapper_node_kinds: FrozenSet[str]
    # Binary-operator nodes that count only when their operator short-circuits.
    boolean_operator_kinds: FrozenSet[str]
    short_circuit_operators: FrozenSet[str]
    # Switch labels that count only for `case`, never for `default`.
    case_label_kinds: FrozenSet[str]
    # Anonymous callables and class bodies: a valued return inside them is not the function's own.
    nested_scope_kinds: FrozenSet[str]
    statically_typed: bool
    receiver_names: FrozenSet[str] = frozenset()


PYTHON_PROFILE = LanguageProfile(
    language=Language.PYTHON,
    doc_attachment_rule=DocAttachment.DOCSTRING_INSIDE_BODY,
    doc_comment_markers=(),
    line_doc_markers=(),
    decision_node_kinds=frozenset(
        {
            "if_statement",
            "elif_clause",
            "for_statement",
            "while_statement",
            "except_clause",
            "except_group_clause",
            "conditional_expression",
            "for_in_clause",
            "if_clause",
        }
    ),
    comment_node_kinds=frozenset({"comment"}),
    function_node_kinds=frozenset({"function_definition"}),
    wrapper_node_kinds=frozenset({"decorated_definition"}),
    boolean_operator_kinds=frozenset({"boolean_operator"}),
    short_circuit_operators=frozenset({"and", "or"}),
    case_label_kinds=frozenset({"case_clause"}),
    nested_scope_kinds=frozenset({"lambda", "class_definition"}),
    statically_typed=False,
    receiver_names=frozenset({"self", "cls"}),
)

JAVA_PROFILE = LanguageProfile(
    language=Language.JAVA,
    doc_attachment_rule=DocAttachment.COMMENT_PRECEDING_DEFINITION,
    doc_comment_markers=("/**",),
    line_doc_markers=(),
    decision_node_kinds=frozenset(
        {
            "if_statement",
            "for_statement",
            "enhanced_for_statement",
            "while_statement",
            "do_statement",
            "catch_clause",
            "ternary_expression",
        }
    ),
    comment_node_kinds=frozenset({"line_comment", "block_comment"}),
    function_node_kinds=frozenset({"method_declaration", "constructor_declaration", "compact_constructor_declaration"}),
    wrapper_node_kinds=frozenset(),
    boolean_operator_kinds=frozenset({"binary_expression"}),
    short_circuit_operators=frozenset({"&&", "||"}),
    case_label_kinds=frozenset({"switch_label"}),
    nested_scope_kinds=frozenset({"lambda_expression", "class_body"}),
    statically_typed=True,
)

_JS_DECISIONS = frozenset(
    {
        "if_statement",
        "for_statement",
        "for_in_statement",
        "while_statement",
        "do_statement",
        "catch_clause",
        "ternary_expression",
    }
)

JAVASCRIPT_PROFILE = LanguageProfile(
    language=Language.JAVASCRIPT,
    doc_attachment_rule=DocAttachment.COMMENT_PRECEDING_DEFINITION,
    doc_comment_markers=("/**",),
    line_doc_markers=(),
    decision_node_kinds=_JS_DECISIONS,
    comment_node_kinds=frozenset({"comment"}),
    function_node_kinds=frozenset({"function_declaration", "generator_function_declaration", "method_definition"}),
    wrapper_node_kinds=frozenset({"export_statement"}),
    boolean_operator_kinds=frozenset({"binary_expression"}),
    short_circuit_operators=frozenset({"&&", "||"}),
    case_label_kinds=frozenset({"switch_case"}),
    nested_scope_kinds=frozenset({"arrow_function", "function_expression", "class_body"}),
    statically_typed=False,
)

TYPESCRIPT_PROFILE = LanguageProfile(
    language=Language.TYPESCRIPT,
    doc_attachment_rule=DocAttachment.COMMENT_PRECEDING_DEFINITION,
    doc_comment_markers=("/**",),
    line_doc_markers=(),
    decision_node_kinds=_JS_DECISIONS,
    comment_node_kinds=frozenset({"comment"}),
    function_node_kinds=frozenset({"function_declaration", "generator_function_declaration", "method_definition"}),
    wrapper_node_kinds=frozenset({"export_statement"}),
    boolean_operator_kinds=frozenset({"binary_expression"}),
    short_circuit_operators=frozenset({"&&", "||"}),
    case_label_kinds=frozenset({"switch_case"}),
    nested_scope_kinds=frozenset({"arrow_function", "function_expression", "class_body"}),
    statically_typed=False,
    receiver_names=frozenset({"this"}),
)

CPP_PROFILE = LanguageProfile(
    language=Language.CPP,
    doc_attachment_rule=DocAttachment.COMMENT_PRECEDING_DEFINITION,
    doc_comment_markers=("/**", "/*!"),
    line_doc_markers=("///", "//!"),
    decision_node_kinds=frozenset(
        {
            "if_statement",
            "for_statement",
            "for_range_loop",
            "while_statement",
            "do_statement",
            "catch_clause",
            "conditional_expression",
        }
    ),
    comment_node_kinds=frozenset({"comment"}),
    function_node_kinds=frozenset({"function_definition"}),
    wrapper_node_kinds=frozenset({"template_declaration"}),
    boolean_operator_kinds=frozenset({"binary_expression"}),
    short_circuit_operators=frozenset({"&&", "||", "and", "or"}),
    case_label_kinds=frozenset({"case_statement"}),
    nested_scope_kinds=frozenset({"lambda_expression", "class_specifier", "struct_specifier"}),
    statically_typed=True,
)

PROFILES: Dict[Language, LanguageProfile] = {
    profile.language: profile
    for profile in (PYTHON_PROFILE, JAVA_PROFILE, JAVASCRIPT_PROFILE, TYPESCRIPT_PROFILE, CPP_PROFILE)
}


def get_profile(language: Language) -> LanguageProfile:
    return PROFILES[language]


def _load_grammar(language: Language, tsx: bool) -> Grammar:
    if language is Language.PYTHON:
        import tree_sitter_python as ts_python

        return Grammar(ts_python.language())
    if language is Language.JAVA:
        import tree_sitter_java as ts_java

        return Grammar(ts_java.language())
    if language is Language.JAVASCRIPT:
        import tree_sitter_javascript as ts_javascript

        return Grammar(ts_javascript.language())
    if language is Language.TYPESCRIPT:
        import tree_sitter_typescript as ts_typescript

        return Grammar(ts_typescript.language_tsx() if tsx else ts_typescript.language_typescript())
    if language is Language.CPP:
        import tree_sitter_cpp as ts_cpp

        return Grammar(ts_cpp.language())
    raise ValueError(f"No grammar for language {language}")


@lru_cache(maxsize=None)
def get_parser(language: Language, tsx: bool = False) -> Parser:
    """Return a cached parser for the language (one per process)."""
    return Parser(_load_grammar(language, tsx))
