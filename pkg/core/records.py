from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Tuple


class Language(str, Enum):
    PYTHON = "Python"
    JAVA = "Java"
    TYPESCRIPT = "TypeScript"
    JAVASCRIPT = "JavaScript"
    CPP = "Cpp"


@dataclass(frozen=True)
class RepoSource:
    repo_name: str
    root_path: Path
    license_tag: str = ""
    domain_tag: str = ""


@dataclass(frozen=True)
class SourceFileRef:
    path: Path
    relative_path: str  # posix, relative to the repository root
    language: Language
    byte_size: int
    content_digest: str  # sha256 hex of the file bytes


@dataclass(frozen=True)
class FunctionRecord:
    """One extracted function together with its documentation and structural metadata."""

    id: str
    repo_name: str
    path: str
    language: Language
    name: str
    signature: str
    code: str
    documentation: str
    start_line: int
    end_line: int
    complexity: int
    logical_lines: int
    has_type_annotations: bool
    parameters: Tuple[str, ...] = field(default_factory=tuple)
    returns_value: bool = False

    @staticmethod
    def make_id(repo_name: str, path: str, start_line: int, name: str, start_column: Optional[int] = None) -> str:
        # The column only appears when two same-named functions share a start line.
        position = str(start_line) if start_column is None else f"{start_line}.{start_column}"
        return f"{repo_name}:{path}:{position}:{name}"

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["language"] = self.language.value
        data["parameters"] = list(self.parameters)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FunctionRecord":
        return cls(
            id=data["id"],
            repo_name=data["repo_name"],
            path=data["path"],
            language=Language(data["language"]),
            name=data["name"],
            signature=data["signature"],
            code=data["code"],
            documentation=data["documentation"],
            start_line=int(data["start_line"]),
            end_line=int(data["end_line"]),
            complexity=int(data["complexity"]),
            logical_lines=int(data["logical_lines"]),
            has_type_annotations=bool(data["has_type_annotations"]),
            parameters=tuple(data.get("parameters", ())),
            returns_value=bool(data.get("returns_value", False)),
        )
