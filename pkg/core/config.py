"""Pipeline configuration.

Every threshold the curation stages use lives in one flat JSON document. Missing keys fall back to the
defaults declared on ``PipelineConfig``; unknown or mistyped keys raise ``ConfigError`` naming the key,
and cross-field invariants raise ``ConfigValidationError``.
"""

import json
import logging
import math
import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

from .errors import ConfigError, ConfigValidationError
from .quality import QualityWeights

logger = logging.getLogger(__name__)

SEED_ENV_VAR = "DOCSIEVE_SEED"
WORKERS_ENV_VAR = "DOCSIEVE_WORKERS"

AI_FLAG_ACTIONS = ("retain", "remove")


@dataclass(frozen=True)
class PipelineConfig:
    # Stage 1
    min_doc_chars: int = 20
    max_doc_chars: int = 10000
    min_complexity: int = 1
    max_complexity: int = 50
    min_logical_lines: int = 5
    accessor_prefixes: Tuple[str, ...] = ("get", "set", "is", "has")
    accessor_max_logical_lines: int = 3
    test_patterns: Tuple[str, ...] = ("test_", "test", "Test", "TEST", "_test")
    placeholder_markers: Tuple[str, ...] = ("TODO", "FIXME", "XXX")
    exclude_doc_examples: bool = False
    ignore_globs: Tuple[str, ...] = (
        "node_modules",
        "build",
        "dist",
        "target",
        "vendor",
        "third_party",
        ".git",
        "__pycache__",
        ".venv",
        "venv",
    )

    # Stage 2
    weight_completeness: float = 0.20
    weight_param_coverage: float = 0.15
    weight_return_coverage: float = 0.15
    weight_type_annotations: float = 0.10
    weight_clarity: float = 0.15
    weight_structural_consistency: float = 0.10
    weight_appropriate_complexity: float = 0.05
    weight_code_quality: float = 0.10
    min_quality_score: float = 6.0

    # Stage 3
    minhash_k: int = 128
    tau_lsh: float = 0.8
    dedup_seed: int = 1
    cross_language_dedup: bool = False

    # Stage 4
    alpha_gpt_phrase: float = 0.3
    alpha_suspicious_structure: float = 0.2
    alpha_perfect_structure: float = 0.2
    alpha_generic_language: float = 0.1
    tau_ai: float = 0.5
    gpt_phrase_pack: Optional[str] = None
    generic_phrase_pack: Optional[str] = None
    ai_flag_action: str = "retain"

    # Assembly
    split_train: float = 0.8
    split_validation: float = 0.1
    split_test: float = 0.1
    split_seed: int = 42

    workers: int = 1

    # Directory relative pack paths resolve against; not part of the snapshot.
    config_dir: Optional[str] = field(default=None, compare=False)

    @property
    def quality_weights(self) -> QualityWeights:
        return QualityWeights(
            completeness=self.weight_completeness,
            param_coverage=self.weight_param_coverage,
            return_coverage=self.weight_return_coverage,
            type_annotations=self.weight_type_annotations,
            clarity=self.weight_clarity,
            structural_consistency=self.weight_structural_consistency,
            appropriate_complexity=self.weight_appropriate_complexity,
            code_quality=self.weight_code_quality,
        )

    @property
    def split_ratios(self) -> Tuple[float, float, float]:
        return (self.split_train, self.split_validation, self.split_test)

    def resolve_pack_path(self, value: Optional[str]) -> Optional[Path]:
        if value is None:
            return None
        path = Path(value)
        if not path.is_absolute() and self.config_dir:
            path = Path(self.config_dir) / path
        return path

    def snapshot(self) -> Dict[str, Any]:
        """Return every setting that shapes the output as plain JSON data, for the dataset manifest."""
        data = asdict(self)
        data.pop("config_dir")
        data.pop("workers")
        return {key: list(value) if isinstance(value, tuple) else value for key, value in data.items()}


def _coerce(key: str, value: Any, default: Any) -> Any:
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(key, f"expected a boolean, got {value!r}")
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(key, f"expected an integer, got {value!r}")
        return value
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(key, f"expected a number, got {value!r}")
        return float(value)
    if isinstance(default, tuple):
        if not isinstance(value, list) or not all(isinstance(item, str) for item in value):
            raise ConfigError(key, f"expected a list of strings, got {value!r}")
        return tuple(value)
    if default is None or isinstance(default, str):
        if value is not None and not isinstance(value, str):
            raise ConfigError(key, f"expected a string, got {value!r}")
        return value
    raise ConfigError(key, "unsupported setting")


def validate_config(config: PipelineConfig) -> PipelineConfig:
    for weight_field in fields(QualityWeights):
        key = f"weight_{weight_field.name}"
        if getattr(config, key) <= 0:
            raise ConfigValidationError(key, "quality weights must be strictly positive")

    ratios = config.split_ratios
    if any(ratio < 0 for ratio in ratios):
        raise ConfigValidationError("split_train", "split ratios must be non-negative")
    if not math.isclose(sum(ratios), 1.0, rel_tol=0.0, abs_tol=1e-9):
        raise ConfigValidationError("split_train", f"split ratios must sum to 1.0, got {sum(ratios)}")

    if not 0.0 < config.tau_lsh < 1.0:
        raise ConfigValidationError("tau_lsh", "must lie strictly between 0 and 1")
    if not 0.0 < config.tau_ai <= 1.0:
        raise ConfigValidationError("tau_ai", "must lie in (0, 1]")
    for key in ("alpha_gpt_phrase", "alpha_suspicious_structure", "alpha_perfect_structure", "alpha_generic_language"):
        if getattr(config, key) < 0:
            raise ConfigValidationError(key, "heuristic increments must be non-negative")

    if config.min_doc_chars < 0 or config.min_doc_chars > config.max_doc_chars:
        raise ConfigValidationError("min_doc_chars", "must satisfy 0 <= min_doc_chars <= max_doc_chars")
    if config.min_complexity < 1 or config.min_complexity > config.max_complexity:
        raise ConfigValidationError("min_complexity", "must satisfy 1 <= min_complexity <= max_complexity")
    if config.min_logical_lines < 0:
        raise ConfigValidationError("min_logical_lines", "must be non-negative")
    if not 0.0 <= config.min_quality_score <= 10.0:
        raise ConfigValidationError("min_quality_score", "must lie in [0, 10]")
    if config.minhash_k < 1:
        raise ConfigValidationError("minhash_k", "must be a positive integer")
    if config.workers < 1:
        raise ConfigValidationError("workers", "must be a positive integer")
    if config.ai_flag_action not in AI_FLAG_ACTIONS:
        raise ConfigValidationError("ai_flag_action", f"must be one of {AI_FLAG_ACTIONS}")
    return config


def config_from_mapping(values: Mapping[str, Any], config_dir: Optional[str] = None) -> PipelineConfig:
    defaults = PipelineConfig()
    known = {f.name: getattr(defaults, f.name) for f in fields(PipelineConfig) if f.name != "config_dir"}

    overrides: Dict[str, Any] = {}
    for key, value in values.items():
        if key not in known:
            raise ConfigError(key, "unknown setting")
        overrides[key] = _coerce(key, value, known[key])

    return validate_config(replace(defaults, config_dir=config_dir, **overrides))


def apply_overrides(
    config: PipelineConfig, seed: Optional[int] = None, workers: Optional[int] = None
) -> PipelineConfig:
    """Apply a master seed (dedup and split) and/or a worker count on top of a loaded config."""
    updates: Dict[str, Any] = {}
    if seed is not None:
        updates["dedup_seed"] = seed
        updates["split_seed"] = seed
    if workers is not None:
        updates["workers"] = workers
    if not updates:
        return config
    return validate_config(replace(config, **updates))


def _env_int(environ: Mapping[str, str], name: str) -> Optional[int]:
    raw = environ.get(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(name, f"expected an integer, got {raw!r}")


def load_config(
    path: Optional[Union[str, Path]] = None, environ: Optional[Mapping[str, str]] = None
) -> PipelineConfig:
    """Load the pipeline configuration.

    Args:
        path: JSON config document. ``None`` yields the defaults.
        environ: Environment consulted for seed/worker overrides (defaults to ``os.environ``).

    Returns:
        A validated ``PipelineConfig``.
    """
    values: Dict[str, Any] = {}
    config_dir = None
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError("<document>", f"cannot read {path}: {e}")
        config_dir = str(path.resolve().parent)
        if text.strip():
            try:
                values = json.loads(text)
            except json.JSONDecodeError as e:
                raise ConfigError("<document>", f"{path} is not valid JSON (line {e.lineno}): {e.msg}")
            if not isinstance(values, dict):
                raise ConfigError("<document>", "top level must be a JSON object")

    config = config_from_mapping(values, config_dir=config_dir)

    environ = os.environ if environ is None else environ
    seed = _env_int(environ, SEED_ENV_VAR)
    workers = _env_int(environ, WORKERS_ENV_VAR)
    if seed is not None or workers is not None:
        logger.info(f"Applying environment overrides: seed={seed} workers={workers}")
    return apply_overrides(config, seed=seed, workers=workers)
