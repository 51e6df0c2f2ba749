from pathlib import Path
from typing import Optional, Union


class CurationError(Exception):
    """Base class for every error raised by the curation pipeline."""


class ConfigError(CurationError, ValueError):
    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"config key '{key}': {message}")


class ConfigValidationError(CurationError, ValueError):
    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"invalid config '{key}': {message}")


class SourceReadError(CurationError, OSError):
    def __init__(self, path: Union[str, Path], message: str = "unreadable"):
        self.path = str(path)
        super().__init__(f"{self.path}: {message}")


class OutputWriteError(CurationError, OSError):
    def __init__(self, path: Union[str, Path], message: str = "write failed"):
        self.path = str(path)
        super().__init__(f"{self.path}: {message}")


class DegenerateSampleError(CurationError, ValueError):
    """Raised when a MinHash signature is requested for an empty token set."""


class SignatureMismatchError(CurationError, ValueError):
    """Raised when two signatures with different component counts are compared."""


class UsageError(CurationError, ValueError):
    pass


class StageError(CurationError):
    def __init__(self, stage: str, message: str, cause: Optional[BaseException] = None):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {message}")
