"""docsieve: curate function-documentation pairs from local source repositories.

Full run:
    python main.py --config config/pipeline.json --repos repos.json --out out/

Single stage over JSON lines (stdin/stdout by default):
    python main.py --stage extract --repos repos.json --out out/ > extracted.jsonl
    python main.py --stage filter --out out/ < extracted.jsonl > filtered.jsonl
"""

import argparse
import logging
import sys
from contextlib import ExitStack
from pathlib import Path
from typing import List, Optional

from core.config import apply_overrides, load_config
from core.errors import (
    ConfigError,
    ConfigValidationError,
    CurationError,
    OutputWriteError,
    SourceReadError,
    StageError,
    UsageError,
)
from core.ingestion import load_repo_manifest
from core.pipeline import STAGES, run_pipeline, run_stage

logger = logging.getLogger("docsieve")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_VALIDATION = 3


# =============================================================================
# ARGUMENTS
# =============================================================================


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="docsieve", description="Curate function-documentation pairs")
    parser.add_argument("--config", type=Path, help="Pipeline config JSON (defaults when omitted)")
    parser.add_argument("--repos", type=Path, help="Repository manifest JSON")
    parser.add_argument("--out", type=Path, default=Path("out"), help="Output directory")
    parser.add_argument("--workers", type=int, help="Worker processes for extraction, scoring and AI checks")
    parser.add_argument("--seed", type=int, help="Master seed for dedup hashing and split assignment")
    parser.add_argument("--stage", choices=STAGES, help="Run a single stage over JSON lines")
    parser.add_argument("--input", type=Path, help="Stage input JSON lines (default: stdin)")
    parser.add_argument("--output", type=Path, help="Stage output JSON lines (default: stdout)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    return parser


# =============================================================================
# COMMANDS
# =============================================================================


def _run_full(args) -> int:
    if args.repos is None:
        raise UsageError("--repos is required for a full run")
    summary = run_pipeline(args.config, args.repos, args.out, seed=args.seed, workers=args.workers)
    funnel = summary.manifest.funnel
    print(f"Wrote {funnel.final} samples to {args.out} ({funnel.extracted} extracted, {funnel.flagged} AI-flagged)")
    return EXIT_OK


def _run_single_stage(args) -> int:
    config = apply_overrides(load_config(args.config), seed=args.seed, workers=args.workers)
    repos = None
    if args.stage == "extract":
        if args.repos is None:
            raise UsageError("--repos is required for the extract stage")
        repos = load_repo_manifest(args.repos)

    with ExitStack() as stack:
        stream = sys.stdin
        if args.input is not None and args.stage != "extract":
            try:
                stream = stack.enter_context(args.input.open("r", encoding="utf-8"))
            except OSError as e:
                raise SourceReadError(args.input, e.strerror or str(e))
        output = sys.stdout
        if args.output is not None:
            try:
                args.output.parent.mkdir(parents=True, exist_ok=True)
                output = stack.enter_context(args.output.open("w", encoding="utf-8", newline="\n"))
            except OSError as e:
                raise OutputWriteError(args.output, e.strerror or str(e))
        if args.stage == "extract":
            stream = iter(())
        run_stage(args.stage, stream, config, args.out, repos=repos, output=output)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        if args.stage is not None:
            return _run_single_stage(args)
        return _run_full(args)
    except UsageError as e:
        logger.error(str(e))
        return EXIT_USAGE
    except (SourceReadError, OutputWriteError) as e:
        logger.error(f"I/O error: {e}")
        return EXIT_IO
    except (ConfigError, ConfigValidationError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_VALIDATION
    except StageError as e:
        logger.error(str(e))
        return EXIT_VALIDATION
    except CurationError as e:
        logger.error(f"Curation failed: {e}")
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
