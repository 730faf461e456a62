"""
Command-line interface

    main.py <command> --config <path> [--depth K] [--boundary gamma0|gamma1|gamma2]
                      [--out <path>] [--format json|csv]

Exit status: 0 all verdicts pass, 2 a verdict failed, 1 configuration/runtime/usage error.
"""

import argparse
import logging
from pathlib import Path
from typing import List, Optional

from config.settings import settings
from src.errors import ConfigValidationError, SympOrthoError, UsageError
from src.reporting.commands import COMMANDS, run_command
from src.reporting.config_schema import FORMATS, parse_config
from src.reporting.report import write_report
from src.surfaces.words import BOUNDARY_NAMES
from src.utils.logger import bind_run, setup_logger

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERDICT_FAILED = 2


class ArgumentParser(argparse.ArgumentParser):
    """Raises UsageError instead of exiting"""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="symportho",
        description="Orthospectra and Basmajian-type identities for maximal representations into Sp(2n,R)",
    )
    parser.add_argument("command", choices=COMMANDS, help="Workflow to run")
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--depth", type=int, help=f"Word length bound (≤ {settings.MAX_DEPTH})")
    parser.add_argument("--boundary", choices=BOUNDARY_NAMES, help="Boundary component γ")
    parser.add_argument("--out", help="Report path (default: stdout)")
    parser.add_argument("--format", choices=FORMATS, help="Report format")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    setup_logger("src", settings.LOG_FILE or None, settings.LOG_LEVEL)
    bind_run()

    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        logger.error(f"❌ Usage error: {e.message}")
        return EXIT_ERROR

    bind_run(args.command)
    logger.info("=" * 60)
    logger.info(f"  {args.command} | config: {args.config}")
    logger.info("=" * 60)

    try:
        settings.validate()
        text = Path(args.config).read_text(encoding="utf-8")
        config = parse_config(text, settings).with_overrides(
            depth=args.depth, boundary=args.boundary, output_path=args.out, output_format=args.format
        )
        logger.info(f"n={config.n}, depth={config.depth}, boundary={config.boundary}")
        document = run_command(args.command, config)
        write_report(document, config.output_format, config.output_path)
    except ConfigValidationError as e:
        for issue in e.issues:
            logger.error(f"❌ {issue.path}: {issue.code} ({issue.message})")
        return EXIT_ERROR
    except SympOrthoError as e:
        logger.error(f"❌ {e.code}: {e.message} {e.to_dict()['context']}")
        return EXIT_ERROR
    except (OSError, ValueError) as e:
        logger.error(f"❌ {e}")
        return EXIT_ERROR

    if not document.passed:
        failed = [verdict.name for verdict in document.verdicts if not verdict.passed]
        logger.warning(f"❌ Failed verdicts: {', '.join(failed)}")
        return EXIT_VERDICT_FAILED

    logger.info("✅ All verdicts passed")
    return EXIT_OK
