import argparse
import json
import logging
import sys
from collections.abc import Sequence
from typing import NoReturn

import structlog

from mcwave.cli.commands import add_commands
from mcwave.config.settings import Settings, settings
from mcwave.config.utils import get_config_summary, validate_configuration
from mcwave.providers.storage import LocalFileStorageProvider
from mcwave.utils.exceptions import (
    CommandLineError,
    ConfigurationError,
    InternalError,
    McwaveError,
)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def setup_logging(settings_obj: Settings) -> None:
    """Configure structured logging on stderr; stdout carries command output."""

    log_level = getattr(logging, settings_obj.log_level.upper())

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.StackInfoRenderer(),
            structlog.processors.JSONRenderer()
            if settings_obj.log_format == "json"
            else structlog.dev.ConsoleRenderer(colors=False),
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        logger_factory=structlog.stdlib.LoggerFactory(),
        context_class=dict,
        cache_logger_on_first_use=True,
    )

    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=log_level,
        force=True,
    )


def _global_flags() -> argparse.ArgumentParser:
    """Flags accepted both before and after the command name."""
    flags = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    flags.add_argument(
        "--json-errors",
        action="store_true",
        help="Report failures as one JSON object on stderr",
    )
    flags.add_argument("--tol", type=float, help="Verification tolerance")
    flags.add_argument("--samples", type=int, help="Unit-circle sample count")
    flags.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS)
    return flags


class CommandParser(argparse.ArgumentParser):
    """Argument parser that raises CommandLineError instead of exiting."""

    def error(self, message: str) -> NoReturn:
        raise CommandLineError(message, self.format_usage().strip())


def build_parser() -> argparse.ArgumentParser:
    flags = _global_flags()
    parser = CommandParser(
        prog="mcwave",
        description="Multichannel wavelet filter banks from interpolatory symbols",
        parents=[flags],
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    add_commands(subparsers, [flags])
    return parser


def resolve_settings(args: argparse.Namespace, base: Settings | None = None) -> Settings:
    """Apply command-line overrides on top of environment settings."""
    overrides = {
        name: getattr(args, name)
        for name in ("tol", "samples", "log_level")
        if hasattr(args, name)
    }
    cfg = (base or settings).model_copy(update=overrides)
    validation = validate_configuration(cfg)
    if not validation["valid"]:
        raise ConfigurationError(
            "Invalid configuration", {"errors": validation["errors"]}
        )
    return cfg


def report_error(error: McwaveError, json_errors: bool) -> None:
    if json_errors:
        sys.stderr.write(json.dumps(error.to_dict(), default=str) + "\n")
    else:
        sys.stderr.write(f"error: {error.error_code}: {error.message}\n")


def main(argv: Sequence[str] | None = None) -> int:
    """Run one command and return its exit code.

    0 on success, 1 on numeric failure, 2 on usage or file format errors.
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except CommandLineError as e:
        json_errors = "--json-errors" in argv
        if e.usage and not json_errors:
            sys.stderr.write(e.usage + "\n")
        report_error(e, json_errors)
        return e.exit_code
    json_errors = getattr(args, "json_errors", False)
    setup_logging(settings)
    logger = structlog.get_logger(__name__)

    try:
        cfg = resolve_settings(args)
        setup_logging(cfg)
        structlog.contextvars.clear_contextvars()
        structlog.contextvars.bind_contextvars(command=args.command)
        logger.debug("Configuration", **get_config_summary(cfg))
        return int(args.handler(args, cfg, LocalFileStorageProvider()))

    except McwaveError as e:
        logger.info("Command failed", error=e.message, error_type=type(e).__name__)
        report_error(e, json_errors)
        return e.exit_code

    except Exception as e:
        logger.error(
            "Unhandled exception", error=str(e), error_type=type(e).__name__
        )
        report_error(InternalError(f"Unexpected error: {e}"), json_errors)
        return InternalError.exit_code


if __name__ == "__main__":
    sys.exit(main())
