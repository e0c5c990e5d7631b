"""
moyal-lab command line.

Usage:
    moyal-lab vacuum-scalar --mu2 24 --lambda 1
    moyal-lab ribbon --in bubble.txt --dim 4
    moyal-lab verify --only 3,gauge-4d

Exit codes: 0 success, 1 unexpected lab failure, 2 accuracy error
(or a failed verify), 3 domain error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from moyal_lab import config
from moyal_lab.cli.commands import Command, all_commands, get_command
from moyal_lab.cli.export import write_artifacts
from moyal_lab.cli.run_config import add_parameter_arguments, build_run_config, read_config_file, validate_parameters
from moyal_lab.config import get_lab_context, set_lab_context
from moyal_lab.diagnostics import DiagnosticsCollector
from moyal_lab.errors import AccuracyError, DomainError, LabError, UsageError

logger = logging.getLogger(__name__)


class LabArgumentParser(argparse.ArgumentParser):
    """argparse parser whose errors become UsageError instead of exiting."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.commands: dict[str, LabArgumentParser] = {}

    def error(self, message: str):
        raise UsageError(message, usage=self.format_usage())


def _common_arguments() -> argparse.ArgumentParser:
    common = LabArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="Plain-text 'key = value' file; flags override it.")
    common.add_argument("--seed", default=None, help="Seed for every random draw of the run.")
    common.add_argument("--out", default=None, help="Artifact path (.csv or .json).")
    common.add_argument("--log-level", default=None, help=f"Logging level (default: {config.LOG_LEVEL}).")
    common.add_argument("--tolerance", action="append", default=None, metavar="NAME=VALUE",
                        help="Override one LabContext tolerance; repeatable.")
    return common


def build_parser() -> LabArgumentParser:
    parser = LabArgumentParser(
        prog="moyal-lab",
        description="Numerical laboratory for field theory on Moyal space",
    )
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND", parser_class=LabArgumentParser)
    sub.required = True
    common = _common_arguments()
    for command in all_commands():
        p = sub.add_parser(command.name, help=command.help, description=command.help, parents=[common])
        add_parameter_arguments(p, command.parameters)
        parser.commands[command.name] = p
    return parser


def dispatch(command: Command, args: argparse.Namespace) -> int:
    """Validate, run and export one subcommand; returns its exit code."""
    file_values = read_config_file(args.config) if args.config else {}
    run = build_run_config(command.name, command.parameters, args, file_values)
    params = validate_parameters(command.parameters, run.parameters)

    previous = get_lab_context()
    set_lab_context(run.apply(previous))
    try:
        collector = DiagnosticsCollector(config.DIAGNOSTICS_BUFFER)
        with collector.attached("moyal_lab", level=logging.WARNING):
            logger.info("running %s", command.name)
            result = command.run(params, run)
        write_artifacts(command.name, result, params.model_dump(by_alias=True), run.output, collector.warnings())
    finally:
        set_lab_context(previous)
    return result.exit_code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"moyal-lab: error: {e}", file=sys.stderr)
        print(e.usage, file=sys.stderr, end="")
        return e.exit_code

    level = (args.log_level or config.LOG_LEVEL).upper()
    # logging.getLevelNamesMapping() is 3.11+; it returns a copy of _nameToLevel.
    level_names = getattr(logging, "getLevelNamesMapping", lambda: dict(logging._nameToLevel))()
    if level not in level_names:
        print(f"moyal-lab: error: unknown log level {args.log_level!r}", file=sys.stderr)
        return DomainError.exit_code
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    command = get_command(args.subcommand)
    try:
        return dispatch(command, args)
    except AccuracyError as e:
        logger.error("%s: accuracy: %s", command.name, e)
        return e.exit_code
    except DomainError as e:
        logger.error("%s: %s", command.name, e)
        print(f"moyal-lab {command.name}: error: {e}", file=sys.stderr)
        print(parser.commands[command.name].format_usage(), file=sys.stderr, end="")
        return e.exit_code
    except LabError as e:
        logger.exception("%s failed: %s", command.name, e)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
