"""
Subcommand abstraction layer.

Defines the Command protocol and the registry the CLI builds its
subparsers from.  Each command declares its parameters as a pydantic
model (see run_config.Parameters) and returns a CommandResult.
"""

from __future__ import annotations

from typing import Protocol, runtime_checkable

from moyal_lab.cli.export import CommandResult
from moyal_lab.cli.run_config import Parameters, RunConfig


@runtime_checkable
class Command(Protocol):
    """Interface that all subcommands must implement."""

    name: str
    help: str
    parameters: type[Parameters]

    def run(self, params: Parameters, run: RunConfig) -> CommandResult:
        """Execute the command; raise LabError subclasses for failures that map to exit codes."""
        ...


# ---------------------------------------------------------------------------
# Command registry
# ---------------------------------------------------------------------------

_command_registry: dict[str, Command] = {}


def register_command(command: Command) -> None:
    """Register a Command instance under its name."""
    _command_registry[command.name] = command


def get_command(name: str) -> Command:
    if name not in _command_registry:
        raise ValueError(
            f"Unknown command: {name!r}. "
            f"Available: {list(_command_registry)}"
        )
    return _command_registry[name]


def all_commands() -> list[Command]:
    return list(_command_registry.values())


# ---------------------------------------------------------------------------
# Auto-register known commands at module load
# ---------------------------------------------------------------------------

from .vacuum_scalar import VacuumScalarCommand  # noqa: E402
from .vacuum_gauge import VacuumGaugeCommand  # noqa: E402
from .effective_action import EffectiveActionCommand  # noqa: E402
from .ribbon import RibbonCommand  # noqa: E402
from .eps_check import EpsCheckCommand  # noqa: E402
from .sweep import SweepCommand  # noqa: E402
from .verify import VerifyCommand  # noqa: E402

for _cls in (VacuumScalarCommand, VacuumGaugeCommand, EffectiveActionCommand, RibbonCommand,
             EpsCheckCommand, SweepCommand, VerifyCommand):
    register_command(_cls())
