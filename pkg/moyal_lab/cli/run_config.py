"""
Run configuration — ``key = value`` files, flags and validation.

A run is described by a RunConfig: the subcommand, its parameters, the
output path, an optional seed and tolerance overrides.  Values are read
from an optional config file (--config) and then overridden by flags.

Every subcommand declares its parameters as a pydantic model.  The
argparse flags are generated from that model, all values reach pydantic
as strings, and a ValidationError surfaces as DomainError.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import types
import typing
from enum import Enum
from pathlib import Path

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, ValidationError, field_validator

from moyal_lab.config import LabContext, Tolerances
from moyal_lab.errors import DomainError

logger = logging.getLogger(__name__)

TOLERANCE_PREFIX = "tolerance."
# Keys a config file may carry besides the subcommand parameters.
RUN_KEYS = ("out", "seed")


class Subcommand(str, Enum):
    VACUUM_SCALAR = "vacuum-scalar"
    VACUUM_GAUGE = "vacuum-gauge"
    EFFECTIVE_ACTION = "effective-action"
    RIBBON = "ribbon"
    EPS_CHECK = "eps-check"
    SWEEP = "sweep"
    VERIFY = "verify"


# ---------------------------------------------------------------------------
# Parameter models
# ---------------------------------------------------------------------------

class Parameters(BaseModel):
    """Base for subcommand parameters: unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True, frozen=True)


def check_dim(value: int) -> int:
    if value not in (2, 4):
        raise ValueError(f"dim must be 2 or 4, got {value}")
    return value


Dimension = typing.Annotated[int, AfterValidator(check_dim)]


def _flag_type(annotation) -> tuple[type, bool]:
    """(inner type, optional) for X and X | None annotations."""
    if isinstance(annotation, types.UnionType) or typing.get_origin(annotation) is typing.Union:
        args = [a for a in typing.get_args(annotation) if a is not type(None)]
        return args[0], True
    return annotation, False


def add_parameter_arguments(parser: argparse.ArgumentParser, model: type[Parameters]) -> None:
    """One flag per model field; defaults stay None so config-file values can show through."""
    for name, info in model.model_fields.items():
        dest = info.alias or name
        flag = "--" + dest.replace("_", "-")
        inner, _ = _flag_type(info.annotation)
        text = info.description or ""
        if not info.is_required() and info.default is not None:
            text = f"{text} (default: {info.default})".strip()
        if inner is bool:
            parser.add_argument(flag, dest=dest, action="store_true", default=None, help=text)
        else:
            parser.add_argument(flag, dest=dest, default=None, metavar=dest.upper(), help=text)


def validate_parameters(model: type[Parameters], raw: dict[str, typing.Any]) -> Parameters:
    try:
        return model.model_validate(raw)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'parameters'}: {err['msg']}" for err in exc.errors()
        )
        raise DomainError(f"invalid parameters: {problems}") from exc


# ---------------------------------------------------------------------------
# Config file
# ---------------------------------------------------------------------------

def _normalise_key(key: str) -> str:
    key = key.strip()
    if key.startswith(TOLERANCE_PREFIX):
        return key
    return key.replace("-", "_")


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse ``key = value`` lines; '#' starts a comment."""
    path = Path(path)
    if not path.exists():
        raise DomainError(f"config file not found: {path}")
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = _normalise_key(key)
        if not key:
            raise DomainError(f"{path}:{lineno}: empty key")
        if key in values:
            raise DomainError(f"{path}:{lineno}: duplicate key {key!r}")
        values[key] = value
    logger.debug("read %d keys from %s", len(values), path)
    return values


def parse_tolerance_overrides(items: list[str] | None) -> dict[str, str]:
    """--tolerance name=value, repeatable."""
    out: dict[str, str] = {}
    for item in items or []:
        if "=" not in item:
            raise DomainError(f"--tolerance expects name=value, got {item!r}")
        name, value = (part.strip() for part in item.split("=", 1))
        out[name] = value
    return out


# ---------------------------------------------------------------------------
# RunConfig
# ---------------------------------------------------------------------------

class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    subcommand: Subcommand
    parameters: dict[str, typing.Any] = Field(
        default_factory=dict, description="Subcommand parameters as given, before model validation.",
    )
    output: Path | None = Field(default=None, description="Artifact path; None writes under MOYAL_LAB_OUTPUT_DIR.")
    seed: int | None = Field(default=None, description="Overrides LabContext.seed.")
    tolerances: dict[str, float] = Field(default_factory=dict, description="Overrides of LabContext.tolerances.")

    @field_validator("tolerances")
    @classmethod
    def _known_tolerances(cls, value: dict[str, float]) -> dict[str, float]:
        known = list(Tolerances.__dataclass_fields__)
        unknown = [k for k in value if k not in known]
        if unknown:
            raise ValueError(f"unknown tolerance {unknown}; available: {known}")
        bad = [k for k, v in value.items() if not v > 0]
        if bad:
            raise ValueError(f"tolerances must be positive: {bad}")
        return value

    def apply(self, ctx: LabContext) -> LabContext:
        """The LabContext of this run."""
        return dataclasses.replace(
            ctx,
            tolerances=dataclasses.replace(ctx.tolerances, **self.tolerances),
            seed=ctx.seed if self.seed is None else self.seed,
        )


def build_run_config(subcommand: str, model: type[Parameters], args: argparse.Namespace,
                     file_values: dict[str, str] | None = None) -> RunConfig:
    """Merge config-file values and flags; flags win."""
    file_values = dict(file_values or {})
    tolerances = {k[len(TOLERANCE_PREFIX):]: v for k, v in file_values.items() if k.startswith(TOLERANCE_PREFIX)}
    tolerances.update(parse_tolerance_overrides(getattr(args, "tolerance", None)))
    run_values = {k: file_values[k] for k in RUN_KEYS if k in file_values}
    parameters = {
        k: v for k, v in file_values.items() if not k.startswith(TOLERANCE_PREFIX) and k not in RUN_KEYS
    }
    for name, info in model.model_fields.items():
        dest = info.alias or name
        given = getattr(args, dest, None)
        if given is not None:
            parameters[dest] = given
    if getattr(args, "out", None) is not None:
        run_values["out"] = args.out
    if getattr(args, "seed", None) is not None:
        run_values["seed"] = args.seed
    try:
        return RunConfig(
            subcommand=subcommand,
            parameters=parameters,
            output=run_values.get("out"),
            seed=run_values.get("seed"),
            tolerances=tolerances,
        )
    except ValidationError as exc:
        problems = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors())
        raise DomainError(f"invalid run configuration: {problems}") from exc
