"""
sweep — evaluate a target over a one- or two-parameter grid.

Ranges are written ``name=start:stop:step`` and read as decimals, so
0.2:1.0:0.2 has exactly five points.  Points may be evaluated by a
thread pool; rows are assembled in grid order (first parameter outer).
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_FLOOR, Decimal, InvalidOperation
from typing import Any, Callable

from pydantic import Field

from moyal_lab.cli.export import CommandResult, Table
from moyal_lab.cli.run_config import Parameters, RunConfig
from moyal_lab.config import get_lab_context
from moyal_lab.effective_action.assembly import assemble_gamma_check
from moyal_lab.effective_action.coefficients import divergent_coefficients
from moyal_lab.errors import DomainError
from moyal_lab.gauge.limits import commutative_limit_check

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Targets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepTarget:
    defaults: dict[str, float]
    outputs: list[str]
    evaluate: Callable[[dict[str, float]], dict[str, Any]]


def _effective_action_point(point: dict[str, float]) -> dict[str, Any]:
    table = divergent_coefficients(math.sqrt(point["omega2"]), point["m2"], point["theta"])
    # the report is wanted for every point, so the assembly never raises here
    report = assemble_gamma_check(table, tolerance=math.inf)
    mass = next(s for s in report.sectors if s.tag == "A²")
    return {
        "mass_inv_eps": mass.gamma_inv_eps,
        "mass_log_eps": mass.gamma_log_eps,
        "max_defect": report.max_defect,
        "passed": report.max_defect <= get_lab_context().tolerances.exact,
    }


def _commutative_limit_point(point: dict[str, float]) -> dict[str, Any]:
    (row,) = commutative_limit_check([point["omega"]], theta=point["theta"], m_max=int(point["m_max"]))
    return {"kappa": row.kappa, "max_defect": row.max_defect, "scaled_defect": row.scaled_defect}


TARGETS: dict[str, SweepTarget] = {
    "effective-action": SweepTarget(
        defaults={"omega2": 0.25, "m2": 0.0, "theta": 1.0},
        outputs=["mass_inv_eps", "mass_log_eps", "max_defect", "passed"],
        evaluate=_effective_action_point,
    ),
    "commutative-limit": SweepTarget(
        defaults={"omega": 0.01, "theta": 1.0, "m_max": 10},
        outputs=["kappa", "max_defect", "scaled_defect"],
        evaluate=_commutative_limit_point,
    ),
}


# ---------------------------------------------------------------------------
# Ranges
# ---------------------------------------------------------------------------

def parse_range(text: str) -> tuple[str, list[float]]:
    """'name=start:stop:step' → (name, inclusive list of values)."""
    if "=" not in text:
        raise DomainError(f"range must look like name=start:stop:step, got {text!r}")
    name, bounds = (part.strip() for part in text.split("=", 1))
    parts = bounds.split(":")
    if len(parts) != 3:
        raise DomainError(f"range must look like name=start:stop:step, got {text!r}")
    try:
        start, stop, step = (Decimal(p.strip()) for p in parts)
    except InvalidOperation as exc:
        raise DomainError(f"cannot read range {text!r}") from exc
    if step == 0:
        raise DomainError(f"range {text!r} has a zero step")
    count = int(((stop - start) / step).to_integral_value(rounding=ROUND_FLOOR)) + 1
    if count <= 0:
        return name, []
    return name, [float(start + k * step) for k in range(count)]


def parse_fixed(text: str | None) -> dict[str, float]:
    """'m2=0.1,theta=2' → {m2: 0.1, theta: 2.0}."""
    out: dict[str, float] = {}
    for item in (text or "").split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise DomainError(f"fixed values must look like name=value, got {item!r}")
        name, value = (part.strip() for part in item.split("=", 1))
        try:
            out[name] = float(value)
        except ValueError as exc:
            raise DomainError(f"cannot read fixed value {item!r}") from exc
    return out


# ---------------------------------------------------------------------------
# Command
# ---------------------------------------------------------------------------

class SweepParameters(Parameters):
    target: str = Field(description=f"What to evaluate: {', '.join(TARGETS)}.")
    x: str = Field(description="First swept parameter, name=start:stop:step.")
    y: str | None = Field(None, description="Optional second swept parameter.")
    fixed: str | None = Field(None, description="Non-swept values, 'name=value,...'.")
    workers: int = Field(1, ge=1, le=64, description="Threads evaluating grid points.")


class SweepCommand:
    name = "sweep"
    help = "Cross-product evaluation of a target over at most two parameters"
    parameters = SweepParameters

    def run(self, params: SweepParameters, run: RunConfig) -> CommandResult:
        if params.target not in TARGETS:
            raise DomainError(f"Unknown sweep target: {params.target!r}. Available: {list(TARGETS)}")
        target = TARGETS[params.target]
        ranges = [parse_range(params.x)] + ([parse_range(params.y)] if params.y else [])
        names = [name for name, _ in ranges]
        fixed = parse_fixed(params.fixed)
        if len(set(names)) != len(names):
            raise DomainError(f"parameter swept twice: {names}")
        unknown = [n for n in [*names, *fixed] if n not in target.defaults]
        if unknown:
            raise DomainError(f"{params.target} has no parameter {unknown}; available: {list(target.defaults)}")
        clash = [n for n in names if n in fixed]
        if clash:
            raise DomainError(f"parameters both swept and fixed: {clash}")

        columns = list(target.defaults)
        points = []
        for values in itertools.product(*(v for _, v in ranges)):
            point = {**target.defaults, **fixed, **dict(zip(names, values))}
            points.append(point)
        logger.info("sweep %s over %s: %d points", params.target, names, len(points))

        if params.workers > 1 and len(points) > 1:
            with ThreadPoolExecutor(max_workers=params.workers) as pool:
                results = list(pool.map(target.evaluate, points))
        else:
            results = [target.evaluate(p) for p in points]

        rows = [[p[c] for c in columns] + [r[o] for o in target.outputs] for p, r in zip(points, results)]
        return CommandResult(
            payload={"target": params.target, "swept": names, "fixed": fixed, "points": len(rows)},
            table=Table(columns + target.outputs, rows),
        )
