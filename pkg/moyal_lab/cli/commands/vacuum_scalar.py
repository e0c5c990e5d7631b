"""vacuum-scalar — diagonal vacuum of the self-dual scalar model."""

from __future__ import annotations

import logging

from pydantic import Field

from moyal_lab.cli.export import CommandResult, Table
from moyal_lab.cli.run_config import Dimension, Parameters, RunConfig
from moyal_lab.config import get_lab_context
from moyal_lab.errors import AccuracyError
from moyal_lab.moyal.params import MoyalParams
from moyal_lab.scalar.model import ScalarModel
from moyal_lab.scalar.vacuum import (
    check_vacuum,
    scalar_vacuum,
    vacuum_action,
    vacuum_stability,
    zero_field_instabilities,
)

logger = logging.getLogger(__name__)


class VacuumScalarParameters(Parameters):
    theta: float = Field(1.0, gt=0, description="Noncommutativity parameter θ.")
    mu2: float = Field(description="Broken-phase mass μ² (the φ² coefficient is −μ²).")
    lam: float = Field(alias="lambda", gt=0, description="Quartic coupling λ.")
    dim: Dimension = Field(2, description="Space dimension, 2 or 4.")
    trunc: int = Field(16, ge=2, le=64, description="Matrix truncation N per coordinate pair.")


class VacuumScalarCommand:
    name = "vacuum-scalar"
    help = "Vacuum amplitudes a_k, action and stability at Ω = 1"
    parameters = VacuumScalarParameters

    def run(self, params: VacuumScalarParameters, run: RunConfig) -> CommandResult:
        model = ScalarModel(MoyalParams(params.theta, params.dim), omega=1.0, mu2=params.mu2,
                            lam=params.lam, broken_phase=True)
        v = scalar_vacuum(model)
        checks = check_vacuum(v, params.trunc)
        stability = vacuum_stability(v, params.trunc)
        instabilities = zero_field_instabilities(model, params.trunc)

        tolerance = get_lab_context().tolerances.exact
        scale = max([1.0, *(abs(a) ** 3 for a in v.a)]) * params.lam
        if checks["eom_residual"] > tolerance * scale:
            raise AccuracyError("vacuum equation of motion", estimate=checks["eom_residual"],
                                tolerance=tolerance * scale)
        logger.info("scalar vacuum: p=%d S[v]=%.12g min C^-1=%.6g", v.p, vacuum_action(v), stability.min_value)
        return CommandResult(
            payload={
                "p": v.p,
                "a": list(v.a),
                "a_squared": [a * a for a in v.a],
                "action": vacuum_action(v),
                "min_inverse_propagator": stability.min_value,
                "min_index": stability.min_index,
                "all_positive": stability.all_positive,
                "heuristic": stability.heuristic,
                "degenerate": stability.degenerate,
                "eom_residual": checks["eom_residual"],
                "action_defect": checks["action_defect"],
                "zero_field_unstable": instabilities.unstable,
                "zero_field_negative": instabilities.negative,
            },
            table=Table(["k", "a_k"], [[k, a] for k, a in enumerate(v.a)]),
        )
