"""effective-action — divergence table, assembly check and numeric tadpole."""

from __future__ import annotations

import logging
import math

from pydantic import Field

from moyal_lab.cli.export import CommandResult
from moyal_lab.cli.run_config import Parameters, RunConfig
from moyal_lab.effective_action.assembly import assemble_gamma_check
from moyal_lab.effective_action.coefficients import divergent_coefficients
from moyal_lab.effective_action.tadpole import tadpole_numeric
from moyal_lab.errors import AccuracyError

logger = logging.getLogger(__name__)

# Relative agreement required between the fitted and closed-form 1/ε tadpole coefficient.
TADPOLE_TOLERANCE = 0.01


class EffectiveActionParameters(Parameters):
    omega2: float = Field(gt=0, le=1, description="Harmonic parameter Ω².")
    m2: float = Field(0.0, description="Mass m².")
    theta: float = Field(1.0, gt=0, description="Noncommutativity parameter θ.")
    numeric_tadpole: bool = Field(False, description="Also fit the tadpole integral on the ε grid.")
    width: float | None = Field(None, gt=0, description="Width s of the tadpole test profile.")


class EffectiveActionCommand:
    name = "effective-action"
    help = "One-loop divergence table and the assembled effective action"
    parameters = EffectiveActionParameters

    def run(self, params: EffectiveActionParameters, run: RunConfig) -> CommandResult:
        omega = math.sqrt(params.omega2)
        table = divergent_coefficients(omega, params.m2, params.theta)
        assembly = assemble_gamma_check(table)
        payload = {"table": table.to_report(), "assembly": assembly}
        if params.numeric_tadpole:
            fit = tadpole_numeric(omega, params.m2, params.theta, width=params.width)
            payload["tadpole"] = fit
            if fit.relative_error_inv_eps > TADPOLE_TOLERANCE:
                raise AccuracyError("numeric tadpole 1/eps coefficient", estimate=fit.relative_error_inv_eps,
                                    tolerance=TADPOLE_TOLERANCE)
            if fit.relative_error_log_eps is not None and fit.relative_error_log_eps > TADPOLE_TOLERANCE:
                raise AccuracyError("numeric tadpole ln eps coefficient", estimate=fit.relative_error_log_eps,
                                    tolerance=TADPOLE_TOLERANCE)
        logger.info("effective action at omega2=%g: max sector defect %.2e", params.omega2, assembly.max_defect)
        return CommandResult(payload=payload)
