"""vacuum-gauge — bidiagonal gauge vacua in two and four dimensions."""

from __future__ import annotations

import logging

from pydantic import Field

from moyal_lab.cli.export import CommandResult, Table
from moyal_lab.cli.run_config import Dimension, Parameters, RunConfig
from moyal_lab.errors import DomainError
from moyal_lab.gauge.model import GaugeModel
from moyal_lab.gauge.profile import vacuum_profile_xspace
from moyal_lab.gauge.sequences import vacuum_sequence_2d, vacuum_sequence_4d
from moyal_lab.moyal.params import MoyalParams

logger = logging.getLogger(__name__)


class VacuumGaugeParameters(Parameters):
    dim: Dimension = Field(2, description="Space dimension, 2 or 4.")
    theta: float = Field(1.0, gt=0, description="Noncommutativity parameter θ.")
    omega2: float = Field(ge=0, le=1, description="Harmonic parameter Ω².")
    kappa: float = Field(0.0, description="Mass parameter κ.")
    alpha: float | None = Field(None, ge=0, description="Free growing-mode amplitude (dim 2).")
    v1: float | None = Field(None, ge=0, description="Initial value v₁ (dim 4).")
    mmax: int | None = Field(None, ge=2, le=400, description="Last index m of the sequence (50 in dim 2, 30 in dim 4).")
    allow_growing: bool = Field(False, description="Accept α ≠ 0 for 0 < Ω² < 1/3.")
    profile: str | None = Field(None, description="x-space sample points 'x1,x2[,x3,x4]', ';' separated.")
    levels: int | None = Field(None, ge=1, description="Number of sequence levels used by the profile.")


def parse_points(text: str, dim: int) -> list[list[float]]:
    points = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            x = [float(c) for c in chunk.split(",")]
        except ValueError as exc:
            raise DomainError(f"cannot read profile point {chunk!r}") from exc
        if len(x) != dim:
            raise DomainError(f"profile point {chunk!r} needs {dim} components")
        points.append(x)
    return points


class VacuumGaugeCommand:
    name = "vacuum-gauge"
    help = "Vacuum sequence u_m (dim 2) or v_m (dim 4) and optional x-space profile"
    parameters = VacuumGaugeParameters

    def run(self, params: VacuumGaugeParameters, run: RunConfig) -> CommandResult:
        model = GaugeModel(MoyalParams(params.theta, params.dim), omega2=params.omega2, kappa=params.kappa)
        if params.dim == 2:
            if params.v1 is not None:
                raise DomainError("--v1 applies to dim = 4; use --alpha in dim = 2")
            seq = vacuum_sequence_2d(model, alpha=params.alpha or 0.0, m_max=params.mmax or 50,
                                     allow_growing=params.allow_growing)
        else:
            if params.alpha is not None:
                raise DomainError("--alpha applies to dim = 2; use --v1 in dim = 4")
            if params.v1 is None:
                raise DomainError("dim = 4 needs --v1")
            seq = vacuum_sequence_4d(model, params.v1, m_max=params.mmax or 30)

        profile = []
        if params.profile:
            for x in parse_points(params.profile, params.dim):
                profile.append({"x": x, "A": vacuum_profile_xspace(seq, x, params.levels).tolist()})
        logger.info("gauge vacuum: branch=%s, %d terms, recurrence defect %.2e",
                    seq.branch.value, len(seq.u), seq.recurrence_defect)
        return CommandResult(
            payload={
                "branch": seq.branch.value,
                "u": list(seq.u),
                "exact": [str(v) for v in seq.exact] if seq.exact is not None else None,
                "alpha": seq.alpha,
                "v1": seq.v1,
                "flags": list(seq.flags),
                "recurrence_defect": seq.recurrence_defect,
                "profile": profile,
            },
            table=Table(["m", "u_m"], [[m, u] for m, u in enumerate(seq.u)]),
        )
