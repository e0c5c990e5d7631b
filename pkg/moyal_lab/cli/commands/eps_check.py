"""eps-check — validate a commutation factor and inspect a graded matrix algebra."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import Field

from moyal_lab.cli.export import CommandResult
from moyal_lab.cli.run_config import Parameters, RunConfig
from moyal_lab.errors import DomainError
from moyal_lab.graded.factors import MAX_CROSSED_PRODUCT, CommutationFactor, cf_validate, factor_set_from_eps
from moyal_lab.graded.groups import Element, GradingGroup, parse_group
from moyal_lab.graded.matrix_algebra import (
    PAULI,
    GradedMatrixAlgebra,
    center_basis,
    classify_fine_derivations,
    elementary_algebra,
    eps_sigma,
    eps_trace,
    fine_algebra,
    twisted_radical,
)

logger = logging.getLogger(__name__)


class EpsCheckParameters(Parameters):
    group: str = Field(description="Grading group, e.g. 'Z2xZ2', 'Z3', 'ZxZ2'.")
    eps_table: str = Field(description="JSON file with the generator table ε(e_r, e_s).")
    fine: bool = Field(False, description="Inspect the fine grading (Pauli basis on Z2xZ2 unless --basis).")
    basis: str | None = Field(None, description="JSON file {\"i,j\": matrix} with one matrix per degree.")
    elementary: str | None = Field(None, description="JSON file with the degrees φ(k) of the elementary grading.")
    samples: int = Field(1000, ge=1, description="Random triples checked on large or infinite groups.")


# ---------------------------------------------------------------------------
# JSON inputs
# ---------------------------------------------------------------------------

def _load(path: str) -> Any:
    p = Path(path)
    if not p.exists():
        raise DomainError(f"file not found: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not valid JSON: {exc}") from exc


def load_eps_table(path: str) -> list[list[Any]]:
    """Either a bare list of rows or {"table": rows}."""
    data = _load(path)
    if isinstance(data, dict):
        data = data.get("table")
    if not isinstance(data, list) or not all(isinstance(row, list) for row in data):
        raise DomainError(f"{path}: expected a list of rows or {{\"table\": [...]}}")
    return data


def load_degrees(path: str) -> list[list[int]]:
    data = _load(path)
    if isinstance(data, dict):
        data = data.get("phi")
    if not isinstance(data, list) or not data:
        raise DomainError(f"{path}: expected a non-empty list of degrees or {{\"phi\": [...]}}")
    return [[int(c) for c in (d if isinstance(d, list) else [d])] for d in data]


def _entry(value: Any) -> complex:
    if isinstance(value, list) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace("i", "j"))
    return complex(value)


def load_basis(path: str, group: GradingGroup) -> dict[Element, np.ndarray]:
    """{"i,j": [[entry, ...], ...]} with entries as numbers, [re, im] pairs or strings like "1j"."""
    data = _load(path)
    if not isinstance(data, dict):
        raise DomainError(f"{path}: expected a mapping from degree to matrix")
    out = {}
    for key, rows in data.items():
        degree = group.reduce(int(c) for c in str(key).split(","))
        out[degree] = np.array([[_entry(v) for v in row] for row in rows], dtype=complex)
    return out


# ---------------------------------------------------------------------------
# Command
# ---------------------------------------------------------------------------

def _center(algebra: GradedMatrixAlgebra) -> list[dict]:
    return [{"degree": list(d), "matrix": m} for d, m in center_basis(algebra)]


class EpsCheckCommand:
    name = "eps-check"
    help = "Commutation-factor axioms, multiplier bridge, ε-center, ε-trace and ε-derivations"
    parameters = EpsCheckParameters

    def run(self, params: EpsCheckParameters, run: RunConfig) -> CommandResult:
        if params.fine and params.elementary:
            raise DomainError("--fine and --elementary are mutually exclusive")
        if params.basis and not params.fine:
            raise DomainError("--basis needs --fine")
        group = parse_group(params.group)
        cf = CommutationFactor(group, tuple(tuple(row) for row in load_eps_table(params.eps_table)))
        report = cf_validate(cf, samples=params.samples)
        payload: dict[str, Any] = {"group": group.label(), "table": cf.table_labels(), "validation": report}
        if not report.valid:
            logger.warning("%s: not a commutation factor (%d violations)", params.eps_table, len(report.violations))
            return CommandResult(payload=payload, exit_code=3)

        if report.proper and group.is_finite and group.size <= MAX_CROSSED_PRODUCT:
            sigma = factor_set_from_eps(cf)
            payload["factor_set"] = {
                ",".join(map(str, i)) + ";" + ",".join(map(str, j)): sigma(i, j).label()
                for i in group.elements() for j in group.elements()
            }

        if params.elementary:
            algebra = elementary_algebra(cf, load_degrees(params.elementary))
            payload["algebra"] = {
                "kind": algebra.kind,
                "size": algebra.size,
                "center": _center(algebra),
                "trace_signs": [cf(p, p).label() for p in algebra.phi],
                "trace_of_unit": eps_trace(np.eye(algebra.size), algebra),
            }
        elif params.fine:
            if params.basis:
                basis = load_basis(params.basis, group)
            elif group == GradingGroup((2, 2)):
                basis = PAULI
            else:
                raise DomainError(f"the fine grading over {group.label()} needs --basis")
            algebra = fine_algebra(cf, basis)
            payload["algebra"] = {
                "kind": algebra.kind,
                "size": algebra.size,
                "center": _center(algebra),
                "eps_sigma": eps_sigma(algebra).table_labels(),
                "twisted_radical": [list(d) for d in twisted_radical(algebra)],
                "derivations": classify_fine_derivations(algebra),
            }
        return CommandResult(payload=payload)
