"""
Configuration — environment variable loading and numerical defaults.

Centralises all env var reads so other modules import from here
instead of calling os.getenv() directly.

Provides LabContext — the numerical context for a run (tolerances,
quadrature sizes, interior margins), derived from defaults.yaml when
available, with built-in fallbacks.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from moyal_lab.paths import DEFAULTS_FILE, PROJECT_ROOT

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Environment
# ---------------------------------------------------------------------------

OUTPUT_DIR: Path = Path(os.getenv("MOYAL_LAB_OUTPUT_DIR", str(PROJECT_ROOT / "out")))
LOG_LEVEL: str = os.getenv("MOYAL_LAB_LOG_LEVEL", "INFO").upper()
DEFAULT_SEED: int = int(os.getenv("MOYAL_LAB_SEED", "20240601"))
DEFAULTS_OVERRIDE: str = os.getenv("MOYAL_LAB_DEFAULTS", "")
DIAGNOSTICS_BUFFER: int = int(os.getenv("MOYAL_LAB_DIAGNOSTICS_BUFFER", "500"))


# ---------------------------------------------------------------------------
# defaults.yaml: env override first, then the packaged file
# ---------------------------------------------------------------------------

_DEFAULTS_CANDIDATES = [
    Path(DEFAULTS_OVERRIDE) if DEFAULTS_OVERRIDE else None,
    DEFAULTS_FILE,
]


def load_defaults(candidates: list[Path | None] | None = None) -> dict:
    """Return the first readable defaults mapping, or {} when none exists."""
    for p in candidates if candidates is not None else _DEFAULTS_CANDIDATES:
        if p is not None and p.exists():
            with open(p) as f:
                return yaml.safe_load(f) or {}
    logger.warning("defaults.yaml not found, using built-in defaults")
    return {}


# ---------------------------------------------------------------------------
# Typed views
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Tolerances:
    exact: float = 1e-12
    quadrature: float = 1e-8
    grid_edge: float = 1e-8
    duality: float = 1e-3
    resummation: float = 1e-4
    fit_condition: float = 1e12
    profile: float = 1e-8


@dataclass(frozen=True)
class QuadratureDefaults:
    hermite_nodes_2d: int = 96
    hermite_nodes_4d: int = 12
    grid_resolution: int = 128
    grid_extent_factor: float = 7.0


@dataclass(frozen=True)
class LabContext:
    """Numerical context shared by every module for one run."""
    tolerances: Tolerances = field(default_factory=Tolerances)
    quadrature: QuadratureDefaults = field(default_factory=QuadratureDefaults)
    margin: int = 2
    eta_margin: int = 4
    tadpole_eps: tuple[float, ...] = (1e-5, 2e-5, 5e-5, 1e-4, 2e-4, 5e-4, 1e-3, 2e-3, 5e-3)
    tadpole_width: float = 1.0
    resummation_alpha_min: float = 0.2
    resummation_trunc: int = 150
    seed: int = DEFAULT_SEED


def context_from_mapping(raw: dict, seed: int = DEFAULT_SEED) -> LabContext:
    """Build a LabContext from a parsed defaults mapping (missing keys keep defaults)."""
    tol = raw.get("tolerances", {}) or {}
    quad = raw.get("quadrature", {}) or {}
    interior = raw.get("interior", {}) or {}
    tadpole = raw.get("tadpole", {}) or {}
    resum = raw.get("resummation", {}) or {}
    base = LabContext()
    return LabContext(
        tolerances=Tolerances(**{k: float(v) for k, v in tol.items() if k in Tolerances.__dataclass_fields__}),
        quadrature=QuadratureDefaults(**{
            k: type(getattr(base.quadrature, k))(v)
            for k, v in quad.items() if k in QuadratureDefaults.__dataclass_fields__
        }),
        margin=int(interior.get("margin", base.margin)),
        eta_margin=int(interior.get("eta_margin", base.eta_margin)),
        tadpole_eps=tuple(float(e) for e in tadpole.get("eps_list", base.tadpole_eps)),
        tadpole_width=float(tadpole.get("profile_width", base.tadpole_width)),
        resummation_alpha_min=float(resum.get("alpha_min", base.resummation_alpha_min)),
        resummation_trunc=int(resum.get("trunc", base.resummation_trunc)),
        seed=seed,
    )


_context: LabContext | None = None


def get_lab_context() -> LabContext:
    """Return the cached LabContext (lazy-initialised from defaults.yaml)."""
    global _context
    if _context is None:
        _context = context_from_mapping(load_defaults())
    return _context


def set_lab_context(ctx: LabContext | None) -> None:
    """Install ``ctx`` for the rest of the process; None re-reads defaults.yaml on next access."""
    global _context
    _context = ctx
