"""
Pydantic report models — returned by checks and written into CLI artifacts.
"""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field


# ---------------------------------------------------------------------------
# Scalar model
# ---------------------------------------------------------------------------


class StabilityReport(BaseModel):
    p: int
    trunc: int
    values: list[list[float]] = Field(description="C⁻¹_{mn} over flat multi-indices.")
    min_value: float
    min_index: list[list[int]]  # [m, n]
    degenerate: list[list[list[int]]] = Field(
        default=[],
        description="Index pairs where C⁻¹ vanishes (μ²θ/8 − ½ integral).",
    )
    all_positive: bool
    heuristic: bool = Field(default=False, description="True for dim=4, where minimality is not established.")
    action: float = Field(description="S[v] of the vacuum.")


class InstabilityReport(BaseModel):
    p: int
    negative: list[dict[str, Any]] = []  # {m, n, alpha}
    unstable: bool


class SigmaEntry(BaseModel):
    m: list[int]
    n: list[int]
    value: float


class SigmaSpectrum(BaseModel):
    p: int
    entries: list[SigmaEntry] = []
    masked: list[list[int]] = Field(default=[], description="Row indices |m| ≤ p removed by the constraint.")


class DualityReport(BaseModel):
    omega: float
    direct: float
    dual: float
    defect: float = Field(description="|S − Ω²S̃| / max(|S|, |Ω²S̃|).")
    dual_mu2: float
    dual_lambda: float
    dual_omega: float


# ---------------------------------------------------------------------------
# Gauge model
# ---------------------------------------------------------------------------


class GaugeActionForms(BaseModel):
    z_form: float = Field(description="(3Ω²−1)ZZZ†Z† + (1+Ω²)ZZ†ZZ† + 2κZZ†.")
    commutator_form: float = Field(description="−¼[𝒜,𝒜]² + (Ω²/4){𝒜,𝒜}² + κ𝒜𝒜.")
    expanded_form: float = Field(description="κ𝒜𝒜 + (1+Ω²)/2·𝒜μ𝒜μ𝒜ν𝒜ν − (1−Ω²)/2·𝒜μ𝒜ν𝒜μ𝒜ν.")

    @property
    def max_defect(self) -> float:
        values = (self.z_form, self.commutator_form, self.expanded_form)
        scale = max(1.0, *(abs(v) for v in values))
        return max(abs(a - b) for a in values for b in values) / scale


class HessianProbe(BaseModel):
    action: float
    curvatures: list[float]
    min_curvature: float
    step: float
    seed: int
    heuristic: bool = True  # random directions only, not a certificate


class CommutativeLimitRow(BaseModel):
    omega: float
    kappa: float = Field(description="κ(Ω) = −Ω√2/θ.")
    max_defect: float = Field(description="max_m |u_m − m/θ|.")
    scaled_defect: float = Field(description="max_defect / Ω; bounded as Ω → 0.")


# ---------------------------------------------------------------------------
# Effective action
# ---------------------------------------------------------------------------


class DivergencePair(BaseModel):
    inv_eps: float = Field(description="Coefficient of 1/ε.")
    log_eps: float = Field(description="Coefficient of ln ε.")
    exact_inv_eps: str = ""  # str() of the exact expression, π symbolic
    exact_log_eps: str = ""


class DivergenceTableReport(BaseModel):
    omega: float
    m2: float
    theta: float
    entries: dict[str, dict[str, DivergencePair]] = Field(
        description="contribution → operator tag → (1/ε, ln ε) coefficients.",
    )


class SectorDefect(BaseModel):
    tag: str
    gamma_inv_eps: float
    gamma_log_eps: float
    sum_inv_eps: float = Field(description="GAMMA_SIGN · Σ_T, 1/ε part.")
    sum_log_eps: float = Field(description="GAMMA_SIGN · Σ_T, ln ε part.")
    defect: float


class AssemblyReport(BaseModel):
    omega: float
    sign: int = Field(description="Global constant relating Γ to ΣT.")
    sectors: list[SectorDefect]
    max_defect: float
    passed: bool
    unchecked: list[str] = Field(
        default=[],
        description="Field-independent terms, which cancel in the operator expansion.",
    )


class TadpoleFit(BaseModel):
    omega: float
    m2: float
    theta: float
    width: float = Field(description="Gaussian profile A_μ = ũ_μ e^{−u²/width}.")
    eps: list[float]
    values: list[float]
    basis: list[str]
    coefficients: dict[str, float]
    expected_inv_eps: float
    expected_log_eps: float
    relative_error_inv_eps: float
    relative_error_log_eps: float | None = Field(default=None, description="None when ln ε is not in the fit basis.")
    condition: float


class SchwingerCheck(BaseModel):
    lines: int
    expected_inv_eps: float = Field(description="1/(p·p!).")
    fitted_inv_eps: float
    expected_log_eps: float = Field(description="−1/(p−1)!.")
    fitted_log_eps: float
    scale: float = Field(description="Cut-off rescaling ε → ε/p² that equalises both.")


# ---------------------------------------------------------------------------
# Ribbon graphs
# ---------------------------------------------------------------------------


class TopologyReport(BaseModel):
    vertices: int
    internal_lines: int
    external_legs: int
    faces: int
    broken_faces: int
    genus: int
    face_cycles: list[list[str]] = Field(default=[], description="Half-edge cycles of σ∘α.")


class DegreesReport(BaseModel):
    dim: int
    d_c: int = Field(description="D + (D−4)n + (2−D)N/2.")
    d_nc: int = Field(description="d_c − D(2g + B − 1).")
    genus: int
    broken_faces: int


class OrientabilityReport(BaseModel):
    orientable: bool
    witness: dict[str, int] | None = Field(default=None, description="Vertex → ±1 orientation.")
    checked: int = Field(description="Number of orientation assignments tried.")


# ---------------------------------------------------------------------------
# Graded algebras
# ---------------------------------------------------------------------------


class ValidationReport(BaseModel):
    group: list[int] = Field(description="Cyclic orders, 0 for Z.")
    valid: bool
    proper: bool
    violations: list[str] = []
    sampled: int = Field(description="Number of (i, j, k) triples checked.")
    exhaustive: bool
    even: list[list[int]] = Field(default=[], description="Γ⁰ (ε(i,i) = 1), finite groups only.")
    odd: list[list[int]] = Field(default=[], description="Γ¹ (ε(i,i) = −1), finite groups only.")


class DerivationClass(BaseModel):
    degree: list[int]
    kind: str  # "inner" | "outer"
    dimension: int
    generator: list[list[complex]] | None = Field(default=None, description="M with X = ad_M, inner case.")
    numeric_dimension: int = Field(description="Dimension of the solved derivation space in this degree.")


class BracketRow(BaseModel):
    name: str
    defect: float
    scale: float = Field(default=1.0, description="Factor applied to the printed right-hand side.")


class DerivationTableReport(BaseModel):
    trunc: int
    theta: float
    alpha: float
    rows: list[BracketRow]
    max_defect: float
    passed: bool


class CurvatureComponent(BaseModel):
    x: str
    y: str
    defect: float = Field(description="Interior |F_def − F_closed|.")
    norm: float = Field(description="Interior max |F| of the closed form.")


class CurvatureReport(BaseModel):
    trunc: int
    alpha: float
    components: list[CurvatureComponent]
    max_defect: float


class GaugeCovarianceReport(BaseModel):
    trunc: int
    alpha: float
    components: int
    max_defect: float = Field(description="Interior max |F(A^g) − g F(A) g*|.")
    unitarity: float = Field(description="max |g g* − 1|.")


class ActionPatternReport(BaseModel):
    alpha: float
    theta: float
    curvature_form: float = Field(description="Σ_{a,b} tr|F_ab|² relative to 𝒜 = −ξ.")
    action_form: float = Field(description="(1+2α)F² + α²{𝒜,𝒜}² + mass term, same reference.")
    defect: float
    mass_coefficient: float
    omega2: float
    kappa: float


class SuperactionReport(BaseModel):
    alpha: float
    superaction: float = Field(description="tr Σ_a |dΦ(ad_a)|².")
    scalar_form: float = Field(description="(1+2α)·∫φΔφ of the harmonic model at (Ω², μ²).")
    defect: float
    omega2: float
    mu2: float


# ---------------------------------------------------------------------------
# Acceptance suite
# ---------------------------------------------------------------------------


class AcceptanceOutcome(BaseModel):
    number: int
    key: str
    title: str
    passed: bool
    detail: str = Field(default="", description="Measured quantities, or the error that stopped the check.")
    seconds: float = Field(default=0.0, description="Wall time; printed, not written to artifacts.")
    budget: float = Field(description="Expected wall time in seconds.")
