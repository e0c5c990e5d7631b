"""
Topology and power counting of ribbon graphs.

Faces are the cycles of φ = σ∘α, with σ the vertex rotation and α the
line involution (external legs are fixed points).  A face is broken when
it passes at least one external leg.  The Euler characteristic
n − I + F = 2 − 2g gives the genus.
"""

from __future__ import annotations

import itertools
import logging

from moyal_lab.errors import DomainError, UnsupportedConfigurationError
from moyal_lab.models import DegreesReport, OrientabilityReport, TopologyReport
from moyal_lab.ribbon.graph import RibbonGraph

logger = logging.getLogger(__name__)

MAX_ORIENTATION_VERTICES = 20


def faces(g: RibbonGraph) -> list[list[str]]:
    sigma = g.rotation()
    alpha = g.involution()
    remaining = list(g.half_edges)
    visited: set[str] = set()
    out: list[list[str]] = []
    for start in remaining:
        if start in visited:
            continue
        cycle = []
        h = start
        while h not in visited:
            visited.add(h)
            cycle.append(h)
            h = sigma[alpha[h]]
        out.append(cycle)
    return out


def topology(g: RibbonGraph) -> TopologyReport:
    if not g.is_connected():
        raise DomainError("ribbon graph is disconnected")
    cycles = faces(g)
    external = set(g.externals)
    broken = sum(1 for c in cycles if external.intersection(c))
    chi = g.n - g.internal_count + len(cycles)
    twice_genus = 2 - chi
    if twice_genus < 0 or twice_genus % 2:
        raise DomainError(f"Euler characteristic {chi} does not give a genus")
    return TopologyReport(
        vertices=g.n,
        internal_lines=g.internal_count,
        external_legs=g.external_count,
        faces=len(cycles),
        broken_faces=broken,
        genus=twice_genus // 2,
        face_cycles=cycles,
    )


def degrees(g: RibbonGraph, dim: int = 4) -> DegreesReport:
    """Superficial degrees of divergence, commutative and Moyal."""
    bad = [v for v, cycle in g.vertices.items() if len(cycle) != 4]
    if bad:
        raise DomainError(f"power counting needs 4-valent vertices; offending: {bad}")
    if dim < 2 or dim % 2:
        raise DomainError(f"dimension must be even and >= 2, got {dim}")
    topo = topology(g)
    n, N = topo.vertices, topo.external_legs
    if topo.internal_lines != 2 * n - N // 2:
        raise DomainError("line count violates I = 2n − N/2")
    d_c = dim + (dim - 4) * n + (2 - dim) * N // 2
    d_nc = d_c - dim * (2 * topo.genus + topo.broken_faces - 1)
    return DegreesReport(dim=dim, d_c=d_c, d_nc=d_nc, genus=topo.genus, broken_faces=topo.broken_faces)


def orientable(g: RibbonGraph) -> OrientabilityReport:
    """Search vertex orientations so that every line joins corners of opposite sign."""
    names = list(g.vertices)
    if len(names) > MAX_ORIENTATION_VERTICES:
        raise UnsupportedConfigurationError(
            f"orientation search is limited to {MAX_ORIENTATION_VERTICES} vertices, got {len(names)}"
        )
    vertex_of = g.vertex_of
    lines = g.lines
    checked = 0
    # a global flip maps solutions to solutions, so the first vertex stays +1
    for rest in itertools.product((1, -1), repeat=len(names) - 1):
        checked += 1
        orient = dict(zip(names, (1, *rest)))
        if all(orient[vertex_of[a]] * g.signs[a] * orient[vertex_of[b]] * g.signs[b] < 0 for a, b in lines):
            logger.debug("orientable after %d assignments", checked)
            return OrientabilityReport(orientable=True, witness=orient, checked=checked)
    return OrientabilityReport(orientable=False, witness=None, checked=checked)
