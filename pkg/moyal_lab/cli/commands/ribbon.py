"""ribbon — topology and power counting of a ribbon graph read from text."""

from __future__ import annotations

from pathlib import Path

from pydantic import Field

from moyal_lab.cli.export import CommandResult
from moyal_lab.cli.run_config import Parameters, RunConfig
from moyal_lab.errors import DomainError
from moyal_lab.ribbon.graph import read_ribbon_graph
from moyal_lab.ribbon.topology import degrees, orientable, topology


class RibbonParameters(Parameters):
    path: str = Field(alias="in", description="Graph file: 'v: h1+ h2- ...' vertex lines and 'e: a b' lines.")
    dim: int = Field(4, ge=2, description="Even space dimension used for power counting.")


class RibbonCommand:
    name = "ribbon"
    help = "Faces, broken faces, genus, divergence degrees and orientability"
    parameters = RibbonParameters

    def run(self, params: RibbonParameters, run: RunConfig) -> CommandResult:
        if not Path(params.path).exists():
            raise DomainError(f"graph file not found: {params.path}")
        graph = read_ribbon_graph(params.path)
        topo = topology(graph)
        deg = degrees(graph, params.dim)
        return CommandResult(payload={
            "F": topo.faces,
            "B": topo.broken_faces,
            "g": topo.genus,
            "d_c": deg.d_c,
            "d_nc": deg.d_nc,
            "topology": topo,
            "orientability": orientable(graph),
        })
