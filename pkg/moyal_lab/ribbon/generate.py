"""Random connected φ⁴ ribbon graphs for fuzzing."""

from __future__ import annotations

import numpy as np

from moyal_lab.errors import DomainError
from moyal_lab.ribbon.graph import RibbonGraph


def random_phi4_graph(n: int, rng: np.random.Generator, max_attempts: int = 1000) -> RibbonGraph:
    """A connected graph of n four-valent vertices with alternating corner signs."""
    if n < 1:
        raise DomainError(f"need at least one vertex, got {n}")
    vertices = {f"v{i}": tuple(f"v{i}h{j}" for j in range(4)) for i in range(n)}
    half_edges = [h for cycle in vertices.values() for h in cycle]
    for _ in range(max_attempts):
        lines = int(rng.integers(max(n - 1, 1), 2 * n + 1))
        chosen = list(rng.permutation(half_edges)[: 2 * lines])
        pairs: dict[str, str] = {}
        for a, b in zip(chosen[0::2], chosen[1::2]):
            pairs[str(a)], pairs[str(b)] = str(b), str(a)
        graph = RibbonGraph(vertices, pairs)
        if graph.is_connected():
            return graph
    raise DomainError(f"no connected graph with n={n} after {max_attempts} attempts")
