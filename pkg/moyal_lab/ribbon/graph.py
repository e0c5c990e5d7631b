"""
Ribbon graph container and its text format.

    # comment
    v1: a+ b- c+ d-
    v2: e+ f- g+ h-
    e: c f
    e: d e

Each vertex line gives the cyclic order of its half-edges with the
corner sign; signs alternate +,−,… when omitted.  Each `e:` line pairs
two half-edges into an internal line.  Unpaired half-edges are external
legs.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from moyal_lab.errors import DomainError

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"^(?P<name>[^\s+\-]+)(?P<sign>[+\-]?)$")


@dataclass(frozen=True)
class RibbonGraph:
    vertices: dict[str, tuple[str, ...]]
    pairs: dict[str, str]
    signs: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        seen: dict[str, str] = {}
        for v, cycle in self.vertices.items():
            if not cycle:
                raise DomainError(f"vertex {v!r} has no half-edges")
            for h in cycle:
                if h in seen:
                    raise DomainError(f"half-edge {h!r} appears at both {seen[h]!r} and {v!r}")
                seen[h] = v
        for a, b in self.pairs.items():
            if a == b:
                raise DomainError(f"half-edge {a!r} is paired with itself")
            if self.pairs.get(b) != a:
                raise DomainError(f"pairing is not an involution at {a!r} ↔ {b!r}")
            if a not in seen or b not in seen:
                raise DomainError(f"line {a!r}–{b!r} uses an unknown half-edge")
        if not self.signs:
            object.__setattr__(self, "signs", {
                h: 1 if i % 2 == 0 else -1 for cycle in self.vertices.values() for i, h in enumerate(cycle)
            })
        elif set(self.signs) != set(seen):
            raise DomainError("corner signs must cover every half-edge exactly")

    @property
    def half_edges(self) -> list[str]:
        return [h for cycle in self.vertices.values() for h in cycle]

    @property
    def vertex_of(self) -> dict[str, str]:
        return {h: v for v, cycle in self.vertices.items() for h in cycle}

    @property
    def externals(self) -> list[str]:
        return [h for h in self.half_edges if h not in self.pairs]

    @property
    def lines(self) -> list[tuple[str, str]]:
        return [(a, b) for a, b in self.pairs.items() if a < b]

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def internal_count(self) -> int:
        return len(self.pairs) // 2

    @property
    def external_count(self) -> int:
        return len(self.externals)

    def rotation(self) -> dict[str, str]:
        """σ: next half-edge in the cyclic order of its vertex."""
        out = {}
        for cycle in self.vertices.values():
            for i, h in enumerate(cycle):
                out[h] = cycle[(i + 1) % len(cycle)]
        return out

    def involution(self) -> dict[str, str]:
        """α: the other end of the line, external legs fixed."""
        return {h: self.pairs.get(h, h) for h in self.half_edges}

    def is_connected(self) -> bool:
        vertex_of = self.vertex_of
        adjacency: dict[str, set[str]] = {v: set() for v in self.vertices}
        for a, b in self.lines:
            adjacency[vertex_of[a]].add(vertex_of[b])
            adjacency[vertex_of[b]].add(vertex_of[a])
        start = next(iter(self.vertices))
        stack, reached = [start], {start}
        while stack:
            for nxt in adjacency[stack.pop()]:
                if nxt not in reached:
                    reached.add(nxt)
                    stack.append(nxt)
        return len(reached) == len(self.vertices)


def parse_ribbon_graph(text: str) -> RibbonGraph:
    vertices: dict[str, tuple[str, ...]] = {}
    signs: dict[str, int] = {}
    pairs: dict[str, str] = {}
    explicit = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise DomainError(f"line {lineno}: expected 'name: ...', got {raw!r}")
        head, body = (part.strip() for part in line.split(":", 1))
        tokens = body.split()
        if head == "e":
            if len(tokens) != 2:
                raise DomainError(f"line {lineno}: a line pairs exactly two half-edges")
            a, b = tokens
            if a in pairs or b in pairs:
                raise DomainError(f"line {lineno}: half-edge already paired")
            pairs[a], pairs[b] = b, a
            continue
        if head in vertices:
            raise DomainError(f"line {lineno}: duplicate vertex {head!r}")
        cycle = []
        for i, tok in enumerate(tokens):
            m = _TOKEN.match(tok)
            if m is None:
                raise DomainError(f"line {lineno}: bad half-edge token {tok!r}")
            has_sign = bool(m["sign"])
            if explicit is None:
                explicit = has_sign
            elif explicit != has_sign:
                raise DomainError(f"line {lineno}: corner signs must be given for all half-edges or none")
            cycle.append(m["name"])
            signs[m["name"]] = (1 if m["sign"] == "+" else -1) if has_sign else (1 if i % 2 == 0 else -1)
        vertices[head] = tuple(cycle)
    if not vertices:
        raise DomainError("graph has no vertices")
    return RibbonGraph(vertices, pairs, signs)


def read_ribbon_graph(path: str | Path) -> RibbonGraph:
    return parse_ribbon_graph(Path(path).read_text())


def format_ribbon_graph(graph: RibbonGraph) -> str:
    lines = [
        f"{v}: " + " ".join(f"{h}{'+' if graph.signs[h] > 0 else '-'}" for h in cycle)
        for v, cycle in graph.vertices.items()
    ]
    lines += [f"e: {a} {b}" for a, b in graph.lines]
    return "\n".join(lines) + "\n"
