import numpy as np
import pytest

from moyal_lab.errors import DomainError, UnsupportedConfigurationError
from moyal_lab.ribbon.generate import random_phi4_graph
from moyal_lab.ribbon.graph import RibbonGraph, format_ribbon_graph, parse_ribbon_graph, read_ribbon_graph
from moyal_lab.ribbon.topology import degrees, faces, orientable, topology

BUBBLE = """
# two vertices joined by two lines
v1: a+ b- c+ d-
v2: e+ f- g+ h-
e: c f
e: d e
"""

PLANAR_TADPOLE = "v: a+ b- c+ d-\ne: a b\n"
NONPLANAR_TADPOLE = "v: a+ b- c+ d-\ne: a c\n"
TORUS_VACUUM = "v: a b c d\ne: a c\ne: b d\n"


def _summary(text: str) -> tuple[int, int, int, int, int]:
    graph = parse_ribbon_graph(text)
    topo = topology(graph)
    deg = degrees(graph, 4)
    return topo.faces, topo.broken_faces, topo.genus, deg.d_c, deg.d_nc


@pytest.mark.parametrize("text,expected", [
    (BUBBLE, (2, 1, 0, 0, 0)),
    (PLANAR_TADPOLE, (2, 1, 0, 2, 2)),
    (NONPLANAR_TADPOLE, (2, 2, 0, 2, -2)),
    (TORUS_VACUUM, (1, 0, 1, 4, 0)),
])
def test_known_graphs(text, expected):
    assert _summary(text) == expected


def test_faces_follow_rotation_after_involution():
    cycles = faces(parse_ribbon_graph(NONPLANAR_TADPOLE))
    assert sorted(sorted(c) for c in cycles) == [["a", "d"], ["b", "c"]]


def test_parse_defaults_alternating_signs():
    graph = parse_ribbon_graph(TORUS_VACUUM)
    assert [graph.signs[h] for h in "abcd"] == [1, -1, 1, -1]
    assert graph.externals == []
    assert graph.lines == [("a", "c"), ("b", "d")]


def test_format_reads_back(tmp_path):
    graph = parse_ribbon_graph(BUBBLE)
    path = tmp_path / "bubble.txt"
    path.write_text(format_ribbon_graph(graph))
    again = read_ribbon_graph(path)
    assert again.vertices == graph.vertices
    assert again.pairs == graph.pairs
    assert again.signs == graph.signs


@pytest.mark.parametrize("text", [
    "",
    "v: a+ b\n",
    "v: a b\nv: c d\n",
    "v: a b c\ne: a b\ne: a c\n",
    "v: a b\ne: a a\n",
    "v: a b\ne: a z\n",
    "v: a b\ne: a\n",
    "no colon here\n",
])
def test_malformed_graphs(text):
    with pytest.raises(DomainError):
        parse_ribbon_graph(text)


def test_half_edge_shared_between_vertices():
    with pytest.raises(DomainError):
        RibbonGraph({"v": ("a", "b"), "w": ("b", "c")}, {})


def test_disconnected_graph_has_no_topology():
    graph = parse_ribbon_graph("v: a b c d\nw: e f g h\n")
    assert not graph.is_connected()
    with pytest.raises(DomainError):
        topology(graph)


def test_power_counting_needs_quartic_vertices():
    with pytest.raises(DomainError):
        degrees(parse_ribbon_graph("v: a b c\ne: a b\n"))
    with pytest.raises(DomainError):
        degrees(parse_ribbon_graph(BUBBLE), dim=3)


def test_degrees_in_other_dimensions():
    deg = degrees(parse_ribbon_graph(BUBBLE), dim=2)
    assert deg.d_c == 2 - 2 * 2 + 0
    assert deg.d_nc == deg.d_c


@pytest.mark.parametrize("text,expected", [
    (BUBBLE, True),
    (PLANAR_TADPOLE, True),
    (NONPLANAR_TADPOLE, False),
])
def test_orientability(text, expected):
    report = orientable(parse_ribbon_graph(text))
    assert report.orientable is expected
    assert (report.witness is not None) is expected
    assert report.checked >= 1


def test_random_graphs_are_consistent(rng):
    for _ in range(100):
        n = int(rng.integers(1, 7))
        graph = random_phi4_graph(n, rng)
        topo = topology(graph)
        covered = sorted(h for cycle in topo.face_cycles for h in cycle)
        assert covered == sorted(graph.half_edges)
        assert topo.vertices - topo.internal_lines + topo.faces == 2 - 2 * topo.genus
        assert topo.broken_faces <= topo.faces
        assert (topo.broken_faces >= 1) == (topo.external_legs > 0)
        deg = degrees(graph)
        if topo.broken_faces >= 1:
            assert deg.d_nc <= deg.d_c


def test_orientation_search_is_bounded(rng):
    graph = random_phi4_graph(21, rng)
    with pytest.raises(UnsupportedConfigurationError):
        orientable(graph)
    with pytest.raises(DomainError):
        random_phi4_graph(0, rng)
