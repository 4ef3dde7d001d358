from fractions import Fraction

import pytest

from percoplane.graph import GraphError
from percoplane.graphspec import graph_from_text, graph_to_text

from conftest import make_domino

GOOD = """
# a triangle with a boundary cycle
vertices:
  - {id: 0, x: 0, y: 0}
  - {id: 1, x: 1, y: 1}
  - {id: 2, x: 2, y: 0}
edges:
  - {id: 0, tail: 0, head: 1, oriented: false, p: 1/2}
  - {id: 1, tail: 1, head: 2, oriented: true, p: 0.3}
  - {id: 2, tail: 0, head: 2, oriented: false, p: 1}
cycle:
  order:
    - {v: 0, role: u-block}
    - {v: 1, role: a-block}
    - {v: 2, role: w-block}
  U: [0]
  W: [2]
"""


def test_parse_keeps_probabilities_exact():
    g = graph_from_text(GOOD)
    assert [e.p for e in g.edges] == [Fraction(1, 2), Fraction(3, 10), Fraction(1)]
    assert g.boundary is not None
    assert g.boundary.roles == ("u", "a", "w")


def test_round_trip(zoo_graph):
    g2 = graph_from_text(graph_to_text(zoo_graph))
    assert [(v.id, v.pos) for v in g2.vertices] == \
        [(v.id, v.pos) for v in zoo_graph.vertices]
    assert [(e.id, e.tail, e.head, e.oriented, e.p) for e in g2.edges] == \
        [(e.id, e.tail, e.head, e.oriented, e.p) for e in zoo_graph.edges]
    assert g2.boundary == zoo_graph.boundary


def test_missing_section_rejected():
    with pytest.raises(GraphError, match="edges"):
        graph_from_text("vertices:\n  - {id: 0, x: 0, y: 0}\n")


def test_malformed_yaml_rejected():
    with pytest.raises(GraphError, match="malformed"):
        graph_from_text("vertices: [}{")


def test_missing_field_rejected():
    with pytest.raises(GraphError, match="missing"):
        graph_from_text("""
vertices:
  - {id: 0, x: 0, y: 0}
  - {id: 1, x: 1, y: 0}
edges:
  - {id: 0, tail: 0, head: 1, p: 1}
""")


def test_fraction_strings_survive_round_trip():
    text = graph_to_text(make_domino(p="3/7"))
    assert "3/7" in text
    g = graph_from_text(text)
    assert {e.p for e in g.edges} == {Fraction(3, 7)}
