from src.core.services.colouring import canonical_colouring
from src.core.services.permgroup import FiniteGraph
from src.shared.utils.dot_format import graph_to_dot, tree_to_dot
from tests.conftest import make_tree


def test_tree_to_dot():
    tree = make_tree(2, 2, 1)
    text = tree_to_dot(tree, canonical_colouring(tree))
    lines = text.splitlines()
    assert lines[0] == 'graph "tree_2_2_1" {'
    assert lines[-1] == "}"
    assert '  "p" [shape=circle];' in lines
    assert '  "q" [shape=box];' in lines
    assert '  "p" -- "q" [label="0/0"];' in lines
    assert '  "p" -- "p.0" [label="1/-"];' in lines
    assert '  "q.0" -- "q" [label="-/1"];' in lines


def test_tree_to_dot_without_colouring():
    text = tree_to_dot(make_tree(2, 2, 1))
    assert "label" not in text
    assert text == tree_to_dot(make_tree(2, 2, 1))


def test_graph_to_dot():
    graph = FiniteGraph((3, 1, 2), frozenset({frozenset({2, 1})}))
    assert graph_to_dot(graph, "g") == 'graph "g" {\n  "1";\n  "2";\n  "3";\n  "1" -- "2";\n}\n'
