import pytest
from hypothesis import given, settings, strategies as st

from src.core.services.tree import (
    Arc,
    P,
    Part,
    Q,
    TreeParams,
    Vertex,
    count_vertices,
    count_vertices_recursive,
)
from src.shared.exceptions import InputError, ResourceError
from tests.conftest import make_tree


def test_vertex_count_small_tree():
    params = TreeParams(3, 2, 2)
    assert count_vertices(params) == 9
    assert count_vertices_recursive(params) == 9
    assert len(make_tree(3, 2, 2)) == 9


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), st.integers(1, 4))
def test_vertex_count_closed_form(m, n, depth):
    params = TreeParams(m, n, depth)
    assert count_vertices(params) == count_vertices_recursive(params) == len(make_tree(m, n, depth))


def test_parts_alternate():
    assert P.part is Part.X
    assert Q.part is Part.Y
    assert Vertex(0, (0,)).part is Part.Y
    assert Vertex(1, (0,)).part is Part.X
    assert Vertex(1, (0, 1)).part is Part.Y


def test_address_parse():
    v = Vertex.parse("q.0.1")
    assert v == Vertex(1, (0, 1))
    assert v.address == "q.0.1"
    assert Vertex.parse(" p ") == P


@pytest.mark.parametrize("address", ["r.1", "p.x", "p.-1", ""])
def test_address_parse_rejects(address):
    with pytest.raises(InputError):
        Vertex.parse(address)


def test_params_validation():
    with pytest.raises(InputError):
        TreeParams(1, 2, 3)
    with pytest.raises(InputError):
        TreeParams(3, 3, 0)


def test_tree_size_bound(monkeypatch):
    import config

    monkeypatch.setattr(config.settings, "MAX_TREE_VERTICES", 10)
    with pytest.raises(ResourceError):
        make_tree(3, 3, 3)


def test_neighbours_and_leaves():
    tree = make_tree(3, 2, 2)
    assert tree.neighbours(P) == [Q, Vertex(0, (0,)), Vertex(0, (1,))]
    assert tree.neighbours(Q) == [P, Vertex(1, (0,))]
    assert tree.valency(P) == 3 and tree.valency(Q) == 2
    leaf = Vertex(0, (1, 0))
    assert leaf in tree and tree.is_leaf(leaf)
    assert tree.neighbours(leaf) == [Vertex(0, (1,))]
    assert Vertex(0, (1, 0, 0)) not in tree


def test_distance_and_path():
    tree = make_tree(3, 3, 3)
    a, b = Vertex.parse("p.0"), Vertex.parse("q.0")
    assert tree.distance(a, b) == 3
    assert tree.path(a, b) == [a, P, Q, b]

    c, d = Vertex.parse("p.0.1"), Vertex.parse("p.1.0")
    assert tree.distance(c, d) == 4
    assert tree.path(c, d) == [c, Vertex.parse("p.0"), P, Vertex.parse("p.1"), d]
    assert tree.distance_path(c, c) == (0, [c])


def test_distance_path_rejects_outside_vertex():
    tree = make_tree(2, 2, 2)
    with pytest.raises(InputError):
        tree.distance_path(P, Vertex.parse("p.0.0.0"))


def test_ball_and_sphere():
    tree = make_tree(3, 2, 3)
    sphere = tree.sphere(Q, 2)
    assert sphere.vertices == {
        Vertex.parse("p.0"),
        Vertex.parse("p.1"),
        Vertex.parse("q.0.0"),
        Vertex.parse("q.0.1"),
    }
    assert not sphere.clipped
    assert tree.sphere(Q, 4).clipped
    ball = tree.ball(Q, 1)
    assert ball == [Q, P, Vertex.parse("q.0")]


def test_half_trees():
    tree = make_tree(3, 2, 3)
    assert tree.in_half_tree(Arc(P, Q), Vertex.parse("p.0"))
    assert not tree.in_half_tree(Arc(P, Q), Vertex.parse("q.0"))
    assert tree.in_half_tree(Arc(Q, P), Vertex.parse("q.0"))

    below = tree.half_tree(Arc(Vertex.parse("p.0"), P)).vertices
    assert below == {Vertex.parse(a) for a in ("p.0", "p.0.0", "p.0.0.0", "p.0.0.1")}
    with pytest.raises(InputError):
        tree.half_tree(Arc(P, Vertex.parse("p.0.0")))


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_half_trees_split_the_vertices(data):
    tree = make_tree(3, 2, 3)
    u, w = data.draw(st.sampled_from(tree.edges()))
    side = tree.half_tree(Arc(u, w)).vertices
    other = tree.half_tree(Arc(w, u)).vertices
    assert side | other == set(tree.vertices)
    assert not side & other


def test_inner_vertices():
    tree = make_tree(2, 3, 4)
    inner = tree.inner_vertices(1)
    assert all(v.depth <= 3 for v in inner)
    assert len(inner) == len(tree) - sum(1 for v in tree if tree.is_leaf(v))
