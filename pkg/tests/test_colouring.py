import pytest
from hypothesis import given, settings, strategies as st

from src.core.services.colouring import (
    LegalColouring,
    canonical_colouring,
    complete_colouring,
    random_colouring,
    validate,
)
from src.core.services.permgroup import symmetric
from src.core.services.tree import Arc, P, Q, Vertex
from src.shared.exceptions import InputError
from tests.conftest import make_tree


def _assert_legal(c: LegalColouring) -> None:
    tree = c.tree
    for v in tree.vertices:
        if tree.is_leaf(v):
            assert c.out_colours(v) == {}
            continue
        assert sorted(c.out_colours(v).values()) == list(range(tree.valency(v)))
    for v in tree.vertices:
        for w in tree.neighbours(v):
            if not tree.is_leaf(w):
                assert c.colour(w, v) == c.in_colour(v)


def test_canonical_colouring_is_legal(colouring32):
    assert validate(colouring32).is_valid
    _assert_legal(colouring32)
    assert colouring32.colour(P, Q) == 0
    assert colouring32.colour(Q, P) == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 4), st.integers(2, 4))
def test_random_colourings_are_legal(seed, m, n):
    c = random_colouring(make_tree(m, n, 3), seed=seed)
    assert validate(c).is_valid
    _assert_legal(c)


def test_random_colouring_is_reproducible(tree32):
    assert random_colouring(tree32, seed=11) == random_colouring(tree32, seed=11)


def test_neighbour_lookup(colouring32, tree32):
    c = colouring32
    assert c.neighbour(P, c.colour(P, Q)) == Q
    leaf = next(v for v in tree32.vertices if tree32.is_leaf(v))
    assert c.neighbour(leaf, 0) is None
    with pytest.raises(InputError):
        c.colour(leaf, tree32.parent(leaf))


def test_repeated_colour_is_reported(colouring32, tree32):
    colours = dict(colouring32.arc_colour)
    colours[Arc(P, Q)] = colours[Arc(P, Vertex.parse("p.0"))]
    check = validate(LegalColouring(tree32, colours))
    assert not check.is_valid
    assert check.violated_condition == 1
    assert check.vertex == "p"
    assert any("entering q" in message for message in check.blocking_errors)


def test_out_of_range_colour_is_reported(colouring32, tree32):
    colours = dict(colouring32.arc_colour)
    colours[Arc(Q, P)] = 5
    check = validate(LegalColouring(tree32, colours))
    assert not check.is_valid
    assert check.violated_condition == 2
    assert check.vertex == "q"


def test_missing_arc_is_reported(colouring32, tree32):
    colours = dict(colouring32.arc_colour)
    del colours[Arc(Q, Vertex.parse("q.0"))]
    check = validate(LegalColouring(tree32, colours))
    assert not check.is_valid
    assert check.violated_condition == 2


def test_complete_colouring_extends_root_stars():
    tree = make_tree(3, 2, 3)
    partial = {
        Arc(P, Q): 1,
        Arc(P, Vertex.parse("p.0")): 0,
        Arc(P, Vertex.parse("p.1")): 2,
        Arc(Q, P): 1,
        Arc(Q, Vertex.parse("q.0")): 0,
    }
    c = complete_colouring(tree, partial)
    assert validate(c).is_valid
    assert c.colour(P, Q) == 1
    assert c.colour(Vertex.parse("p.0"), P) == 1
    assert c.in_colour(Vertex.parse("p.1")) == 2


def test_degree_mismatch(tree32):
    with pytest.raises(InputError):
        canonical_colouring(tree32, symmetric(2), symmetric(2))


def test_serialised_form(colouring32, tree32):
    data = colouring32.to_out()
    assert (data.m, data.n, data.depth) == (3, 2, 4)
    assert data.arcs["p->q"] == 0
    assert LegalColouring.from_out(tree32, data) == colouring32
    with pytest.raises(InputError):
        LegalColouring.from_out(make_tree(3, 2, 3), data)
