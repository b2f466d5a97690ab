import pytest
from hypothesis import given, settings, strategies as st

from src.core.services.colouring import canonical_colouring, random_colouring
from src.core.services.permgroup import Perm, stabiliser, symmetric, trivial
from src.core.services.portrait import (
    ColourPerm,
    Portrait,
    compose,
    enumerate_members,
    from_vertex_map,
    half_tree_surgery,
    identity,
    invert,
    lift_map,
    path_decompose,
    product,
    random_member,
    random_tree_automorphism,
    rigid_element,
)
from src.core.services.tree import Arc, P, Q, Vertex
from src.shared.exceptions import DomainError, InputError, PreconditionError
from tests.conftest import make_tree

S3_ELEMENTS = sorted(symmetric(3).elements())


def test_identity_portrait(colouring32, S3, S2):
    g = identity(colouring32, P)
    assert g.is_member(S3, S2)
    assert all(g.fixes(v) for v in g.images)
    assert g.is_compatible()


def test_domain_depth_and_serialisation(colouring32):
    g = identity(colouring32, P, radius=1)
    assert g.domain_depth == 1
    out = g.to_out()
    assert out.base == "p" and out.base_image == "p"
    assert set(out.local) == {"p", "q", "p.0", "p.1"}
    assert Portrait.from_out(colouring32, out) == g


def test_evaluate_outside_domain(colouring32):
    g = identity(colouring32, P, radius=0)
    assert g.evaluate(Q) == Q
    with pytest.raises(DomainError):
        g.evaluate(Vertex.parse("p.0.0"))
    assert g.maybe(Vertex.parse("p.0.0")) is None


def test_portrait_domain_checks(colouring32):
    with pytest.raises(InputError):
        Portrait(colouring32, P, Q, {P: Perm.identity(3)})
    with pytest.raises(DomainError):
        Portrait(colouring32, P, P, {Q: Perm.identity(2)})
    with pytest.raises(DomainError):
        Portrait(colouring32, P, P, {P: Perm.identity(3), Vertex.parse("p.0.0"): Perm.identity(3)})


@pytest.mark.parametrize("mu", S3_ELEMENTS, ids=str)
def test_rigid_element_fixes_its_vertex(colouring32, S3, S2, mu):
    g = rigid_element(mu, P, colouring32)
    assert g.fixes(P)
    assert g.local[P] == mu.inverse()
    assert g.is_member(S3, S2)


def test_rigid_elements_compose_in_reverse(colouring32):
    for mu in S3_ELEMENTS:
        for tau in S3_ELEMENTS:
            composite = compose(rigid_element(mu, P, colouring32), rigid_element(tau, P, colouring32))
            target = rigid_element(tau * mu, P, colouring32)
            assert composite.local[P] == target.local[P]
            assert composite.agrees_with(target)


def test_rigid_element_degree_mismatch(colouring32):
    with pytest.raises(PreconditionError):
        rigid_element(Perm.from_cycles(2, [(0, 1)]), P, colouring32)


def test_rigid_element_group_check(colouring32):
    swap = Perm.from_cycles(3, [(0, 1)])
    with pytest.raises(PreconditionError):
        rigid_element(swap, P, colouring32, group=trivial(3))


def test_compose_with_inverse_is_identity(colouring32, S3, S2):
    g = random_member(S3, S2, colouring32, Q, seed=5)
    h = compose(g, invert(g))
    assert h.base == h.base_image
    assert all(sigma.is_identity for sigma in h.local.values())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_random_members_are_members(seed):
    tree = make_tree(3, 2, 4)
    c = random_colouring(tree, seed=seed % 17)
    g = random_member(symmetric(3), symmetric(2), c, Q, seed=seed)
    assert g.is_member(symmetric(3), symmetric(2))
    assert g.is_compatible()
    assert g.fixes(Q)


def test_random_member_respects_pinned_vertices(colouring32, S3, S2, tree32):
    path = tree32.path(Q, Vertex.parse("p.0"))
    for seed in range(10):
        g = random_member(S3, S2, colouring32, Q, seed=seed, fixed=path)
        assert g.is_identity_on(path)


def test_random_member_pinned_base_must_stay(colouring32, S3, S2):
    with pytest.raises(PreconditionError):
        random_member(S3, S2, colouring32, Q, base_image=Vertex.parse("p.0"), fixed=[Q])


def test_enumerate_member_counts(S3, S2):
    c = canonical_colouring(make_tree(3, 2, 3))
    assert sum(1 for _ in enumerate_members(S3, S2, c, P, radius=0)) == 6
    assert sum(1 for _ in enumerate_members(S3, S2, c, P, radius=1)) == 6
    assert sum(1 for _ in enumerate_members(S3, S2, c, P, radius=2)) == 48
    assert sum(1 for _ in enumerate_members(S3, S2, c, Q, radius=1)) == 8
    assert sum(1 for _ in enumerate_members(S3, S2, c, P, radius=1, fixed=[Q])) == 2
    assert sum(1 for _ in enumerate_members(S3, S2, c, Q, radius=1, fixed=[P])) == 4


def test_enumerated_members_are_distinct_members(S3, S2):
    c = canonical_colouring(make_tree(3, 2, 3))
    members = list(enumerate_members(S3, S2, c, Q, radius=1))
    assert all(g.is_member(S3, S2) for g in members)
    keys = {tuple(sorted(g.local.items())) for g in members}
    assert len(keys) == len(members)


def test_enumeration_must_stay_inside(S3, S2):
    c = canonical_colouring(make_tree(3, 2, 2))
    with pytest.raises(DomainError):
        list(enumerate_members(S3, S2, c, P, radius=2))


def test_lift_map_satisfies_colour_equation(colouring32, shuffled32, tree32):
    c, c2 = colouring32, shuffled32
    swap = Perm.from_cycles(2, [(0, 1)])
    y = Perm.identity(2) if c2.in_colour(P) == c.in_colour(P) else swap
    sigma = ColourPerm(Perm.identity(3), y)
    mapping = lift_map(P, P, sigma, c, c2)
    assert mapping == lift_map(P, P, sigma, c, c2, method="recursive")
    assert mapping[P] == P
    for w, gw in mapping.items():
        if tree32.is_leaf(w) or tree32.is_leaf(gw):
            continue
        for u in tree32.neighbours(w):
            if u in mapping:
                assert c.colour(w, u) == sigma.on(w.part).images[c2.colour(gw, mapping[u])]


def test_lift_map_rejects_mismatched_in_colours(colouring32):
    c = colouring32
    swap = Perm.from_cycles(2, [(0, 1)])
    sigma = ColourPerm(Perm.identity(3), swap)
    with pytest.raises(PreconditionError):
        lift_map(P, P, sigma, c, c)
    with pytest.raises(PreconditionError):
        lift_map(P, Q, ColourPerm.identity(3, 2), c, c)


def test_half_tree_surgery(colouring32, S3, S2, tree32):
    back = colouring32.colour(P, Q)
    s = stabiliser(S3, back).generators[0]
    h = rigid_element(s, P, colouring32)
    arc = Arc(P, Q)
    g = half_tree_surgery(h, arc, S3, S2)
    assert g.is_member(S3, S2)
    assert g.is_identity_on(tree32.half_tree(Arc(Q, P)).vertices)
    side = [
        x
        for x in tree32.half_tree(arc).vertices
        if h.maybe(x) is not None and g.maybe(x) is not None
    ]
    assert side and g.agrees_with(h, side)
    assert not g.is_identity_on(side)


def test_half_tree_surgery_needs_fixed_ends(colouring32):
    mover = next(mu for mu in S3_ELEMENTS if mu.images[colouring32.colour(P, Q)] != 0)
    h = rigid_element(mover, P, colouring32)
    with pytest.raises(PreconditionError):
        half_tree_surgery(h, Arc(P, Q))


def test_path_decomposition(colouring32, S3, S2, tree32):
    path = tree32.path(Q, Vertex.parse("p.0"))
    for seed in range(5):
        g = random_member(S3, S2, colouring32, Q, seed=seed, fixed=path)
        factors = path_decompose(g, path, S3, S2)
        assert len(factors) == len(path)
        assert all(f.is_member(S3, S2) for f in factors)
        assert product(factors).agrees_with(g)


def test_path_decomposition_needs_fixed_path(colouring32, S3, S2, tree32):
    mover = next(mu for mu in sorted(S2.elements()) if not mu.is_identity)
    g = rigid_element(mover, Q, colouring32)
    with pytest.raises(PreconditionError):
        path_decompose(g, [Q, P], S3, S2)


def test_random_tree_automorphism_fixes_root_edge(colouring32):
    g = random_tree_automorphism(colouring32, seed=4)
    assert g.fixes(P) and g.fixes(Q)
    assert from_vertex_map(colouring32, P, g.images).agrees_with(g)
