import pytest

from src.core.services.approx import (
    edge_orbit_bruteforce,
    finite_approx,
    nontrivial_fixers,
    orbit_bruteforce,
    orbit_partition,
    stabiliser_generators,
    suborbit_oracle,
)
from src.core.services.boxgroup import vertex_orbits
from src.core.services.colouring import canonical_colouring, random_colouring
from src.core.services.tree import P, Part, Q, Vertex
from src.shared.exceptions import InputError
from src.shared.utils.group_spec import parse_group_spec
from tests.conftest import ACCEPTANCE_PAIRS, make_tree, transposition_group


@pytest.fixture
def colouring3():
    return canonical_colouring(make_tree(3, 2, 3))


def test_generators_are_members(colouring3, S3, S2):
    approx = finite_approx(S3, S2, colouring3, 1)
    assert approx.generators
    assert approx.all_members()
    assert len(approx.moves) == 2 * len(approx.generators)


def test_finite_approx_checks_degrees(colouring3, S2):
    with pytest.raises(InputError):
        finite_approx(S2, S2, colouring3, 1)


def test_orbit_partition_has_one_orbit_per_part(colouring3, S3, S2):
    approx = finite_approx(S3, S2, colouring3, 1)
    labels = orbit_partition(approx)
    assert set(labels) == approx.inner
    assert len(set(labels.values())) == 2
    assert labels[P] != labels[Q]
    assert all(labels[v] == labels[P] for v in labels if v.part is Part.X)


def test_orbit_bruteforce_from_q(colouring3, S3, S2):
    approx = finite_approx(S3, S2, colouring3, 1)
    orbit = orbit_bruteforce(approx, Q)
    assert {Vertex.parse("p.0"), Vertex.parse("p.1")} <= orbit
    assert all(v.part is Part.Y for v in orbit)


def test_edge_orbit_contains_start(colouring3, S3, S2):
    approx = finite_approx(S3, S2, colouring3, 1)
    orbit = edge_orbit_bruteforce(approx, (P, Q))
    assert frozenset({P, Q}) in orbit
    assert frozenset({P, Vertex.parse("p.0")}) in orbit


def test_suborbit_oracle(colouring3, S3, S2):
    assert suborbit_oracle(S3, S2, colouring3, Q, 1) == [4]
    with pytest.raises(InputError):
        suborbit_oracle(S3, S2, colouring3, Q, 2)


def test_nontrivial_fixers(colouring32, S3, S2):
    line = canonical_colouring(make_tree(2, 2, 4))
    assert nontrivial_fixers(S2, S2, line, [Q, Vertex.parse("p.0")]) == 0
    assert nontrivial_fixers(S3, S2, colouring32, [Q, Vertex.parse("p.0")]) > 0
    with pytest.raises(InputError):
        nontrivial_fixers(S3, S2, colouring32, [])


@pytest.mark.parametrize("pair", sorted(ACCEPTANCE_PAIRS))
def test_orbit_partition_matches_colour_criterion(pair):
    M, N = (parse_group_spec(spec) for spec in ACCEPTANCE_PAIRS[pair])
    c = random_colouring(make_tree(M.degree, N.degree, 4), M, N, seed=5)
    approx = finite_approx(M, N, c, 1)
    found = orbit_partition(approx)
    predicted = vertex_orbits(c, M, N)
    inner = sorted(approx.inner)
    for u in inner:
        for v in inner:
            assert (found[u] == found[v]) == (predicted[u] == predicted[v]), (u, v)


def test_intransitive_local_group_keeps_one_orbit_per_in_colour_class():
    M, N = transposition_group(3), parse_group_spec("2; (1 2)")
    c = canonical_colouring(make_tree(3, 2, 4))
    approx = finite_approx(M, N, c, 1)
    labels = orbit_partition(approx)
    assert len({labels[v] for v in approx.inner if v.part is Part.X}) == 1
    assert len({labels[v] for v in approx.inner if v.part is Part.Y}) == 2


def test_stabiliser_generators_fix_the_centre(colouring32, S3, S2):
    generators = stabiliser_generators(S3, S2, colouring32, Q, 4)
    assert generators
    assert all(g.fixes(Q) for g in generators)
    assert all(g.is_member(S3, S2) for g in generators)


def test_suborbit_oracle_at_distance_four(colouring32, S3, S2):
    assert suborbit_oracle(S3, S2, colouring32, Q, 2) == [8]
    assert suborbit_oracle(S3, S2, colouring32, Q, 1) == [4]
