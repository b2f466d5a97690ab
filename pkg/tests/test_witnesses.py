import pytest

from src.core.services.approx import finite_approx
from src.core.services.colouring import canonical_colouring
from src.core.services.permgroup import Perm, PermGroup
from src.core.services.portrait import ColourPerm, from_colour_pair, identity
from src.core.services.tree import P, Part, Q, Vertex
from src.core.services.witnesses import (
    BLOCK_SYSTEM,
    DELEGATED,
    FIXING_ELEMENT,
    INVARIANT_PARTITION,
    Witness,
    check_fixing_witness,
    check_partition_witness,
    distance_two_graph,
    imprimitivity_witness,
    nondiscreteness_witness,
    primitivity_certificate,
)
from src.shared.exceptions import DomainError, InputError, NoWitnessError, PreconditionError
from tests.conftest import make_tree, transposition_group

DIHEDRAL_4 = PermGroup(4, (Perm.from_cycles(4, [(0, 1, 2, 3)]), Perm.from_cycles(4, [(0, 2)])))


def test_no_imprimitivity_witness_for_primitive_product(colouring32, S3, S2):
    with pytest.raises(PreconditionError):
        imprimitivity_witness(S3, S2, colouring32, 1)


def test_intransitive_m_gives_orbit_partition(S2):
    M = transposition_group(3)
    c = canonical_colouring(make_tree(3, 2, 4))
    witness = imprimitivity_witness(M, S2, c, 1)
    assert witness.kind == INVARIANT_PARTITION
    assert len(witness.partition.blocks()) == 2
    assert check_partition_witness(witness, finite_approx(M, S2, c, 1))


def test_regular_m_of_degree_two_gives_bipartition(S2, S3):
    c = canonical_colouring(make_tree(2, 3, 4))
    witness = imprimitivity_witness(S2, S3, c, 1)
    assert witness.kind == INVARIANT_PARTITION
    cells = witness.partition.blocks()
    assert len(cells) == 2
    assert Q in cells[0] or Q in cells[1]
    assert check_partition_witness(witness, finite_approx(S2, S3, c, 1))


def test_imprimitive_m_gives_block_system(S2):
    c = canonical_colouring(make_tree(4, 2, 3))
    witness = imprimitivity_witness(DIHEDRAL_4, S2, c, 1)
    assert witness.kind == BLOCK_SYSTEM
    assert witness.note == "colours 0 and 2 share a block of M"
    assert check_partition_witness(witness, finite_approx(DIHEDRAL_4, S2, c, 1))


def test_regular_m_of_larger_degree_is_delegated(C3, S2):
    c = canonical_colouring(make_tree(3, 2, 3))
    witness = imprimitivity_witness(C3, S2, c, 1)
    assert witness.kind == DELEGATED
    assert witness.partition is None
    assert not check_partition_witness(witness, finite_approx(C3, S2, c, 1))


def test_witness_serialisation(S2):
    M = transposition_group(3)
    c = canonical_colouring(make_tree(3, 2, 3))
    out = imprimitivity_witness(M, S2, c, 1).to_out("W1", True)
    assert out.ref == "W1" and out.verified
    assert sum(len(cell) for cell in out.cells) == sum(
        1 for v in c.tree.inner_vertices(1) if v.part is Part.Y
    )


def test_certificate_for_distant_pair(colouring32, S3, S2):
    far = Vertex.parse("p.1.0.1")
    certificate = primitivity_certificate(S3, S2, colouring32, Q, far, 1)
    kinds = [step.kind for step in certificate.steps]
    assert kinds == ["stabiliser-element", "half-tree-surgery", "local-universality", "spread"]
    assert certificate.verified
    out = certificate.to_out("C1")
    assert out.pair == ["q", "p.1.0.1"]
    assert out.steps[0].element is not None


def test_certificate_for_adjacent_pair(colouring32, S3, S2):
    certificate = primitivity_certificate(S3, S2, colouring32, Q, Vertex.parse("p.0"), 1)
    assert [step.kind for step in certificate.steps] == ["local-universality", "spread"]
    assert certificate.verified


def test_certificate_preconditions(colouring32, S3, S2):
    c = canonical_colouring(make_tree(2, 2, 4))
    with pytest.raises(PreconditionError):
        primitivity_certificate(S2, S2, c, Q, Vertex.parse("p.0"), 1)
    with pytest.raises(InputError):
        primitivity_certificate(S3, S2, colouring32, Q, Q, 1)
    with pytest.raises(InputError):
        primitivity_certificate(S3, S2, colouring32, Q, P, 1)


def test_distance_two_graph_is_connected(colouring32):
    tree = colouring32.tree
    inner = [v for v in tree.inner_vertices(1) if v.part is Part.Y]
    graph = distance_two_graph(tree, inner)
    assert graph.is_connected()
    assert frozenset({Q, Vertex.parse("p.0")}) in graph.edges


def test_nondiscreteness_witness(colouring32, S3, S2):
    witness = nondiscreteness_witness(S3, S2, colouring32, [Q])
    assert witness.kind == FIXING_ELEMENT
    assert witness.fixed == {Q}
    assert check_fixing_witness(witness, S3, S2)
    assert witness.element.fixes(Q)


def test_nondiscreteness_witness_for_larger_fixed_set(colouring32, S3, S2):
    tree = colouring32.tree
    phi = [u for u in tree.ball(Q, 2) if u.part is Part.Y]
    witness = nondiscreteness_witness(S3, S2, colouring32, phi)
    assert check_fixing_witness(witness, S3, S2)
    assert witness.element.is_identity_on(phi)


def test_discrete_product_has_no_witness(S2):
    c = canonical_colouring(make_tree(2, 2, 3))
    with pytest.raises(NoWitnessError):
        nondiscreteness_witness(S2, S2, c, [Q])


def test_fixed_set_covering_the_tree(colouring32, S3, S2):
    with pytest.raises(DomainError):
        nondiscreteness_witness(S3, S2, colouring32, colouring32.tree.vertices, margin=0)


def test_check_fixing_witness_rejects_moved_fixed_set(colouring32, S3, S2):
    witness = nondiscreteness_witness(S3, S2, colouring32, [Q])
    moved = next(v for v in witness.element.images if not witness.element.fixes(v))
    assert not check_fixing_witness(
        Witness(FIXING_ELEMENT, element=witness.element, fixed=frozenset({moved})), S3, S2
    )
    assert not check_fixing_witness(Witness(FIXING_ELEMENT, fixed=frozenset({Q})), S3, S2)


def test_fixed_set_must_lie_in_the_inner_ball(colouring32, S3, S2):
    leaf = next(v for v in colouring32.tree.vertices if colouring32.tree.is_leaf(v))
    with pytest.raises(InputError):
        nondiscreteness_witness(S3, S2, colouring32, [Q, leaf])
    with pytest.raises(InputError):
        nondiscreteness_witness(S3, S2, colouring32, [Vertex.parse("q.0.0.0.0.0")])


def test_check_fixing_witness_judges_by_movement(colouring32, S3, S2):
    tree = colouring32.tree
    assert not check_fixing_witness(
        Witness(FIXING_ELEMENT, element=identity(colouring32, Q), fixed=frozenset({Q})), S3, S2
    )
    target = next(
        v
        for v in tree.vertices
        if v.part is Part.X
        and v != P
        and not tree.is_leaf(v)
        and colouring32.in_colour(v) == colouring32.in_colour(P)
    )
    translation = from_colour_pair(P, target, ColourPerm.identity(3, 2), colouring32, colouring32)
    assert all(sigma.is_identity for sigma in translation.local.values())
    assert check_fixing_witness(Witness(FIXING_ELEMENT, element=translation), S3, S2)
