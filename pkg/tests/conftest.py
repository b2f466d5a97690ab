import pytest

from src.core.services.colouring import canonical_colouring, random_colouring
from src.core.services.permgroup import Perm, PermGroup, cyclic, symmetric
from src.core.services.tree import TreeParams, TruncatedTree
from src.shared.schemas.job import JobSpec


def make_tree(m: int, n: int, depth: int) -> TruncatedTree:
    return TruncatedTree(TreeParams(m, n, depth))


def transposition_group(degree: int) -> PermGroup:
    """<(1 2)> acting on ``degree`` points; intransitive once degree > 2."""
    return PermGroup(degree, (Perm.from_cycles(degree, [(0, 1)]),))


@pytest.fixture
def S3() -> PermGroup:
    return symmetric(3)


@pytest.fixture
def S2() -> PermGroup:
    return symmetric(2)


@pytest.fixture
def C3() -> PermGroup:
    return cyclic(3)


@pytest.fixture
def tree32() -> TruncatedTree:
    return make_tree(3, 2, 4)


@pytest.fixture
def colouring32(tree32):
    return canonical_colouring(tree32)


@pytest.fixture
def shuffled32(tree32):
    return random_colouring(tree32, seed=7)


@pytest.fixture
def small_job() -> JobSpec:
    return JobSpec(depth=4, margin=1, seed=3, battery=5)


S2_SPEC = "2; (1 2)"
S3_SPEC = "3; (1 2); (1 2 3)"
TRANSPOSITION3_SPEC = "3; (1 2)"

# (M, N) pairs the orbit, quotient and suborbit checks are held to.
ACCEPTANCE_PAIRS = {
    "S3-S2": (S3_SPEC, S2_SPEC),
    "C3-S2": ("3; (1 2 3)", S2_SPEC),
    "T3-S2": (TRANSPOSITION3_SPEC, S2_SPEC),
    "S3-T3": (S3_SPEC, TRANSPOSITION3_SPEC),
    "A4-S3": ("4; (1 2 3); (2 3 4)", S3_SPEC),
}
