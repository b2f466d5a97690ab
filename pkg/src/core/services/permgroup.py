"""Finite permutation groups on integer domains {0, ..., degree - 1}.

Permutations act from the left: ``(p * q)(x) == p(q(x))``.  ``Perm`` is the
value type used across the services; each ``PermGroup`` lazily builds a
``sympy.combinatorics.PermutationGroup`` for orders, membership, orbits,
stabilisers and block systems.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, Sequence

import networkx as nx
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.named_groups import AlternatingGroup, CyclicGroup, SymmetricGroup

import config
from src.shared.exceptions import InputError, PreconditionError, ResourceError

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Perm
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Perm:
    """A permutation stored as its image tuple: ``images[i]`` is the image of ``i``."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(len(self.images))):
            raise InputError("Permutation images must be a bijection", str(self.images))

    @classmethod
    def _trusted(cls, images: tuple[int, ...]) -> "Perm":
        perm = object.__new__(cls)
        object.__setattr__(perm, "images", images)
        return perm

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls._trusted(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Perm":
        """Build from 0-based disjoint cycles, e.g. ``[(0, 1, 2)]``."""
        images = list(range(degree))
        seen: set[int] = set()
        for cycle in cycles:
            for point in cycle:
                if not 0 <= point < degree:
                    raise InputError(f"Point {point} outside domain of degree {degree}")
                if point in seen:
                    raise InputError(f"Point {point} appears in more than one cycle")
                seen.add(point)
            for i, point in enumerate(cycle):
                images[point] = cycle[(i + 1) % len(cycle)]
        return cls._trusted(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        if not 0 <= point < len(self.images):
            raise InputError(f"Point {point} outside domain of degree {self.degree}")
        return self.images[point]

    def __mul__(self, other: "Perm") -> "Perm":
        if self.degree != other.degree:
            raise InputError(
                "Cannot compose permutations of different degree",
                f"{self.degree} != {other.degree}",
            )
        mine = self.images
        return Perm._trusted(tuple(mine[x] for x in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for point, image in enumerate(self.images):
            inv[image] = point
        return Perm._trusted(tuple(inv))

    @property
    def is_identity(self) -> bool:
        return all(point == image for point, image in enumerate(self.images))

    def support(self) -> frozenset[int]:
        return frozenset(i for i, image in enumerate(self.images) if i != image)

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its least point, sorted."""
        seen: set[int] = set()
        result = []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            point = self.images[start]
            while point != start:
                cycle.append(point)
                seen.add(point)
                point = self.images[point]
            result.append(tuple(cycle))
        return result

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(str(p) for p in c) + ")" for c in cycles)


def apply(p: Perm, point: int) -> int:
    return p(point)


def compose(p: Perm, q: Perm) -> Perm:
    return p * q


def invert(p: Perm) -> Perm:
    return p.inverse()


# ---------------------------------------------------------------------------
# Partitions and finite graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """Blocks numbered in order of their least member."""

    block_id: Mapping[Any, int]

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[Any]]) -> "Partition":
        ordered = sorted((sorted(block) for block in blocks), key=lambda b: b[0])
        block_id: dict[Any, int] = {}
        for index, block in enumerate(ordered):
            if not block:
                raise InputError("Partition blocks must be non-empty")
            for point in block:
                if point in block_id:
                    raise InputError(f"{point!r} appears in two blocks")
                block_id[point] = index
        return cls(block_id)

    def blocks(self) -> list[frozenset[Any]]:
        grouped: dict[int, set[Any]] = {}
        for point, index in self.block_id.items():
            grouped.setdefault(index, set()).add(point)
        return [frozenset(grouped[i]) for i in sorted(grouped)]

    def same_block(self, a: Any, b: Any) -> bool:
        return self.block_id[a] == self.block_id[b]

    @property
    def is_universal(self) -> bool:
        return len(set(self.block_id.values())) <= 1

    @property
    def is_trivial(self) -> bool:
        return len(set(self.block_id.values())) == len(self.block_id)

    def is_invariant_under(self, mapping: Callable[[Any], Any | None]) -> bool:
        """True if ``mapping`` sends blocks into blocks, injectively on blocks.

        Points whose image is ``None`` or outside the partition are skipped.
        """
        image_block: dict[int, int] = {}
        preimage_block: dict[int, int] = {}
        for point, index in self.block_id.items():
            image = mapping(point)
            if image is None or image not in self.block_id:
                continue
            target = self.block_id[image]
            if image_block.setdefault(index, target) != target:
                return False
            if preimage_block.setdefault(target, index) != index:
                return False
        return True


@dataclass(frozen=True)
class FiniteGraph:
    """Simple undirected graph: no loops, edges are 2-element frozensets."""

    vertices: tuple[Hashable, ...]
    edges: frozenset[frozenset[Hashable]]

    def __post_init__(self) -> None:
        known = set(self.vertices)
        for edge in self.edges:
            if len(edge) != 2:
                raise InputError("Graph edges must join two distinct vertices")
            if not edge <= known:
                raise InputError("Graph edge endpoint is not a vertex")

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(tuple(edge) for edge in self.edges)
        return graph

    def neighbours(self, vertex: Hashable) -> set[Hashable]:
        return {other for edge in self.edges if vertex in edge for other in edge if other != vertex}

    def degree(self, vertex: Hashable) -> int:
        return sum(1 for edge in self.edges if vertex in edge)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return nx.is_connected(self.to_networkx())

    def components(self) -> list[frozenset[Hashable]]:
        return sorted(
            (frozenset(c) for c in nx.connected_components(self.to_networkx())),
            key=lambda c: min(c),
        )


# ---------------------------------------------------------------------------
# sympy bridge
# ---------------------------------------------------------------------------


def to_sympy(p: Perm) -> Permutation:
    return Permutation(list(p.images))


def from_sympy(p: Permutation, degree: int) -> Perm:
    """Convert back, padding with fixed points up to ``degree``."""
    images = list(p.array_form)
    if len(images) > degree:
        raise InputError(f"Permutation of size {len(images)} does not fit degree {degree}")
    images.extend(range(len(images), degree))
    return Perm._trusted(tuple(images))


# ---------------------------------------------------------------------------
# PermGroup
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PermGroup:
    """Generators on ``{0, ..., degree - 1}``; orders, orbits and stabilisers come from sympy."""

    degree: int
    generators: tuple[Perm, ...] = ()

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise InputError("Degree must be positive", str(self.degree))
        if self.degree > config.settings.MAX_DEGREE:
            raise ResourceError(
                f"Degree {self.degree} exceeds the configured bound {config.settings.MAX_DEGREE}"
            )
        object.__setattr__(self, "generators", tuple(self.generators))
        for gen in self.generators:
            if gen.degree != self.degree:
                raise InputError(
                    "All generators must share the group degree",
                    f"generator {gen} has degree {gen.degree}, group has {self.degree}",
                )

    @cached_property
    def backing(self) -> PermutationGroup:
        gens = [to_sympy(gen) for gen in dict.fromkeys(self.generators) if not gen.is_identity]
        return PermutationGroup(gens or [Permutation(list(range(self.degree)))])

    def order(self) -> int:
        return int(self.backing.order())

    def __contains__(self, g: Perm) -> bool:
        return g.degree == self.degree and bool(self.backing.contains(to_sympy(g)))

    @property
    def is_trivial(self) -> bool:
        return all(gen.is_identity for gen in self.generators)

    def _check_point(self, x: int) -> None:
        if not 0 <= x < self.degree:
            raise InputError(f"Point {x} outside domain of degree {self.degree}")

    def orbit(self, x: int) -> frozenset[int]:
        self._check_point(x)
        return frozenset(self.backing.orbit(x))

    def orbits(self) -> list[frozenset[int]]:
        return sorted((frozenset(orb) for orb in self.backing.orbits()), key=min)

    def transversal(self, x: int) -> dict[int, Perm]:
        """Map each orbit point ``y`` to an element sending ``x`` to ``y``.

        Breadth-first over the generators in order, so representatives are
        stable for a fixed generator sequence.
        """
        self._check_point(x)
        return {
            point: from_sympy(coset, self.degree)
            for point, coset in self.backing.orbit_transversal(x, pairs=True)
        }

    def elements(self) -> Iterator[Perm]:
        size = self.order()
        if size > config.settings.MAX_ENUMERATION:
            raise ResourceError(
                f"Group of order {size} exceeds the enumeration bound "
                f"{config.settings.MAX_ENUMERATION}"
            )
        for images in self.backing.generate(af=True):
            yield Perm._trusted(tuple(images))


# ---------------------------------------------------------------------------
# Named groups
# ---------------------------------------------------------------------------


def _named(degree: int, group: PermutationGroup) -> PermGroup:
    return PermGroup(degree, tuple(from_sympy(gen, degree) for gen in group.generators))


def trivial(degree: int) -> PermGroup:
    return PermGroup(degree, ())


def symmetric(degree: int) -> PermGroup:
    if degree < 2:
        return trivial(degree)
    return _named(degree, SymmetricGroup(degree))


def cyclic(degree: int) -> PermGroup:
    if degree < 2:
        return trivial(degree)
    return _named(degree, CyclicGroup(degree))


def alternating(degree: int) -> PermGroup:
    if degree < 3:
        return trivial(degree)
    return _named(degree, AlternatingGroup(degree))


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def orbit(G: PermGroup, x: int) -> frozenset[int]:
    return G.orbit(x)


def order(G: PermGroup) -> int:
    return G.order()


def stabiliser(G: PermGroup, x: int) -> PermGroup:
    """Point stabiliser presented by its nontrivial Schreier generators, sorted."""
    G._check_point(x)
    gens = {from_sympy(gen, G.degree) for gen in G.backing.stabilizer(x).generators}
    return PermGroup(G.degree, tuple(sorted(gen for gen in gens if not gen.is_identity)))


def suborbits(G: PermGroup, x: int) -> list[frozenset[int]]:
    return stabiliser(G, x).orbits()


def minimal_block(G: PermGroup, a: int, b: int) -> Partition:
    """Finest G-invariant partition with ``a`` and ``b`` in one block."""
    G._check_point(a)
    G._check_point(b)
    if a == b:
        raise PreconditionError("minimal_block needs two distinct points", f"{a} == {b}")
    if not G.backing.is_transitive():
        raise PreconditionError("minimal_block needs a transitive group")
    classes: dict[int, list[int]] = {}
    for point, representative in enumerate(G.backing.minimal_block([a, b])):
        classes.setdefault(representative, []).append(point)
    return Partition.from_blocks(classes.values())


@dataclass(frozen=True)
class Classification:
    transitive: bool
    primitive: bool
    regular: bool
    semiregular: bool
    generated_by_point_stabilisers: bool


def classify(G: PermGroup) -> Classification:
    size = G.order()
    orbits = G.orbits()
    transitive = bool(G.backing.is_transitive())
    primitive = transitive and bool(G.backing.is_primitive(randomized=False))
    semiregular = all(len(orb) == size for orb in orbits)
    stab_gens = tuple(
        gen for x in range(G.degree) for gen in stabiliser(G, x).generators
    )
    result = Classification(
        transitive=transitive,
        primitive=primitive,
        regular=transitive and size == G.degree,
        semiregular=semiregular,
        generated_by_point_stabilisers=PermGroup(G.degree, stab_gens).order() == size,
    )
    logger.debug("Classified group of degree %d and order %d: %s", G.degree, size, result)
    return result


def orbital_graph(G: PermGroup, a: int, b: int) -> FiniteGraph:
    G._check_point(a)
    G._check_point(b)
    if a == b:
        raise InputError("Orbital graph needs two distinct points")
    start = frozenset((a, b))
    edges = {start}
    queue = deque([start])
    while queue:
        edge = queue.popleft()
        for gen in G.generators:
            image = frozenset(gen.images[p] for p in edge)
            if image not in edges:
                edges.add(image)
                queue.append(image)
    return FiniteGraph(tuple(range(G.degree)), frozenset(edges))


def is_permutation_isomorphic(G: PermGroup, H: PermGroup) -> Perm | None:
    """Lexicographically first ``phi`` with ``phi G phi^-1 == H``, if any."""
    if G.degree != H.degree or G.order() != H.order():
        return None
    if G.degree > 8:
        raise ResourceError("Permutation isomorphism search is limited to degree 8")
    for images in itertools.permutations(range(G.degree)):
        phi = Perm._trusted(images)
        phi_inv = phi.inverse()
        if all(phi * gen * phi_inv in H for gen in G.generators):
            return phi
    return None


def wreath_product_action(M: PermGroup, N: PermGroup) -> PermGroup:
    """M Wr N in product action on the functions Y -> X.

    A function ``f`` is encoded as ``sum(f[y] * m**y)``; the top group acts by
    ``(nu f)(y) = f(nu^-1 y)``.
    """
    m, n = M.degree, N.degree
    size = m**n
    if size > config.settings.MAX_WREATH_DOMAIN:
        raise ResourceError(
            f"Product action on {size} points exceeds the configured bound "
            f"{config.settings.MAX_WREATH_DOMAIN}"
        )
    functions = [tuple((index // m**y) % m for y in range(n)) for index in range(size)]

    def encode(f: Sequence[int]) -> int:
        return sum(value * m**y for y, value in enumerate(f))

    gens: list[Perm] = []
    for y in range(n):
        for mu in M.generators:
            images = []
            for f in functions:
                g = list(f)
                g[y] = mu.images[f[y]]
                images.append(encode(g))
            gens.append(Perm._trusted(tuple(images)))
    for nu in N.generators:
        images = []
        for f in functions:
            g = [0] * n
            for y, value in enumerate(f):
                g[nu.images[y]] = value
            images.append(encode(g))
        gens.append(Perm._trusted(tuple(images)))
    logger.debug("Built wreath product action on %d points", size)
    return PermGroup(size, tuple(gens))


__all__ = [
    "Perm",
    "PermGroup",
    "Partition",
    "FiniteGraph",
    "Classification",
    "to_sympy",
    "from_sympy",
    "apply",
    "compose",
    "invert",
    "orbit",
    "order",
    "stabiliser",
    "suborbits",
    "minimal_block",
    "classify",
    "orbital_graph",
    "is_permutation_isomorphic",
    "wreath_product_action",
    "trivial",
    "symmetric",
    "cyclic",
    "alternating",
]
