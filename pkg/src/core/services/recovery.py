"""Recover a legal colouring from a locally-(M, N) generating set.

The generated group is only partially defined near the cut, so every vertex
is handled through its radius-2 ball: transversal elements are kept as vertex
maps ``B(base, 2) -> B(u, 2)`` and stabilisers as permutation groups of
``B(base, 2)``.  Colours are then read off as ``phi . h_v^-1`` on each star.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import config
from src.core.services.colouring import LegalColouring, complete_colouring, validate
from src.core.services.permgroup import Perm, PermGroup, classify, is_permutation_isomorphic
from src.core.services.portrait import Portrait, invert
from src.core.services.tree import Arc, Part, TruncatedTree, Vertex
from src.shared.exceptions import ConstructionError, DomainError, InputError, PreconditionError

logger = logging.getLogger(__name__)

VertexMap = dict[Vertex, Vertex]


@dataclass
class _Orbit:
    """Orbit of one base vertex with 2-ball transversals and the induced stabiliser."""

    base: Vertex
    ball: list[Vertex]
    transversal: dict[Vertex, VertexMap]
    stabiliser: PermGroup
    _inverse: dict[Vertex, VertexMap] = field(default_factory=dict)

    @property
    def index(self) -> dict[Vertex, int]:
        return {w: i for i, w in enumerate(self.ball)}

    def inverse(self, u: Vertex) -> VertexMap:
        if u not in self._inverse:
            self._inverse[u] = {image: w for w, image in self.transversal[u].items()}
        return self._inverse[u]

    def star_group(self, valency: int) -> PermGroup:
        """The stabiliser's action on the neighbours of the base, in neighbour order."""
        gens = tuple(
            Perm(tuple(gen.images[1 + i] - 1 for i in range(valency)))
            for gen in self.stabiliser.generators
        )
        return PermGroup(valency, gens)


def _moves(generators: Sequence[Portrait]) -> list[Portrait]:
    moves = list(generators)
    moves.extend(invert(g) for g in generators)
    return moves


def _orbit(
    tree: TruncatedTree, base: Vertex, moves: Sequence[Portrait], inner: frozenset[Vertex]
) -> _Orbit:
    ball = tree.ball(base, 2)
    transversal: dict[Vertex, VertexMap] = {base: {w: w for w in ball}}
    queue = deque([base])
    while queue:
        u = queue.popleft()
        t = transversal[u]
        for g in moves:
            gu = g.maybe(u)
            if gu is None or gu in transversal or gu not in inner:
                continue
            image = {w: g.maybe(t[w]) for w in ball}
            if any(x is None for x in image.values()):
                continue
            transversal[gu] = image  # type: ignore[assignment]
            queue.append(gu)

    orbit = _Orbit(base, ball, transversal, PermGroup(len(ball)))
    index = orbit.index
    schreier: set[Perm] = set()
    for u, t in transversal.items():
        for g in moves:
            gu = g.maybe(u)
            if gu not in transversal:
                continue
            back = orbit.inverse(gu)
            images = []
            for w in ball:
                x = g.maybe(t[w])
                if x is None or x not in back:
                    break
                images.append(index[back[x]])
            else:
                k = Perm(tuple(images))
                if not k.is_identity:
                    schreier.add(k)
    orbit.stabiliser = PermGroup(len(ball), tuple(sorted(schreier)))
    logger.debug(
        "Orbit of %s: %d vertices, stabiliser of order %d on its 2-ball",
        base,
        len(transversal),
        orbit.stabiliser.order(),
    )
    return orbit


def inner_region(tree: TruncatedTree, margin: int) -> frozenset[Vertex]:
    return frozenset(tree.inner_vertices(max(margin, 2)))


def local_group(
    generators: Sequence[Portrait], v: Vertex, margin: int | None = None
) -> PermGroup:
    """Action on the neighbours of ``v`` of the stabilisers found among generator products."""
    if not generators:
        raise InputError("local_group needs at least one generator")
    tree = generators[0].tree
    margin = config.settings.DEFAULT_MARGIN if margin is None else margin
    inner = inner_region(tree, margin)
    if v not in inner:
        raise DomainError(f"{v} is outside the inner ball", f"margin {margin}")
    return _orbit(tree, v, _moves(generators), inner).star_group(tree.valency(v))


def recover_colouring(
    generators: Sequence[Portrait],
    M: PermGroup,
    N: PermGroup,
    margin: int | None = None,
) -> LegalColouring:
    """A legal colouring under which every generator is a member on the inner ball."""
    if not generators:
        raise InputError("Colouring recovery needs at least one generator")
    tree = generators[0].tree
    if (M.degree, N.degree) != (tree.m, tree.n):
        raise InputError("M and N must act on the colour sets of the tree")
    if not (classify(M).transitive and classify(N).transitive):
        raise PreconditionError(
            "Colouring recovery needs transitive local groups",
            "with an intransitive local group no universal group can contain the input",
        )
    margin = config.settings.DEFAULT_MARGIN if margin is None else margin
    inner = inner_region(tree, margin)
    moves = _moves(generators)
    p, q = tree.p, tree.q
    orbits = {Part.X: _orbit(tree, p, moves, inner), Part.Y: _orbit(tree, q, moves, inner)}

    for part, orbit in orbits.items():
        missing = [v for v in inner if v.part is part and v not in orbit.transversal]
        if missing:
            raise PreconditionError(
                f"Generated group is not transitive on the inner V_{part.value} vertices",
                f"{len(missing)} unreached, first {min(missing)}",
            )

    phi: dict[Part, Perm] = {}
    for part, orbit in orbits.items():
        target = M if part is Part.X else N
        iso = is_permutation_isomorphic(orbit.star_group(target.degree), target)
        if iso is None:
            raise PreconditionError(
                f"Local action at {orbit.base} is not permutation isomorphic to "
                f"{'M' if part is Part.X else 'N'}"
            )
        phi[part] = iso

    # f[v] sends the star of v onto the star of its part's base vertex.
    f: dict[Vertex, VertexMap] = {p: {w: w for w in tree.neighbours(p)}}
    orbit_p = orbits[Part.X]
    index_p = orbit_p.index
    for v in tree.neighbours(p):
        if v not in inner:
            continue
        k = orbit_p.stabiliser.transversal(index_p[q]).get(index_p[v])
        if k is None:
            raise ConstructionError(f"Stabiliser of p does not move q to {v}")
        k_inv = k.inverse()
        f[v] = {w: orbit_p.ball[k_inv.images[index_p[w]]] for w in tree.neighbours(v)}

    for v in sorted(inner, key=lambda x: (tree.distance(p, x), x)):
        if v in f:
            continue
        route = tree.path(p, v)
        v1, v2 = route[-2], route[-3]
        orbit = orbits[v1.part]
        t, t_inv = orbit.transversal[v1], orbit.inverse(v1)
        index = orbit.index
        moves_to = orbit.stabiliser.transversal(index[t_inv[v2]])
        k = moves_to.get(index[t_inv[v]])
        if k is None:
            raise ConstructionError(f"No stabiliser element of {v1} moves {v2} to {v}")
        k_inv = k.inverse()
        f[v] = {
            w: f[v2][t[orbit.ball[k_inv.images[index[t_inv[w]]]]]]
            for w in tree.neighbours(v)
        }

    partial: dict[Arc, int] = {}
    for v, star in f.items():
        base = p if v.part is Part.X else q
        position = {w: i for i, w in enumerate(tree.neighbours(base))}
        for w, image in star.items():
            partial[Arc(v, w)] = phi[v.part].images[position[image]]

    recovered = complete_colouring(tree, partial)
    check = validate(recovered)
    if not check.is_valid:
        raise ConstructionError(
            "Recovered colouring is not legal",
            "; ".join(check.blocking_errors[:3]),
        )
    for number, g in enumerate(generators):
        vertices = [v for v in inner if g.maybe(v) in inner]
        if not g.is_member(M, N, recovered, vertices):
            raise ConstructionError(f"Generator {number} is not a member under the recovered colouring")
    logger.info(
        "Recovered a legal colouring from %d generators (inner depth %d)",
        len(generators),
        tree.depth - max(margin, 2),
    )
    return recovered


__all__ = ["inner_region", "local_group", "recover_colouring"]
