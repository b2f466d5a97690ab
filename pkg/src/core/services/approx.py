"""A finite generating family for U(M, N)_c on the truncation, and oracles built on it.

The family holds, for every inner vertex ``v`` that is not a leaf:

* the rigid elements at ``v`` for each generator of the local group of its part;
* one twist per generator of the stabiliser of the colour towards the parent
  of ``v``, which permutes the subtree below ``v`` and fixes everything else;
* the colour-preserving translation from ``p`` (or ``q``) to ``v`` when the two
  share an in-colour.

Rigid elements at a parent move a vertex's in-colour around its orbit under
the local group and the translations connect vertices of equal in-colour, so
closing under the family recovers the orbits of the inner ball.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import config
from src.core.services.colouring import LegalColouring
from src.core.services.permgroup import PermGroup, stabiliser
from src.core.services.portrait import (
    ColourPerm,
    Portrait,
    enumerate_members,
    from_colour_pair,
    half_tree_surgery,
    invert,
    member_radius,
    rigid_element,
)
from src.core.services.tree import Arc, Part, Vertex
from src.shared.exceptions import InputError, ResourceError

logger = logging.getLogger(__name__)


@dataclass
class FiniteApprox:
    M: PermGroup
    N: PermGroup
    colouring: LegalColouring
    margin: int
    generators: list[Portrait] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return self.colouring.tree.depth

    @cached_property
    def moves(self) -> list[Portrait]:
        return self.generators + [invert(g) for g in self.generators]

    @cached_property
    def inner(self) -> frozenset[Vertex]:
        return frozenset(self.colouring.tree.inner_vertices(self.margin))

    def all_members(self) -> bool:
        return all(g.is_member(self.M, self.N) for g in self.generators)


def finite_approx(
    M: PermGroup, N: PermGroup, c: LegalColouring, margin: int | None = None
) -> FiniteApprox:
    tree = c.tree
    if (M.degree, N.degree) != (tree.m, tree.n):
        raise InputError("Local groups do not match the tree valencies")
    margin = config.settings.DEFAULT_MARGIN if margin is None else margin
    approx = FiniteApprox(M, N, c, margin)
    bound = config.settings.MAX_ENUMERATION * 10

    def add(g: Portrait) -> None:
        approx.generators.append(g)
        if len(approx.generators) * len(tree) > bound:
            raise ResourceError(
                f"Finite approximation would hold {len(approx.generators)} full portraits"
            )

    for mu in M.generators:
        add(rigid_element(mu, tree.p, c))
    for nu in N.generators:
        add(rigid_element(nu, tree.q, c))

    still = ColourPerm.identity(tree.m, tree.n)
    for v in tree.inner_vertices(margin):
        if v in (tree.p, tree.q) or tree.is_leaf(v):
            continue
        parent = tree.parent(v)
        group = M if v.part is Part.X else N
        for s in group.generators:
            add(rigid_element(s, v, c))
        for s in stabiliser(group, c.colour(v, parent)).generators:
            add(half_tree_surgery(rigid_element(s, v, c), Arc(v, parent)))
        base = tree.p if v.part is Part.X else tree.q
        if c.in_colour(v) == c.in_colour(base):
            add(from_colour_pair(base, v, still, c, c))
    logger.debug(
        "Finite approximation at depth %d, margin %d: %d generators",
        tree.depth,
        margin,
        len(approx.generators),
    )
    return approx


def orbit_bruteforce(approx: FiniteApprox, v: Vertex) -> frozenset[Vertex]:
    """Closure of ``{v}`` under the generators and their inverses, wherever defined."""
    seen = {v}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for g in approx.moves:
            image = g.maybe(u)
            if image is not None and image not in seen:
                seen.add(image)
                queue.append(image)
    return frozenset(seen)


def orbit_partition(approx: FiniteApprox) -> dict[Vertex, int]:
    """Brute-force orbit ids of the inner vertices, numbered in vertex order."""
    labels: dict[Vertex, int] = {}
    for v in sorted(approx.inner):
        if v in labels:
            continue
        index = len(set(labels.values()))
        for u in orbit_bruteforce(approx, v):
            if u in approx.inner:
                labels[u] = index
    return labels


def edge_orbit_bruteforce(
    approx: FiniteApprox, edge: tuple[Vertex, Vertex]
) -> frozenset[frozenset[Vertex]]:
    start = frozenset(edge)
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for g in approx.moves:
            images = [g.maybe(u) for u in current]
            if any(image is None for image in images):
                continue
            image_edge = frozenset(images)  # type: ignore[arg-type]
            if image_edge not in seen:
                seen.add(image_edge)
                queue.append(image_edge)
    return frozenset(seen)


def stabiliser_generators(
    M: PermGroup, N: PermGroup, c: LegalColouring, w: Vertex, radius: int
) -> list[Portrait]:
    """Members fixing ``w`` that generate its stabiliser on ``B(w, radius)``.

    The rigid elements at ``w`` carry the local group there; below that, each
    vertex ``v`` of ``B(w, radius - 1)`` contributes the twists on the half-tree
    pointing away from ``w`` for the stabiliser of the colour towards ``w``.
    """
    tree = c.tree
    local = M if w.part is Part.X else N
    generators = [rigid_element(s, w, c) for s in local.generators]
    for v in tree.ball(w, radius - 1):
        if v == w or tree.is_leaf(v):
            continue
        toward = tree.path(v, w)[1]
        group = M if v.part is Part.X else N
        for s in stabiliser(group, c.colour(v, toward)).generators:
            generators.append(half_tree_surgery(rigid_element(s, v, c), Arc(v, toward)))
    return generators


def suborbit_oracle(
    M: PermGroup, N: PermGroup, c: LegalColouring, w: Vertex, k: int
) -> list[int]:
    """Suborbit sizes on the sphere of radius 2k around ``w``.

    Orbits of the group generated by ``stabiliser_generators`` on the sphere,
    found by merging each sphere vertex with its images.
    """
    tree = c.tree
    sphere = tree.sphere(w, 2 * k)
    if sphere.clipped:
        raise InputError(f"Sphere of radius {2 * k} around {w} is clipped by the truncation")
    parent = {u: u for u in sphere.vertices}

    def find(u: Vertex) -> Vertex:
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for g in stabiliser_generators(M, N, c, w, 2 * k):
        for u in sphere.vertices:
            a, b = find(u), find(g.evaluate(u))
            if a != b:
                parent[max(a, b)] = min(a, b)
    sizes: dict[Vertex, int] = {}
    for u in sphere.vertices:
        root = find(u)
        sizes[root] = sizes.get(root, 0) + 1
    return sorted(sizes.values())


def nontrivial_fixers(
    M: PermGroup, N: PermGroup, c: LegalColouring, fixed: Iterable[Vertex]
) -> int:
    """Number of non-identity members fixing every vertex of ``fixed``, on the largest ball."""
    pinned = sorted(fixed)
    if not pinned:
        raise InputError("Need at least one vertex to fix")
    base = pinned[0]
    radius = member_radius(c.tree, base, base)
    count = 0
    for g in enumerate_members(M, N, c, base, radius=radius, fixed=pinned):
        if any(not sigma.is_identity for sigma in g.local.values()):
            count += 1
    return count


__all__ = [
    "FiniteApprox",
    "finite_approx",
    "orbit_bruteforce",
    "orbit_partition",
    "edge_orbit_bruteforce",
    "stabiliser_generators",
    "suborbit_oracle",
    "nontrivial_fixers",
]
