"""The (m, n)-biregular tree truncated at depth D around the root edge {p, q}.

Vertices are addressed by child-index sequences from p or from q.  The
children of a vertex are numbered ``0 .. valency - 2``; the remaining
neighbour is its parent, and the parent of each root is the other root.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterator

import config
from src.shared.exceptions import InputError, ResourceError

logger = logging.getLogger(__name__)


class Part(str, Enum):
    X = "X"
    Y = "Y"

    @property
    def other(self) -> "Part":
        return Part.Y if self is Part.X else Part.X


@dataclass(frozen=True, order=True)
class Vertex:
    root: int
    path: tuple[int, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.path)

    @property
    def part(self) -> Part:
        # p (root 0) is in V_X; parts alternate with depth
        return Part.X if (self.root == 0) == (len(self.path) % 2 == 0) else Part.Y

    @property
    def address(self) -> str:
        return ".".join(["pq"[self.root], *(str(i) for i in self.path)])

    @classmethod
    def parse(cls, address: str) -> "Vertex":
        head, *rest = address.strip().split(".")
        if head not in ("p", "q"):
            raise InputError(f"Vertex address must start with p or q: {address!r}")
        try:
            path = tuple(int(i) for i in rest)
        except ValueError as exc:
            raise InputError(f"Malformed vertex address {address!r}") from exc
        if any(i < 0 for i in path):
            raise InputError(f"Malformed vertex address {address!r}")
        return cls(0 if head == "p" else 1, path)

    def __str__(self) -> str:
        return self.address


P = Vertex(0)
Q = Vertex(1)


@dataclass(frozen=True, order=True)
class Arc:
    origin: Vertex
    terminus: Vertex

    def reverse(self) -> "Arc":
        return Arc(self.terminus, self.origin)


@dataclass(frozen=True)
class TreeParams:
    m: int
    n: int
    depth: int

    def __post_init__(self) -> None:
        if self.m < 2 or self.n < 2:
            raise InputError("Both valencies must be at least 2", f"m={self.m}, n={self.n}")
        if self.depth < 1:
            raise InputError("Ambient depth must be at least 1", f"D={self.depth}")


@dataclass(frozen=True)
class HalfTree:
    arc: Arc
    vertices: frozenset[Vertex]


@dataclass(frozen=True)
class Sphere:
    centre: Vertex
    radius: int
    vertices: frozenset[Vertex]
    clipped: bool


def count_vertices(params: TreeParams) -> int:
    """Closed form: the two root sides branch alternately by m-1 and n-1."""
    total = 0
    for first, second in ((params.m - 1, params.n - 1), (params.n - 1, params.m - 1)):
        level = 1
        for k in range(params.depth + 1):
            total += level
            level *= first if k % 2 == 0 else second
    return total


def count_vertices_recursive(params: TreeParams) -> int:
    def below(valency: int, other: int, remaining: int) -> int:
        if remaining == 0:
            return 1
        return 1 + (valency - 1) * below(other, valency, remaining - 1)

    return below(params.m, params.n, params.depth) + below(params.n, params.m, params.depth)


class TruncatedTree:
    def __init__(self, params: TreeParams):
        size = count_vertices(params)
        if size > config.settings.MAX_TREE_VERTICES:
            raise ResourceError(
                f"Truncated tree would have {size} vertices; bound is "
                f"{config.settings.MAX_TREE_VERTICES}"
            )
        self.params = params
        order: list[Vertex] = []
        queue = deque([P, Q])
        while queue:
            v = queue.popleft()
            order.append(v)
            queue.extend(self.children(v))
        self.vertices: tuple[Vertex, ...] = tuple(order)
        self._members = frozenset(order)
        logger.debug("Built truncated tree %s with %d vertices", params, size)

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def depth(self) -> int:
        return self.params.depth

    p = P
    q = Q

    def __contains__(self, v: object) -> bool:
        return v in self._members

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[Vertex]:
        return iter(self.vertices)

    def valency(self, v: Vertex) -> int:
        return self.m if v.part is Part.X else self.n

    def is_leaf(self, v: Vertex) -> bool:
        return v.depth >= self.depth

    def parent(self, v: Vertex) -> Vertex:
        if v.path:
            return Vertex(v.root, v.path[:-1])
        return Q if v.root == 0 else P

    def children(self, v: Vertex) -> list[Vertex]:
        if v.depth >= self.depth:
            return []
        return [Vertex(v.root, v.path + (i,)) for i in range(self.valency(v) - 1)]

    def neighbours(self, v: Vertex) -> list[Vertex]:
        return [self.parent(v), *self.children(v)]

    def arcs_from(self, v: Vertex) -> list[Arc]:
        return [Arc(v, w) for w in self.neighbours(v)]

    def arcs(self) -> list[Arc]:
        return [arc for v in self.vertices for arc in self.arcs_from(v)]

    def edges(self) -> list[tuple[Vertex, Vertex]]:
        return [(self.parent(v), v) for v in self.vertices if v != P]

    def adjacent(self, u: Vertex, v: Vertex) -> bool:
        return self.parent(u) == v or self.parent(v) == u

    # -- metric -------------------------------------------------------------

    def distance(self, u: Vertex, v: Vertex) -> int:
        if u.root != v.root:
            return len(u.path) + len(v.path) + 1
        common = 0
        for a, b in zip(u.path, v.path):
            if a != b:
                break
            common += 1
        return len(u.path) + len(v.path) - 2 * common

    def path(self, u: Vertex, v: Vertex) -> list[Vertex]:
        """The unique path ``[u, v]``, both ends included."""
        if u.root != v.root:
            up = [Vertex(u.root, u.path[:i]) for i in range(len(u.path), -1, -1)]
            down = [Vertex(v.root, v.path[:i]) for i in range(len(v.path) + 1)]
            return up + down
        common = 0
        for a, b in zip(u.path, v.path):
            if a != b:
                break
            common += 1
        up = [Vertex(u.root, u.path[:i]) for i in range(len(u.path), common - 1, -1)]
        down = [Vertex(v.root, v.path[:i]) for i in range(common + 1, len(v.path) + 1)]
        return up + down

    def distance_path(self, u: Vertex, v: Vertex) -> tuple[int, list[Vertex]]:
        for w in (u, v):
            if w not in self:
                raise InputError(f"Vertex {w} is not in the truncation")
        route = self.path(u, v)
        return len(route) - 1, route

    def ball(self, v: Vertex, radius: int) -> list[Vertex]:
        """Vertices within ``radius`` of ``v``, in breadth-first order."""
        seen = {v}
        order = [v]
        frontier = [v]
        for _ in range(radius):
            nxt = []
            for u in frontier:
                for w in self.neighbours(u):
                    if w not in seen:
                        seen.add(w)
                        order.append(w)
                        nxt.append(w)
            frontier = nxt
        return order

    def sphere(self, v: Vertex, radius: int) -> Sphere:
        vertices = frozenset(w for w in self.ball(v, radius) if self.distance(v, w) == radius)
        clipped = radius > self.depth - v.depth
        if clipped:
            logger.debug("Sphere of radius %d around %s touches the truncation", radius, v)
        return Sphere(v, radius, vertices, clipped)

    # -- half-trees ---------------------------------------------------------

    @staticmethod
    def _below(v: Vertex, x: Vertex) -> bool:
        return x.root == v.root and x.path[: len(v.path)] == v.path

    def in_half_tree(self, arc: Arc, x: Vertex) -> bool:
        """Whether ``x`` lies in the component of ``o(a)`` once the edge of ``a`` is removed."""
        o, t = arc.origin, arc.terminus
        if self.parent(o) == t:
            return self._below(o, x)
        return not self._below(t, x)

    def half_tree(self, arc: Arc) -> HalfTree:
        if arc.origin not in self or not self.adjacent(arc.origin, arc.terminus):
            raise InputError(f"{arc} is not an arc of the truncation")
        return HalfTree(arc, frozenset(x for x in self.vertices if self.in_half_tree(arc, x)))

    def inner_vertices(self, margin: int) -> list[Vertex]:
        return [v for v in self.vertices if v.depth <= self.depth - margin]

    @cached_property
    def vertex_index(self) -> dict[Vertex, int]:
        return {v: i for i, v in enumerate(self.vertices)}


def build(params: TreeParams) -> TruncatedTree:
    return TruncatedTree(params)


__all__ = [
    "Part",
    "Vertex",
    "Arc",
    "TreeParams",
    "HalfTree",
    "Sphere",
    "TruncatedTree",
    "P",
    "Q",
    "build",
    "count_vertices",
    "count_vertices_recursive",
]
