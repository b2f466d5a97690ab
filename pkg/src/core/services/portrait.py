"""Tree automorphisms in portrait form.

A portrait stores where one base vertex goes and, for every vertex of its
domain, the permutation of colours the automorphism induces there, read
through a reference colouring ``c``::

    local(v) = c|A(gv) . g|A(v) . c|A(v)^-1

The child of ``v`` along colour ``x`` is sent to the neighbour of ``g(v)``
along colour ``local(v)(x)``.  Domains are connected sets of non-leaf
vertices containing the base; outside them the automorphism is undefined.
"""

from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import config
from src.core.services.colouring import LegalColouring
from src.core.services.permgroup import Perm, PermGroup
from src.core.services.tree import Arc, Part, TruncatedTree, Vertex
from src.shared.exceptions import (
    ConstructionError,
    DomainError,
    InputError,
    PreconditionError,
    ResourceError,
)
from src.shared.schemas.portrait import PortraitOut

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Colour permutations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ColourPerm:
    """A permutation of X u Y preserving both colour sets."""

    x: Perm
    y: Perm

    @classmethod
    def identity(cls, m: int, n: int) -> "ColourPerm":
        return cls(Perm.identity(m), Perm.identity(n))

    @classmethod
    def extend(cls, mu: Perm, part: Part, m: int, n: int) -> "ColourPerm":
        """``mu`` on the colours of ``part``, the identity on the other colour set."""
        if part is Part.X:
            return cls(mu, Perm.identity(n))
        return cls(Perm.identity(m), mu)

    def on(self, part: Part) -> Perm:
        return self.x if part is Part.X else self.y

    def inverse(self) -> "ColourPerm":
        return ColourPerm(self.x.inverse(), self.y.inverse())


# ---------------------------------------------------------------------------
# Portrait
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Portrait:
    colouring: LegalColouring
    base: Vertex
    base_image: Vertex
    local: Mapping[Vertex, Perm]

    def __post_init__(self) -> None:
        tree = self.colouring.tree
        if self.base.part is not self.base_image.part:
            raise InputError(
                "Base and base image must lie in the same part",
                f"{self.base} -> {self.base_image}",
            )
        if self.base not in self.local:
            raise DomainError(f"Portrait domain does not contain its base {self.base}")
        for v, sigma in self.local.items():
            if tree.is_leaf(v):
                raise DomainError(f"Leaf {v} cannot carry a local action")
            if sigma.degree != tree.valency(v):
                raise InputError(f"Local action at {v} has the wrong degree")
            if v != self.base and tree.path(v, self.base)[1] not in self.local:
                raise DomainError(f"Portrait domain is not connected at {v}")

    @property
    def tree(self) -> TruncatedTree:
        return self.colouring.tree

    @property
    def domain(self) -> frozenset[Vertex]:
        return frozenset(self.local)

    @cached_property
    def domain_depth(self) -> int:
        """Radius of the largest ball around the base inside the domain."""
        tree = self.tree
        radius = -1
        frontier = [self.base]
        seen = {self.base}
        while frontier and all(v in self.local for v in frontier):
            radius += 1
            nxt = []
            for v in frontier:
                for w in tree.neighbours(v):
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return radius

    @cached_property
    def images(self) -> dict[Vertex, Vertex]:
        """Images of the domain and its neighbours, wherever they stay in the truncation."""
        c = self.colouring
        images = {self.base: self.base_image}
        queue = deque([self.base])
        while queue:
            w = queue.popleft()
            gw = images[w]
            sigma = self.local[w]
            for u, x in c.out_colours(w).items():
                if u in images:
                    continue
                gu = c.neighbour(gw, sigma.images[x])
                if gu is None:
                    continue
                images[u] = gu
                if u in self.local:
                    queue.append(u)
        return images

    def evaluate(self, v: Vertex) -> Vertex:
        try:
            return self.images[v]
        except KeyError:
            raise DomainError(
                f"{v} is outside the domain of the portrait based at {self.base}",
                "raise the ambient depth",
            ) from None

    def maybe(self, v: Vertex) -> Vertex | None:
        return self.images.get(v)

    def local_action(self, v: Vertex, c: LegalColouring | None = None) -> Perm:
        c = c or self.colouring
        if c is self.colouring and v in self.local:
            return self.local[v]
        gv = self.evaluate(v)
        images = []
        for x in range(c.colour_count(v.part)):
            u = c.neighbour(v, x)
            if u is None:
                raise DomainError(f"{v} has no out-arc of colour {x} in the truncation")
            colour = c.arc_colour.get(Arc(gv, self.evaluate(u)))
            if colour is None:
                raise DomainError(f"Image {gv} of {v} is a leaf of the truncation")
            images.append(colour)
        return Perm(tuple(images))

    def is_member(
        self,
        M: PermGroup,
        N: PermGroup,
        c: LegalColouring | None = None,
        vertices: Iterable[Vertex] | None = None,
    ) -> bool:
        """Every computable local action lies in M (at V_X) or N (at V_Y).

        Under a colouring other than the reference one, vertices whose star
        image leaves the truncation are skipped.
        """
        c = c or self.colouring
        candidates = self.local if vertices is None else vertices
        for v in candidates:
            try:
                sigma = self.local_action(v, c)
            except DomainError:
                if c is self.colouring and v in self.local:
                    raise
                continue
            if sigma not in (M if v.part is Part.X else N):
                return False
        return True

    def is_compatible(self) -> bool:
        """Parent-compatibility of the stored local actions, toward the base."""
        c = self.colouring
        tree = self.tree
        for v, sigma in self.local.items():
            if v == self.base:
                continue
            u = tree.path(v, self.base)[1]
            gu, gv = self.maybe(u), self.maybe(v)
            if gu is None or gv is None:
                return False
            if c.neighbour(gv, sigma.images[c.colour(v, u)]) != gu:
                return False
        return True

    def fixes(self, v: Vertex) -> bool:
        return self.maybe(v) == v

    def agrees_with(self, other: "Portrait", vertices: Iterable[Vertex] | None = None) -> bool:
        """Pointwise agreement wherever both are defined (or on ``vertices``)."""
        if vertices is None:
            vertices = self.images.keys() & other.images.keys()
        return all(self.maybe(v) == other.maybe(v) for v in vertices)

    def is_identity_on(self, vertices: Iterable[Vertex]) -> bool:
        return all(self.maybe(v) == v for v in vertices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Portrait):
            return NotImplemented
        return (
            self.colouring is other.colouring
            and self.base == other.base
            and self.base_image == other.base_image
            and dict(self.local) == dict(other.local)
        )

    __hash__ = None  # type: ignore[assignment]

    def __mul__(self, other: "Portrait") -> "Portrait":
        return compose(self, other)

    def inverse(self) -> "Portrait":
        return invert(self)

    def to_out(self) -> PortraitOut:
        return PortraitOut(
            base=self.base.address,
            base_image=self.base_image.address,
            domain_depth=self.domain_depth,
            local={v.address: list(sigma.images) for v, sigma in sorted(self.local.items())},
        )

    @classmethod
    def from_out(cls, colouring: LegalColouring, data: PortraitOut) -> "Portrait":
        return cls(
            colouring,
            Vertex.parse(data.base),
            Vertex.parse(data.base_image),
            {Vertex.parse(a): Perm(tuple(images)) for a, images in data.local.items()},
        )


# ---------------------------------------------------------------------------
# Basic constructors and arithmetic
# ---------------------------------------------------------------------------


def identity(c: LegalColouring, base: Vertex, radius: int | None = None) -> Portrait:
    tree = c.tree
    if radius is None:
        radius = tree.depth - base.depth - 1
    local = {
        v: Perm.identity(tree.valency(v))
        for v in tree.ball(base, max(radius, 0))
        if not tree.is_leaf(v)
    }
    return Portrait(c, base, base, local)


def from_vertex_map(c: LegalColouring, base: Vertex, mapping: Mapping[Vertex, Vertex]) -> Portrait:
    """Read local actions off an automorphism given as a vertex map."""
    tree = c.tree

    def usable(v: Vertex) -> bool:
        gv = mapping.get(v)
        return (
            gv is not None
            and not tree.is_leaf(v)
            and not tree.is_leaf(gv)
            and all(w in mapping for w in tree.neighbours(v))
        )

    if not usable(base):
        raise DomainError(f"Vertex map does not cover the star of {base}")
    local: dict[Vertex, Perm] = {}
    queue = deque([base])
    seen = {base}
    while queue:
        v = queue.popleft()
        gv = mapping[v]
        images = []
        for x in range(c.colour_count(v.part)):
            u = c.neighbour(v, x)
            colour = c.arc_colour.get(Arc(gv, mapping[u])) if u is not None else None
            if colour is None:
                raise ConstructionError(f"Vertex map is not a tree automorphism at {v}")
            images.append(colour)
        local[v] = Perm(tuple(images))
        for w in tree.neighbours(v):
            if w not in seen and usable(w):
                seen.add(w)
                queue.append(w)
    return Portrait(c, base, mapping[base], local)


def reexpress(g: Portrait, c: LegalColouring) -> Portrait:
    """The same automorphism with local actions read through ``c``."""
    return from_vertex_map(c, g.base, g.images)


def evaluate(g: Portrait, v: Vertex) -> Vertex:
    return g.evaluate(v)


def local_action(g: Portrait, v: Vertex, c: LegalColouring) -> Perm:
    return g.local_action(v, c)


def is_member(g: Portrait, M: PermGroup, N: PermGroup, c: LegalColouring) -> bool:
    return g.is_member(M, N, c)


def compose(g: Portrait, h: Portrait) -> Portrait:
    """``g . h``: first ``h``, then ``g``, on the component of h's base where both are defined."""
    if g.colouring is not h.colouring:
        raise InputError("Portraits must share a reference colouring to be composed")
    tree = g.tree

    def usable(w: Vertex) -> bool:
        hw = h.maybe(w)
        return w in h.local and hw is not None and hw in g.local

    if not usable(h.base):
        raise DomainError(
            "Composite has an empty domain",
            f"{h.base_image} is outside the portrait based at {g.base}",
        )
    local: dict[Vertex, Perm] = {}
    queue = deque([h.base])
    seen = {h.base}
    while queue:
        w = queue.popleft()
        local[w] = g.local[h.images[w]] * h.local[w]
        for u in tree.neighbours(w):
            if u not in seen and usable(u):
                seen.add(u)
                queue.append(u)
    return Portrait(g.colouring, h.base, g.evaluate(h.base_image), local)


def invert(g: Portrait) -> Portrait:
    local = {}
    for w, sigma in g.local.items():
        gw = g.maybe(w)
        if gw is not None:
            local[gw] = sigma.inverse()
    return Portrait(g.colouring, g.base_image, g.base, local)


# ---------------------------------------------------------------------------
# Unique lift between two colourings
# ---------------------------------------------------------------------------


def _lift_worklist(
    v: Vertex,
    v2: Vertex,
    sigma_inv: ColourPerm,
    c: LegalColouring,
    c2: LegalColouring,
    radius: int,
) -> dict[Vertex, Vertex]:
    tree = c.tree
    mapping = {v: v2}
    used = {v2}
    queue = deque([v])
    while queue:
        w = queue.popleft()
        if tree.distance(v, w) >= radius:
            continue
        gw = mapping[w]
        step = sigma_inv.on(w.part)
        for u, x in c.out_colours(w).items():
            gu = c2.neighbour(gw, step.images[x])
            if gu is None:
                raise DomainError(f"Lift leaves the truncation at {gw}")
            known = mapping.get(u)
            if known is not None:
                if known != gu:
                    raise ConstructionError(f"Forced images disagree at {u}: {known} vs {gu}")
                continue
            if gu in used:
                raise ConstructionError(f"Lift is not injective at {gu}")
            mapping[u] = gu
            used.add(gu)
            queue.append(u)
    return mapping


def _lift_recursive(
    v: Vertex,
    v2: Vertex,
    sigma_inv: ColourPerm,
    c: LegalColouring,
    c2: LegalColouring,
    radius: int,
) -> dict[Vertex, Vertex]:
    mapping = {v: v2}

    def descend(w: Vertex, came_from: Vertex | None, remaining: int) -> None:
        if remaining == 0:
            return
        step = sigma_inv.on(w.part)
        for u, x in c.out_colours(w).items():
            if u == came_from:
                continue
            gu = c2.neighbour(mapping[w], step.images[x])
            if gu is None:
                raise DomainError(f"Lift leaves the truncation at {mapping[w]}")
            mapping[u] = gu
            descend(u, w, remaining - 1)

    descend(v, None, radius)
    return mapping


def lift_map(
    v: Vertex,
    v2: Vertex,
    sigma: ColourPerm,
    c: LegalColouring,
    c2: LegalColouring,
    radius: int | None = None,
    method: str = "worklist",
) -> dict[Vertex, Vertex]:
    """Vertex map of the unique ``g`` with ``g v = v2`` and ``c = sigma c2 g`` on ``B(v, radius)``."""
    tree = c.tree
    if c2.tree.params != tree.params:
        raise InputError("Both colourings must live on the same tree")
    for w in (v, v2):
        if w not in tree:
            raise InputError(f"{w} is not in the truncation")
    if tree.distance(v, v2) % 2:
        raise PreconditionError(f"{v} and {v2} are at odd distance")
    incoming = v.part.other
    if sigma.on(incoming).images[c2.in_colour(v2)] != c.in_colour(v):
        raise PreconditionError(
            "Colour permutation does not match the in-colours",
            f"in-colour {c.in_colour(v)} at {v}, {c2.in_colour(v2)} at {v2}",
        )
    limit = tree.depth - max(v.depth, v2.depth)
    radius = limit if radius is None else min(radius, limit)
    builder = _lift_worklist if method == "worklist" else _lift_recursive
    return builder(v, v2, sigma.inverse(), c, c2, radius)


def from_colour_pair(
    v: Vertex,
    v2: Vertex,
    sigma: ColourPerm,
    c: LegalColouring,
    c2: LegalColouring,
    radius: int | None = None,
    method: str = "worklist",
) -> Portrait:
    """The unique ``g`` with ``g v = v2`` and ``c = sigma c2 g``, read through ``c``."""
    mapping = lift_map(v, v2, sigma, c, c2, radius, method)
    return from_vertex_map(c, v, mapping)


def rigid_element(mu: Perm, v: Vertex, c: LegalColouring, group: PermGroup | None = None) -> Portrait:
    """``g_{mu,v}``: fixes ``v`` and satisfies ``c = mu^ c g``.

    Its local action is ``mu^-1`` at every vertex of the part of ``v`` and the
    identity elsewhere.
    """
    tree = c.tree
    if mu.degree != tree.valency(v):
        raise PreconditionError(
            f"Permutation of degree {mu.degree} does not act on the star of {v}",
            f"{v} lies in V_{v.part.value}",
        )
    if group is not None and mu not in group:
        raise PreconditionError(f"{mu} is not in the local group at {v}")
    hat = ColourPerm.extend(mu, v.part, tree.m, tree.n)
    return from_colour_pair(v, v, hat, c, c)


# ---------------------------------------------------------------------------
# Half-tree surgery and path factorisation
# ---------------------------------------------------------------------------


def half_tree_surgery(
    h: Portrait, a: Arc, M: PermGroup | None = None, N: PermGroup | None = None
) -> Portrait:
    """Agree with ``h`` on ``T_a`` and fix ``T_ā`` pointwise."""
    tree = h.tree
    for end in (a.origin, a.terminus):
        if h.maybe(end) != end:
            raise PreconditionError(f"Surgery needs an element fixing {end}")
    if a.origin not in h.local:
        raise DomainError(f"{a.origin} is outside the portrait domain")
    if M is not None and N is not None and not h.is_member(M, N):
        raise PreconditionError("Surgery input is not a member")

    local = {w: s for w, s in h.local.items() if tree.in_half_tree(a, w)}
    for w in tree.vertices:
        if not tree.is_leaf(w) and not tree.in_half_tree(a, w):
            local[w] = Perm.identity(tree.valency(w))
    base = h.base if h.base in local else a.origin
    image = h.base_image if tree.in_half_tree(a, base) else base
    if base == a.origin:
        image = a.origin
    return Portrait(h.colouring, base, image, local)


@dataclass(frozen=True)
class PathProjection:
    path: tuple[Vertex, ...]
    fibre: Mapping[Vertex, Vertex]

    @classmethod
    def build(cls, tree: TruncatedTree, path: Sequence[Vertex]) -> "PathProjection":
        for u, w in zip(path, path[1:]):
            if not tree.adjacent(u, w):
                raise InputError(f"{u} and {w} are not adjacent")
        if len(set(path)) != len(path):
            raise InputError("Path repeats a vertex")
        fibre = {v: v for v in path}
        queue = deque(path)
        while queue:
            v = queue.popleft()
            for w in tree.neighbours(v):
                if w not in fibre:
                    fibre[w] = fibre[v]
                    queue.append(w)
        return cls(tuple(path), fibre)

    def fibre_of(self, p: Vertex) -> frozenset[Vertex]:
        return frozenset(v for v, owner in self.fibre.items() if owner == p)


def path_decompose(
    g: Portrait,
    path: Sequence[Vertex],
    M: PermGroup | None = None,
    N: PermGroup | None = None,
) -> list[Portrait]:
    """One factor per path vertex, each supported on its fibre; their product is ``g``."""
    tree = g.tree
    projection = PathProjection.build(tree, path)
    for p in path:
        if g.maybe(p) != p:
            raise PreconditionError(f"Element does not fix path vertex {p}")
    if M is not None and N is not None and not g.is_member(M, N):
        raise PreconditionError("Only members can be decomposed")

    factors = []
    for p in projection.path:
        local = {
            w: (s if projection.fibre[w] == p else Perm.identity(s.degree))
            for w, s in g.local.items()
        }
        moved = projection.fibre[g.base] == p
        factors.append(Portrait(g.colouring, g.base, g.base_image if moved else g.base, local))
    return factors


def product(factors: Sequence[Portrait]) -> Portrait:
    result = factors[0]
    for factor in factors[1:]:
        result = compose(result, factor)
    return result


# ---------------------------------------------------------------------------
# Conjugating two colourings
# ---------------------------------------------------------------------------


def conjugating_element(c: LegalColouring, c2: LegalColouring) -> Portrait:
    """``g`` with ``c = c2 g``, based at p and sent to the nearest vertex with p's in-colour."""
    tree = c.tree
    wanted = c.in_colour(tree.p)
    for v2 in tree.vertices:
        if v2.part is Part.X and c2.in_colour(v2) == wanted and not tree.is_leaf(v2):
            logger.debug("Conjugating element sends p to %s", v2)
            return from_colour_pair(tree.p, v2, ColourPerm.identity(tree.m, tree.n), c, c2)
    raise ConstructionError(f"No V_X vertex carries in-colour {wanted} under the second colouring")


def conjugate(g: Portrait, h: Portrait) -> Portrait:
    """``g h g^-1``."""
    return compose(compose(g, h), invert(g))


# ---------------------------------------------------------------------------
# Random and exhaustive members
# ---------------------------------------------------------------------------


@lru_cache(maxsize=256)
def _elements(group: PermGroup) -> tuple[Perm, ...]:
    return tuple(sorted(group.elements()))


@lru_cache(maxsize=4096)
def _sending(group: PermGroup, x: int, y: int) -> tuple[Perm, ...]:
    return tuple(s for s in _elements(group) if s.images[x] == y)


def _choices(
    group: PermGroup, c: LegalColouring, w: Vertex, gw: Vertex, back: Vertex | None,
    images: Mapping[Vertex, Vertex],
) -> tuple[Perm, ...]:
    if back is None:
        return _elements(group)
    target = c.arc_colour.get(Arc(gw, images[back]))
    if target is None:
        return ()
    return _sending(group, c.colour(w, back), target)


def member_radius(tree: TruncatedTree, base: Vertex, base_image: Vertex) -> int:
    """Largest local radius whose image ball stays clear of the leaves."""
    return tree.depth - max(base.depth, base_image.depth) - 1


def random_member(
    M: PermGroup,
    N: PermGroup,
    c: LegalColouring,
    base: Vertex,
    seed: int | random.Random = 0,
    base_image: Vertex | None = None,
    radius: int | None = None,
    fixed: Iterable[Vertex] = (),
) -> Portrait:
    """A member with uniformly random local actions subject to parent-compatibility.

    Vertices in ``fixed`` must be connected to the base through fixed vertices;
    local actions that would move them are never drawn.
    """
    tree = c.tree
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    base_image = base if base_image is None else base_image
    pinned = frozenset(fixed)
    if base in pinned and base_image != base:
        raise PreconditionError(f"Base {base} is pinned but sent to {base_image}")
    limit = member_radius(tree, base, base_image)
    radius = limit if radius is None else min(radius, limit)
    if radius < 0:
        raise DomainError(f"No room for a member based at {base}", "raise the ambient depth")

    images = {base: base_image}
    local: dict[Vertex, Perm] = {}
    for w in tree.ball(base, radius):
        gw = images[w]
        back = None if w == base else tree.path(w, base)[1]
        options = _choices(M if w.part is Part.X else N, c, w, gw, back, images)
        if pinned:
            held = [
                (u, x) for u, x in c.out_colours(w).items() if u in pinned and u != back
            ]
            options = tuple(
                s for s in options if all(c.neighbour(gw, s.images[x]) == u for u, x in held)
            )
        if not options:
            raise PreconditionError(f"No local action at {w} can reach {gw}")
        sigma = rng.choice(options)
        local[w] = sigma
        for u, x in c.out_colours(w).items():
            if u != back:
                gu = c.neighbour(gw, sigma.images[x])
                if gu is None:
                    raise DomainError(f"Random member leaves the truncation at {gw}")
                images[u] = gu
    return Portrait(c, base, base_image, local)


def enumerate_members(
    M: PermGroup,
    N: PermGroup,
    c: LegalColouring,
    base: Vertex,
    base_image: Vertex | None = None,
    radius: int = 0,
    fixed: Iterable[Vertex] = (),
) -> Iterator[Portrait]:
    """Every member with local actions on ``B(base, radius)`` sending base to base_image.

    Candidates moving a vertex of ``fixed`` are pruned as soon as that vertex
    receives an image.
    """
    tree = c.tree
    base_image = base if base_image is None else base_image
    pinned = frozenset(fixed)
    if base in pinned and base_image != base:
        return
    order = [w for w in tree.ball(base, radius)]
    if any(tree.is_leaf(w) for w in order):
        raise DomainError("Enumeration ball reaches the leaves", "raise the ambient depth")
    backs = {w: (None if w == base else tree.path(w, base)[1]) for w in order}
    images: dict[Vertex, Vertex] = {base: base_image}
    local: dict[Vertex, Perm] = {}
    bound = config.settings.MAX_ENUMERATION
    count = 0

    # explicit stack of (index, remaining options, vertices added by the current option)
    stack: list[tuple[int, list[Perm], list[Vertex]]] = []

    def options_at(index: int) -> list[Perm]:
        w = order[index]
        group = M if w.part is Part.X else N
        return list(_choices(group, c, w, images[w], backs[w], images))

    if not order:
        return
    stack.append((0, options_at(0), []))
    while stack:
        index, options, added = stack.pop()
        w = order[index]
        for u in added:
            del images[u]
        local.pop(w, None)
        while options:
            sigma = options.pop(0)
            gw = images[w]
            new: list[Vertex] = []
            ok = True
            for u, x in c.out_colours(w).items():
                if u == backs[w]:
                    continue
                gu = c.neighbour(gw, sigma.images[x])
                if gu is None or (u in pinned and gu != u):
                    ok = False
                    break
                images[u] = gu
                new.append(u)
            if not ok:
                for u in new:
                    del images[u]
                continue
            local[w] = sigma
            if index + 1 == len(order):
                count += 1
                if count > bound:
                    raise ResourceError(f"Member enumeration exceeded {bound} portraits")
                yield Portrait(c, base, base_image, dict(local))
                for u in new:
                    del images[u]
                del local[w]
                continue
            stack.append((index, options, new))
            stack.append((index + 1, options_at(index + 1), []))
            break


def random_tree_automorphism(c: LegalColouring, seed: int = 0) -> Portrait:
    """An arbitrary automorphism fixing p and q, not necessarily a member."""
    tree = c.tree
    rng = random.Random(seed)
    mapping = {tree.p: tree.p, tree.q: tree.q}
    for v in tree.vertices:
        kids = tree.children(mapping[v])
        rng.shuffle(kids)
        for child, image in zip(tree.children(v), kids):
            mapping[child] = image
    return from_vertex_map(c, tree.p, mapping)


__all__ = [
    "ColourPerm",
    "Portrait",
    "PathProjection",
    "identity",
    "from_vertex_map",
    "reexpress",
    "evaluate",
    "local_action",
    "is_member",
    "compose",
    "invert",
    "lift_map",
    "from_colour_pair",
    "rigid_element",
    "half_tree_surgery",
    "path_decompose",
    "product",
    "conjugating_element",
    "conjugate",
    "member_radius",
    "random_member",
    "enumerate_members",
    "random_tree_automorphism",
]
