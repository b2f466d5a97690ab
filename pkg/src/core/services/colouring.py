"""Legal colourings of the truncated tree.

A colouring assigns every arc leaving a V_X vertex a point of X and every arc
leaving a V_Y vertex a point of Y, bijectively on each full out-star, and so
that all arcs entering one vertex share a colour.  Leaves carry no outgoing
arcs.
"""

from __future__ import annotations

import logging
import random
from collections import deque
from functools import cached_property
from typing import Callable, Mapping

from src.core.services.permgroup import PermGroup
from src.core.services.tree import Arc, P, Part, Q, TruncatedTree, Vertex
from src.shared.exceptions import InputError
from src.shared.schemas.colouring import ColouringCheck, ColouringOut

logger = logging.getLogger(__name__)


class LegalColouring:
    def __init__(self, tree: TruncatedTree, arc_colour: Mapping[Arc, int]):
        self.tree = tree
        self._colour = dict(arc_colour)

    @property
    def arc_colour(self) -> Mapping[Arc, int]:
        return self._colour

    def colour_count(self, part: Part) -> int:
        return self.tree.m if part is Part.X else self.tree.n

    def colour(self, u: Vertex, w: Vertex) -> int:
        try:
            return self._colour[Arc(u, w)]
        except KeyError:
            raise InputError(f"Arc {u}->{w} carries no colour") from None

    @cached_property
    def _in_colour(self) -> dict[Vertex, int]:
        result: dict[Vertex, int] = {}
        for arc, colour in self._colour.items():
            result.setdefault(arc.terminus, colour)
        return result

    def in_colour(self, v: Vertex) -> int:
        """The constant colour on arcs entering ``v``."""
        return self._in_colour[v]

    @cached_property
    def _by_colour(self) -> dict[Vertex, dict[int, Vertex]]:
        table: dict[Vertex, dict[int, Vertex]] = {}
        for arc, colour in self._colour.items():
            table.setdefault(arc.origin, {})[colour] = arc.terminus
        return table

    def neighbour(self, v: Vertex, colour: int) -> Vertex | None:
        """The neighbour of ``v`` along its out-arc of ``colour``; None outside the truncation."""
        return self._by_colour.get(v, {}).get(colour)

    def out_colours(self, v: Vertex) -> dict[Vertex, int]:
        return {w: colour for colour, w in self._by_colour.get(v, {}).items()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LegalColouring):
            return NotImplemented
        return self.tree.params == other.tree.params and self._colour == other._colour

    __hash__ = None  # type: ignore[assignment]

    def to_out(self) -> ColouringOut:
        return ColouringOut(
            m=self.tree.m,
            n=self.tree.n,
            depth=self.tree.depth,
            arcs={
                f"{arc.origin.address}->{arc.terminus.address}": colour
                for arc, colour in sorted(self._colour.items())
            },
        )

    @classmethod
    def from_out(cls, tree: TruncatedTree, data: ColouringOut) -> "LegalColouring":
        if (data.m, data.n, data.depth) != (tree.m, tree.n, tree.depth):
            raise InputError("Serialized colouring belongs to a different tree")
        colours = {}
        for key, colour in data.arcs.items():
            origin, _, terminus = key.partition("->")
            colours[Arc(Vertex.parse(origin), Vertex.parse(terminus))] = colour
        return cls(tree, colours)


def _propagate(
    tree: TruncatedTree,
    root_colours: tuple[int, int],
    arrange: Callable[[list[int]], list[int]],
) -> LegalColouring:
    colours: dict[Arc, int] = {}
    in_colour = {Q: root_colours[0], P: root_colours[1]}
    queue = deque([P, Q])
    while queue:
        v = queue.popleft()
        if tree.is_leaf(v):
            continue
        parent = tree.parent(v)
        forced = in_colour[parent]
        colours[Arc(v, parent)] = forced
        palette = arrange([x for x in range(tree.valency(v)) if x != forced])
        for child, x in zip(tree.children(v), palette):
            colours[Arc(v, child)] = x
            in_colour[child] = x
            queue.append(child)
    return LegalColouring(tree, colours)


def complete_colouring(tree: TruncatedTree, partial: Mapping[Arc, int]) -> LegalColouring:
    """Extend colours given on whole out-stars near the root edge to the truncation.

    Uncoloured stars take their parent's in-colour on the parent arc and the
    remaining colours in index order on the children.
    """
    colours = dict(partial)
    in_colour: dict[Vertex, int] = {arc.terminus: colour for arc, colour in colours.items()}
    for v in tree.vertices:
        if tree.is_leaf(v) or Arc(v, tree.parent(v)) in colours:
            continue
        parent = tree.parent(v)
        if parent not in in_colour:
            raise InputError(f"Cannot extend the colouring at {v}: {parent} has no in-colour")
        forced = in_colour[parent]
        colours[Arc(v, parent)] = forced
        palette = [x for x in range(tree.valency(v)) if x != forced]
        for child, x in zip(tree.children(v), palette):
            colours[Arc(v, child)] = x
            in_colour[child] = x
    return LegalColouring(tree, colours)


def _check_degrees(tree: TruncatedTree, M: PermGroup | None, N: PermGroup | None) -> None:
    if M is not None and M.degree != tree.m:
        raise InputError(f"M has degree {M.degree} but V_X vertices have valency {tree.m}")
    if N is not None and N.degree != tree.n:
        raise InputError(f"N has degree {N.degree} but V_Y vertices have valency {tree.n}")


def canonical_colouring(
    tree: TruncatedTree, M: PermGroup | None = None, N: PermGroup | None = None
) -> LegalColouring:
    _check_degrees(tree, M, N)
    return _propagate(tree, (0, 0), lambda palette: palette)


def random_colouring(
    tree: TruncatedTree,
    M: PermGroup | None = None,
    N: PermGroup | None = None,
    seed: int = 0,
) -> LegalColouring:
    _check_degrees(tree, M, N)
    rng = random.Random(seed)
    roots = (rng.randrange(tree.m), rng.randrange(tree.n))

    def shuffled(palette: list[int]) -> list[int]:
        rng.shuffle(palette)
        return palette

    return _propagate(tree, roots, shuffled)


def validate(c: LegalColouring) -> ColouringCheck:
    """Check the three colouring conditions; the first failure is reported."""
    tree = c.tree
    errors: list[tuple[int, Vertex, str]] = []
    warnings: list[str] = []
    entering: dict[Vertex, set[int]] = {}

    for v in tree.vertices:
        condition = 1 if v.part is Part.X else 2
        allowed = c.colour_count(v.part)
        seen: dict[int, Vertex] = {}
        for w in tree.neighbours(v):
            colour = c.arc_colour.get(Arc(v, w))
            if colour is None:
                if not tree.is_leaf(v):
                    errors.append((condition, v, f"arc {v}->{w} is uncoloured"))
                continue
            entering.setdefault(w, set()).add(colour)
            if not 0 <= colour < allowed:
                errors.append((condition, v, f"colour {colour} on {v}->{w} is out of range"))
            elif colour in seen:
                errors.append(
                    (condition, v, f"colour {colour} repeats on {v}->{seen[colour]} and {v}->{w}")
                )
            else:
                seen[colour] = w
        if tree.is_leaf(v) and seen:
            warnings.append(f"leaf {v} carries {len(seen)} outgoing arc(s)")

    for v in tree.vertices:
        values = entering.get(v, set())
        if len(values) > 1:
            errors.append((3, v, f"arcs entering {v} carry colours {sorted(values)}"))

    if not errors:
        return ColouringCheck(
            is_valid=True,
            warnings=warnings + ["out-star bijectivity is checked at non-leaf vertices only"],
        )
    errors.sort(key=lambda item: item[0])
    first_condition, first_vertex, _ = errors[0]
    logger.debug("Colouring rejected: condition %d at %s", first_condition, first_vertex)
    return ColouringCheck(
        is_valid=False,
        violated_condition=first_condition,
        vertex=first_vertex.address,
        blocking_errors=[message for _, _, message in errors],
        warnings=warnings,
    )


__all__ = [
    "LegalColouring",
    "canonical_colouring",
    "complete_colouring",
    "random_colouring",
    "validate",
]
