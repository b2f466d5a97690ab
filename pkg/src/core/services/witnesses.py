"""Checkable evidence for the primitivity and discreteness verdicts.

Negative primitivity verdicts come with a partition of the inner V_Y vertices
that the finite approximation preserves.  Positive ones come with a
certificate: a chain of explicit members showing that any invariant relation
containing a given pair collapses.  Non-discreteness comes with a nontrivial
member fixing a prescribed finite set.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

import config
from src.core import constants
from src.core.services.approx import FiniteApprox
from src.core.services.boxgroup import imprimitivity_case, orbital_graph_box, vertex_orbits
from src.core.services.colouring import LegalColouring
from src.core.services.permgroup import (
    FiniteGraph,
    Partition,
    PermGroup,
    classify,
    minimal_block,
    stabiliser,
)
from src.core.services.portrait import Portrait, half_tree_surgery, rigid_element
from src.core.services.tree import Arc, Part, TruncatedTree, Vertex
from src.shared.exceptions import (
    ConstructionError,
    DomainError,
    InputError,
    NoWitnessError,
    PreconditionError,
)
from src.shared.schemas.report import CertificateOut, CertificateStepOut, WitnessOut

logger = logging.getLogger(__name__)

INVARIANT_PARTITION = "invariant-partition"
DISCONNECTED_ORBITAL_GRAPH = "disconnected-orbital-graph"
BLOCK_SYSTEM = "block-system"
FIXING_ELEMENT = "fixing-element"
DELEGATED = "delegated"


@dataclass(frozen=True)
class Witness:
    kind: str
    partition: Partition | None = None
    graph: FiniteGraph | None = None
    element: Portrait | None = None
    fixed: frozenset[Vertex] = frozenset()
    note: str | None = None

    def to_out(self, ref: str, verified: bool) -> WitnessOut:
        cells = None
        if self.partition is not None:
            cells = [sorted(str(v) for v in block) for block in self.partition.blocks()]
        return WitnessOut(
            ref=ref,
            kind=self.kind,
            verified=verified,
            cells=cells,
            element=self.element.to_out() if self.element is not None else None,
            note=self.note,
        )


def _inner_y(tree: TruncatedTree, margin: int) -> list[Vertex]:
    return [v for v in tree.inner_vertices(margin) if v.part is Part.Y]


def _components_on_inner(graph: FiniteGraph, inner: list[Vertex]) -> Partition:
    keep = set(inner)
    blocks = [block & keep for block in graph.components()]
    return Partition.from_blocks(block for block in blocks if block)


# ---------------------------------------------------------------------------
# Imprimitivity
# ---------------------------------------------------------------------------


def imprimitivity_witness(
    M: PermGroup, N: PermGroup, c: LegalColouring, margin: int
) -> Witness:
    """An invariant partition of the inner V_Y vertices, by the first applicable reason."""
    tree = c.tree
    case = imprimitivity_case(M, N)
    if case is None:
        raise PreconditionError("Box product is primitive; there is no imprimitivity witness")
    inner = _inner_y(tree, margin)

    if case == "m-intransitive":
        labels = vertex_orbits(c, M, N)
        cells: dict[int, list[Vertex]] = {}
        for v in inner:
            cells.setdefault(labels[v], []).append(v)
        return Witness(INVARIANT_PARTITION, partition=Partition.from_blocks(cells.values()))

    if case == "n-intransitive":
        graph = orbital_graph_box(M, N, c, tree.q, tree.children(tree.p)[0], 0)
        return Witness(
            DISCONNECTED_ORBITAL_GRAPH,
            partition=_components_on_inner(graph, inner),
            graph=graph,
        )

    if case == "m-imprimitive":
        for y in range(1, M.degree):
            if not minimal_block(M, 0, y).is_universal:
                break
        w, w2 = c.neighbour(tree.p, 0), c.neighbour(tree.p, y)
        assert w is not None and w2 is not None
        graph = orbital_graph_box(M, N, c, w, w2, 0)
        return Witness(
            BLOCK_SYSTEM,
            partition=_components_on_inner(graph, inner),
            graph=graph,
            note=f"colours 0 and {y} share a block of M",
        )

    if case == "m-regular-2":
        halves: dict[int, list[Vertex]] = {0: [], 1: []}
        for v in inner:
            halves[(tree.distance(v, tree.q) // 2) % 2].append(v)
        return Witness(
            INVARIANT_PARTITION,
            partition=Partition.from_blocks(h for h in halves.values() if h),
            note="bipartition of the distance-2 graph",
        )

    logger.warning("Imprimitivity with M regular of degree %d is not constructed", M.degree)
    return Witness(DELEGATED, note=constants.DELEGATED)


def check_partition_witness(witness: Witness, approx: FiniteApprox) -> bool:
    """Nontrivial, non-universal and preserved by every generator where images are defined."""
    partition = witness.partition
    if partition is None or partition.is_universal or partition.is_trivial:
        return False
    for g in approx.generators:
        if not partition.is_invariant_under(g.maybe):
            return False
    return True


# ---------------------------------------------------------------------------
# Primitivity certificates
# ---------------------------------------------------------------------------


@dataclass
class CertificateStep:
    kind: str
    detail: str
    vertices: tuple[Vertex, ...] = ()
    element: Portrait | None = None
    verified: bool = False

    def to_out(self) -> CertificateStepOut:
        return CertificateStepOut(
            kind=self.kind,
            detail=self.detail,
            vertices=[str(v) for v in self.vertices],
            element=self.element.to_out() if self.element is not None else None,
            verified=self.verified,
        )


@dataclass
class Certificate:
    pair: tuple[Vertex, Vertex]
    steps: list[CertificateStep] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return bool(self.steps) and all(step.verified for step in self.steps)

    def to_out(self, ref: str) -> CertificateOut:
        return CertificateOut(
            ref=ref,
            pair=[str(v) for v in self.pair],
            steps=[step.to_out() for step in self.steps],
            verified=self.verified,
        )


def distance_two_graph(tree: TruncatedTree, vertices: Iterable[Vertex]) -> FiniteGraph:
    members = sorted(vertices)
    keep = set(members)
    edges = set()
    for v in tree.vertices:
        around = [u for u in tree.neighbours(v) if u in keep] if not tree.is_leaf(v) else []
        for i, u in enumerate(around):
            for u2 in around[i + 1:]:
                edges.add(frozenset((u, u2)))
    return FiniteGraph(tuple(members), frozenset(edges))


def primitivity_certificate(
    M: PermGroup,
    N: PermGroup,
    c: LegalColouring,
    w: Vertex,
    w2: Vertex,
    margin: int,
) -> Certificate:
    """Show that an invariant relation containing ``(w, w2)`` must be universal."""
    tree = c.tree
    cm, cn = classify(M), classify(N)
    if not (cm.primitive and not cm.regular and cn.transitive):
        raise PreconditionError("Certificates need M primitive and not regular, and N transitive")
    inner = _inner_y(tree, margin)
    if w == w2 or w not in inner or w2 not in inner:
        raise InputError("Need two distinct inner V_Y vertices")

    certificate = Certificate((w, w2))
    route = tree.path(w, w2)
    v = route[-2]
    pair = (w, w2)
    if len(route) > 3:
        w3 = route[-3]
        a, b = c.colour(v, w3), c.colour(v, w2)
        candidates = sorted(s for s in stabiliser(M, a).elements() if s.images[b] != b)
        if not candidates:
            raise ConstructionError(f"No element of M fixes colour {a} and moves colour {b}")
        h = rigid_element(candidates[0].inverse(), v, c)
        certificate.steps.append(
            CertificateStep(
                "stabiliser-element",
                f"member fixing {v} and {w3} and moving {w2}",
                (v, w3, w2),
                h,
                h.fixes(v) and h.fixes(w3) and h.maybe(w2) != w2 and h.is_member(M, N),
            )
        )
        g = half_tree_surgery(h, Arc(v, w3))
        image = g.maybe(w2)
        certificate.steps.append(
            CertificateStep(
                "half-tree-surgery",
                f"member fixing the side of {w3} pointwise, so {w} ~ {w2} gives {w2} ~ {image}",
                (w, w2) if image is None else (w, w2, image),
                g,
                image is not None
                and g.fixes(w)
                and image == h.maybe(w2)
                and tree.distance(w2, image) == 2
                and g.is_member(M, N),
            )
        )
        if image is None:
            return certificate
        pair = (w2, image)

    x, y = c.colour(v, pair[0]), c.colour(v, pair[1])
    certificate.steps.append(
        CertificateStep(
            "local-universality",
            f"M is primitive, so the relation is universal on the neighbours of {v}",
            (v, *pair),
            None,
            minimal_block(M, x, y).is_universal,
        )
    )
    certificate.steps.append(
        CertificateStep(
            "spread",
            "N is transitive and the distance-2 graph on inner V_Y vertices is connected",
            (),
            None,
            cn.transitive and distance_two_graph(tree, inner).is_connected(),
        )
    )
    logger.debug("Certificate for %s ~ %s: %d steps", w, w2, len(certificate.steps))
    return certificate


# ---------------------------------------------------------------------------
# Non-discreteness
# ---------------------------------------------------------------------------


def nondiscreteness_witness(
    M: PermGroup,
    N: PermGroup,
    c: LegalColouring,
    phi: Iterable[Vertex],
    margin: int | None = None,
) -> Witness:
    """A nontrivial member fixing every vertex of ``phi``.

    ``phi`` must lie in the inner ball, at least ``margin`` away from the
    truncation boundary.
    """
    tree = c.tree
    fixed = frozenset(phi)
    margin = config.settings.DEFAULT_MARGIN if margin is None else margin
    outside = sorted(v for v in fixed if v not in tree or v.depth > tree.depth - margin)
    if outside:
        raise InputError(
            f"{len(outside)} vertices of the fixed set lie outside the inner ball",
            f"first is {outside[0]}, margin {margin}",
        )
    cm, cn = classify(M), classify(N)
    if cm.semiregular and cn.semiregular:
        raise NoWitnessError(
            "M and N are both semi-regular, so the box product is discrete",
            "the pointwise stabiliser of two vertices at distance 2 is trivial",
        )
    part = Part.X if not cm.semiregular else Part.Y
    group = M if part is Part.X else N
    movers = {
        colour: stab
        for colour in range(group.degree)
        if not (stab := stabiliser(group, colour)).is_trivial
    }

    for v in tree.vertices:
        if v.part is not part or tree.is_leaf(v):
            continue
        parent = tree.parent(v)
        colour = c.colour(v, parent)
        if colour not in movers:
            continue
        arc = Arc(v, parent)
        if any(tree.in_half_tree(arc, x) for x in fixed):
            continue
        mu = movers[colour].generators[0]
        g = half_tree_surgery(rigid_element(mu, v, c), arc)
        logger.debug("Non-discreteness witness supported below %s", v)
        return Witness(FIXING_ELEMENT, element=g, fixed=fixed, note=f"supported below {v}")
    raise DomainError(
        "No subtree of the truncation avoids the fixed set", "raise the ambient depth"
    )


def check_fixing_witness(witness: Witness, M: PermGroup, N: PermGroup) -> bool:
    g = witness.element
    if g is None:
        return False
    moves = any(image != v for v, image in g.images.items())
    return moves and g.is_identity_on(witness.fixed) and g.is_member(M, N)


__all__ = [
    "Witness",
    "Certificate",
    "CertificateStep",
    "INVARIANT_PARTITION",
    "DISCONNECTED_ORBITAL_GRAPH",
    "BLOCK_SYSTEM",
    "FIXING_ELEMENT",
    "DELEGATED",
    "imprimitivity_witness",
    "check_partition_witness",
    "distance_two_graph",
    "primitivity_certificate",
    "nondiscreteness_witness",
    "check_fixing_witness",
]
