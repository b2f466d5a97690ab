"""The box product: the action of the universal group U(M, N)_c on V_Y.

Orbits, edge orbits and suborbits are computed from colour data alone; the
brute-force oracles that check them live in ``approx``.  ``predict`` turns the
classification of M and N into verdicts, each naming the criterion used.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations

from src.core import constants
from src.core.services.colouring import LegalColouring
from src.core.services.permgroup import (
    Classification,
    FiniteGraph,
    PermGroup,
    classify,
    orbital_graph,
    stabiliser,
    wreath_product_action,
)
from src.core.services.portrait import (
    ColourPerm,
    Portrait,
    enumerate_members,
    from_colour_pair,
)
from src.core.services.tree import Part, TruncatedTree, Vertex
from src.shared.exceptions import DomainError, InputError, PreconditionError
from src.shared.schemas.group import ClassificationOut, PermGroupOut
from src.shared.schemas.report import (
    AmalgamOut,
    AnalysisReport,
    QuotientOut,
    Verdict,
    WreathComparisonOut,
)
from src.shared.utils.group_spec import format_group_spec

logger = logging.getLogger(__name__)


def _check_groups(c: LegalColouring, M: PermGroup, N: PermGroup) -> TruncatedTree:
    tree = c.tree
    if (M.degree, N.degree) != (tree.m, tree.n):
        raise InputError(
            "Local groups do not match the tree valencies",
            f"M on {M.degree}, N on {N.degree}; tree is ({tree.m}, {tree.n})",
        )
    return tree


# ---------------------------------------------------------------------------
# Orbits
# ---------------------------------------------------------------------------


def vertex_orbits(c: LegalColouring, M: PermGroup, N: PermGroup) -> dict[Vertex, int]:
    """Orbit id of every vertex of the truncation.

    V_X ids ``0 .. #N-orbits - 1`` follow the N-orbit of the in-colour; V_Y ids
    continue with the M-orbit of the in-colour.
    """
    tree = _check_groups(c, M, N)
    x_orbits, y_orbits = N.orbits(), M.orbits()
    x_label = {colour: i for i, orb in enumerate(x_orbits) for colour in orb}
    y_label = {colour: len(x_orbits) + i for i, orb in enumerate(y_orbits) for colour in orb}
    return {
        v: (x_label if v.part is Part.X else y_label)[c.in_colour(v)] for v in tree.vertices
    }


def edge_orbits(
    c: LegalColouring, M: PermGroup, N: PermGroup
) -> dict[tuple[Vertex, Vertex], tuple[int, int]]:
    """Edge ``(x_end, y_end)`` to the pair of endpoint orbit ids."""
    labels = vertex_orbits(c, M, N)
    result = {}
    for u, v in c.tree.edges():
        x_end, y_end = (u, v) if u.part is Part.X else (v, u)
        result[(x_end, y_end)] = (labels[x_end], labels[y_end])
    return result


def same_orbit_with_element(
    v: Vertex, v2: Vertex, c: LegalColouring, M: PermGroup, N: PermGroup
) -> Portrait | None:
    """A member sending ``v`` to ``v2``, or None when they lie in different orbits."""
    tree = _check_groups(c, M, N)
    if v.part is not v2.part:
        raise PreconditionError(f"{v} and {v2} lie in different parts")
    incoming = v.part.other
    local = M if incoming is Part.X else N
    t = local.transversal(c.in_colour(v2)).get(c.in_colour(v))
    if t is None:
        return None
    sigma = ColourPerm.extend(t, incoming, tree.m, tree.n)
    return from_colour_pair(v, v2, sigma, c, c)


@dataclass(frozen=True)
class QuotientGraph:
    x_orbits: int
    y_orbits: int
    graph: FiniteGraph

    def to_out(self) -> QuotientOut:
        return QuotientOut(
            x_orbits=self.x_orbits,
            y_orbits=self.y_orbits,
            vertices=[str(v) for v in self.graph.vertices],
            edges=sorted(sorted(str(v) for v in edge) for edge in self.graph.edges),
        )


def quotient_graph(M: PermGroup, N: PermGroup) -> QuotientGraph:
    """Complete bipartite on the orbit classes: ``X_i`` per N-orbit, ``Y_j`` per M-orbit."""
    x_count, y_count = len(N.orbits()), len(M.orbits())
    xs = [f"X{i}" for i in range(x_count)]
    ys = [f"Y{j}" for j in range(y_count)]
    edges = frozenset(frozenset((x, y)) for x in xs for y in ys)
    return QuotientGraph(x_count, y_count, FiniteGraph(tuple(xs + ys), edges))


# ---------------------------------------------------------------------------
# Suborbits and orbital graphs
# ---------------------------------------------------------------------------


def suborbit_sizes(M: PermGroup, N: PermGroup, alpha: int, k: int) -> list[int]:
    """Sizes of the orbits of a V_Y vertex stabiliser on the sphere of radius 2k.

    Walks the path away from the centre one step at a time: the first step
    is free under N, every later step is free under the stabiliser of the
    colour pointing back, and that back colour is the colour chosen two
    steps earlier (``alpha``, the centre's in-colour, for the second step).
    """
    if k < 1:
        raise InputError("Suborbit half-distance must be at least 1")
    sizes: list[int] = []

    def walk(step: int, back: int | None, last: int | None, size: int) -> None:
        if step == 2 * k:
            sizes.append(size)
            return
        group = N if step % 2 == 0 else M
        if back is None:
            orbits = group.orbits()
        else:
            orbits = [orb for orb in stabiliser(group, back).orbits() if back not in orb]
        next_back = alpha if step == 0 else last
        for orb in orbits:
            walk(step + 1, next_back, min(orb), size * len(orb))

    walk(0, None, None, 1)
    return sorted(sizes)


def suborbits_box(
    M: PermGroup, N: PermGroup, c: LegalColouring, w: Vertex, k: int
) -> list[int]:
    tree = _check_groups(c, M, N)
    if w.part is not Part.Y:
        raise InputError(f"Suborbits are taken at V_Y vertices; {w} is in V_X")
    if 2 * k > tree.depth - w.depth:
        raise DomainError(
            f"Sphere of radius {2 * k} around {w} leaves the truncation",
            f"need depth at least {w.depth + 2 * k}",
        )
    return suborbit_sizes(M, N, c.in_colour(w), k)


def orbital_graph_box(
    M: PermGroup,
    N: PermGroup,
    c: LegalColouring,
    w: Vertex,
    w2: Vertex,
    margin: int,
) -> FiniteGraph:
    """Orbital graph of the pair ``{w, w2}`` (distance 2) on the inner V_Y vertices.

    ``{u, u2}`` is an edge when the middle vertex lies in the orbit of the
    middle of ``{w, w2}`` and its two colours toward ``u, u2`` form a pair in
    the M-orbit of the original colour pair.
    """
    tree = _check_groups(c, M, N)
    if w.part is not Part.Y or w2.part is not Part.Y or tree.distance(w, w2) != 2:
        raise InputError("Orbital graph needs two V_Y vertices at distance 2")
    middle = tree.path(w, w2)[1]
    middle_orbit = N.orbit(c.in_colour(middle))
    pairs = orbital_graph(M, c.colour(middle, w), c.colour(middle, w2)).edges
    inner = sorted(v for v in tree.inner_vertices(margin) if v.part is Part.Y)
    members = set(inner)

    edges = set()
    for v in tree.vertices:
        if v.part is not Part.X or tree.is_leaf(v) or c.in_colour(v) not in middle_orbit:
            continue
        around = [u for u in tree.neighbours(v) if u in members]
        for u, u2 in combinations(around, 2):
            if frozenset((c.colour(v, u), c.colour(v, u2))) in pairs:
                edges.add(frozenset((u, u2)))
    return FiniteGraph(tuple(inner), frozenset(edges))


def interior_vertices(tree: TruncatedTree, margin: int) -> list[Vertex]:
    """Inner V_Y vertices whose whole 2-ball is inner as well."""
    limit = tree.depth - margin - 2
    return [v for v in tree.vertices if v.part is Part.Y and v.depth <= limit]


# ---------------------------------------------------------------------------
# Predictions
# ---------------------------------------------------------------------------


def imprimitivity_case(M: PermGroup, N: PermGroup) -> str | None:
    """Which reason makes the box product imprimitive, or None if it is primitive."""
    cm, cn = classify(M), classify(N)
    if not cm.transitive:
        return "m-intransitive"
    if not cn.transitive:
        return "n-intransitive"
    if not cm.primitive:
        return "m-imprimitive"
    if cm.regular:
        return "m-regular-2" if M.degree == 2 else "m-regular-delegated"
    return None


def group_out(G: PermGroup) -> PermGroupOut:
    return PermGroupOut(
        degree=G.degree,
        order=G.order(),
        spec=format_group_spec(G),
        orbit_count=len(G.orbits()),
        classification=ClassificationOut.model_validate(classify(G)),
    )


def _verdicts(M: PermGroup, N: PermGroup, cm: Classification, cn: Classification) -> dict[str, Verdict]:
    nontrivial = not M.is_trivial and not N.is_trivial
    no = constants.NO_VERDICT
    verdicts: dict[str, Verdict] = {}

    verdicts["transitive"] = Verdict(value=cm.transitive, citation=constants.CITE_TRANSITIVE)

    if nontrivial:
        case = imprimitivity_case(M, N)
        verdicts["primitive"] = Verdict(
            value=case is None,
            citation=constants.CITE_PRIMITIVE,
            note=constants.DELEGATED if case == "m-regular-delegated" else case,
        )
    else:
        verdicts["primitive"] = Verdict(
            value=no, citation=constants.CITE_PRIMITIVE, note="M and N must be nontrivial"
        )

    failing = [
        name
        for name, c in (("M", cm), ("N", cn))
        if not c.generated_by_point_stabilisers
    ]
    if failing or (M.is_trivial and N.is_trivial):
        reason = (
            f"{' and '.join(failing)} not generated by point stabilisers"
            if failing
            else "both groups trivial"
        )
        verdicts["simple"] = Verdict(value=no, citation=constants.CITE_SIMPLE, note=reason)
    else:
        verdicts["simple"] = Verdict(
            value=cm.transitive or cn.transitive, citation=constants.CITE_SIMPLE
        )

    discrete = cm.semiregular and cn.semiregular
    verdicts["discrete"] = Verdict(value=discrete, citation=constants.CITE_DISCRETE)

    for key, cite in (
        ("subdegree_finite", constants.CITE_SUBDEGREE),
        ("compact_stabilisers", constants.CITE_COMPACT),
    ):
        verdicts[key] = (
            Verdict(value=True, citation=cite, note="finite local groups")
            if nontrivial
            else Verdict(value=no, citation=cite, note="M and N must be nontrivial")
        )

    if cm.transitive and cn.transitive:
        verdicts["compactly_generated"] = Verdict(
            value=True, citation=constants.CITE_COMPACTLY_GENERATED
        )
    else:
        verdicts["compactly_generated"] = Verdict(
            value=no,
            citation=constants.CITE_COMPACTLY_GENERATED,
            note="M and N must be transitive",
        )

    verdicts["cardinality"] = Verdict(
        value=constants.CARDINALITY_COUNTABLE if discrete else constants.CARDINALITY_CONTINUUM,
        citation=constants.CITE_CARDINALITY,
    )
    return verdicts


def predict(M: PermGroup, N: PermGroup, suborbit_depth: int = 2) -> AnalysisReport:
    """Verdicts for U(M, N) as a pure function of the classifications of M and N."""
    if M.degree < 2 or N.degree < 2:
        raise InputError("Both local groups need degree at least 2")
    cm, cn = classify(M), classify(N)
    suborbits = {
        str(2 * k): suborbit_sizes(M, N, 0, k) for k in range(1, suborbit_depth + 1)
    }
    report = AnalysisReport(
        m_group=group_out(M),
        n_group=group_out(N),
        classification_m=ClassificationOut.model_validate(cm),
        classification_n=ClassificationOut.model_validate(cn),
        verdicts=_verdicts(M, N, cm, cn),
        quotient=quotient_graph(M, N).to_out(),
        suborbits=suborbits,
    )
    logger.debug(
        "Predicted box product of degrees (%d, %d): primitive=%s discrete=%s",
        M.degree,
        N.degree,
        report.verdicts["primitive"].value,
        report.verdicts["discrete"].value,
    )
    return report


def construction_checklist(M: PermGroup, N: PermGroup) -> dict[str, Verdict]:
    """Hypotheses for a simple, non-discrete, compactly generated box product, and the conclusions."""
    cm, cn = classify(M), classify(N)
    cite = constants.CITE_CONSTRUCTION
    hypotheses = {
        "m_transitive": cm.transitive,
        "m_not_regular": not cm.regular,
        "m_generated_by_point_stabilisers": cm.generated_by_point_stabilisers,
        "n_transitive": cn.transitive,
        "n_degree_at_least_2": N.degree >= 2,
        "n_generated_by_point_stabilisers": cn.generated_by_point_stabilisers,
    }
    items = {name: Verdict(value=value, citation=cite) for name, value in hypotheses.items()}
    holds = all(hypotheses.values())
    for name in (
        "simple",
        "totally_disconnected",
        "locally_compact",
        "compactly_generated",
        "non_discrete",
    ):
        items[name] = Verdict(
            value=True if holds else constants.NO_VERDICT,
            citation=cite,
            note=None if holds else "hypotheses not met",
        )
    return items


# ---------------------------------------------------------------------------
# Amalgam over the root edge
# ---------------------------------------------------------------------------


def _tower(
    M: PermGroup, N: PermGroup, c: LegalColouring, centre: Vertex, radius: int, fix_edge: bool
) -> int:
    """Order of a root stabiliser restricted to ``B(centre, radius)``, from local data."""
    tree = c.tree
    other = tree.q if centre == tree.p else tree.p
    total = 1
    for u in tree.ball(centre, radius - 1):
        group = M if u.part is Part.X else N
        if u == centre:
            total *= stabiliser(group, c.colour(u, other)).order() if fix_edge else group.order()
        else:
            total *= stabiliser(group, c.colour(u, tree.path(u, centre)[1])).order()
    return total


def amalgam_structure(
    M: PermGroup,
    N: PermGroup,
    c: LegalColouring,
    radius: int | None = None,
    exhaustive: bool = False,
) -> AmalgamOut:
    """Stabilisers of p, q and the edge {p, q}, restricted to balls of ``radius``."""
    tree = _check_groups(c, M, N)
    radius = tree.depth if radius is None else radius
    if not 1 <= radius <= tree.depth:
        raise DomainError(f"Radius {radius} does not fit in depth {tree.depth}")
    if not (classify(M).transitive and classify(N).transitive):
        return AmalgamOut(radius=radius, hypothesis_met=False)

    p, q = tree.p, tree.q
    vertex_orders = {"p": _tower(M, N, c, p, radius, False), "q": _tower(M, N, c, q, radius, False)}
    edge_orders = {"p": _tower(M, N, c, p, radius, True), "q": _tower(M, N, c, q, radius, True)}
    indices = {key: vertex_orders[key] // edge_orders[key] for key in vertex_orders}
    consistent = indices == {"p": tree.m, "q": tree.n} and all(
        vertex_orders[key] % edge_orders[key] == 0 for key in vertex_orders
    )

    counts = None
    if exhaustive:
        counts = {
            "p": sum(1 for _ in enumerate_members(M, N, c, p, radius=radius - 1)),
            "q": sum(1 for _ in enumerate_members(M, N, c, q, radius=radius - 1)),
            "pq@p": sum(1 for _ in enumerate_members(M, N, c, p, radius=radius - 1, fixed=[q])),
            "pq@q": sum(1 for _ in enumerate_members(M, N, c, q, radius=radius - 1, fixed=[p])),
        }
        consistent = consistent and counts == {
            "p": vertex_orders["p"],
            "q": vertex_orders["q"],
            "pq@p": edge_orders["p"],
            "pq@q": edge_orders["q"],
        }
    if not consistent:
        logger.warning("Amalgam orders are inconsistent at radius %d", radius)
    return AmalgamOut(
        radius=radius,
        hypothesis_met=True,
        vertex_stabiliser_orders=vertex_orders,
        edge_stabiliser_orders=edge_orders,
        indices=indices,
        exhaustive=counts,
        consistent=consistent,
    )


# ---------------------------------------------------------------------------
# Comparison with the wreath product
# ---------------------------------------------------------------------------


def wreath_orbital_graph(M: PermGroup, N: PermGroup) -> FiniteGraph:
    """Orbital graph of two functions that differ in one coordinate."""
    W = wreath_product_action(M, N)
    return orbital_graph(W, 0, 1)


def compare_wreath(M: PermGroup, N: PermGroup) -> WreathComparisonOut:
    W = wreath_product_action(M, N)
    cm, cn = classify(M), classify(N)
    box_case = imprimitivity_case(M, N)
    box_primitive: bool | str = (
        constants.NO_VERDICT if M.is_trivial or N.is_trivial else box_case is None
    )
    wreath_primitive = classify(W).primitive
    graph = orbital_graph(W, 0, 1)
    return WreathComparisonOut(
        wreath_degree=W.degree,
        wreath_order=W.order(),
        wreath_primitive=wreath_primitive,
        box_primitive=box_primitive,
        box_discrete=cm.semiregular and cn.semiregular,
        box_cardinality=(
            constants.CARDINALITY_COUNTABLE
            if cm.semiregular and cn.semiregular
            else constants.CARDINALITY_CONTINUUM
        ),
        criteria_agree=box_primitive == wreath_primitive,
        orbital_graph_vertices=len(graph.vertices),
        orbital_graph_edges=len(graph.edges),
    )


__all__ = [
    "QuotientGraph",
    "vertex_orbits",
    "edge_orbits",
    "same_orbit_with_element",
    "quotient_graph",
    "suborbit_sizes",
    "suborbits_box",
    "orbital_graph_box",
    "interior_vertices",
    "imprimitivity_case",
    "group_out",
    "predict",
    "construction_checklist",
    "amalgam_structure",
    "wreath_orbital_graph",
    "compare_wreath",
]
