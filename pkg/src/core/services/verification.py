"""Verification battery.

Each check compares a prediction made from colour data or from the
classification of M and N with an independent computation on the truncated
tree: closure under the finite approximation, exhaustive member enumeration,
or a second construction.  Failed comparisons are reported as values; a check
only fails outright when its computation raises.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Callable

from src.core import constants
from src.core.services.approx import (
    FiniteApprox,
    edge_orbit_bruteforce,
    finite_approx,
    nontrivial_fixers,
    orbit_partition,
    suborbit_oracle,
)
from src.core.services.boxgroup import (
    amalgam_structure,
    edge_orbits,
    imprimitivity_case,
    predict,
    quotient_graph,
    suborbits_box,
    vertex_orbits,
)
from src.core.services.colouring import LegalColouring, random_colouring, validate
from src.core.services.operation_result import OperationResult
from src.core.services.permgroup import Perm, PermGroup, classify, is_permutation_isomorphic
from src.core.services.portrait import (
    ColourPerm,
    compose,
    conjugate,
    lift_map,
    path_decompose,
    product,
    random_member,
    random_tree_automorphism,
    rigid_element,
)
from src.core.services.recovery import local_group, recover_colouring
from src.core.services.tree import Part, TreeParams, TruncatedTree, Vertex
from src.core.services.witnesses import (
    check_fixing_witness,
    check_partition_witness,
    imprimitivity_witness,
    nondiscreteness_witness,
    primitivity_certificate,
)
from src.shared.exceptions import (
    AppError,
    InputError,
    NoWitnessError,
    PreconditionError,
    ResourceError,
)
from src.shared.schemas.job import JobSpec
from src.shared.schemas.report import VerificationOut
from src.shared.utils.group_spec import parse_group_spec

logger = logging.getLogger(__name__)

MAX_REPORTED_FAILURES = 10


@dataclass
class Tally:
    cases: int = 0
    failed: int = 0
    failures: list[str] = field(default_factory=list)

    def expect(self, ok: bool, message: str) -> bool:
        if not ok:
            self.failed += 1
            if len(self.failures) < MAX_REPORTED_FAILURES:
                self.failures.append(message)
        return ok


@dataclass
class BatteryContext:
    job: JobSpec
    M: PermGroup
    N: PermGroup
    colouring: LegalColouring

    @classmethod
    def from_job(cls, job: JobSpec) -> "BatteryContext":
        M, N = parse_group_spec(job.m_spec), parse_group_spec(job.n_spec)
        tree = TruncatedTree(TreeParams(M.degree, N.degree, job.depth))
        return cls(job, M, N, random_colouring(tree, M, N, seed=job.seed))

    @property
    def tree(self) -> TruncatedTree:
        return self.colouring.tree

    @property
    def margin(self) -> int:
        return self.job.margin

    def rng(self, salt: int = 0) -> random.Random:
        return random.Random(self.job.seed * 1_000_003 + salt)

    @cached_property
    def approx(self) -> FiniteApprox:
        return finite_approx(self.M, self.N, self.colouring, self.margin)

    @cached_property
    def inner_y(self) -> list[Vertex]:
        return [v for v in self.tree.inner_vertices(self.margin) if v.part is Part.Y]


def _classes(labels: dict[Vertex, int], keep: frozenset[Vertex]) -> dict[Vertex, frozenset[Vertex]]:
    grouped: dict[int, set[Vertex]] = {}
    for v in keep:
        grouped.setdefault(labels[v], set()).add(v)
    return {v: frozenset(grouped[labels[v]]) for v in keep}


def _random_perm(rng: random.Random, degree: int, sending: tuple[int, int] | None = None) -> Perm:
    images = list(range(degree))
    rng.shuffle(images)
    if sending is not None:
        source, target = sending
        j = images.index(target)
        images[source], images[j] = images[j], images[source]
    return Perm(tuple(images))


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def check_orbits(ctx: BatteryContext, tally: Tally) -> None:
    inner = ctx.approx.inner
    predicted = _classes(vertex_orbits(ctx.colouring, ctx.M, ctx.N), inner)
    found = _classes(orbit_partition(ctx.approx), inner)
    for v in sorted(inner):
        tally.cases += 1
        tally.expect(predicted[v] == found[v], f"orbit of {v} differs from the colour criterion")


def check_edge_orbits(ctx: BatteryContext, tally: Tally) -> None:
    labels = edge_orbits(ctx.colouring, ctx.M, ctx.N)
    inner = ctx.approx.inner
    seen: set[frozenset[Vertex]] = set()
    classes_per_label: dict[tuple[int, int], int] = {}
    for (x_end, y_end), label in sorted(labels.items()):
        edge = frozenset((x_end, y_end))
        if x_end not in inner or y_end not in inner or edge in seen:
            continue
        tally.cases += 1
        classes_per_label[label] = classes_per_label.get(label, 0) + 1
        for image in edge_orbit_bruteforce(ctx.approx, (x_end, y_end)):
            if not image <= inner:
                continue
            seen.add(image)
            a, b = sorted(image)
            key = (a, b) if a.part is Part.X else (b, a)
            tally.expect(labels[key] == label, f"edge {x_end}-{y_end} reaches {a}-{b}")
    for label, count in classes_per_label.items():
        tally.expect(count == 1, f"endpoint orbits {label} split into {count} edge orbits")

    quotient = quotient_graph(ctx.M, ctx.N)
    tally.cases += 1
    tally.expect(
        (quotient.x_orbits, quotient.y_orbits) == (len(ctx.N.orbits()), len(ctx.M.orbits()))
        and len(quotient.graph.edges) == quotient.x_orbits * quotient.y_orbits,
        "quotient graph is not complete bipartite on the orbit counts",
    )
    if ctx.tree.depth - ctx.margin >= 2:
        tally.expect(
            len(classes_per_label) == quotient.x_orbits * quotient.y_orbits,
            f"{len(classes_per_label)} edge orbits on the inner ball, "
            f"expected {quotient.x_orbits * quotient.y_orbits}",
        )


def check_rigid(ctx: BatteryContext, tally: Tally) -> None:
    tree = TruncatedTree(TreeParams(ctx.tree.m, ctx.tree.n, min(ctx.tree.depth, 4)))
    c = random_colouring(tree, ctx.M, ctx.N, seed=ctx.job.seed)
    rng = ctx.rng(1)
    for group, v in ((ctx.M, tree.p), (ctx.N, tree.q)):
        elements = sorted(group.elements())
        rigids = {mu: rigid_element(mu, v, c) for mu in elements}
        keys = {tuple(sorted(g.local.items())) for g in rigids.values()}
        tally.cases += 1
        tally.expect(len(keys) == len(elements), f"rigid elements at {v} are not injective")
        pairs = [(mu, tau) for mu in elements for tau in elements]
        if len(pairs) > ctx.job.battery:
            pairs = rng.sample(pairs, ctx.job.battery)
        for mu, tau in pairs:
            tally.cases += 1
            composite = compose(rigids[mu], rigids[tau])
            target = rigids[tau * mu]
            tally.expect(
                composite.local[v] == target.local[v] and composite.agrees_with(target),
                f"rigid elements of {mu} and {tau} at {v} do not compose",
            )


def check_unique_lift(ctx: BatteryContext, tally: Tally) -> None:
    tree, c = ctx.tree, ctx.colouring
    c2 = random_colouring(tree, ctx.M, ctx.N, seed=ctx.job.seed + 1)
    rng = ctx.rng(2)
    room = [v for v in tree.vertices if v.depth <= tree.depth - 2]
    by_part = {part: [v for v in room if v.part is part] for part in Part}
    for _ in range(min(50, ctx.job.battery)):
        v = rng.choice(room)
        v2 = rng.choice(by_part[v.part])
        incoming = v.part.other
        sending = (c2.in_colour(v2), c.in_colour(v))
        x = _random_perm(rng, tree.m, sending if incoming is Part.X else None)
        y = _random_perm(rng, tree.n, sending if incoming is Part.Y else None)
        sigma = ColourPerm(x, y)
        mapping = lift_map(v, v2, sigma, c, c2)
        tally.cases += 1
        tally.expect(
            mapping == lift_map(v, v2, sigma, c, c2, method="recursive"),
            f"two constructions of the lift {v} -> {v2} disagree",
        )
        for w, gw in mapping.items():
            if tree.is_leaf(w) or tree.is_leaf(gw):
                continue
            step = sigma.on(w.part)
            for u in tree.neighbours(w):
                if u in mapping:
                    tally.expect(
                        c.colour(w, u) == step.images[c2.colour(gw, mapping[u])],
                        f"lift {v} -> {v2} breaks the colour equation on {w}->{u}",
                    )


def check_path_independence(ctx: BatteryContext, tally: Tally) -> None:
    tree, c = ctx.tree, ctx.colouring
    rng = ctx.rng(3)
    ends = [u for u in tree.ball(tree.q, 3) if u != tree.q and u.depth <= tree.depth - ctx.margin]
    seen: dict[tuple, tuple] = {}
    for _ in range(ctx.job.battery):
        path = tree.path(tree.q, rng.choice(ends))
        g = random_member(ctx.M, ctx.N, c, tree.q, seed=rng, fixed=path)
        factors = path_decompose(g, path, ctx.M, ctx.N)
        tally.cases += 1
        tally.expect(all(f.is_member(ctx.M, ctx.N) for f in factors), "a factor is not a member")
        tally.expect(product(factors).agrees_with(g), "factors do not multiply back")
        tally.expect(
            all(compose(a, b).agrees_with(compose(b, a)) for a, b in combinations(factors, 2)),
            "factors do not commute",
        )
        key = tuple(tuple(sorted(f.local.items())) for f in factors)
        whole = tuple(sorted(g.local.items()))
        tally.expect(seen.setdefault(key, whole) == whole, "two members share a factorisation")


def check_primitivity(ctx: BatteryContext, tally: Tally) -> None:
    M, N, c = ctx.M, ctx.N, ctx.colouring
    if M.is_trivial or N.is_trivial:
        return
    case = imprimitivity_case(M, N)
    if case == "m-regular-delegated":
        logger.warning("Imprimitivity witness delegated for M of degree %d", M.degree)
        return
    if case is not None:
        witness = imprimitivity_witness(M, N, c, ctx.margin)
        tally.cases += 1
        tally.expect(check_partition_witness(witness, ctx.approx), f"{witness.kind} witness fails")
        return
    rng = ctx.rng(4)
    for _ in range(min(20, ctx.job.battery)):
        w, w2 = rng.sample(ctx.inner_y, 2)
        certificate = primitivity_certificate(M, N, c, w, w2, ctx.margin)
        tally.cases += 1
        tally.expect(certificate.verified, f"certificate for {w} ~ {w2} fails")


def _nested_sets(tree: TruncatedTree, radius: int, count: int) -> list[list[Vertex]]:
    ball = [u for u in tree.ball(tree.q, radius) if u.part is Part.Y]
    return [ball[: max(1, math.ceil(len(ball) * (i + 1) / count))] for i in range(count)]


def check_discreteness(ctx: BatteryContext, tally: Tally) -> None:
    M, N, c, tree = ctx.M, ctx.N, ctx.colouring, ctx.tree
    cm, cn = classify(M), classify(N)
    if cm.semiregular and cn.semiregular:
        for w in sorted(tree.sphere(tree.q, 2).vertices)[:3]:
            tally.cases += 1
            count = nontrivial_fixers(M, N, c, [tree.q, w])
            tally.expect(count == 0, f"{count} nontrivial members fix {tree.q} and {w}")
        tally.cases += 1
        try:
            nondiscreteness_witness(M, N, c, [tree.q])
        except NoWitnessError:
            pass
        else:
            tally.expect(False, "a fixing witness was produced for semi-regular groups")
        return
    radius = min(4, tree.depth - ctx.margin) // 2 * 2
    for phi in _nested_sets(tree, radius, 10):
        witness = nondiscreteness_witness(M, N, c, phi, ctx.margin)
        tally.cases += 1
        tally.expect(check_fixing_witness(witness, M, N), f"witness for {len(phi)} vertices fails")


def check_suborbits(ctx: BatteryContext, tally: Tally) -> None:
    tree, q = ctx.tree, ctx.tree.q
    k = 1
    while k <= 2 and 2 * k <= tree.depth - ctx.margin:
        predicted = suborbits_box(ctx.M, ctx.N, ctx.colouring, q, k)
        found = suborbit_oracle(ctx.M, ctx.N, ctx.colouring, q, k)
        tally.cases += 1
        tally.expect(predicted == found, f"suborbits at distance {2 * k}: {predicted} vs {found}")
        tally.expect(
            sum(predicted) == len(tree.sphere(q, 2 * k).vertices),
            f"suborbits at distance {2 * k} do not cover the sphere",
        )
        k += 1


def check_cardinality(ctx: BatteryContext, tally: Tally) -> None:
    verdicts = predict(ctx.M, ctx.N).verdicts
    semiregular = classify(ctx.M).semiregular and classify(ctx.N).semiregular
    tally.cases += 1
    tally.expect(verdicts["discrete"].value == semiregular, "discreteness verdict is inconsistent")
    expected = constants.CARDINALITY_COUNTABLE if semiregular else constants.CARDINALITY_CONTINUUM
    tally.expect(verdicts["cardinality"].value == expected, "cardinality class is inconsistent")


def check_amalgam(ctx: BatteryContext, tally: Tally) -> None:
    if not (classify(ctx.M).transitive and classify(ctx.N).transitive):
        return
    report = amalgam_structure(
        ctx.M, ctx.N, ctx.colouring, radius=min(2, ctx.tree.depth), exhaustive=True
    )
    tally.cases += 1
    tally.expect(report.consistent, f"amalgam orders {report.vertex_stabiliser_orders} inconsistent")


def check_local_action(ctx: BatteryContext, tally: Tally) -> None:
    tree = ctx.tree
    generators = ctx.approx.generators
    for v in (tree.p, tree.q):
        expected = ctx.M if v.part is Part.X else ctx.N
        try:
            found = local_group(generators, v, ctx.margin)
            matched = is_permutation_isomorphic(found, expected) is not None
        except ResourceError:
            logger.warning("Local action at %s is too large to compare", v)
            continue
        tally.cases += 1
        tally.expect(matched, f"local action at {v} is not the prescribed group")


def check_recovery(ctx: BatteryContext, tally: Tally) -> None:
    generators = ctx.approx.generators
    inner = ctx.approx.inner
    if not (classify(ctx.M).transitive and classify(ctx.N).transitive):
        tally.cases += 1
        try:
            recover_colouring(generators, ctx.M, ctx.N, ctx.margin)
        except PreconditionError:
            return
        tally.expect(False, "recovery accepted an intransitive local group")
        return
    for i in range(min(10, ctx.job.battery)):
        h = random_tree_automorphism(ctx.colouring, seed=ctx.job.seed + i)
        moved = [conjugate(h, g) for g in generators]
        recovered = recover_colouring(moved, ctx.M, ctx.N, ctx.margin)
        tally.cases += 1
        tally.expect(validate(recovered).is_valid, f"trial {i}: recovered colouring is not legal")
        tally.expect(
            all(
                g.is_member(
                    ctx.M,
                    ctx.N,
                    recovered,
                    vertices=[v for v in g.local if v in inner and g.maybe(v) in inner],
                )
                for g in moved
            ),
            f"trial {i}: a conjugated generator is not a member under the recovered colouring",
        )


CheckFn = Callable[[BatteryContext, Tally], None]

CHECKS: dict[str, tuple[str, CheckFn]] = {
    "orbits": (constants.CITE_ORBITS, check_orbits),
    "edge-orbits": (constants.CITE_EDGE_ORBITS, check_edge_orbits),
    "rigid": (constants.CITE_RIGID, check_rigid),
    "unique-lift": (constants.CITE_UNIQUE_LIFT, check_unique_lift),
    "independence": (constants.CITE_INDEPENDENCE, check_path_independence),
    "primitivity": (constants.CITE_PRIMITIVE, check_primitivity),
    "discreteness": (constants.CITE_DISCRETE, check_discreteness),
    "suborbits": (constants.CITE_SUBORBITS, check_suborbits),
    "cardinality": (constants.CITE_CARDINALITY, check_cardinality),
    "amalgam": (constants.CITE_AMALGAM, check_amalgam),
    "local-action": (constants.CITE_LOCAL_ACTION, check_local_action),
    "recovery": (constants.CITE_RECOVERY, check_recovery),
}


def run_check(name: str, ctx: BatteryContext) -> OperationResult[Tally]:
    if name not in CHECKS:
        raise InputError(f"Unknown verification {name!r}", f"known: {', '.join(CHECKS)}")
    _, check = CHECKS[name]
    tally = Tally()
    try:
        check(ctx, tally)
    except AppError as exc:
        logger.exception("Verification %s raised", name)
        return OperationResult(success=False, data=tally, error=f"{exc.error_code}: {exc.message}")
    if tally.failed:
        return OperationResult(success=False, data=tally, error=f"{tally.failed} failed case(s)")
    return OperationResult(success=True, data=tally)


def run_battery(job: JobSpec, names: list[str] | None = None) -> list[VerificationOut]:
    ctx = BatteryContext.from_job(job)
    results = []
    for name in names or list(CHECKS):
        outcome = run_check(name, ctx)
        tally = outcome.data or Tally()
        failures = list(tally.failures)
        if outcome.error and not failures:
            failures.append(outcome.error)
        results.append(
            VerificationOut(
                name=name,
                citation=CHECKS[name][0],
                passed=outcome.success,
                cases=tally.cases,
                failures=failures,
            )
        )
    logger.info(
        "Verification battery: %d of %d checks passed",
        sum(r.passed for r in results),
        len(results),
    )
    return results


__all__ = [
    "Tally",
    "BatteryContext",
    "CHECKS",
    "run_check",
    "run_battery",
]
