"""Command-line front end for box-product analyses."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextvars import ContextVar
from typing import Any, Callable

from pydantic import BaseModel, ValidationError

import config
from src.core import constants
from src.core.services.boxgroup import (
    compare_wreath,
    construction_checklist,
    imprimitivity_case,
    orbital_graph_box,
    predict,
    quotient_graph,
    suborbits_box,
    vertex_orbits,
    wreath_orbital_graph,
)
from src.core.services.operation_result import OperationResult
from src.core.services.permgroup import classify
from src.core.services.tree import Part, Vertex
from src.core.services.verification import BatteryContext, run_battery, run_check
from src.core.services.witnesses import (
    DELEGATED,
    check_fixing_witness,
    check_partition_witness,
    imprimitivity_witness,
    nondiscreteness_witness,
    primitivity_certificate,
)
from src.shared.exceptions import AppError, ErrorResponse, InputError, NoWitnessError
from src.shared.schemas.job import JobSpec
from src.shared.schemas.report import AnalysisReport, CertificateOut, WitnessOut
from src.shared.utils.dot_format import DOT_TARGETS, graph_to_dot, tree_to_dot
from src.shared.utils.group_spec import parse_group_spec

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_ERROR = 2

# Job id of the current invocation; main.JobIdFilter copies it onto log records
job_id_var: ContextVar[str] = ContextVar("job_id", default="-")


# -------------------------------------------------------------------
# Output helpers
# -------------------------------------------------------------------


def render_text(data: Any, indent: int = 0) -> str:
    """Plain-text rendering of a JSON-compatible value."""
    pad = "  " * indent
    if isinstance(data, dict):
        lines = []
        for key, value in data.items():
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(value)}")
        return "\n".join(lines)
    if isinstance(data, list):
        if all(not isinstance(item, (dict, list)) for item in data):
            return f"{pad}{', '.join(_scalar(item) for item in data)}"
        return "\n".join(f"{pad}-\n{render_text(item, indent + 1)}" for item in data)
    return f"{pad}{_scalar(data)}"


def _scalar(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, (dict, list)):
        return "none"
    return str(value)


def _dump(payload: BaseModel | dict, output_format: str) -> str:
    if isinstance(payload, BaseModel):
        if output_format == "json":
            return payload.model_dump_json(indent=2) + "\n"
        return render_text(payload.model_dump(mode="json")) + "\n"
    if output_format == "json":
        return json.dumps(payload, indent=2) + "\n"
    return render_text(payload) + "\n"


def _emit(job: JobSpec, text: str) -> None:
    if job.out:
        with open(job.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        logger.info("Wrote %s", job.out)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def job_from_args(args: argparse.Namespace) -> JobSpec:
    try:
        job = JobSpec(
            m_spec=args.m_spec,
            n_spec=args.n_spec,
            depth=args.depth,
            margin=args.margin,
            seed=args.seed,
            battery=args.battery,
            out=args.out,
            output_format=args.format,
        )
    except ValidationError as exc:
        first = exc.errors()[0]
        raise InputError(f"Invalid job: {first['msg']}", str(exc)) from None
    job_id_var.set(job.job_id)
    return job


# -------------------------------------------------------------------
# Subcommands
# -------------------------------------------------------------------


def _imprimitivity_out(ctx: BatteryContext, ref: str) -> WitnessOut:
    witness = imprimitivity_witness(ctx.M, ctx.N, ctx.colouring, ctx.margin)
    if witness.kind == DELEGATED:
        return witness.to_out(ref, False)
    return witness.to_out(ref, check_partition_witness(witness, ctx.approx))


def _nondiscreteness_out(ctx: BatteryContext, ref: str, radius: int) -> WitnessOut:
    tree = ctx.tree
    phi = [u for u in tree.ball(tree.q, radius) if u.part is Part.Y]
    witness = nondiscreteness_witness(ctx.M, ctx.N, ctx.colouring, phi, ctx.margin)
    return witness.to_out(ref, check_fixing_witness(witness, ctx.M, ctx.N))


def _default_pair(ctx: BatteryContext) -> tuple[Vertex, Vertex]:
    tree = ctx.tree
    far = [w for w in ctx.inner_y if tree.distance(tree.q, w) in (2, 4)]
    if not far:
        raise InputError("No inner V_Y vertex at distance 2 or 4 from q", "raise the depth")
    return tree.q, max(far, key=lambda w: (tree.distance(tree.q, w), w))


def _certificate_out(ctx: BatteryContext, ref: str, pair: tuple[Vertex, Vertex]) -> CertificateOut:
    certificate = primitivity_certificate(ctx.M, ctx.N, ctx.colouring, *pair, ctx.margin)
    return certificate.to_out(ref)


def build_report(job: JobSpec, verify: bool = True) -> AnalysisReport:
    ctx = BatteryContext.from_job(job)
    M, N = ctx.M, ctx.N
    report = predict(M, N)
    report.job_id = job.job_id
    if not (M.is_trivial or N.is_trivial):
        if imprimitivity_case(M, N) is None:
            report.certificates.append(_certificate_out(ctx, "C1", _default_pair(ctx)))
            report.verdicts["primitive"].witness_ref = "C1"
        else:
            report.witnesses.append(_imprimitivity_out(ctx, "W1"))
            report.verdicts["primitive"].witness_ref = "W1"
    cm, cn = classify(M), classify(N)
    if not (cm.semiregular and cn.semiregular):
        report.witnesses.append(_nondiscreteness_out(ctx, "W2", 0))
        report.verdicts["discrete"].witness_ref = "W2"
    if verify:
        report.verification = run_battery(job)
    return report


def analyze(args: argparse.Namespace) -> int:
    job = job_from_args(args)
    report = build_report(job, verify=not args.no_verify)
    _emit(job, _dump(report, job.output_format))
    passed = all(item.passed for item in report.verification) and all(
        w.verified for w in report.witnesses if w.kind != DELEGATED
    ) and all(c.verified for c in report.certificates)
    return EXIT_OK if passed else EXIT_VERIFICATION_FAILED


def orbits(args: argparse.Namespace) -> int:
    job = job_from_args(args)
    ctx = BatteryContext.from_job(job)
    labels = vertex_orbits(ctx.colouring, ctx.M, ctx.N)
    inner = sorted(ctx.tree.inner_vertices(job.margin))
    oracle: OperationResult = run_check("orbits", ctx)
    payload = {
        "x_orbits": len(ctx.N.orbits()),
        "y_orbits": len(ctx.M.orbits()),
        "citation": constants.CITE_ORBITS,
        "labels": {v.address: labels[v] for v in inner},
        "oracle_agrees": oracle.success,
    }
    _emit(job, _dump(payload, job.output_format))
    return EXIT_OK if oracle.success else EXIT_VERIFICATION_FAILED


def suborbits(args: argparse.Namespace) -> int:
    job = job_from_args(args)
    ctx = BatteryContext.from_job(job)
    sizes = {
        str(2 * k): suborbits_box(ctx.M, ctx.N, ctx.colouring, ctx.tree.q, k)
        for k in range(1, args.k + 1)
    }
    payload = {"centre": ctx.tree.q.address, "citation": constants.CITE_SUBORBITS, "sizes": sizes}
    _emit(job, _dump(payload, job.output_format))
    return EXIT_OK


def witness(args: argparse.Namespace) -> int:
    job = job_from_args(args)
    ctx = BatteryContext.from_job(job)
    if args.kind == "imprimitivity":
        if imprimitivity_case(ctx.M, ctx.N) is None:
            raise InputError("Box product is primitive; use the certificate command")
        out = _imprimitivity_out(ctx, "W1")
    else:
        try:
            out = _nondiscreteness_out(ctx, "W2", args.phi_radius)
        except NoWitnessError:
            logger.info("Both local groups are semi-regular; the box product is discrete")
            raise
    _emit(job, _dump(out, job.output_format))
    return EXIT_OK if out.verified or out.kind == DELEGATED else EXIT_VERIFICATION_FAILED


def certificate(args: argparse.Namespace) -> int:
    job = job_from_args(args)
    ctx = BatteryContext.from_job(job)
    if args.pair:
        first, _, second = args.pair.partition(",")
        pair = (Vertex.parse(first), Vertex.parse(second))
    else:
        pair = _default_pair(ctx)
    out = _certificate_out(ctx, "C1", pair)
    _emit(job, _dump(out, job.output_format))
    return EXIT_OK if out.verified else EXIT_VERIFICATION_FAILED


def quotient(args: argparse.Namespace) -> int:
    job = job_from_args(args)
    graph = quotient_graph(parse_group_spec(job.m_spec), parse_group_spec(job.n_spec))
    _emit(job, _dump(graph.to_out(), job.output_format))
    return EXIT_OK


def export_dot(args: argparse.Namespace) -> int:
    job = job_from_args(args)
    ctx = BatteryContext.from_job(job)
    tree = ctx.tree
    if args.target == "tree":
        text = tree_to_dot(tree, ctx.colouring)
    elif args.target == "orbital":
        neighbour = min(tree.sphere(tree.q, 2).vertices)
        graph = orbital_graph_box(ctx.M, ctx.N, ctx.colouring, tree.q, neighbour, job.margin)
        text = graph_to_dot(graph, "orbital")
    elif args.target == "quotient":
        text = graph_to_dot(quotient_graph(ctx.M, ctx.N).graph, "quotient")
    else:
        text = graph_to_dot(wreath_orbital_graph(ctx.M, ctx.N), "wreath_orbital")
    _emit(job, text)
    return EXIT_OK


def compare_wreath_cmd(args: argparse.Namespace) -> int:
    job = job_from_args(args)
    M, N = parse_group_spec(job.m_spec), parse_group_spec(job.n_spec)
    payload = compare_wreath(M, N).model_dump(mode="json")
    payload["construction_checklist"] = {
        name: verdict.model_dump(mode="json")
        for name, verdict in construction_checklist(M, N).items()
    }
    _emit(job, _dump(payload, job.output_format))
    return EXIT_OK


# -------------------------------------------------------------------
# Parser
# -------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m-spec", default=JobSpec.model_fields["m_spec"].default)
    common.add_argument("--n-spec", default=JobSpec.model_fields["n_spec"].default)
    common.add_argument("--depth", type=int, default=config.settings.DEFAULT_DEPTH)
    common.add_argument("--margin", type=int, default=config.settings.DEFAULT_MARGIN)
    common.add_argument("--seed", type=int, default=config.settings.DEFAULT_SEED)
    common.add_argument("--battery", type=int, default=config.settings.DEFAULT_BATTERY)
    common.add_argument("--out", default=None, help="write to this file instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    return common


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Box product U(M, N) analysis CLI")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    commands: list[tuple[str, str, Callable[[argparse.Namespace], int]]] = [
        ("analyze", "Predict every property and run the verification battery", analyze),
        ("orbits", "Vertex orbits on the inner ball", orbits),
        ("suborbits", "Suborbit sizes around q", suborbits),
        ("witness", "Imprimitivity or non-discreteness witness", witness),
        ("certificate", "Primitivity certificate for a pair of V_Y vertices", certificate),
        ("quotient", "Quotient graph on the orbit classes", quotient),
        ("export-dot", "Write a graph in DOT format", export_dot),
        ("compare-wreath", "Compare with the finite wreath product", compare_wreath_cmd),
    ]
    subparsers = {}
    for name, help_text, func in commands:
        p = sub.add_parser(name, help=help_text, parents=[common])
        p.set_defaults(func=func)
        subparsers[name] = p

    subparsers["analyze"].add_argument(
        "--no-verify", action="store_true", help="skip the verification battery"
    )
    subparsers["suborbits"].add_argument("--k", type=int, default=2, help="largest half-distance")
    subparsers["witness"].add_argument(
        "--kind", choices=("imprimitivity", "nondiscreteness"), default="imprimitivity"
    )
    subparsers["witness"].add_argument(
        "--phi-radius", type=int, default=0, help="fix the V_Y vertices of this ball around q"
    )
    subparsers["certificate"].add_argument("--pair", default=None, help="two addresses, e.g. q,q.0.0")
    subparsers["export-dot"].add_argument("--target", choices=DOT_TARGETS, default="tree")
    return parser


def cli_main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    token = job_id_var.set("-")
    try:
        return args.func(args)
    except AppError as exc:
        logger.error("%s failed: %s", args.command, exc.message)
        response: ErrorResponse = exc.to_response()
        sys.stderr.write(response.model_dump_json() + "\n")
        sys.stderr.flush()
        return EXIT_ERROR
    finally:
        job_id_var.reset(token)


__all__ = [
    "EXIT_OK",
    "EXIT_VERIFICATION_FAILED",
    "EXIT_ERROR",
    "render_text",
    "job_from_args",
    "build_report",
    "analyze",
    "orbits",
    "suborbits",
    "witness",
    "certificate",
    "quotient",
    "export_dot",
    "compare_wreath_cmd",
    "cli_main",
]


if __name__ == "__main__":
    sys.exit(cli_main())
