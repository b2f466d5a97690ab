"""Graphviz DOT writers.

Nodes and edges are emitted in sorted order so the same input always gives
the same bytes.  Render with ``dot -Tpng -O graph.gv``.
"""

from __future__ import annotations

from typing import Hashable, Iterable

from src.core.services.colouring import LegalColouring
from src.core.services.permgroup import FiniteGraph
from src.core.services.tree import Arc, Part, TruncatedTree

DOT_TARGETS = ("tree", "orbital", "quotient", "wreath-orbital")


def _quote(value: object) -> str:
    return '"' + str(value).replace('"', '\\"') + '"'


def _lines(name: str, kind: str, body: Iterable[str]) -> str:
    out = [f"{kind} {_quote(name)} {{"]
    out.extend(f"  {line}" for line in body)
    out.append("}")
    return "\n".join(out) + "\n"


def _sort_key(value: Hashable) -> tuple[str, str]:
    return (type(value).__name__, str(value)) if not isinstance(value, int) else ("", f"{value:08d}")


def tree_to_dot(tree: TruncatedTree, colouring: LegalColouring | None = None) -> str:
    """The truncation with V_X drawn as circles and V_Y as boxes.

    With a colouring each edge is labelled ``x/y``: the colour read from its
    V_X end, then from its V_Y end.
    """
    body = ["node [fontsize=10];"]
    for v in sorted(tree.vertices):
        shape = "circle" if v.part is Part.X else "box"
        body.append(f"{_quote(v)} [shape={shape}];")
    for u, w in sorted(tree.edges()):
        x_end, y_end = (u, w) if u.part is Part.X else (w, u)
        attrs = ""
        if colouring is not None:
            x = colouring.arc_colour.get(Arc(x_end, y_end))
            y = colouring.arc_colour.get(Arc(y_end, x_end))
            label = f"{'-' if x is None else x}/{'-' if y is None else y}"
            attrs = f" [label={_quote(label)}]"
        body.append(f"{_quote(x_end)} -- {_quote(y_end)}{attrs};")
    return _lines(f"tree_{tree.m}_{tree.n}_{tree.depth}", "graph", body)


def graph_to_dot(graph: FiniteGraph, name: str) -> str:
    body = [f"{_quote(v)};" for v in sorted(graph.vertices, key=_sort_key)]
    edges = sorted(
        (tuple(sorted(edge, key=_sort_key)) for edge in graph.edges),
        key=lambda e: tuple(_sort_key(v) for v in e),
    )
    for edge in edges:
        head, tail = edge[0], edge[-1]
        body.append(f"{_quote(head)} -- {_quote(tail)};")
    return _lines(name, "graph", body)


__all__ = ["DOT_TARGETS", "tree_to_dot", "graph_to_dot"]
