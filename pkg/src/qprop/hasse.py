"""Covering relations and annotated Hasse diagrams in DOT format.

Vertices are subspaces ordered by containment; each carries a truth-value
marker: filled square (true), filled circle (false), hollow circle (gap),
or unvalued. Output is deterministic: identical input yields identical
DOT bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .errors import DuplicateElements, UnknownName
from .subspaces import contains_subspace
from .valuation import TruthValue


class Marker(Enum):
    TRUE_SQUARE = "true-square"
    FALSE_CIRCLE = "false-circle"
    GAP_HOLLOW = "gap-hollow"
    UNVALUED = "unvalued"


MARKER_OF_VALUE = {
    TruthValue.TRUE: Marker.TRUE_SQUARE,
    TruthValue.FALSE: Marker.FALSE_CIRCLE,
    TruthValue.GAP: Marker.GAP_HOLLOW,
}


@dataclass(frozen=True)
class HasseVertex:
    index: int
    label: str
    dim: int
    marker: Marker = Marker.UNVALUED
    blocks: tuple[str, ...] = ()


@dataclass(frozen=True)
class HasseGraph:
    """Transitive reduction of the containment order over some subspaces."""

    ambient_dim: int
    vertices: tuple[HasseVertex, ...]
    edges: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class DiagramOptions:
    cluster_blocks: bool = False
    include_trivials: bool = True
    label_style: str = "name"  # "name" | "dim"
    graph_name: str = "hasse"


def covering_relation(elements, tol: float | None = None) -> list[tuple[int, int]]:
    """Edges (lower, upper) of the transitive reduction of containment."""
    elements = list(elements)
    for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
            if elements[i].equals(elements[j], tol):
                raise DuplicateElements(f"elements {i} and {j} are equal")
    below = [
        [
            contains_subspace(a, b, tol) and a.dim < b.dim
            for b in elements
        ]
        for a in elements
    ]
    edges = []
    n = len(elements)
    for i in range(n):
        for j in range(n):
            if not below[i][j]:
                continue
            if any(below[i][k] and below[k][j] for k in range(n)):
                continue  # a strictly intermediate element exists
            edges.append((i, j))
    return edges


def build_graph(
    elements,
    labels=None,
    blocks=None,
    tol: float | None = None,
) -> HasseGraph:
    """Hasse graph of a list of subspaces with optional labels and blocks.

    Unlabelled vertices get canonical "dim-k #i" names; ``blocks`` maps an
    element index to the context labels it belongs to (for clustering).
    """
    elements = list(elements)
    if not elements:
        return HasseGraph(0, (), ())
    d = elements[0].ambient_dim
    edges = covering_relation(elements, tol)
    vertices = []
    for i, e in enumerate(elements):
        label = labels[i] if labels and labels[i] is not None else f"dim-{e.dim} #{i}"
        blk = tuple(blocks.get(i, ())) if blocks else ()
        vertices.append(HasseVertex(i, label, e.dim, Marker.UNVALUED, blk))
    return HasseGraph(d, tuple(vertices), tuple(edges))


def annotate(graph: HasseGraph, valuations) -> HasseGraph:
    """Set markers from (name, TruthValue) rows; unmentioned go unvalued."""
    by_label = {v.label: v.index for v in graph.vertices}
    markers = {v.index: Marker.UNVALUED for v in graph.vertices}
    for name, value in valuations:
        if name not in by_label:
            raise UnknownName(f"no vertex labelled {name!r}")
        markers[by_label[name]] = MARKER_OF_VALUE[value]
    vertices = tuple(replace(v, marker=markers[v.index]) for v in graph.vertices)
    return HasseGraph(graph.ambient_dim, vertices, graph.edges)


def merge_graphs(graphs) -> HasseGraph:
    """Disjoint union of already-annotated graphs, indices shifted."""
    graphs = [g for g in graphs if g.vertices]
    if not graphs:
        return HasseGraph(0, (), ())
    dims = {g.ambient_dim for g in graphs}
    if len(dims) != 1:
        raise ValueError(f"cannot merge graphs over different spaces {sorted(dims)}")
    vertices: list[HasseVertex] = []
    edges: list[tuple[int, int]] = []
    offset = 0
    for g in graphs:
        for v in g.vertices:
            vertices.append(replace(v, index=v.index + offset))
        edges.extend((lo + offset, hi + offset) for lo, hi in g.edges)
        offset += len(g.vertices)
    return HasseGraph(graphs[0].ambient_dim, tuple(vertices), tuple(edges))


_SHAPE_ATTRS = {
    Marker.TRUE_SQUARE: 'shape=square, style=filled, fillcolor=black, fontcolor=white',
    Marker.FALSE_CIRCLE: 'shape=circle, style=filled, fillcolor=black, fontcolor=white',
    Marker.GAP_HOLLOW: 'shape=circle',
    Marker.UNVALUED: 'shape=ellipse, style=dashed',
}


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(graph: HasseGraph, options: DiagramOptions | None = None) -> str:
    """Render a HasseGraph as a DOT digraph, ranked bottom-to-top by dimension."""
    opts = options or DiagramOptions()
    lines = [f"digraph {opts.graph_name} {{", "  rankdir=BT;", "  node [fontsize=10];"]

    def node_line(v: HasseVertex, indent: str) -> str:
        label = v.label if opts.label_style == "name" else f"dim {v.dim}"
        return f"{indent}n{v.index} [label={_quote(label)}, {_SHAPE_ATTRS[v.marker]}];"

    if opts.cluster_blocks:
        singles = [v for v in graph.vertices if len(v.blocks) == 1]
        shared = [v for v in graph.vertices if len(v.blocks) != 1]
        block_order = []
        for v in graph.vertices:
            for b in v.blocks:
                if b not in block_order:
                    block_order.append(b)
        for bi, b in enumerate(block_order):
            members = [v for v in singles if v.blocks[0] == b]
            if not members:
                continue
            lines.append(f"  subgraph cluster_{bi} {{")
            lines.append(f"    label={_quote(b)};")
            for v in members:
                lines.append(node_line(v, "    "))
            lines.append("  }")
        for v in shared:
            lines.append(node_line(v, "  "))
    else:
        for v in graph.vertices:
            lines.append(node_line(v, "  "))

    dims = sorted({v.dim for v in graph.vertices})
    for dim in dims:
        ids = [f"n{v.index}" for v in graph.vertices if v.dim == dim]
        if len(ids) > 1:
            lines.append(f"  {{ rank=same; {'; '.join(ids)}; }}")
    for lo, hi in graph.edges:
        lines.append(f"  n{lo} -> n{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"
