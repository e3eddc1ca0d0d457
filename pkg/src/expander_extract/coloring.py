"""Vertex-coloured and edge-coloured multigraphs and their reductions.

In a vertex-coloured graph some degree-2, loop-free vertices are blue and
``red`` smooths all of them away; in an edge-coloured graph some edges are
blue and ``red`` deletes them.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .exceptions import ParseError, PreconditionError, UnknownVertexError
from .multigraph import MultiGraph, _coerce_ids, _lines, edge_key
from .validation import sorted_vertices, vertex_key

__all__ = [
    "BluePath",
    "VertexColoredGraph",
    "EdgeColoredGraph",
    "red_vertex",
    "red_edge",
    "red_degree",
    "maximal_blue_paths",
    "lift",
    "parse_colored",
    "format_colored",
    "read_colored",
]


@dataclass(frozen=True)
class BluePath:
    """A maximal run of consecutive blue vertices.

    ``ends`` are the two black neighbours at either end (equal when the run
    leaves and returns to the same black vertex).  ``size`` counts blue
    vertices; ``length`` counts the edges of the path between the two black
    ends, i.e. ``size + 1``.
    """

    vertices: tuple
    ends: tuple

    @property
    def size(self):
        return len(self.vertices)

    @property
    def length(self):
        return len(self.vertices) + 1


def _slots(g, v):
    return [u for u, m in g.neighbors(v).items() for _ in range(m)]


def _walk_blue_paths(g, blue):
    """Decompose blue vertices into maximal paths; reject all-blue cycles."""
    seen = set()
    paths = []
    for start in sorted_vertices(blue):
        if start in seen:
            continue
        # walk both ways from start, tracking the neighbour we came from
        halves = []
        for direction in (0, 1):
            prev, cur = start, _slots(g, start)[direction]
            run = []
            while cur in blue:
                if cur == start:
                    raise PreconditionError(f"blue cycle through {start!r} has no black vertex")
                run.append(cur)
                slots = _slots(g, cur)
                slots.remove(prev)
                prev, cur = cur, slots[0]
            halves.append((run, cur))
        (left, a), (right, b) = halves
        verts = tuple(reversed(left)) + (start,) + tuple(right)
        if (vertex_key(b), vertex_key(verts[-1])) < (vertex_key(a), vertex_key(verts[0])):
            verts, a, b = tuple(reversed(verts)), b, a
        seen.update(verts)
        paths.append(BluePath(verts, (a, b)))
    return paths


@dataclass(frozen=True)
class VertexColoredGraph:
    """A multigraph with a set of blue vertices, each of degree 2 with no
    loop, and no blue cycle avoiding every black vertex."""

    graph: MultiGraph
    blue_vertices: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        blue = frozenset(self.blue_vertices)
        object.__setattr__(self, "blue_vertices", blue)
        g = self.graph
        for v in blue:
            if v not in g:
                raise UnknownVertexError(f"blue vertex {v!r} is not in the graph")
            if g.loops(v) or g.degree(v) != 2:
                raise PreconditionError(f"blue vertex {v!r} must have degree 2 and no loop")
        object.__setattr__(self, "_paths", _walk_blue_paths(g, blue))

    @property
    def black_vertices(self):
        return self.graph.vertices - self.blue_vertices

    @property
    def blue_paths(self):
        return list(self._paths)

    def induced(self, keep):
        keep = frozenset(keep)
        return VertexColoredGraph(self.graph.induced_subgraph(keep), self.blue_vertices & keep)


def red_vertex(vc, return_provenance=False):
    """Smooth every blue vertex.

    Each maximal blue path collapses to a single edge between its black ends,
    so the result does not depend on smoothing order.  With
    ``return_provenance=True`` also returns a list of ``(pair, path_vertices)``
    recording which blue run each new edge replaced.
    """
    g = vc.graph
    base = g.remove_vertices(vc.blue_vertices)
    counts = dict(base.edge_counts)
    provenance = []
    for path in vc._paths:
        p = edge_key(*path.ends)
        counts[p] = counts.get(p, 0) + 1
        provenance.append((p, path.vertices))
    out = MultiGraph._raw(base.vertices, counts)
    if return_provenance:
        return out, provenance
    return out


def maximal_blue_paths(vc):
    return vc.blue_paths


def lift(vc, h_vertices):
    """Induced subgraph ``H*`` of ``vc`` with ``red(H*)`` equal to the
    subgraph of ``red(vc)`` induced on ``h_vertices``.

    Deleted black vertices are exactly the black vertices outside
    ``h_vertices``; a blue vertex is deleted when either black end of its
    path is deleted.
    """
    keep_black = frozenset(h_vertices)
    bad = keep_black & vc.blue_vertices
    if bad:
        raise PreconditionError(f"h_vertices must be black; blue: {sorted_vertices(bad)!r}")
    unknown = keep_black - vc.graph.vertices
    if unknown:
        raise UnknownVertexError(f"h_vertices outside the graph: {sorted_vertices(unknown)!r}")
    keep = set(keep_black)
    for path in vc._paths:
        a, b = path.ends
        if a in keep_black and b in keep_black:
            keep.update(path.vertices)
    return vc.induced(keep)


@dataclass(frozen=True)
class EdgeColoredGraph:
    """A multigraph with a blue sub-multiset of its edges."""

    graph: MultiGraph
    blue_edges: dict = field(default_factory=dict)

    def __post_init__(self):
        blue = Counter()
        items = self.blue_edges.items() if hasattr(self.blue_edges, "items") else ((e, 1) for e in self.blue_edges)
        for (u, v), m in items:
            if m:
                blue[edge_key(u, v)] += m
        for (u, v), m in blue.items():
            if m < 0 or m > self.graph.multiplicity(u, v):
                raise PreconditionError(
                    f"blue multiplicity {m} of {u!r}-{v!r} exceeds edge multiplicity {self.graph.multiplicity(u, v)}"
                )
        object.__setattr__(self, "blue_edges", dict(blue))
        object.__setattr__(self, "_red", self.graph.remove_edges(self.blue_edges))

    @property
    def red(self):
        return self._red

    def induced(self, keep):
        keep = frozenset(keep)
        blue = {p: m for p, m in self.blue_edges.items() if p[0] in keep and p[1] in keep}
        return EdgeColoredGraph(self.graph.induced_subgraph(keep), blue)


def red_edge(ec):
    """Delete every blue edge (vertex set unchanged)."""
    return ec.red


def red_degree(ec, v):
    return ec.red.degree(v)


# -- coloured text format -------------------------------------------------------


def parse_colored(text, source=None):
    """Parse an edge list with ``!blue-vertex v`` and ``!blue-edge u v k``
    directives.

    Returns ``(graph, blue_vertices, blue_edges)``; wrap the pieces in
    :class:`VertexColoredGraph` or :class:`EdgeColoredGraph`.
    """
    rows = []
    for lineno, toks in _lines(text):
        head = toks[0]
        if head == "!blue-vertex":
            if len(toks) != 2:
                raise ParseError("'!blue-vertex' takes exactly one vertex", lineno, source)
        elif head == "!blue-edge":
            if len(toks) != 4:
                raise ParseError("'!blue-edge' takes 'u v k'", lineno, source)
            try:
                k = int(toks[3])
            except ValueError:
                raise ParseError(f"blue multiplicity {toks[3]!r} is not an integer", lineno, source) from None
            if k < 0:
                raise ParseError("blue multiplicity must be non-negative", lineno, source)
        elif head.startswith("!"):
            raise ParseError(f"unknown directive {head!r}", lineno, source)
        elif len(toks) > 2:
            raise ParseError(f"expected 1 or 2 tokens, got {len(toks)}", lineno, source)
        rows.append((lineno, toks))

    id_tokens = set()
    for _, toks in rows:
        if toks[0] == "!blue-vertex":
            id_tokens.add(toks[1])
        elif toks[0] == "!blue-edge":
            id_tokens.update(toks[1:3])
        else:
            id_tokens.update(toks)
    ids = _coerce_ids(id_tokens)

    verts, edges, blue_v, blue_e = [], [], set(), Counter()
    for lineno, toks in rows:
        if toks[0] == "!blue-vertex":
            blue_v.add(ids[toks[1]])
        elif toks[0] == "!blue-edge":
            blue_e[edge_key(ids[toks[1]], ids[toks[2]])] += int(toks[3])
        elif len(toks) == 1:
            verts.append(ids[toks[0]])
        else:
            edges.append((ids[toks[0]], ids[toks[1]]))
    g = MultiGraph(verts, edges)
    for v in blue_v:
        if v not in g:
            raise ParseError(f"blue vertex {v!r} is not declared in the graph", source=source)
    return g, frozenset(blue_v), dict(blue_e)


def format_colored(colored):
    from .multigraph import format_edge_list

    lines = [format_edge_list(colored.graph).rstrip("\n")]
    if isinstance(colored, VertexColoredGraph):
        lines += [f"!blue-vertex {v}" for v in sorted_vertices(colored.blue_vertices)]
    else:
        for (u, v) in sorted(colored.blue_edges, key=lambda p: (vertex_key(p[0]), vertex_key(p[1]))):
            lines.append(f"!blue-edge {u} {v} {colored.blue_edges[(u, v)]}")
    return "\n".join(x for x in lines if x) + "\n"


def read_colored(path):
    path = Path(path)
    return parse_colored(path.read_text(), source=str(path))
