"""Hypothesis strategies for multigraphs and coloured multigraphs."""

from hypothesis import strategies as st

from expander_extract.coloring import EdgeColoredGraph, VertexColoredGraph
from expander_extract.multigraph import MultiGraph
from expander_extract.oracle import blue_subdivision


@st.composite
def multigraphs(draw, min_vertices=1, max_vertices=7, max_edges=14, loops=True, connected=False):
    n = draw(st.integers(min_vertices, max_vertices))
    edges = []
    if connected:
        for v in range(1, n):
            edges.append((draw(st.integers(0, v - 1)), v))
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    if not loops:
        pair = pair.filter(lambda p: p[0] != p[1])
    if n > 1 or loops:
        edges += draw(st.lists(pair, max_size=max_edges))
    return MultiGraph(range(n), edges)


@st.composite
def vertex_colored_graphs(draw, max_vertices=6, max_blue=4):
    base = draw(multigraphs(min_vertices=1, max_vertices=max_vertices, max_edges=9))
    slots = [(u, v, k) for (u, v), m in base.edge_counts.items() for k in range(m)]
    sizes = {s: draw(st.integers(0, max_blue)) for s in slots}
    return blue_subdivision(base, sizes)


@st.composite
def edge_colored_graphs(draw, max_vertices=7):
    g = draw(multigraphs(min_vertices=1, max_vertices=max_vertices, max_edges=16))
    blue = {p: draw(st.integers(0, m)) for p, m in g.edge_counts.items()}
    return EdgeColoredGraph(g, blue)


@st.composite
def subsets_of(draw, vertices):
    return frozenset(draw(st.sets(st.sampled_from(sorted(vertices))))) if vertices else frozenset()
