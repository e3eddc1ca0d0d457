"""Multigraphs with loops and parallel edges, and their expansion metrics.

Degrees count a loop twice.  All expansion values are exact
:class:`~fractions.Fraction` instances; nothing here touches floating point.

Vertex ids are opaque hashables and are never renumbered, so a vertex subset
stays meaningful across every graph derived from the same host.  Wherever a
deterministic choice is needed, subsets are ordered by cardinality first and
then lexicographically on :func:`~expander_extract.validation.vertex_key`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from types import MappingProxyType

from .exceptions import DegenerateInputError, ParseError, PreconditionError, UnknownVertexError
from .validation import as_rational, sorted_vertices, vertex_key

__all__ = [
    "MultiGraph",
    "ExpansionCertificate",
    "degree",
    "volume",
    "cut_size",
    "edge_expansion",
    "cheeger_constant",
    "is_kappa_expander",
    "induced_subgraph",
    "smooth_vertex",
    "iter_connected_subsets",
    "first_connected_subset",
    "parse_edge_list",
    "format_edge_list",
    "read_edge_list",
]


def edge_key(u, v):
    """Canonical unordered pair."""
    return (u, v) if vertex_key(u) <= vertex_key(v) else (v, u)


class MultiGraph:
    """Immutable undirected multigraph.

    Parameters
    ----------
    vertices : iterable
        Vertex ids.  Endpoints of ``edges`` are added automatically.
    edges : iterable
        Pairs ``(u, v)`` (repeat a pair for parallel edges, ``(u, u)`` is a
        loop) or triples ``(u, v, multiplicity)``.
    """

    def __init__(self, vertices=(), edges=()):
        verts = set(vertices)
        counts = Counter()
        for e in edges:
            if len(e) == 3:
                u, v, m = e
                if m < 0:
                    raise PreconditionError(f"negative multiplicity for edge {u!r}-{v!r}")
            else:
                u, v = e
                m = 1
            if m:
                counts[edge_key(u, v)] += int(m)
            verts.add(u)
            verts.add(v)
        self._vertices = frozenset(verts)
        self._edges = dict(counts)

    @classmethod
    def _raw(cls, vertices, counts):
        # trusted constructor: counts already canonical, positive, endpoints in vertices
        g = cls.__new__(cls)
        g._vertices = frozenset(vertices)
        g._edges = counts
        return g

    # -- basic accessors ---------------------------------------------------

    @property
    def vertices(self):
        return self._vertices

    @cached_property
    def ordered_vertices(self):
        return tuple(sorted_vertices(self._vertices))

    @property
    def edge_counts(self):
        """Read-only mapping ``(u, v) -> multiplicity`` over canonical pairs."""
        return MappingProxyType(self._edges)

    def edges(self):
        """Every edge as a pair, parallel edges repeated, in canonical order."""
        for pair in sorted(self._edges, key=lambda p: (vertex_key(p[0]), vertex_key(p[1]))):
            for _ in range(self._edges[pair]):
                yield pair

    @cached_property
    def n_edges(self):
        return sum(self._edges.values())

    def __len__(self):
        return len(self._vertices)

    def __iter__(self):
        return iter(self.ordered_vertices)

    def __contains__(self, v):
        return v in self._vertices

    def multiplicity(self, u, v):
        return self._edges.get(edge_key(u, v), 0)

    @cached_property
    def _incidence(self):
        nbrs = {v: {} for v in self._vertices}
        loops = dict.fromkeys(self._vertices, 0)
        for (u, v), m in self._edges.items():
            if u == v:
                loops[u] += m
            else:
                nbrs[u][v] = nbrs[u].get(v, 0) + m
                nbrs[v][u] = nbrs[v].get(u, 0) + m
        return nbrs, loops

    def _check_vertex(self, v):
        if v not in self._vertices:
            raise UnknownVertexError(f"unknown vertex {v!r}")

    def neighbors(self, v):
        """Mapping of non-loop neighbours of ``v`` to edge multiplicity."""
        self._check_vertex(v)
        return MappingProxyType(self._incidence[0][v])

    def loops(self, v):
        self._check_vertex(v)
        return self._incidence[1][v]

    def degree(self, v):
        self._check_vertex(v)
        nbrs, loops = self._incidence
        return sum(nbrs[v].values()) + 2 * loops[v]

    @cached_property
    def degrees(self):
        nbrs, loops = self._incidence
        return MappingProxyType({v: sum(nbrs[v].values()) + 2 * loops[v] for v in self._vertices})

    # -- derived graphs ----------------------------------------------------

    def _check_subset(self, members, name="subset"):
        members = frozenset(members)
        extra = members - self._vertices
        if extra:
            raise UnknownVertexError(f"{name} contains vertices outside the graph: {sorted_vertices(extra)!r}")
        return members

    def induced_subgraph(self, keep):
        keep = self._check_subset(keep, "keep")
        counts = {p: m for p, m in self._edges.items() if p[0] in keep and p[1] in keep}
        return MultiGraph._raw(keep, counts)

    def remove_vertices(self, drop):
        drop = self._check_subset(drop, "drop")
        return self.induced_subgraph(self._vertices - drop)

    def remove_edges(self, edges):
        """Delete edges given as pairs (repeated for multiplicity) or a mapping
        ``pair -> count``."""
        counts = dict(self._edges)
        items = edges.items() if hasattr(edges, "items") else ((e, 1) for e in edges)
        for (u, v), m in items:
            p = edge_key(u, v)
            have = counts.get(p, 0)
            if m > have:
                raise PreconditionError(f"cannot delete {m} copies of edge {u!r}-{v!r}: only {have} present")
            if have == m:
                counts.pop(p, None)
            else:
                counts[p] = have - m
        return MultiGraph._raw(self._vertices, counts)

    def add_edges(self, edges, vertices=()):
        return MultiGraph(self._vertices | set(vertices), [(u, v, m) for (u, v), m in self._edges.items()] + list(edges))

    def relabel(self, mapping):
        """Rename vertices through ``mapping`` (must be injective on the vertex set)."""
        image = [mapping.get(v, v) for v in self._vertices]
        if len(set(image)) != len(image):
            raise PreconditionError("relabel mapping is not injective")
        counts = Counter()
        for (u, v), m in self._edges.items():
            counts[edge_key(mapping.get(u, u), mapping.get(v, v))] += m
        return MultiGraph._raw(image, dict(counts))

    def is_subgraph_of(self, other):
        """Vertex set and edge multiset both contained in ``other``'s."""
        if not self._vertices <= other._vertices:
            return False
        return all(other._edges.get(p, 0) >= m for p, m in self._edges.items())

    # -- connectivity ------------------------------------------------------

    def components(self):
        """Connected components as frozensets, in discovery order from the
        smallest vertex."""
        nbrs = self._incidence[0]
        seen = set()
        out = []
        for s in self.ordered_vertices:
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                u = stack.pop()
                for w in nbrs[u]:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            out.append(frozenset(comp))
        return out

    def is_connected(self):
        return len(self._vertices) > 0 and len(self.components()) == 1

    # -- dunder ------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MultiGraph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self):
        return hash((self._vertices, frozenset(self._edges.items())))

    def __repr__(self):
        return f"MultiGraph(n={len(self._vertices)}, e={self.n_edges})"

    def to_networkx(self):
        import networkx as nx

        g = nx.MultiGraph()
        g.add_nodes_from(self.ordered_vertices)
        g.add_edges_from(self.edges())
        return g

    @cached_property
    def _indexed(self):
        return _Indexed(self)


class _Indexed:
    """Bitmask view of a graph: vertex ``i`` of ``order`` is bit ``i``."""

    def __init__(self, g):
        self.order = g.ordered_vertices
        self.index = {v: i for i, v in enumerate(self.order)}
        nbrs, loops = g._incidence
        self.n = len(self.order)
        self.deg = [g.degrees[v] for v in self.order]
        self.loops = [loops[v] for v in self.order]
        self.adj = [[(self.index[u], m) for u, m in nbrs[v].items()] for v in self.order]
        self.adjmask = [sum(1 << j for j, _ in row) for row in self.adj]
        self.total = sum(self.deg)

    def members(self, mask):
        return frozenset(self.order[i] for i in _bits(mask))

    def mask(self, members):
        return sum(1 << self.index[v] for v in members)


def _bits(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _connected_levels(ix):
    """Yield, level by level, every connected vertex subset as
    ``(mask, vol, inner)`` where ``inner`` counts internal edges (loops
    included).  Levels are sorted lexicographically."""
    level = [(1 << i, ix.deg[i], ix.loops[i], ix.adjmask[i]) for i in range(ix.n)]
    while level:
        yield level
        nxt = {}
        for mask, vol, inner, frontier in level:
            cand = frontier
            while cand:
                low = cand & -cand
                cand ^= low
                nm = mask | low
                if nm in nxt:
                    continue
                j = low.bit_length() - 1
                add = ix.loops[j]
                for k, m in ix.adj[j]:
                    if (mask >> k) & 1:
                        add += m
                nxt[nm] = (nm, vol + ix.deg[j], inner + add, (frontier | ix.adjmask[j]) & ~nm)
        level = sorted(nxt.values(), key=lambda t: _bits(t[0]))


def iter_connected_subsets(g):
    """Yield ``(members, vol, cut)`` for every nonempty ``X`` with ``G[X]``
    connected, by increasing size and lexicographically within a size."""
    ix = g._indexed
    for level in _connected_levels(ix):
        for mask, vol, inner, _ in level:
            yield ix.members(mask), vol, vol - 2 * inner


def first_connected_subset(g, accept):
    """First connected subset (in enumeration order) for which
    ``accept(vol, cut, total_volume)`` is true, or ``None``.

    This is the exhaustive search strategy used by the deletion processes.
    """
    ix = g._indexed
    total = ix.total
    for level in _connected_levels(ix):
        for mask, vol, inner, _ in level:
            if accept(vol, vol - 2 * inner, total):
                return ix.members(mask)
    return None


@dataclass(frozen=True)
class ExpansionCertificate:
    """A vertex set together with its exact edge expansion."""

    witness_set: frozenset
    boundary_edges: int
    min_side_volume: int
    h_value: Fraction

    def check(self, g):
        """Recompute the certificate against ``g``."""
        x = frozenset(self.witness_set)
        if not x or x == g.vertices or not x <= g.vertices:
            return False
        cut = cut_size(g, x)
        side = min(volume(g, x), volume(g, g.vertices - x))
        if cut != self.boundary_edges or side != self.min_side_volume:
            return False
        if side == 0:
            return self.h_value == 0 and cut == 0
        return Fraction(cut, side) == self.h_value

    def to_dict(self):
        from .validation import format_rational

        return {
            "witness_set": sorted_vertices(self.witness_set),
            "boundary_edges": self.boundary_edges,
            "min_side_volume": self.min_side_volume,
            "h_value": format_rational(self.h_value),
        }


def degree(g, v):
    """Non-loop incidences plus twice the loops at ``v``."""
    return g.degree(v)


def volume(g, x):
    x = g._check_subset(x)
    degs = g.degrees
    return sum(degs[v] for v in x)


def cut_size(g, x):
    """Edges with exactly one endpoint in ``x``, with multiplicity."""
    x = g._check_subset(x)
    return sum(m for (u, v), m in g.edge_counts.items() if (u in x) != (v in x))


def edge_expansion(g, x):
    """Exact ``cut(X) / min(vol(X), vol(X̄))``.

    Raises :class:`DegenerateInputError` for the empty set, the full vertex
    set, or when the smaller side has zero volume.
    """
    x = g._check_subset(x)
    if not x or x == g.vertices:
        raise DegenerateInputError("edge expansion needs a nonempty proper subset")
    side = min(volume(g, x), volume(g, g.vertices - x))
    if side == 0:
        raise DegenerateInputError("edge expansion undefined: one side has zero volume")
    return Fraction(cut_size(g, x), side)


def cheeger_constant(g):
    """Exact Cheeger constant of ``g`` and a certificate attaining it.

    Only subsets inducing a connected subgraph and lying on the smaller-volume
    side are enumerated; by the mediant inequality the minimum is attained
    there.  A disconnected graph yields 0, certified by its first component.

    Returns
    -------
    (Fraction, ExpansionCertificate)
    """
    if len(g) < 2:
        raise DegenerateInputError("Cheeger constant needs at least two vertices")
    ix = g._indexed
    total = ix.total
    comps = g.components()
    if len(comps) > 1:
        comps.sort(key=lambda c: (len(c), _bits(ix.mask(c))))
        x = comps[0]
        vol = volume(g, x)
        cert = ExpansionCertificate(x, 0, min(vol, total - vol), Fraction(0))
        return Fraction(0), cert

    best = None
    for level in _connected_levels(ix):
        for mask, vol, inner, _ in level:
            if 2 * vol > total:
                continue
            cut = vol - 2 * inner
            if best is None or cut * best[2] < best[1] * vol:
                best = (mask, cut, vol)
    mask, cut, vol = best
    h = Fraction(cut, vol)
    return h, ExpansionCertificate(ix.members(mask), cut, vol, h)


def is_kappa_expander(g, kappa, return_certificate=False):
    """Whether every subset has expansion at least ``kappa``.

    With ``return_certificate=True`` returns ``(flag, certificate)`` where the
    certificate is a violating set when ``flag`` is false and ``None``
    otherwise.
    """
    kappa = as_rational(kappa, "kappa")
    h, cert = cheeger_constant(g)
    ok = h >= kappa
    if return_certificate:
        return ok, (None if ok else cert)
    return ok


def induced_subgraph(g, keep):
    return g.induced_subgraph(keep)


def smooth_vertex(g, v):
    """Replace degree-2, loop-free ``v`` and its two edges by one edge joining
    its neighbours (a loop if they coincide)."""
    if g.loops(v):
        raise PreconditionError(f"cannot smooth {v!r}: it carries a loop")
    if g.degree(v) != 2:
        raise PreconditionError(f"cannot smooth {v!r}: degree {g.degree(v)} != 2")
    ends = [u for u, m in g.neighbors(v).items() for _ in range(m)]
    a, b = ends
    h = g.remove_vertices([v])
    counts = dict(h._edges)
    p = edge_key(a, b)
    counts[p] = counts.get(p, 0) + 1
    return MultiGraph._raw(h.vertices, counts)


# -- edge-list text format ----------------------------------------------------


def _coerce_ids(tokens):
    """Integers if every id token is an integer, strings otherwise."""
    try:
        return {t: int(t) for t in tokens}
    except ValueError:
        return {t: t for t in tokens}


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def parse_edge_list(text, source=None):
    """Parse ``u v`` lines (loops ``u u``, repeats for parallel edges, ``v``
    alone declares a vertex, ``#`` comments)."""
    rows = []
    for lineno, toks in _lines(text):
        if toks[0].startswith("!"):
            raise ParseError(f"unexpected directive {toks[0]!r} in a plain edge list", lineno, source)
        if len(toks) > 2:
            raise ParseError(f"expected 1 or 2 tokens, got {len(toks)}", lineno, source)
        rows.append(toks)
    ids = _coerce_ids({t for toks in rows for t in toks})
    verts, edges = [], []
    for toks in rows:
        if len(toks) == 1:
            verts.append(ids[toks[0]])
        else:
            edges.append((ids[toks[0]], ids[toks[1]]))
    return MultiGraph(verts, edges)


def format_edge_list(g):
    lines = []
    touched = {v for p in g.edge_counts for v in p}
    for v in g.ordered_vertices:
        if v not in touched:
            lines.append(f"{v}")
    for u, v in g.edges():
        lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"


def read_edge_list(path):
    path = Path(path)
    return parse_edge_list(path.read_text(), source=str(path))
