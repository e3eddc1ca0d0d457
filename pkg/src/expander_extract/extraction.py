"""The three constructive procedures.

* :func:`trim_to_expander` repeatedly deletes a low-expansion vertex set
  from a large subgraph of an expander until what remains is a
  ``kappa/3``-expander.
* :func:`prune_long_blue_paths` cuts the long blue paths of a vertex-coloured
  graph and keeps the heaviest component.
* :func:`extract_induced_core` removes heavy vertices, then alternately
  vertices whose degree is dominated by blue edges (case 1) and
  low-expansion sets of the red graph (case 2).

Sets are searched exhaustively over connected subsets, ordered by size and
then lexicographically, so every run is deterministic.  ``search`` arguments
accept any callable with the signature of
:func:`~expander_extract.multigraph.first_connected_subset` for graphs too
large to enumerate; guarantees are only claimed for the exhaustive search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .coloring import EdgeColoredGraph, VertexColoredGraph, red_vertex
from .exceptions import PreconditionError
from .multigraph import MultiGraph, cheeger_constant, first_connected_subset
from .validation import (
    as_rational,
    check_in_range,
    check_positive_int,
    format_rational,
    sorted_vertices,
    vertex_key,
)

__all__ = [
    "TrimStep",
    "TrimTrace",
    "InducedStep",
    "InducedTrace",
    "find_bad_set",
    "trim_to_expander",
    "choose_m_blue_paths",
    "prune_long_blue_paths",
    "subdivision_expansion_bound",
    "heavy_vertex_set",
    "choose_m_heavy",
    "extract_induced_core",
    "edge_addition_expansion_bound",
]


def _internal_edges(g, x):
    return sum(m for (u, v), m in g.edge_counts.items() if u in x and v in x)


def _edges_between(g, x, y):
    return sum(m for (u, v), m in g.edge_counts.items() if (u in x and v in y) or (u in y and v in x))


def _ids(x):
    return ",".join(str(v) for v in sorted_vertices(x))


# -- traces ---------------------------------------------------------------------


@dataclass(frozen=True)
class TrimStep:
    removed: frozenset
    down: int
    diff: int
    out: int
    volume_in_host: int
    volume_in_current: int

    def to_line(self, i):
        return f"step {i} case - X={{{_ids(self.removed)}}} down={self.down} up=- diff={self.diff} out={self.out}"

    def to_dict(self, i):
        return {
            "step": i,
            "case": None,
            "X": sorted_vertices(self.removed),
            "down": self.down,
            "up": None,
            "diff": self.diff,
            "out": self.out,
            "vol_host": self.volume_in_host,
            "vol_current": self.volume_in_current,
        }


@dataclass
class TrimTrace:
    """Audit record of :func:`trim_to_expander`.

    ``total_diff`` and ``total_out`` are the running sums of ``diff`` and
    ``out`` over all removed sets; ``removed_host_volume`` is the volume in
    the ambient expander of their union.
    """

    kappa: Fraction
    host_edges: int
    subgraph_edges: int
    epsilon: Fraction
    steps: list = field(default_factory=list)
    final_kept: frozenset = frozenset()

    @property
    def total_diff(self):
        return sum(s.diff for s in self.steps)

    @property
    def total_out(self):
        return sum(s.out for s in self.steps)

    @property
    def removed(self):
        return frozenset().union(*(s.removed for s in self.steps))

    @property
    def removed_host_volume(self):
        return sum(s.volume_in_host for s in self.steps)

    @property
    def guaranteed_edges(self):
        """Lower bound on the output edge count, ``(1 - 6 eps / kappa) e(G)``."""
        return (1 - 6 * self.epsilon / self.kappa) * self.host_edges

    def to_lines(self):
        return [s.to_line(i) for i, s in enumerate(self.steps, start=1)]

    def to_dict(self):
        return {
            "process": "trim",
            "kappa": format_rational(self.kappa),
            "epsilon": format_rational(self.epsilon),
            "host_edges": self.host_edges,
            "subgraph_edges": self.subgraph_edges,
            "steps": [s.to_dict(i) for i, s in enumerate(self.steps, start=1)],
            "total_diff": self.total_diff,
            "total_out": self.total_out,
            "removed_host_volume": self.removed_host_volume,
            "final_kept": sorted_vertices(self.final_kept),
        }


@dataclass(frozen=True)
class InducedStep:
    removed: frozenset
    case: int
    up: int
    down: int
    red_volume: int

    def to_line(self, i):
        return f"step {i} case {self.case} X={{{_ids(self.removed)}}} down={self.down} up={self.up} diff=- out=-"

    def to_dict(self, i):
        return {
            "step": i,
            "case": self.case,
            "X": sorted_vertices(self.removed),
            "down": self.down,
            "up": self.up,
            "diff": None,
            "out": None,
            "vol_red": self.red_volume,
        }


@dataclass
class InducedTrace:
    """Audit record of :func:`extract_induced_core`.

    Step 0 is always the heavy-vertex set (``case == 0``).
    """

    kappa: Fraction
    epsilon: Fraction
    alpha: Fraction
    big_m: int
    red_edges: int
    steps: list = field(default_factory=list)
    final_kept: frozenset = frozenset()

    @property
    def heavy_red_volume(self):
        return self.steps[0].red_volume

    @property
    def up_sum(self):
        """Sum of ``up`` over every step after step 0."""
        return sum(s.up for s in self.steps[1:])

    @property
    def removed_red_volume(self):
        return sum(s.red_volume for s in self.steps)

    @property
    def guaranteed_edges(self):
        return (1 - self.epsilon * (1 + 3 / self.kappa)) * self.red_edges

    def to_lines(self):
        return [s.to_line(i) for i, s in enumerate(self.steps)]

    def to_dict(self):
        return {
            "process": "induced",
            "kappa": format_rational(self.kappa),
            "epsilon": format_rational(self.epsilon),
            "alpha": format_rational(self.alpha),
            "M": self.big_m,
            "red_edges": self.red_edges,
            "steps": [s.to_dict(i) for i, s in enumerate(self.steps)],
            "up_sum": self.up_sum,
            "final_kept": sorted_vertices(self.final_kept),
        }


# -- trimming to a kappa/3-expander --------------------------------------------------


def find_bad_set(h_i, kappa, search=None):
    """First connected ``X`` with ``vol(X) <= vol(X̄)`` and
    ``cut(X) < (kappa/3) vol(X)``, or ``None`` when ``h_i`` is a
    ``kappa/3``-expander.

    An isolated vertex also counts as bad: its expansion is undefined and
    deleting it costs nothing.
    """
    kappa = as_rational(kappa, "kappa")
    num, den = kappa.numerator, kappa.denominator
    if len(h_i) == 0:
        return None

    def accept(vol, cut, total):
        if vol > total - vol:
            return False
        if vol == 0:
            return True
        return 3 * den * cut < num * vol

    if len(h_i) == 1:
        (v,) = h_i.vertices
        return frozenset([v]) if h_i.degree(v) == 0 else None
    return (search or first_connected_subset)(h_i, accept)


def trim_to_expander(g, h, kappa, epsilon=None, search=None):
    """Delete bad sets from ``h`` until it is a ``kappa/3``-expander.

    Parameters
    ----------
    g : MultiGraph
        Ambient ``kappa``-expander (not checked here).
    h : MultiGraph
        Subgraph of ``g``.
    kappa : rational, ``0 < kappa <= 1``
    epsilon : rational, optional
        Only used for the reported size bound; defaults to
        ``1 - e(h)/e(g)``.

    Returns
    -------
    (MultiGraph, TrimTrace)
        The induced subgraph of ``h`` left at termination, and the trace.
    """
    kappa = check_in_range(kappa, "kappa", 0, 1)
    if not h.is_subgraph_of(g):
        raise PreconditionError("h is not a subgraph of g")
    if epsilon is None:
        epsilon = 1 - Fraction(h.n_edges, g.n_edges) if g.n_edges else Fraction(0)
    else:
        epsilon = as_rational(epsilon, "epsilon")
    trace = TrimTrace(kappa, g.n_edges, h.n_edges, epsilon)

    current = h
    while True:
        x = find_bad_set(current, kappa, search)
        if x is None:
            break
        rest = current.vertices - x
        vol_cur = sum(current.degrees[v] for v in x)
        down = _edges_between(current, x, rest)
        diff = _internal_edges(g, x) - _internal_edges(h, x)
        g_cut = _edges_between(g, x, g.vertices - x)
        h_cut = _edges_between(h, x, h.vertices - x)
        trace.steps.append(
            TrimStep(
                removed=x,
                down=down,
                diff=diff,
                out=g_cut - h_cut,
                volume_in_host=sum(g.degrees[v] for v in x),
                volume_in_current=vol_cur,
            )
        )
        current = current.induced_subgraph(rest)
    trace.final_kept = current.vertices
    return current, trace


# -- pruning long blue paths -----------------------------------------------------------


def choose_m_blue_paths(kappa, epsilon, alpha):
    """Smallest integer ``M`` strictly above
    ``max(a/(1-a), (1-a)/a) * (1 + 1/kappa) / epsilon``.

    The ``(1-a)/a`` term is what the counting argument actually needs
    (``M * p_M <= ((1-a)/a) e(red G)``); taking the maximum keeps the
    larger value whenever ``alpha >= 1/2``.
    """
    kappa = check_in_range(kappa, "kappa", 0)
    epsilon = check_in_range(epsilon, "epsilon", 0)
    alpha = check_in_range(alpha, "alpha", 0, 1, high_open=True)
    ratio = max(alpha / (1 - alpha), (1 - alpha) / alpha)
    bound = ratio * (1 + 1 / kappa) / epsilon
    return math.floor(bound) + 1


def prune_long_blue_paths(g, kappa, epsilon, alpha, big_m=None, verify=False):
    """Delete every blue path with more than ``M`` edges and return the
    component whose reduction has the most edges.

    Returns
    -------
    (VertexColoredGraph, int, int)
        ``C_M``, the threshold ``M`` and the number ``p_M`` of deleted paths.
    """
    kappa = check_in_range(kappa, "kappa", 0)
    epsilon = check_in_range(epsilon, "epsilon", 0)
    alpha = check_in_range(alpha, "alpha", 0, 1, high_open=True)
    if big_m is None:
        big_m = choose_m_blue_paths(kappa, epsilon, alpha)
    big_m = check_positive_int(big_m, "M")
    if verify:
        red = red_vertex(g)
        if red.n_edges < alpha * g.graph.n_edges:
            raise PreconditionError("e(red(G)) < alpha e(G)", stage="prune")
        if cheeger_constant(red)[0] < kappa:
            raise PreconditionError("red(G) is not a kappa-expander", stage="prune")

    long_paths = [p for p in g.blue_paths if p.length > big_m]
    dropped = frozenset(v for p in long_paths for v in p.vertices)
    g_m = g.induced(g.graph.vertices - dropped)

    best, best_edges = None, -1
    for comp in g_m.graph.components():
        c = g_m.induced(comp)
        red_edges = c.graph.n_edges - len(c.blue_vertices)
        if red_edges > best_edges:
            best, best_edges = c, red_edges
    if best is None:
        best = g_m
    return best, big_m, len(long_paths)


def subdivision_expansion_bound(kappa, big_m):
    """Expansion guaranteed after replacing each edge of a ``kappa``-expander
    by a path of at most ``M`` edges."""
    kappa = as_rational(kappa, "kappa")
    big_m = check_positive_int(big_m, "M")
    return kappa / (2 * big_m - 1)


# -- induced core of an edge-coloured graph -----------------------------------------------


def heavy_vertex_set(g, big_m):
    """Vertices with ``deg(v) >= M * d_red(v)``."""
    big_m = check_positive_int(big_m, "M")
    degs, red_degs = g.graph.degrees, g.red.degrees
    return frozenset(v for v in g.graph.vertices if degs[v] >= big_m * red_degs[v])


def choose_m_heavy(epsilon, alpha):
    """Smallest ``M`` with ``2 / (M alpha) <= epsilon``.

    Heavy vertices satisfy ``vol_red(V*) <= vol_G(V*) / M <= 2 e(G) / M``,
    so this ``M`` keeps their red volume below ``epsilon * e(red G)``
    whenever ``e(red G) >= alpha e(G)``.
    """
    epsilon = check_in_range(epsilon, "epsilon", 0)
    alpha = check_in_range(alpha, "alpha", 0)
    return max(1, math.ceil(2 / (alpha * epsilon)))


def extract_induced_core(g, kappa, epsilon, alpha, big_m=None, verify=False, search=None):
    """Induced subgraph ``G*`` of an edge-coloured graph with ``red(G*)`` a
    ``kappa/3``-expander, ``deg(v) <= 3M d_red(v)`` on ``G*``, and
    ``e(G*) >= (1 - epsilon (1 + 3/kappa)) e(red G)``.

    Returns
    -------
    (EdgeColoredGraph, int, InducedTrace)
    """
    kappa = check_in_range(kappa, "kappa", 0, 1)
    epsilon = check_in_range(epsilon, "epsilon", 0)
    alpha = check_in_range(alpha, "alpha", 0, 1)
    if big_m is None:
        big_m = choose_m_heavy(epsilon, alpha)
    big_m = check_positive_int(big_m, "M")
    red = g.red
    if verify:
        if red.n_edges < alpha * g.graph.n_edges:
            raise PreconditionError("e(red(G)) < alpha e(G)", stage="induce")
        if cheeger_constant(red)[0] < kappa:
            raise PreconditionError("red(G) is not a kappa-expander", stage="induce")

    trace = InducedTrace(kappa, epsilon, alpha, big_m, red.n_edges)
    num, den = kappa.numerator, kappa.denominator
    removed = set()

    def record(x, case, current_red):
        rest = current_red.vertices - x
        trace.steps.append(
            InducedStep(
                removed=frozenset(x),
                case=case,
                up=_edges_between(red, x, removed),
                down=_edges_between(current_red, x, rest),
                red_volume=sum(red.degrees[v] for v in x),
            )
        )
        removed.update(x)

    heavy = heavy_vertex_set(g, big_m)
    record(heavy, 0, red)
    current = g.induced(g.graph.vertices - heavy)

    def accept(vol, cut, total):
        return 0 < vol <= total - vol and 3 * den * cut <= num * vol

    while len(current.graph):
        cur_red = current.red
        degs, red_degs = current.graph.degrees, cur_red.degrees
        x = None
        for v in current.graph.ordered_vertices:
            if degs[v] >= 3 * big_m * red_degs[v]:
                x, case = frozenset([v]), 1
                break
        if x is None and len(cur_red) > 1:
            x = (search or first_connected_subset)(cur_red, accept)
            case = 2
        if x is None:
            break
        record(x, case, cur_red)
        current = current.induced(current.graph.vertices - x)
    trace.final_kept = current.graph.vertices
    return current, big_m, trace


def edge_addition_expansion_bound(kappa, big_m):
    """Expansion guaranteed after adding edges to a ``kappa``-expander
    without multiplying any degree by more than ``M``."""
    kappa = as_rational(kappa, "kappa")
    big_m = check_positive_int(big_m, "M")
    return kappa / big_m
