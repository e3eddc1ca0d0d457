"""From an expander topological minor to an induced expander subgraph.

The two reductions compose:

1. :func:`topminor_to_subgraph` turns a witnessed topological minor ``H`` of
   ``G`` into an expander *subgraph* of ``G``;
2. :func:`subgraph_to_induced` turns an expander subgraph into an expander
   *induced* subgraph.

:func:`topminor_to_induced` runs both with an intermediate edge fraction
halfway between ``alpha`` and ``alpha_prime``.  Every run returns a
:class:`PipelineReport` carrying the derived parameters and traces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .coloring import EdgeColoredGraph, VertexColoredGraph, lift, red_vertex
from .exceptions import ParseError, PreconditionError
from .extraction import (
    choose_m_blue_paths,
    choose_m_heavy,
    extract_induced_core,
    prune_long_blue_paths,
    trim_to_expander,
)
from .multigraph import MultiGraph, cheeger_constant, edge_key
from .validation import as_rational, check_in_range, format_rational, sorted_vertices, vertex_key

__all__ = [
    "TopoMinorWitness",
    "PipelineReport",
    "validate_witness",
    "witness_to_vertex_colored",
    "subgraph_to_edge_colored",
    "plan_topminor_to_subgraph",
    "plan_subgraph_to_induced",
    "plan_topminor_to_induced",
    "topminor_to_subgraph",
    "subgraph_to_induced",
    "topminor_to_induced",
    "read_witness",
]

SCHEMA_VERSION = 1


def _sorted_pairs(pairs):
    return sorted(pairs, key=lambda p: (vertex_key(p[0]), vertex_key(p[1])))


def _edge_slots(h):
    """Keys ``(u, v, k)`` for every edge of ``h``, parallel copies numbered."""
    return [(u, v, k) for (u, v) in _sorted_pairs(h.edge_counts) for k in range(h.edge_counts[(u, v)])]


@dataclass(frozen=True)
class TopoMinorWitness:
    """Branch vertices plus one path of ``G`` per edge of ``H``.

    ``paths`` maps ``(u, v, k)`` (``(u, v)`` canonical, ``k`` numbering
    parallel copies) to the sequence of ``G`` vertices from the image of one
    endpoint to the image of the other.
    """

    branch_map: dict
    paths: dict

    @classmethod
    def identity(cls, h):
        return cls({v: v for v in h.vertices}, {(u, v, k): (u, v) for u, v, k in _edge_slots(h)})

    def to_dict(self):
        return {
            "branch_map": {str(k): self.branch_map[k] for k in sorted_vertices(self.branch_map)},
            "paths": {f"{u}-{v}#{k}": list(self.paths[(u, v, k)]) for (u, v, k) in sorted(
                self.paths, key=lambda t: (vertex_key(t[0]), vertex_key(t[1]), t[2]))},
        }

    @classmethod
    def from_dict(cls, data, g, h):
        """Resolve JSON keys (always strings) against the vertex ids of ``h``
        and ``g``."""
        if not isinstance(data, dict) or "branch_map" not in data or "paths" not in data:
            raise ParseError("witness needs 'branch_map' and 'paths' objects")
        h_ids = {str(v): v for v in h.vertices}
        g_ids = {str(v): v for v in g.vertices}

        def g_vertex(x):
            if x in g.vertices:
                return x
            if str(x) in g_ids:
                return g_ids[str(x)]
            raise ParseError(f"witness refers to unknown G vertex {x!r}")

        branch = {}
        for k, x in data["branch_map"].items():
            if k not in h_ids:
                raise ParseError(f"branch_map key {k!r} is not a vertex of H")
            branch[h_ids[k]] = g_vertex(x)
        paths = {}
        for key, seq in data["paths"].items():
            head, sep, num = key.rpartition("#")
            if not sep or not num.isdigit():
                raise ParseError(f"path key {key!r} is not of the form 'u-v#k'")
            ends = None
            for i, ch in enumerate(head):
                if ch == "-" and head[:i] in h_ids and head[i + 1:] in h_ids:
                    ends = (h_ids[head[:i]], h_ids[head[i + 1:]])
                    break
            if ends is None:
                raise ParseError(f"path key {key!r} does not name an edge of H")
            u, v = edge_key(*ends)
            if not isinstance(seq, list):
                raise ParseError(f"path {key!r} must be an array of vertex ids")
            paths[(u, v, int(num))] = tuple(g_vertex(x) for x in seq)
        return cls(branch, paths)


def read_witness(path, g, h):
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, str(path)) from None
    return TopoMinorWitness.from_dict(data, g, h)


def validate_witness(g, h, w):
    """Check ``w`` certifies ``h`` as a topological minor of ``g``.

    Returns ``(True, None)`` or ``(False, message)`` describing the first
    violation found.
    """
    branch = w.branch_map
    if set(branch) != set(h.vertices):
        return False, "branch_map keys differ from the vertices of H"
    images = list(branch.values())
    if len(set(images)) != len(images):
        return False, "branch_map is not injective"
    for v in sorted_vertices(branch):
        if branch[v] not in g:
            return False, f"branch image {branch[v]!r} of {v!r} is not a vertex of G"
    expected = set(_edge_slots(h))
    if set(w.paths) != expected:
        missing = expected - set(w.paths)
        return False, f"paths do not match the edges of H (missing {len(missing)}, extra {len(set(w.paths) - expected)})"
    image_set = set(images)
    owner = {}
    usage = {}
    for key in sorted(w.paths, key=lambda t: (vertex_key(t[0]), vertex_key(t[1]), t[2])):
        u, v, k = key
        name = f"{u}-{v}#{k}"
        seq = list(w.paths[key])
        if len(seq) < 2:
            return False, f"path {name} has fewer than two vertices"
        if (seq[0], seq[-1]) not in ((branch[u], branch[v]), (branch[v], branch[u])):
            return False, f"path {name} does not join the branch images of {u!r} and {v!r}"
        for x in seq:
            if x not in g:
                return False, f"path {name} uses {x!r}, not a vertex of G"
        for x in seq[1:-1]:
            if x in image_set:
                return False, f"path {name} passes through branch image {x!r}"
            if x in owner:
                return False, f"internal vertex {x!r} shared by paths {owner[x]} and {name}"
            owner[x] = name
        for a, b in zip(seq, seq[1:]):
            p = edge_key(a, b)
            usage[p] = usage.get(p, 0) + 1
    for p in _sorted_pairs(usage):
        if usage[p] > g.multiplicity(*p):
            return False, f"edge {p[0]!r}-{p[1]!r} used {usage[p]} times but has multiplicity {g.multiplicity(*p)} in G"
    return True, None


def witness_to_vertex_colored(g, w, h=None):
    """Union of branch images and witness paths with internal path vertices
    blue; its reduction is ``H`` relabelled through the branch map."""
    if h is not None:
        ok, why = validate_witness(g, h, w)
        if not ok:
            raise PreconditionError(f"invalid witness: {why}", stage="witness")
    verts = set(w.branch_map.values())
    blue = set()
    edges = []
    for seq in w.paths.values():
        verts.update(seq)
        blue.update(seq[1:-1])
        edges.extend(zip(seq, seq[1:]))
    return VertexColoredGraph(MultiGraph(verts, edges), frozenset(blue))


def subgraph_to_edge_colored(g, h):
    """``g`` induced on ``V(h)`` with every edge outside ``h`` blue."""
    if not h.is_subgraph_of(g):
        raise PreconditionError("h is not a subgraph of g", stage="colour")
    g1 = g.induced_subgraph(h.vertices)
    blue = {p: m - h.edge_counts.get(p, 0) for p, m in g1.edge_counts.items() if m > h.edge_counts.get(p, 0)}
    return EdgeColoredGraph(g1, blue)


# -- reports -----------------------------------------------------------------------


def _rat(x):
    return None if x is None else format_rational(x)


def _unrat(x):
    return None if x is None else as_rational(x)


@dataclass
class PipelineReport:
    """Outcome of one pipeline run.

    ``relation`` is ``"subgraph"`` or ``"induced"`` and states how the
    output relates to ``G``.  ``kappa_prime`` is the guaranteed expansion of
    the output.  Composite runs keep their per-stage reports in ``stages``.
    """

    route: str
    relation: str
    kappa: Fraction
    alpha: Fraction
    alpha_prime: Fraction
    kappa_prime: Fraction
    e_g: int
    e_h: int
    output_vertices: frozenset
    output_edges: dict
    epsilon: Fraction = None
    big_m: int = None
    intermediate_alpha: Fraction = None
    certificate: dict = None
    traces: list = field(default_factory=list)
    stages: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def output_graph(self):
        return MultiGraph(self.output_vertices, [(u, v, m) for (u, v), m in self.output_edges.items()])

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "route": self.route,
            "relation": self.relation,
            "parameters": {
                "kappa": _rat(self.kappa),
                "alpha": _rat(self.alpha),
                "alpha_prime": _rat(self.alpha_prime),
            },
            "derived": {
                "epsilon": _rat(self.epsilon),
                "M": self.big_m,
                "kappa_prime": _rat(self.kappa_prime),
                "intermediate_alpha": _rat(self.intermediate_alpha),
            },
            "sizes": {"e_G": self.e_g, "e_H": self.e_h, "e_H_star": sum(self.output_edges.values())},
            "output": {
                "vertices": sorted_vertices(self.output_vertices),
                "edges": [[u, v, self.output_edges[(u, v)]] for u, v in _sorted_pairs(self.output_edges)],
            },
            "certificate": self.certificate,
            "stats": dict(sorted(self.stats.items())),
            "traces": self.traces,
            "stages": [s.to_dict() for s in self.stages],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data):
        try:
            if data.get("schema_version") != SCHEMA_VERSION:
                raise ParseError(f"unsupported report schema_version {data.get('schema_version')!r}")
            params, derived = data["parameters"], data["derived"]
            edges = {}
            for u, v, m in data["output"]["edges"]:
                p = edge_key(u, v)
                edges[p] = edges.get(p, 0) + m
            return cls(
                route=data["route"],
                relation=data["relation"],
                kappa=_unrat(params["kappa"]),
                alpha=_unrat(params["alpha"]),
                alpha_prime=_unrat(params["alpha_prime"]),
                kappa_prime=_unrat(derived["kappa_prime"]),
                epsilon=_unrat(derived.get("epsilon")),
                big_m=derived.get("M"),
                intermediate_alpha=_unrat(derived.get("intermediate_alpha")),
                e_g=data["sizes"]["e_G"],
                e_h=data["sizes"]["e_H"],
                output_vertices=frozenset(data["output"]["vertices"]),
                output_edges=edges,
                certificate=data.get("certificate"),
                traces=data.get("traces", []),
                stages=[cls.from_dict(s) for s in data.get("stages", [])],
                stats=data.get("stats", {}),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"malformed report: {exc}") from None


# -- parameter planning ---------------------------------------------------------------


def _check_params(kappa, alpha, alpha_prime, alpha_below_one=False):
    kappa = check_in_range(kappa, "kappa", 0, 1)
    alpha = check_in_range(alpha, "alpha", 0, 1, high_open=alpha_below_one)
    alpha_prime = as_rational(alpha_prime, "alpha_prime")
    if not 0 < alpha_prime < alpha:
        raise PreconditionError(f"need 0 < alpha_prime < alpha, got alpha_prime={alpha_prime}, alpha={alpha}")
    return kappa, alpha, alpha_prime


def plan_topminor_to_subgraph(kappa, alpha, alpha_prime):
    """Derived ``epsilon``, ``M`` and guaranteed expansion, before any run."""
    kappa, alpha, alpha_prime = _check_params(kappa, alpha, alpha_prime, alpha_below_one=True)
    epsilon = kappa * (1 - alpha_prime / alpha) / 6
    big_m = choose_m_blue_paths(kappa, epsilon, alpha)
    return {"epsilon": epsilon, "M": big_m, "kappa_prime": kappa / (3 * (2 * big_m - 1))}


def plan_subgraph_to_induced(kappa, alpha, alpha_prime):
    kappa, alpha, alpha_prime = _check_params(kappa, alpha, alpha_prime)
    epsilon = (1 - alpha_prime / alpha) / (1 + 3 / kappa)
    big_m = choose_m_heavy(epsilon, alpha)
    return {"epsilon": epsilon, "M": big_m, "kappa_prime": kappa / (9 * big_m)}


def plan_topminor_to_induced(kappa, alpha, alpha_prime):
    kappa, alpha, alpha_prime = _check_params(kappa, alpha, alpha_prime, alpha_below_one=True)
    mid = (alpha + alpha_prime) / 2
    first = plan_topminor_to_subgraph(kappa, alpha, mid)
    second = plan_subgraph_to_induced(first["kappa_prime"], mid, alpha_prime)
    return {"intermediate_alpha": mid, "stages": [first, second], "kappa_prime": second["kappa_prime"]}


# -- the reductions ----------------------------------------------------------------------


def _require_fraction(g, h, alpha, stage):
    if h.n_edges < alpha * g.n_edges:
        raise PreconditionError(f"e(H) = {h.n_edges} < alpha e(G) = {alpha * g.n_edges}", stage=stage)


def _require_expander(h, kappa, stage, what="H"):
    if len(h) < 2:
        return
    value = cheeger_constant(h)[0]
    if value < kappa:
        raise PreconditionError(f"{what} has Cheeger constant {value} < kappa = {kappa}", stage=stage)


def _certificate(graph):
    if len(graph) < 2:
        return None
    value, cert = cheeger_constant(graph)
    return {"cheeger": format_rational(value), **cert.to_dict()}


def topminor_to_subgraph(g, h, w, kappa, alpha, alpha_prime, verify=False):
    """Expander subgraph of ``g`` from a witnessed expander topological minor.

    Returns
    -------
    (MultiGraph, PipelineReport)
        A subgraph ``H*`` of ``g`` with ``e(H*) >= alpha_prime e(g)`` that is a
        ``kappa / (3 (2M - 1))``-expander.
    """
    plan = plan_topminor_to_subgraph(kappa, alpha, alpha_prime)
    kappa, alpha, alpha_prime = _check_params(kappa, alpha, alpha_prime, alpha_below_one=True)
    _require_fraction(g, h, alpha, "input")
    ok, why = validate_witness(g, h, w)
    if not ok:
        raise PreconditionError(f"invalid witness: {why}", stage="witness")
    if verify:
        _require_expander(h, kappa, "input")

    epsilon = plan["epsilon"]
    g1 = witness_to_vertex_colored(g, w)
    h_img = h.relabel(w.branch_map)
    c_m, big_m, n_long = prune_long_blue_paths(g1, kappa, epsilon, alpha, big_m=plan["M"])
    red_c = red_vertex(c_m)
    trimmed, trace = trim_to_expander(h_img, red_c, kappa, epsilon=epsilon)
    h_star = lift(c_m, trimmed.vertices).graph

    report = PipelineReport(
        route="topological-minor-to-subgraph",
        relation="subgraph",
        kappa=kappa,
        alpha=alpha,
        alpha_prime=alpha_prime,
        kappa_prime=plan["kappa_prime"],
        e_g=g.n_edges,
        e_h=h.n_edges,
        output_vertices=h_star.vertices,
        output_edges=dict(h_star.edge_counts),
        epsilon=epsilon,
        big_m=big_m,
        traces=[trace.to_dict()],
        stats={
            "blue_vertices": len(g1.blue_vertices),
            "long_blue_paths": n_long,
            "red_component_edges": red_c.n_edges,
            "trimmed_edges": trimmed.n_edges,
        },
    )
    if verify:
        report.certificate = _certificate(h_star)
    return h_star, report


def subgraph_to_induced(g, h, kappa, alpha, alpha_prime, verify=False):
    """Expander induced subgraph of ``g`` from an expander subgraph ``h``.

    Returns
    -------
    (MultiGraph, PipelineReport)
        ``H* = g[V(H*)]`` with ``e(H*) >= alpha_prime e(g)``, a
        ``kappa / (9M)``-expander.
    """
    plan = plan_subgraph_to_induced(kappa, alpha, alpha_prime)
    kappa, alpha, alpha_prime = _check_params(kappa, alpha, alpha_prime)
    if not h.is_subgraph_of(g):
        raise PreconditionError("H is not a subgraph of G", stage="input")
    _require_fraction(g, h, alpha, "input")
    if verify:
        _require_expander(h, kappa, "input")

    g1 = subgraph_to_edge_colored(g, h)
    core, big_m, trace = extract_induced_core(g1, kappa, plan["epsilon"], alpha, big_m=plan["M"])
    h_star = core.graph
    cases = [s.case for s in trace.steps[1:]]
    report = PipelineReport(
        route="subgraph-to-induced",
        relation="induced",
        kappa=kappa,
        alpha=alpha,
        alpha_prime=alpha_prime,
        kappa_prime=plan["kappa_prime"],
        e_g=g.n_edges,
        e_h=h.n_edges,
        output_vertices=h_star.vertices,
        output_edges=dict(h_star.edge_counts),
        epsilon=plan["epsilon"],
        big_m=big_m,
        traces=[trace.to_dict()],
        stats={
            "blue_edges": sum(g1.blue_edges.values()),
            "heavy_vertices": len(trace.steps[0].removed),
            "case1_steps": cases.count(1),
            "case2_steps": cases.count(2),
        },
    )
    if verify:
        report.certificate = _certificate(h_star)
    return h_star, report


def topminor_to_induced(g, h, w, kappa, alpha, alpha_prime, verify=False):
    """Both reductions in sequence, through ``(alpha + alpha_prime) / 2``."""
    plan = plan_topminor_to_induced(kappa, alpha, alpha_prime)
    kappa, alpha, alpha_prime = _check_params(kappa, alpha, alpha_prime, alpha_below_one=True)
    mid = plan["intermediate_alpha"]
    sub, first = topminor_to_subgraph(g, h, w, kappa, alpha, mid, verify=verify)
    h_star, second = subgraph_to_induced(g, sub, first.kappa_prime, mid, alpha_prime)
    report = PipelineReport(
        route="topological-minor-to-induced",
        relation="induced",
        kappa=kappa,
        alpha=alpha,
        alpha_prime=alpha_prime,
        kappa_prime=second.kappa_prime,
        e_g=g.n_edges,
        e_h=h.n_edges,
        output_vertices=h_star.vertices,
        output_edges=dict(h_star.edge_counts),
        intermediate_alpha=mid,
        stages=[first, second],
    )
    if verify:
        report.certificate = _certificate(h_star)
    return h_star, report
