"""Independent brute-force verification and seeded instance generation.

:func:`brute_force_cheeger` enumerates *every* nonempty proper vertex subset
with numpy and shares no code with the metric implementations in
:mod:`expander_extract.multigraph`; it reads only the raw vertex set and
edge multiplicities.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import networkx as nx
import numpy as np

from .coloring import EdgeColoredGraph, VertexColoredGraph
from .exceptions import CapExceededError, DegenerateInputError, PreconditionError
from .multigraph import ExpansionCertificate, MultiGraph
from .validation import as_rational, sorted_vertices, vertex_key

__all__ = [
    "DEFAULT_CAP",
    "oracle_cap",
    "brute_force_cheeger",
    "InstanceSpec",
    "generate_verified_expander",
    "subdivide",
    "random_multigraph",
    "verify_report",
]

DEFAULT_CAP = 16
CAP_ENV = "EXPANDER_EXTRACT_CAP"
MAX_RETRIES = 50


def oracle_cap(cap=None):
    """Explicit ``cap``, else ``$EXPANDER_EXTRACT_CAP``, else 16."""
    if cap is not None:
        return int(cap)
    env = os.environ.get(CAP_ENV)
    return int(env) if env else DEFAULT_CAP


def brute_force_cheeger(g, cap=None):
    """Exact Cheeger constant by exhaustive enumeration of all ``2^n - 2``
    nonempty proper subsets.

    A subset whose smaller side has zero volume counts as expansion 0 (the
    graph is disconnected).  The certificate is the first minimiser by
    cardinality, then lexicographic order.
    """
    cap = oracle_cap(cap)
    order = sorted_vertices(g.vertices)
    n = len(order)
    if n < 2:
        raise DegenerateInputError("Cheeger constant needs at least two vertices")
    if n > cap:
        raise CapExceededError(f"{n} vertices exceeds the brute-force cap of {cap}")
    index = {v: i for i, v in enumerate(order)}

    deg = np.zeros(n, dtype=np.int64)
    pairs = []
    for (u, v), m in g.edge_counts.items():
        i, j = index[u], index[v]
        deg[i] += m
        deg[j] += m
        if i != j:
            pairs.append((i, j, m))

    masks = np.arange(1, (1 << n) - 1, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(np.int64)
    vol = bits @ deg
    total = int(deg.sum())
    side = np.minimum(vol, total - vol)
    cut = np.zeros(len(masks), dtype=np.int64)
    for i, j, m in pairs:
        cut += m * (bits[:, i] ^ bits[:, j])

    zero = (cut == 0) | (side == 0)
    if zero.any():
        best = Fraction(0)
        hits = np.flatnonzero(zero)
    else:
        best = None
        for d in np.unique(side):
            c = int(cut[side == d].min())
            f = Fraction(c, int(d))
            if best is None or f < best:
                best = f
        hits = np.flatnonzero(cut * best.denominator == side * best.numerator)

    def order_key(k):
        members = tuple(np.flatnonzero(bits[k]))
        return (len(members), members)

    k = min(hits.tolist(), key=order_key)
    witness = frozenset(order[i] for i in np.flatnonzero(bits[k]))
    return best, ExpansionCertificate(witness, int(cut[k]), int(side[k]), best)


# -- instance generation -----------------------------------------------------------


@dataclass(frozen=True)
class InstanceSpec:
    """Seeded description of a generated expander.

    ``kind`` is one of ``random-regular``, ``subdivided-expander``,
    ``blob-pair`` or ``adversarial-pendant``; ``params`` holds the size
    parameters for that kind (see :func:`generate_verified_expander`).
    """

    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(kind=data["kind"], params=dict(data.get("params", {})), seed=int(data.get("seed", 0)))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


KINDS = ("random-regular", "subdivided-expander", "blob-pair", "adversarial-pendant")


def _random_regular(n, d, rng, offset=0):
    if n * d % 2 or d >= n:
        raise PreconditionError(f"no simple {d}-regular graph on {n} vertices")
    for _ in range(MAX_RETRIES):
        nxg = nx.random_regular_graph(d, n, seed=rng.randrange(2**31))
        if nx.is_connected(nxg):
            return MultiGraph(range(offset, offset + n), [(u + offset, v + offset) for u, v in sorted(nxg.edges())])
    raise PreconditionError(f"could not draw a connected {d}-regular graph on {n} vertices")


def subdivide(g, lengths, start=None):
    """Replace each edge of ``g`` by a path.

    ``lengths`` maps edge slot ``(u, v, k)`` to the number of path edges
    (>= 1).  New vertices are consecutive integers from ``start`` (default:
    one past the largest integer id).  Returns ``(graph, paths)`` where
    ``paths`` maps each slot to its vertex sequence, suitable as a witness.
    """
    if start is None:
        ints = [v for v in g.vertices if isinstance(v, int)]
        start = max(ints, default=-1) + 1
    nxt = start
    edges, paths = [], {}
    for (u, v), m in sorted(g.edge_counts.items(), key=lambda t: (vertex_key(t[0][0]), vertex_key(t[0][1]))):
        for k in range(m):
            ell = lengths.get((u, v, k), 1)
            seq = [u] + list(range(nxt, nxt + ell - 1)) + [v]
            nxt += ell - 1
            edges.extend(zip(seq, seq[1:]))
            paths[(u, v, k)] = tuple(seq)
    return MultiGraph(set(g.vertices) | set(range(start, nxt)), edges), paths


def random_multigraph(rng, n, m, loops=True, parallel=True, connected=False):
    """Random multigraph on ``0..n-1`` with ``m`` edges (a spanning tree
    first when ``connected``)."""
    edges = []
    if connected:
        for v in range(1, n):
            edges.append((rng.randrange(v), v))
    seen = {tuple(sorted(e)) for e in edges}
    tries = 0
    while len(edges) < m and tries < 50 * m + 50:
        tries += 1
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v and not loops:
            continue
        key = tuple(sorted((u, v)))
        if key in seen and not parallel:
            continue
        seen.add(key)
        edges.append((u, v))
    return MultiGraph(range(n), edges)


def generate_verified_expander(spec, cap=None):
    """Build the instance described by ``spec`` and certify its expansion.

    Parameters per kind (defaults in brackets):

    * ``random-regular``: ``n`` [8], ``degree`` [3]
    * ``subdivided-expander``: ``n`` [4], ``degree`` [3], ``M`` [2]; every
      edge of a random regular base becomes a path of 1..M edges
    * ``blob-pair``: ``n`` [5] per blob, ``degree`` [4], ``bridges`` [1]
    * ``adversarial-pendant``: ``n`` [8], ``degree`` [4], ``pendants`` [1]

    Returns
    -------
    (MultiGraph, Fraction)
        A connected multigraph and its exact Cheeger constant.
    """
    rng = random.Random(spec.seed)
    p = spec.params
    kind = spec.kind
    for _ in range(MAX_RETRIES):
        if kind == "random-regular":
            g = _random_regular(int(p.get("n", 8)), int(p.get("degree", 3)), rng)
        elif kind == "subdivided-expander":
            base = _random_regular(int(p.get("n", 4)), int(p.get("degree", 3)), rng)
            big_m = int(p.get("M", 2))
            lengths = {(u, v, 0): rng.randint(1, big_m) for (u, v) in base.edge_counts}
            g, _ = subdivide(base, lengths)
        elif kind == "blob-pair":
            n, d = int(p.get("n", 5)), int(p.get("degree", 4))
            a = _random_regular(n, d, rng)
            b = _random_regular(n, d, rng, offset=n)
            bridges = [(rng.randrange(n), n + rng.randrange(n)) for _ in range(int(p.get("bridges", 1)))]
            g = MultiGraph(a.vertices | b.vertices, list(a.edges()) + list(b.edges()) + bridges)
        elif kind == "adversarial-pendant":
            n = int(p.get("n", 8))
            core = _random_regular(n, int(p.get("degree", 4)), rng)
            extra = [(rng.randrange(n), n + i) for i in range(int(p.get("pendants", 1)))]
            g = MultiGraph(core.vertices, list(core.edges()) + extra)
        else:
            raise PreconditionError(f"unknown generator kind {kind!r}; expected one of {', '.join(KINDS)}")
        if not g.is_connected():
            continue
        kappa, _ = brute_force_cheeger(g, cap)
        if kappa > 0:
            return g, kappa
    raise PreconditionError(f"generator {kind!r} failed after {MAX_RETRIES} attempts (seed {spec.seed})")


# -- report verification -------------------------------------------------------------


def verify_report(g, h, report, cap=None):
    """Independently re-check a pipeline report against its inputs.

    Returns ``(True, None)`` or ``(False, clause)`` where ``clause`` is one of
    ``"input"``, ``"relation"``, ``"size"`` or ``"expansion"`` followed by a
    reason.
    """
    if report.e_g != g.n_edges or report.e_h != h.n_edges:
        return False, "input: report sizes do not match the given graphs"
    verts = frozenset(report.output_vertices)
    if not verts <= g.vertices:
        return False, f"relation: output vertices outside G: {sorted_vertices(verts - g.vertices)!r}"
    out = MultiGraph(verts, [(u, v, m) for (u, v), m in report.output_edges.items()])
    if out.vertices != verts:
        return False, "relation: output edges touch vertices not listed in the output"
    for (u, v), m in out.edge_counts.items():
        if g.multiplicity(u, v) < m:
            return False, f"relation: edge {u!r}-{v!r} has multiplicity {m} > {g.multiplicity(u, v)} in G"
    if report.relation == "induced":
        for (u, v), m in g.edge_counts.items():
            if u in verts and v in verts and out.multiplicity(u, v) != m:
                return False, f"relation: output is not induced (edge {u!r}-{v!r})"
    elif report.relation != "subgraph":
        return False, f"relation: unknown relation {report.relation!r}"
    alpha_prime = as_rational(report.alpha_prime)
    if out.n_edges < alpha_prime * g.n_edges:
        return False, f"size: e(H*) = {out.n_edges} < alpha' e(G) = {alpha_prime * g.n_edges}"
    if len(out) >= 2:
        value, _ = brute_force_cheeger(out, cap)
        if value < as_rational(report.kappa_prime):
            return False, f"expansion: Cheeger constant {value} < reported kappa' {report.kappa_prime}"
    return True, None


# -- vertex/edge coloured helpers used by the suites ----------------------------------


def blue_subdivision(base, sizes, start=None):
    """Vertex-coloured graph: every edge slot of ``base`` replaced by a path
    through ``sizes[slot]`` blue vertices."""
    g, paths = subdivide(base, {k: s + 1 for k, s in sizes.items()}, start)
    blue = {x for seq in paths.values() for x in seq[1:-1]}
    return VertexColoredGraph(g, frozenset(blue))


def with_blue_edges(red, blue_edges, extra_vertices=()):
    """Edge-coloured graph whose reduction is ``red``."""
    blue_edges = list(blue_edges)
    return EdgeColoredGraph(red.add_edges(blue_edges, vertices=extra_vertices), blue_edges)
