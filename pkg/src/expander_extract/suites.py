"""Seeded property suites that exercise every guarantee at desk scale.

Each suite builds its instances from ``random.Random(f"{name}:{seed}:{i}")``,
runs the procedure under test, re-checks the outcome with the brute-force
oracle and returns a JSON-ready report::

    {"suite": ..., "seed": ..., "instances": [...], "passed": int, "failed": int}

Every instance record carries its own ``checks`` mapping and an ``ok`` flag.
Reports hold only integers, strings, booleans and ``"p/q"`` rationals, so
``json.dumps(report, sort_keys=True)`` is byte-stable for a given seed.

Run from the shell with ``python -m expander_extract.suites [name ...]``.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction

from .coloring import EdgeColoredGraph, lift, red_vertex
from .extraction import (
    choose_m_blue_paths,
    edge_addition_expansion_bound,
    extract_induced_core,
    heavy_vertex_set,
    prune_long_blue_paths,
    subdivision_expansion_bound,
    trim_to_expander,
)
from .multigraph import MultiGraph, cheeger_constant
from .oracle import (
    InstanceSpec,
    blue_subdivision,
    brute_force_cheeger,
    generate_verified_expander,
    random_multigraph,
    subdivide,
    verify_report,
)
from .pipeline import TopoMinorWitness, topminor_to_induced
from .validation import format_rational as fr
from .validation import sorted_vertices

__all__ = ["SUITES", "run_suite"]


def _rng(name, seed, i):
    return random.Random(f"{name}:{seed}:{i}")


def _report(name, seed, records):
    failed = sum(not r["ok"] for r in records)
    return {"suite": name, "seed": seed, "instances": records, "passed": len(records) - failed, "failed": failed}


def _record(checks, **fields):
    return {**fields, "checks": checks, "ok": all(checks.values())}


def _regular_spec(rng, n, degrees=(3, 4, 5, 6)):
    choices = [d for d in degrees if d < n and n * d % 2 == 0]
    return InstanceSpec("random-regular", {"n": n, "degree": rng.choice(choices)}, rng.randrange(2**31))


def _small_base(rng, n_range=(3, 5)):
    """Connected multigraph with a few parallel edges (and rarely a loop)
    plus its exact Cheeger constant."""
    while True:
        n = rng.randint(*n_range)
        g = random_multigraph(rng, n, rng.randint(n, n + 3), loops=rng.random() < 0.2, connected=True)
        kappa = brute_force_cheeger(g)[0]
        if kappa > 0:
            return g, kappa


def _oracle_cheeger(g):
    return brute_force_cheeger(g)[0] if len(g) >= 2 else None


# -- trimming -------------------------------------------------------------------------


def trim_suite(n_instances=100, seed=0):
    """Trim a subgraph missing fewer than ``kappa e(G) / 6`` edges of a
    verified ``kappa``-expander on 8 to 14 vertices."""
    records = []
    for i in range(n_instances):
        rng = _rng("trim", seed, i)
        roll = rng.random()
        if roll < 0.6:
            spec = _regular_spec(rng, rng.randint(8, 14))
        elif roll < 0.8:
            n = rng.randint(7, 12)
            spec = InstanceSpec(
                "adversarial-pendant",
                {"n": n, "degree": rng.choice([4, 6]), "pendants": rng.randint(1, 14 - n)},
                rng.randrange(2**31),
            )
        else:
            n = rng.randint(4, 7)
            degree = {4: 3, 5: 4, 6: rng.choice([3, 4]), 7: 4}[n]
            spec = InstanceSpec("blob-pair", {"n": n, "degree": degree, "bridges": rng.randint(1, 3)}, rng.randrange(2**31))
        g, kappa = generate_verified_expander(spec)
        # largest k with k < kappa e(G) / 6
        k = math.ceil(kappa * g.n_edges / 6) - 1
        slots = list(g.edges())
        if spec.kind == "adversarial-pendant":
            # pendant edges first: isolating a vertex is the hardest cheap move
            pendants = [e for e in slots if min(g.degree(e[0]), g.degree(e[1])) == 1]
            rest = [e for e in slots if e not in pendants]
            drop = pendants[:k] + rng.sample(rest, max(0, k - len(pendants)))
        else:
            drop = rng.sample(slots, k)
        h = g.remove_edges(drop)
        epsilon = 1 - Fraction(h.n_edges, g.n_edges)
        out, trace = trim_to_expander(g, h, kappa)
        value = _oracle_cheeger(out)
        bound = (1 - 6 * epsilon / kappa) * g.n_edges
        checks = {
            "expansion": value is not None and value >= kappa / 3,
            "size": out.n_edges >= bound,
            "induced": out == h.induced_subgraph(out.vertices),
            "edge_budget": Fraction(trace.total_out, 2) + trace.total_diff <= epsilon * g.n_edges,
            "removed_volume": trace.removed_host_volume <= 3 / kappa * (trace.total_out + 2 * trace.total_diff),
            "terminates": len(trace.steps) <= len(h),
        }
        records.append(_record(
            checks,
            spec=spec.to_dict(),
            kappa=fr(kappa),
            e_g=g.n_edges,
            deleted=k,
            epsilon=fr(epsilon),
            e_out=out.n_edges,
            size_bound=fr(bound),
            cheeger_out=None if value is None else fr(value),
            steps=[sorted_vertices(s.removed) for s in trace.steps],
        ))
    return _report("trim", seed, records)


# -- subdivision and edge addition ---------------------------------------------------------


def subdivision_suite(n_instances=50, seed=0, max_vertices=16):
    """Replace each edge of a verified expander by a path of at most ``M``
    edges and compare the oracle value with ``kappa / (2M - 1)``."""
    records = []
    for i in range(n_instances):
        rng = _rng("subdivision", seed, i)
        big_m = rng.choice([2, 3])
        if rng.random() < 0.5:
            spec = _regular_spec(rng, rng.choice([4, 6]), degrees=(3,))
            base, kappa = generate_verified_expander(spec)
            origin = spec.to_dict()
        else:
            base, kappa = _small_base(rng)
            origin = {"kind": "random-multigraph", "edges": [list(e) for e in base.edges()]}
        room = max_vertices - len(base)
        slots = [(u, v, k) for (u, v), m in sorted(base.edge_counts.items()) for k in range(m)]
        rng.shuffle(slots)
        lengths = {}
        for j, slot in enumerate(slots):
            # the first slot takes the full M whenever it fits
            want = big_m if j == 0 else rng.randint(1, big_m)
            ell = min(want, room + 1)
            lengths[slot] = ell
            room -= ell - 1
        g, _ = subdivide(base, lengths)
        value = brute_force_cheeger(g)[0]
        bound = subdivision_expansion_bound(kappa, big_m)
        records.append(_record(
            {"expansion": value >= bound, "max_length": max(lengths.values()) <= big_m},
            origin=origin,
            M=big_m,
            kappa=fr(kappa),
            vertices=len(g),
            cheeger=fr(value),
            bound=fr(bound),
        ))
    return _report("subdivision", seed, records)


def edge_addition_suite(n_instances=50, seed=0):
    """Add edges to a verified expander without multiplying any degree by
    more than ``M`` and compare the oracle value with ``kappa / M``."""
    records = []
    for i in range(n_instances):
        rng = _rng("edge-addition", seed, i)
        big_m = rng.choice([2, 3])
        if rng.random() < 0.6:
            spec = _regular_spec(rng, rng.randint(6, 12), degrees=(3, 4))
            base, kappa = generate_verified_expander(spec)
            origin = spec.to_dict()
        else:
            base, kappa = _small_base(rng, (4, 7))
            origin = {"kind": "random-multigraph", "edges": [list(e) for e in base.edges()]}
        spare = {v: (big_m - 1) * base.degree(v) for v in base.vertices}
        order = base.ordered_vertices
        added = []
        for _ in range(20 * len(order)):
            u, v = rng.choice(order), rng.choice(order)
            need = {u: 2} if u == v else {u: 1, v: 1}
            if all(spare[x] >= c for x, c in need.items()):
                for x, c in need.items():
                    spare[x] -= c
                added.append((u, v))
        g = base.add_edges(added)
        value = brute_force_cheeger(g)[0]
        bound = edge_addition_expansion_bound(kappa, big_m)
        factor_ok = all(g.degree(v) <= big_m * base.degree(v) for v in base.vertices)
        records.append(_record(
            {"expansion": value >= bound, "degree_factor": factor_ok},
            origin=origin,
            M=big_m,
            kappa=fr(kappa),
            added=len(added),
            cheeger=fr(value),
            bound=fr(bound),
        ))
    return _report("edge-addition", seed, records)


# -- long blue paths ------------------------------------------------------------------------


def pruning_suite(n_instances=50, seed=0):
    """Vertex-coloured graphs whose reduction is a verified expander, with
    some blue paths planted longer than the pruning threshold."""
    records = []
    for i in range(n_instances):
        rng = _rng("pruning", seed, i)
        alpha = rng.choice([Fraction(1, 3), Fraction(1, 4)])
        epsilon = rng.choice([Fraction(1), Fraction(3, 4)])
        spec = _regular_spec(rng, rng.randint(6, 10), degrees=(3, 4, 5))
        red, kappa = generate_verified_expander(spec)
        big_m = choose_m_blue_paths(kappa, epsilon, alpha)
        budget = math.floor((1 / alpha - 1) * red.n_edges)
        slots = [(u, v, 0) for u, v in red.edge_counts]
        rng.shuffle(slots)
        sizes = {}
        # long paths need at least M blue vertices (M + 1 edges)
        n_long = rng.randint(1, max(1, budget // big_m))
        for slot in slots[:n_long]:
            size = min(budget, big_m + rng.randint(0, 3))
            if size < big_m:
                break
            sizes[slot] = size
            budget -= size
        for slot in slots[n_long:]:
            size = min(budget, rng.randint(0, big_m - 1))
            sizes[slot] = size
            budget -= size
        vc = blue_subdivision(red, sizes)
        red_all = red_vertex(vc)
        c_m, m_used, p_m = prune_long_blue_paths(vc, kappa, epsilon, alpha)
        red_c = red_vertex(c_m)
        n_blue = len(vc.blue_vertices)
        checks = {
            "precondition": red_all == red and red.n_edges >= alpha * vc.graph.n_edges,
            "size": red_c.n_edges >= (1 - epsilon) * red_all.n_edges,
            "subgraph": red_c.is_subgraph_of(red_all),
            "short_paths": all(p.size <= m_used for p in c_m.blue_paths),
            "path_count": p_m * m_used <= n_blue <= (1 - alpha) / alpha * red_all.n_edges,
        }
        records.append(_record(
            checks,
            spec=spec.to_dict(),
            kappa=fr(kappa),
            alpha=fr(alpha),
            epsilon=fr(epsilon),
            M=m_used,
            blue_vertices=n_blue,
            long_paths=p_m,
            red_edges=red_all.n_edges,
            red_edges_kept=red_c.n_edges,
        ))
    return _report("pruning", seed, records)


def lift_suite(n_instances=200, seed=0):
    """``red(lift(G, S)) == red(G)[S]`` on random vertex-coloured graphs."""
    records = []
    for i in range(n_instances):
        rng = _rng("lift", seed, i)
        n = rng.randint(1, 8)
        base = random_multigraph(rng, n, rng.randint(0, 12), loops=True, parallel=True)
        sizes = {(u, v, k): rng.randint(0, 3) for (u, v), m in base.edge_counts.items() for k in range(m)}
        vc = blue_subdivision(base, sizes)
        red = red_vertex(vc)
        keep = frozenset(v for v in red.ordered_vertices if rng.random() < 0.5)
        out = lift(vc, keep)
        records.append(_record(
            {"round_trip": red_vertex(out) == red.induced_subgraph(keep)},
            vertices=len(vc.graph),
            blue=len(vc.blue_vertices),
            keep=sorted_vertices(keep),
            lifted=len(out.graph),
        ))
    return _report("lift", seed, records)


# -- induced core ----------------------------------------------------------------------------


def _case_one_gadget(rng):
    """K7 in red; five vertices made heavy by blue loops; the remaining two
    joined by five blue parallels, so one of them meets Case 1 right after
    step 0 (with ``M = 2``)."""
    ids = list(range(7))
    rng.shuffle(ids)
    v, u, *heavy = ids
    red = [(a, b) for j, a in enumerate(range(7)) for b in range(j + 1, 7)]
    blue = [(v, u)] * 5 + [(w, w) for w in heavy for _ in range(3)]
    return EdgeColoredGraph(MultiGraph(range(7), red + blue), blue)


def _hub_instance(rng):
    """Two random blobs joined by one bridge plus a hub adjacent to both;
    blue loops make the hub heavy for ``M = 4``, and removing it leaves the
    bridge as a sparse cut."""
    n = rng.randint(4, 6)
    a = random_multigraph(rng, n, rng.randint(n + 1, 2 * n), loops=False, parallel=False, connected=True)
    b = random_multigraph(rng, n, rng.randint(n + 1, 2 * n), loops=False, parallel=False, connected=True)
    b = b.relabel({v: v + n for v in b.vertices})
    hub = 2 * n
    spokes = [(hub, v) for v in range(2 * n) if rng.random() < 0.6] or [(hub, 0), (hub, n)]
    red = MultiGraph(range(2 * n + 1), list(a.edges()) + list(b.edges()) + [(rng.randrange(n), n + rng.randrange(n))] + spokes)
    blue = [(hub, hub)] * math.ceil(3 * len(spokes) / 2)
    blue += [(rng.randrange(2 * n), rng.randrange(2 * n)) for _ in range(rng.randint(0, 3))]
    return EdgeColoredGraph(red.add_edges(blue), blue)


def _tight_epsilon(kappa):
    """Largest ``1/q`` strictly below ``kappa / (kappa + 3)``, keeping the
    size guarantee positive."""
    q = math.floor((kappa + 3) / kappa) + 1
    return Fraction(1, q)


def induced_core_suite(n_instances=50, seed=0):
    """Edge-coloured graphs whose reduction is a verified expander; mixes a
    tight regime (positive size bound), a loose regime (small ``M``, active
    process) and a Case-1 gadget."""
    records = []
    for i in range(n_instances):
        rng = _rng("induced-core", seed, i)
        regime = ("gadget", "tight", "loose", "hub")[i % 4]
        if regime == "gadget":
            ec = _case_one_gadget(rng)
            kappa = brute_force_cheeger(ec.red)[0]
            alpha, epsilon = Fraction(1, 2), Fraction(2)
            origin = {"kind": "case-one-gadget"}
        elif regime == "hub":
            ec = _hub_instance(rng)
            kappa = brute_force_cheeger(ec.red)[0]
            alpha, epsilon = Fraction(1, 2), Fraction(1)
            origin = {"kind": "hub", "edges": [list(e) for e in ec.graph.edges()], "blue": [list(e) for e in sorted(ec.blue_edges.items())]}
        else:
            spec = _regular_spec(rng, rng.randint(6, 11), degrees=(3, 4))
            red, kappa = generate_verified_expander(spec)
            alpha = rng.choice([Fraction(1, 2), Fraction(2, 3), Fraction(3, 4)])
            epsilon = _tight_epsilon(kappa) if regime == "tight" else rng.choice([Fraction(1, 2), Fraction(1)])
            budget = math.floor((1 / alpha - 1) * red.n_edges)
            order = red.ordered_vertices
            cluster = rng.sample(order, rng.randint(1, 3)) if rng.random() < 0.7 else order
            blue = []
            for _ in range(rng.randint(budget // 2, budget)):
                a = rng.choice(cluster)
                b = rng.choice(cluster) if rng.random() < 0.6 else rng.choice(order)
                blue.append((a, b))
            ec = EdgeColoredGraph(red.add_edges(blue), blue)
            origin = {**spec.to_dict(), "blue": [list(e) for e in sorted(blue)]}
        red = ec.red
        core, big_m, trace = extract_induced_core(ec, kappa, epsilon, alpha)
        red_core = core.red
        value = _oracle_cheeger(red_core)
        degs, red_degs = core.graph.degrees, red_core.degrees
        heavy = heavy_vertex_set(ec, big_m)
        checks = {
            "precondition": red.n_edges >= alpha * ec.graph.n_edges and brute_force_cheeger(red)[0] >= kappa,
            "expansion": value is None or value >= kappa / 3,
            "degree": all(degs[v] <= 3 * big_m * red_degs[v] for v in core.graph.vertices),
            "size": core.graph.n_edges >= trace.guaranteed_edges,
            "up_down": all(s.up >= 2 * s.down for s in trace.steps[1:]),
            "up_sum": trace.up_sum <= 2 * trace.heavy_red_volume,
            "heavy_volume": sum(red.degree(v) for v in heavy) <= epsilon * red.n_edges,
            "induced": core.graph == ec.graph.induced_subgraph(core.graph.vertices),
        }
        records.append(_record(
            checks,
            origin=origin,
            regime=regime,
            kappa=fr(kappa),
            alpha=fr(alpha),
            epsilon=fr(epsilon),
            M=big_m,
            cases=[s.case for s in trace.steps],
            e_out=core.graph.n_edges,
            size_bound=fr(trace.guaranteed_edges),
            cheeger_red_out=None if value is None else fr(value),
        ))
    return _report("induced-core", seed, records)


# -- end to end ------------------------------------------------------------------------------


def end_to_end_suite(n_instances=30, seed=0, max_vertices=16):
    """Subdivide a verified expander ``H`` (the witness comes from the
    construction), add spurious edges and vertices, and run the full
    reduction to an induced expander."""
    records = []
    for i in range(n_instances):
        rng = _rng("end-to-end", seed, i)
        if rng.random() < 0.5:
            spec = _regular_spec(rng, rng.choice([4, 6]), degrees=(3,))
            h, kappa = generate_verified_expander(spec)
            origin = spec.to_dict()
        else:
            h, kappa = _small_base(rng, (3, 5))
            origin = {"kind": "random-multigraph", "edges": [list(e) for e in h.edges()]}
        alpha = rng.choice([Fraction(1, 2), Fraction(2, 5), Fraction(1, 3)])
        alpha_prime = alpha * rng.choice([Fraction(1, 2), Fraction(3, 4)])
        budget = math.floor((1 / alpha - 1) * h.n_edges)
        room = max_vertices - len(h) - 2
        lengths = {}
        for u, v, k in [(u, v, k) for (u, v), m in sorted(h.edge_counts.items()) for k in range(m)]:
            ell = min(rng.randint(1, 3), room + 1, budget + 1)
            lengths[(u, v, k)] = ell
            room -= ell - 1
            budget -= ell - 1
        g, paths = subdivide(h, lengths)
        order = g.ordered_vertices
        extra_vertices, spurious = [], []
        for _ in range(rng.randint(0, budget)):
            roll = rng.random()
            if roll < 0.2 and len(g) + len(extra_vertices) < max_vertices:
                x = max(order) + 1 + len(extra_vertices)
                extra_vertices.append(x)
                spurious.append((rng.choice(order), x))
            elif roll < 0.3:
                x = rng.choice(order)
                spurious.append((x, x))
            else:
                spurious.append((rng.choice(order), rng.choice(order)))
        g = g.add_edges(spurious, vertices=extra_vertices)
        witness = TopoMinorWitness({v: v for v in h.vertices}, paths)
        out, report = topminor_to_induced(g, h, witness, kappa, alpha, alpha_prime)
        ok, clause = verify_report(g, h, report)
        value = _oracle_cheeger(out)
        checks = {
            "precondition": h.n_edges >= alpha * g.n_edges,
            "induced": out == g.induced_subgraph(out.vertices),
            "size": out.n_edges >= alpha_prime * g.n_edges,
            "expansion": value is None or value >= report.kappa_prime,
            "oracle_report": ok,
        }
        records.append(_record(
            checks,
            origin=origin,
            kappa=fr(kappa),
            alpha=fr(alpha),
            alpha_prime=fr(alpha_prime),
            e_g=g.n_edges,
            e_h=h.n_edges,
            vertices=len(g),
            e_out=out.n_edges,
            kappa_prime=fr(report.kappa_prime),
            cheeger_out=None if value is None else fr(value),
            violation=clause,
        ))
    return _report("end-to-end", seed, records)


# -- oracle agreement -----------------------------------------------------------------------


def _small_generated(rng):
    roll = rng.random()
    if roll < 0.55:
        n = rng.randint(2, 8)
        return "random-multigraph", random_multigraph(
            rng, n, rng.randint(0, 14), loops=rng.random() < 0.5, parallel=rng.random() < 0.7,
            connected=rng.random() < 0.8,
        )
    seed = rng.randrange(2**31)
    if roll < 0.7:
        n = rng.randint(4, 8)
        degree = rng.choice([d for d in (2, 3, 4) if d < n and n * d % 2 == 0])
        spec = InstanceSpec("random-regular", {"n": n, "degree": degree}, seed)
    elif roll < 0.8:
        spec = InstanceSpec("subdivided-expander", {"n": 4, "degree": 3, "M": 2}, seed)
    elif roll < 0.9:
        spec = InstanceSpec("blob-pair", {"n": 4, "degree": 3, "bridges": rng.randint(1, 3)}, seed)
    else:
        spec = InstanceSpec("adversarial-pendant", {"n": 6, "degree": rng.choice([3, 4]), "pendants": rng.randint(1, 2)}, seed)
    return spec.kind, generate_verified_expander(spec)[0]


def oracle_agreement_suite(n_instances=600, seed=0, max_vertices=8):
    """Optimised Cheeger constant against exhaustive enumeration."""
    records = []
    i = 0
    while len(records) < n_instances:
        rng = _rng("oracle", seed, i)
        i += 1
        kind, g = _small_generated(rng)
        if not 2 <= len(g) <= max_vertices:
            continue
        fast, cert = cheeger_constant(g)
        slow, slow_cert = brute_force_cheeger(g)
        records.append(_record(
            {"agree": fast == slow, "certificate": cert.check(g), "oracle_certificate": slow_cert.check(g)},
            kind=kind,
            vertices=len(g),
            edges=g.n_edges,
            cheeger=fr(fast),
            oracle=fr(slow),
        ))
    return _report("oracle-agreement", seed, records)


SUITES = {
    "trim": trim_suite,
    "subdivision": subdivision_suite,
    "edge-addition": edge_addition_suite,
    "pruning": pruning_suite,
    "lift": lift_suite,
    "induced-core": induced_core_suite,
    "end-to-end": end_to_end_suite,
    "oracle-agreement": oracle_agreement_suite,
}


def run_suite(name, seed=0, n_instances=None):
    suite = SUITES[name]
    return suite(seed=seed) if n_instances is None else suite(n_instances, seed=seed)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="python -m expander_extract.suites", description=__doc__.splitlines()[0])
    parser.add_argument("names", nargs="*", metavar="name", help=f"suites to run (default all): {', '.join(SUITES)}")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("-n", "--instances", type=int)
    parser.add_argument("--out", help="write the JSON reports here instead of stdout")
    args = parser.parse_args(argv)
    names = args.names or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        parser.error(f"unknown suite(s): {', '.join(unknown)}")
    reports = {name: run_suite(name, args.seed, args.instances) for name in names}
    text = json.dumps(reports, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for name in names:
        r = reports[name]
        print(f"{name}: {r['passed']} passed, {r['failed']} failed", file=sys.stderr)
    return 0 if all(r["failed"] == 0 for r in reports.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
