import json
from fractions import Fraction

import pytest

from expander_extract.coloring import red_edge, red_vertex
from expander_extract.exceptions import ParseError, PreconditionError
from expander_extract.multigraph import MultiGraph, cheeger_constant
from expander_extract.oracle import brute_force_cheeger, subdivide, verify_report
from expander_extract.pipeline import (
    PipelineReport,
    TopoMinorWitness,
    plan_subgraph_to_induced,
    plan_topminor_to_induced,
    plan_topminor_to_subgraph,
    subgraph_to_edge_colored,
    subgraph_to_induced,
    topminor_to_induced,
    topminor_to_subgraph,
    validate_witness,
    witness_to_vertex_colored,
)

from .graphs import complete


def subdivided_k4(extra=(), extra_vertices=()):
    h = complete(4)
    g, paths = subdivide(h, {(u, v, 0): 2 for u, v in h.edge_counts})
    g = g.add_edges(extra, vertices=extra_vertices)
    return g, h, TopoMinorWitness({v: v for v in h.vertices}, paths)


# -- witnesses -------------------------------------------------------------------------


def test_identity_witness_is_valid(k4):
    assert validate_witness(k4, k4, TopoMinorWitness.identity(k4)) == (True, None)


def test_witness_shared_internal_vertex():
    h = MultiGraph(range(3), [(0, 1), (1, 2)])
    g = MultiGraph(range(4), [(0, 3), (3, 1), (1, 3), (3, 2)])
    w = TopoMinorWitness({0: 0, 1: 1, 2: 2}, {(0, 1, 0): (0, 3, 1), (1, 2, 0): (1, 3, 2)})
    ok, why = validate_witness(g, h, w)
    assert not ok
    assert "internal vertex 3" in why


def test_witness_wrong_endpoint(k4):
    paths = dict(TopoMinorWitness.identity(k4).paths)
    paths[(0, 1, 0)] = (0, 2)
    ok, why = validate_witness(k4, k4, TopoMinorWitness({v: v for v in k4.vertices}, paths))
    assert not ok and "0-1#0" in why


def test_witness_edge_overuse(k4):
    h = MultiGraph([0, 1], [(0, 1), (0, 1)])
    w = TopoMinorWitness({0: 0, 1: 1}, {(0, 1, 0): (0, 1), (0, 1, 1): (0, 1)})
    ok, why = validate_witness(k4, h, w)
    assert not ok and "multiplicity" in why


def test_witness_to_vertex_colored_examples(k4):
    g1 = witness_to_vertex_colored(k4, TopoMinorWitness.identity(k4), k4)
    assert g1.graph == k4 and not g1.blue_vertices
    g, h, w = subdivided_k4()
    g1 = witness_to_vertex_colored(g, w, h)
    assert len(g1.blue_vertices) == 6
    assert red_vertex(g1) == h


def test_witness_two_internal_vertices():
    h = MultiGraph([0, 1], [(0, 1)])
    g = MultiGraph(range(4), [(0, 2), (2, 3), (3, 1)])
    g1 = witness_to_vertex_colored(g, TopoMinorWitness({0: 0, 1: 1}, {(0, 1, 0): (0, 2, 3, 1)}), h)
    assert g1.blue_vertices == {2, 3}


def test_witness_invalid_raises_with_stage(k4):
    with pytest.raises(PreconditionError) as info:
        witness_to_vertex_colored(k4, TopoMinorWitness({0: 0}, {}), k4)
    assert info.value.stage == "witness"


def test_witness_json_round_trip():
    g, h, w = subdivided_k4()
    data = json.loads(json.dumps(w.to_dict()))
    assert set(data["paths"]) == {"0-1#0", "0-2#0", "0-3#0", "1-2#0", "1-3#0", "2-3#0"}
    assert TopoMinorWitness.from_dict(data, g, h) == w


def test_witness_from_dict_errors(k4):
    with pytest.raises(ParseError):
        TopoMinorWitness.from_dict({"branch_map": {}}, k4, k4)
    with pytest.raises(ParseError):
        TopoMinorWitness.from_dict({"branch_map": {"9": 0}, "paths": {}}, k4, k4)


def test_subgraph_to_edge_colored_examples(k4):
    assert subgraph_to_edge_colored(k4, k4).blue_edges == {}
    tree = MultiGraph(range(4), [(0, 1), (0, 2), (0, 3)])
    g1 = subgraph_to_edge_colored(k4, tree)
    assert sum(g1.blue_edges.values()) == 3
    assert red_edge(g1) == tree
    g1 = subgraph_to_edge_colored(k4, complete(3))
    assert g1.graph.vertices == {0, 1, 2}
    with pytest.raises(PreconditionError):
        subgraph_to_edge_colored(complete(3), k4)


# -- planning -----------------------------------------------------------------------------


def test_plan_formulas():
    kappa, alpha, alpha_prime = Fraction(2, 3), Fraction(1, 2), Fraction(1, 4)
    first = plan_topminor_to_subgraph(kappa, alpha, alpha_prime)
    assert first["epsilon"] == kappa * (1 - alpha_prime / alpha) / 6
    assert first["kappa_prime"] == kappa / (3 * (2 * first["M"] - 1))
    second = plan_subgraph_to_induced(kappa, alpha, alpha_prime)
    assert alpha * (1 - second["epsilon"] * (1 + 3 / kappa)) == alpha_prime
    assert second["kappa_prime"] == kappa / (9 * second["M"])
    both = plan_topminor_to_induced(kappa, alpha, alpha_prime)
    assert both["intermediate_alpha"] == Fraction(3, 8)
    assert both["stages"][1]["kappa_prime"] == both["kappa_prime"]
    stage1, stage2 = both["stages"]
    assert stage2["kappa_prime"] == stage1["kappa_prime"] / (9 * stage2["M"])


@pytest.mark.parametrize("plan", [plan_topminor_to_subgraph, plan_subgraph_to_induced, plan_topminor_to_induced])
def test_plan_rejects_alpha_prime_not_below_alpha(plan):
    with pytest.raises(PreconditionError):
        plan("1/2", "1/2", "1/2")


# -- reductions -------------------------------------------------------------------------


def test_topminor_to_subgraph_trivial(k4):
    out, report = topminor_to_subgraph(k4, k4, TopoMinorWitness.identity(k4), Fraction(2, 3), Fraction(1, 2), Fraction(1, 4))
    assert out == k4
    assert report.relation == "subgraph"
    assert verify_report(k4, k4, report) == (True, None)


def test_topminor_to_subgraph_subdivided_k4():
    g, h, w = subdivided_k4(extra=[(0, 100)], extra_vertices=[100])
    alpha = Fraction(h.n_edges, g.n_edges)
    out, report = topminor_to_subgraph(g, h, w, Fraction(2, 3), alpha, Fraction(1, 4), verify=True)
    assert out == g.remove_vertices([100])
    assert out.is_subgraph_of(g)
    assert report.kappa_prime == Fraction(2, 3) / (3 * (2 * report.big_m - 1))
    assert brute_force_cheeger(out)[0] >= report.kappa_prime
    assert verify_report(g, h, report) == (True, None)


def test_topminor_to_subgraph_rejects_bad_alpha(k4):
    with pytest.raises(PreconditionError):
        topminor_to_subgraph(k4, k4, TopoMinorWitness.identity(k4), Fraction(2, 3), Fraction(1, 2), Fraction(1, 2))


def test_subgraph_to_induced_identity(k4):
    out, report = subgraph_to_induced(k4, k4, Fraction(2, 3), 1, Fraction(1, 2))
    assert out == k4
    assert report.stats["heavy_vertices"] == 0


def test_subgraph_to_induced_k4_minus_edge(k4):
    h = k4.remove_edges([(0, 1)])
    kappa = cheeger_constant(h)[0]
    out, report = subgraph_to_induced(k4, h, kappa, Fraction(5, 6), Fraction(1, 2), verify=True)
    assert out == k4.induced_subgraph(out.vertices)
    assert out.n_edges >= Fraction(1, 2) * k4.n_edges
    assert brute_force_cheeger(out)[0] >= report.kappa_prime
    assert verify_report(k4, h, report) == (True, None)


def test_subgraph_to_induced_drops_vertex_isolated_in_h(k4):
    g = k4.add_edges([(0, 4)])
    h = MultiGraph(g.vertices, k4.edges())
    out, report = subgraph_to_induced(g, h, Fraction(2, 3), Fraction(6, 7), Fraction(1, 2))
    assert 4 not in out.vertices
    assert json.loads(json.dumps(report.traces))[0]["steps"][0]["X"] == [4]


def test_subgraph_to_induced_checks_relation(k4):
    with pytest.raises(PreconditionError) as info:
        subgraph_to_induced(complete(3), k4, Fraction(1, 2), Fraction(1, 2), Fraction(1, 4))
    assert info.value.stage == "input"


def test_topminor_to_induced_trivial(k4):
    out, report = topminor_to_induced(k4, k4, TopoMinorWitness.identity(k4), Fraction(2, 3), Fraction(1, 2), Fraction(1, 4))
    assert out == k4
    assert [s.route for s in report.stages] == ["topological-minor-to-subgraph", "subgraph-to-induced"]
    assert report.intermediate_alpha == Fraction(3, 8)


def test_topminor_to_induced_subdivided_k4():
    g, h, w = subdivided_k4(extra=[(0, 100)], extra_vertices=[100])
    out, report = topminor_to_induced(g, h, w, Fraction(2, 3), Fraction(6, 13), Fraction(1, 4), verify=True)
    assert out == g.induced_subgraph(out.vertices)
    assert out.n_edges >= Fraction(1, 4) * g.n_edges
    assert brute_force_cheeger(out)[0] >= report.kappa_prime
    assert report.kappa_prime == report.stages[1].kappa_prime
    assert verify_report(g, h, report) == (True, None)


def test_topminor_to_induced_disconnected_host():
    triangle = [(200, 201), (201, 202), (202, 200)]
    g, h, w = subdivided_k4(extra=triangle)
    assert not g.is_connected()
    out, report = topminor_to_induced(g, h, w, Fraction(2, 3), Fraction(2, 5), Fraction(1, 4))
    assert out.vertices <= g.components()[0]
    assert verify_report(g, h, report) == (True, None)


# -- reports -------------------------------------------------------------------------------


def test_report_round_trip_and_no_floats():
    g, h, w = subdivided_k4()
    _, report = topminor_to_induced(g, h, w, Fraction(2, 3), Fraction(1, 2), Fraction(1, 4))
    text = report.to_json()
    again = PipelineReport.from_dict(json.loads(text))
    assert again.to_json() == text
    json.loads(text, parse_float=lambda s: pytest.fail(f"float {s} in report"))


def test_report_schema_version_checked():
    with pytest.raises(ParseError):
        PipelineReport.from_dict({"schema_version": 99})


def test_verify_report_mutations(k4):
    _, report = subgraph_to_induced(k4, k4, Fraction(2, 3), 1, Fraction(1, 2))
    inflated = PipelineReport.from_dict(report.to_dict())
    inflated.kappa_prime = Fraction(1)
    ok, clause = verify_report(k4, k4, inflated)
    assert not ok and clause.startswith("expansion")
    outside = PipelineReport.from_dict(report.to_dict())
    outside.output_vertices = outside.output_vertices | {99}
    ok, clause = verify_report(k4, k4, outside)
    assert not ok and clause.startswith("relation")
    small = PipelineReport.from_dict(report.to_dict())
    small.output_vertices = frozenset({0, 1})
    small.output_edges = {(0, 1): 1}
    ok, clause = verify_report(k4, k4, small)
    assert not ok and clause.startswith("size")
