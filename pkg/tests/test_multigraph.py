from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expander_extract.exceptions import DegenerateInputError, ParseError, PreconditionError, UnknownVertexError
from expander_extract.multigraph import (
    MultiGraph,
    cheeger_constant,
    cut_size,
    degree,
    edge_expansion,
    format_edge_list,
    induced_subgraph,
    is_kappa_expander,
    iter_connected_subsets,
    parse_edge_list,
    smooth_vertex,
    volume,
)
from expander_extract.oracle import brute_force_cheeger

from .graphs import complete, cycle
from .strategies import multigraphs


# -- degree / volume / cut --------------------------------------------------------


def test_degree_examples():
    assert degree(complete(3), 1) == 2
    assert degree(MultiGraph([0], [(0, 0)]), 0) == 2
    fat = MultiGraph([0, 1], [(0, 1)] * 3)
    assert degree(fat, 0) == degree(fat, 1) == 3


def test_degree_unknown_vertex():
    with pytest.raises(UnknownVertexError):
        degree(complete(3), 7)


def test_volume_examples(k4, c6):
    assert volume(k4, k4.vertices) == 12
    assert volume(k4, {2}) == 3
    assert volume(c6, {0, 1, 2}) == 6


def test_volume_rejects_outside_members(k4):
    with pytest.raises(UnknownVertexError):
        volume(k4, {0, 9})


def test_cut_examples(k4, c6):
    assert cut_size(k4, {0, 3}) == 4
    assert cut_size(c6, {0, 1, 2}) == 2
    assert cut_size(c6, set()) == 0


def test_cut_ignores_loops():
    g = MultiGraph([0, 1], [(0, 0), (0, 1), (0, 1)])
    assert cut_size(g, {0}) == 2
    assert volume(g, {0}) == 4


def test_edge_expansion_examples(k4, c6):
    assert edge_expansion(k4, {1}) == 1
    assert edge_expansion(k4, {1, 2}) == Fraction(2, 3)
    assert edge_expansion(c6, {3, 4, 5}) == Fraction(1, 3)


@pytest.mark.parametrize("x", [set(), {0, 1, 2, 3}])
def test_edge_expansion_rejects_trivial_sets(k4, x):
    with pytest.raises(DegenerateInputError):
        edge_expansion(k4, x)


def test_edge_expansion_zero_volume_side():
    g = MultiGraph([0, 1, 2], [(0, 1)])
    with pytest.raises(DegenerateInputError):
        edge_expansion(g, {2})


# -- Cheeger constant ---------------------------------------------------------------


def test_cheeger_k4(k4):
    value, cert = cheeger_constant(k4)
    assert value == Fraction(2, 3)
    assert cert.witness_set == frozenset({0, 1})
    assert cert.check(k4)


def test_cheeger_c6(c6):
    value, cert = cheeger_constant(c6)
    assert value == Fraction(1, 3)
    assert cert.witness_set == frozenset({0, 1, 2})
    assert (cert.boundary_edges, cert.min_side_volume) == (2, 6)


def test_cheeger_disconnected_is_zero():
    g = MultiGraph(range(6), [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    value, cert = cheeger_constant(g)
    assert value == 0
    assert cert.boundary_edges == 0
    assert cert.witness_set == frozenset({0, 1, 2})


def test_cheeger_single_vertex_is_degenerate():
    with pytest.raises(DegenerateInputError):
        cheeger_constant(MultiGraph([0], [(0, 0)]))


def test_cheeger_k2_and_loops():
    assert cheeger_constant(MultiGraph([0, 1], [(0, 1)]))[0] == 1
    # loops add volume but no cut
    assert cheeger_constant(MultiGraph([0, 1], [(0, 1), (0, 0)]))[0] == Fraction(1, 1)
    assert cheeger_constant(MultiGraph([0, 1], [(0, 1), (0, 0), (1, 1)]))[0] == Fraction(1, 3)


def test_is_kappa_expander_examples(k4, c6):
    assert is_kappa_expander(k4, Fraction(2, 3))
    ok, cert = is_kappa_expander(k4, Fraction(7, 10), return_certificate=True)
    assert not ok
    assert len(cert.witness_set) == 2
    assert cert.h_value < Fraction(7, 10)
    assert is_kappa_expander(c6, "1/3")


def test_is_kappa_expander_rejects_float(k4):
    with pytest.raises(TypeError):
        is_kappa_expander(k4, 0.5)


def test_connected_subsets_are_connected_and_complete():
    g = cycle(5)
    seen = [frozenset(x) for x, _, _ in iter_connected_subsets(g)]
    assert len(seen) == len(set(seen))
    # arcs of a 5-cycle: 5 per size for sizes 1..4, plus the full set
    assert len(seen) == 5 * 4 + 1
    sizes = [len(x) for x in seen]
    assert sizes == sorted(sizes)


@settings(max_examples=150, deadline=None)
@given(multigraphs(min_vertices=2, max_vertices=7))
def test_cheeger_matches_oracle(g):
    value, cert = cheeger_constant(g)
    oracle, _ = brute_force_cheeger(g)
    assert value == oracle
    assert cert.h_value == value
    assert cert.check(g)


# -- induced subgraph and smoothing -------------------------------------------------


def test_induced_subgraph_examples(k4):
    assert induced_subgraph(k4, {0, 1, 2}) == complete(3)
    assert induced_subgraph(k4, k4.vertices) == k4
    loop = MultiGraph([0, 1], [(0, 0), (0, 1)])
    assert induced_subgraph(loop, {0}) == MultiGraph([0], [(0, 0)])


def test_smooth_path():
    g = MultiGraph("avb", [("a", "v"), ("v", "b")])
    assert smooth_vertex(g, "v") == MultiGraph("ab", [("a", "b")])


def test_smooth_triangle_gives_parallel_pair():
    g = MultiGraph("avb", [("a", "v"), ("v", "b"), ("b", "a")])
    assert smooth_vertex(g, "v").multiplicity("a", "b") == 2


def test_smooth_two_cycle_gives_loop():
    g = MultiGraph("av", [("a", "v"), ("v", "a")])
    out = smooth_vertex(g, "v")
    assert out == MultiGraph("a", [("a", "a")])
    assert out.degree("a") == 2


@pytest.mark.parametrize(
    "edges",
    [[(0, 1)], [(0, 1), (0, 2), (0, 3)], [(0, 0)]],
    ids=["degree-1", "degree-3", "loop"],
)
def test_smooth_precondition(edges):
    g = MultiGraph(range(4), edges)
    with pytest.raises(PreconditionError):
        smooth_vertex(g, 0)


# -- properties ----------------------------------------------------------------------


@given(multigraphs())
def test_handshake(g):
    assert volume(g, g.vertices) == 2 * g.n_edges


@given(multigraphs(min_vertices=2), st.data())
def test_expansion_symmetry(g, data):
    order = g.ordered_vertices
    x = frozenset(data.draw(st.sets(st.sampled_from(order), min_size=1, max_size=len(order) - 1)))
    rest = g.vertices - x
    try:
        forward = edge_expansion(g, x)
    except DegenerateInputError:
        return
    assert forward == edge_expansion(g, rest)


@given(multigraphs(max_edges=10))
def test_smoothing_invariants(g):
    for v in g.ordered_vertices:
        if g.degree(v) == 2 and g.loops(v) == 0:
            out = smooth_vertex(g, v)
            assert out.n_edges - len(out) == g.n_edges - len(g)
            assert all(out.degree(u) == g.degree(u) for u in out.vertices)


def test_volume_monotone_under_induced_subgraphs():
    # exhaustive: every H' induced in H and X in V(H')
    graphs = [complete(4), cycle(5), MultiGraph(range(4), [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 1)])]
    for h in graphs:
        order = h.ordered_vertices
        total_h = volume(h, h.vertices)
        for r in range(1, len(order) + 1):
            for keep in combinations(order, r):
                sub = h.induced_subgraph(keep)
                total_sub = volume(sub, sub.vertices)
                for s in range(1, r):
                    for x in combinations(keep, s):
                        if 2 * volume(sub, x) <= total_sub:
                            assert 2 * volume(h, x) <= total_h


# -- edge-list format ------------------------------------------------------------------


def test_edge_list_round_trip():
    text = "# demo\n0 1\n1 1\n0 1\n5\n"
    g = parse_edge_list(text)
    assert g.vertices == {0, 1, 5}
    assert g.multiplicity(0, 1) == 2 and g.loops(1) == 1
    assert parse_edge_list(format_edge_list(g)) == g


def test_edge_list_string_ids():
    g = parse_edge_list("a b\nb c\n")
    assert g.vertices == {"a", "b", "c"}


def test_edge_list_parse_error_has_location():
    with pytest.raises(ParseError) as info:
        parse_edge_list("0 1\n0 1 2 3\n", source="g.txt")
    assert "g.txt:2" in str(info.value)
