"""Small named graphs shared by the tests."""

from itertools import combinations

from expander_extract.multigraph import MultiGraph


def complete(n, offset=0):
    return MultiGraph(range(offset, offset + n), combinations(range(offset, offset + n), 2))


def cycle(n):
    return MultiGraph(range(n), [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return MultiGraph(range(n), [(i, i + 1) for i in range(n - 1)])


def two_triangles_bridged():
    return MultiGraph(range(6), [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])
