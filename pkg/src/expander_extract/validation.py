"""Input validation helpers: exact rationals, vertex ordering, graph coercion."""

from __future__ import annotations

import numbers
import re
from fractions import Fraction

from .exceptions import PreconditionError

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def vertex_key(v):
    """Total order on opaque vertex ids.

    Integers sort numerically and before everything else; strings sort
    lexicographically; any other hashable falls back to its repr.
    """
    if isinstance(v, numbers.Integral) and not isinstance(v, bool):
        return (0, int(v), "")
    if isinstance(v, str):
        return (1, 0, v)
    return (2, 0, repr(v))


def sorted_vertices(vertices):
    return sorted(vertices, key=vertex_key)


def as_rational(value, name="value"):
    """Coerce ``value`` to a :class:`~fractions.Fraction` without ever
    passing through floating point.

    Accepts ``Fraction``, integers and strings of the form ``p`` or ``p/q``.
    Floats are rejected: every guarantee in this package is an exact
    inequality and a float would silently truncate it.
    """
    if isinstance(value, bool):
        raise TypeError(f"{name}: booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        m = _RATIONAL_RE.match(value)
        if m is None:
            raise PreconditionError(f"{name}: expected an exact rational 'p/q', got {value!r}")
        num, den = int(m.group(1)), int(m.group(2) or 1)
        if den == 0:
            raise PreconditionError(f"{name}: zero denominator in {value!r}")
        return Fraction(num, den)
    raise TypeError(f"{name}: expected an exact rational (Fraction, int or 'p/q'), got {type(value).__name__}")


def format_rational(value):
    """Serialize an exact rational as ``"p/q"`` (denominator always present)."""
    value = as_rational(value)
    return f"{value.numerator}/{value.denominator}"


def check_in_range(value, name, low=None, high=None, low_open=True, high_open=False):
    """Validate ``low < value <= high`` (openness configurable) and return it
    as a Fraction."""
    value = as_rational(value, name)
    if low is not None:
        if (low_open and value <= low) or (not low_open and value < low):
            op = ">" if low_open else ">="
            raise PreconditionError(f"{name} must be {op} {low}, got {value}")
    if high is not None:
        if (high_open and value >= high) or (not high_open and value > high):
            op = "<" if high_open else "<="
            raise PreconditionError(f"{name} must be {op} {high}, got {value}")
    return value


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise PreconditionError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_multigraph(graph, name="graph"):
    """Return ``graph`` as a :class:`MultiGraph`.

    networkx graphs (simple or multi) are converted, so estimators can be fed
    straight from that ecosystem.
    """
    from .multigraph import MultiGraph

    if isinstance(graph, MultiGraph):
        return graph
    try:
        import networkx as nx
    except ImportError:  # pragma: no cover
        nx = None
    if nx is not None and isinstance(graph, nx.Graph):
        if graph.is_directed():
            raise PreconditionError(f"{name}: directed graphs are not supported")
        return MultiGraph(graph.nodes(), ((u, v) for u, v, *_ in graph.edges()))
    raise TypeError(f"{name}: expected a MultiGraph or networkx graph, got {type(graph).__name__}")
