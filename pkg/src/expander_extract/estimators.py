"""scikit-learn style wrappers around the extraction procedures.

Each estimator takes its rational parameters in ``__init__`` (so
``get_params``/``set_params``/``clone`` work), learns the kept vertex set in
``fit`` and applies it in ``transform``::

    trimmer = ExpanderTrimmer(kappa="1/2").fit(G, H)
    core = trimmer.transform(H)          # induced on trimmer.support_

Fitted attributes end in an underscore, as usual.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .coloring import EdgeColoredGraph, VertexColoredGraph, red_vertex
from .exceptions import PreconditionError
from .extraction import extract_induced_core, prune_long_blue_paths, trim_to_expander
from .multigraph import cheeger_constant
from .pipeline import subgraph_to_induced, topminor_to_induced, topminor_to_subgraph
from .validation import as_rational, check_multigraph

__all__ = [
    "ExpanderTrimmer",
    "BluePathPruner",
    "InducedCoreExtractor",
    "InducedExpanderExtractor",
]


class _SupportTransformer(TransformerMixin, BaseEstimator):
    """Shared ``transform``: restrict a graph to the fitted support."""

    def transform(self, X):
        check_is_fitted(self, "support_")
        if isinstance(X, (VertexColoredGraph, EdgeColoredGraph)):
            return X.induced(self.support_ & X.graph.vertices)
        X = check_multigraph(X, "X")
        return X.induced_subgraph(self.support_ & X.vertices)

    def score(self, X, y=None):
        """Exact Cheeger constant of the transformed graph (of its reduction
        for coloured input)."""
        out = self.transform(X)
        if isinstance(out, VertexColoredGraph):
            out = red_vertex(out)
        elif isinstance(out, EdgeColoredGraph):
            out = out.red
        return cheeger_constant(out)[0]


class ExpanderTrimmer(_SupportTransformer):
    """Trim a large subgraph ``H`` of a ``kappa``-expander ``G`` down to an
    induced ``kappa/3``-expander.

    Parameters
    ----------
    kappa : rational
        Expansion of the ambient graph, ``0 < kappa <= 1``.
    epsilon : rational, optional
        Edge-loss fraction used for the reported bound only.
    search : callable, optional
        Bad-set search strategy.

    Attributes
    ----------
    support_ : frozenset
    trace_ : TrimTrace
    expansion_bound_ : Fraction
    """

    def __init__(self, kappa="1/2", epsilon=None, search=None):
        self.kappa = kappa
        self.epsilon = epsilon
        self.search = search

    def fit(self, X, y=None):
        """``X`` is the ambient expander, ``y`` the subgraph to trim."""
        if y is None:
            raise PreconditionError("ExpanderTrimmer.fit needs the subgraph as y")
        g, h = check_multigraph(X, "X"), check_multigraph(y, "y")
        kept, trace = trim_to_expander(g, h, self.kappa, self.epsilon, self.search)
        self.support_ = kept.vertices
        self.trace_ = trace
        self.expansion_bound_ = as_rational(self.kappa) / 3
        return self

    def fit_transform(self, X, y=None, **fit_params):
        return self.fit(X, y).transform(y)


class BluePathPruner(_SupportTransformer):
    """Drop blue paths with more than ``M`` edges and keep the component of a
    vertex-coloured graph whose reduction is largest.

    Attributes
    ----------
    support_ : frozenset
    big_m_ : int
    n_long_paths_ : int
    """

    def __init__(self, kappa="1/2", epsilon="1/2", alpha="1/2", big_m=None):
        self.kappa = kappa
        self.epsilon = epsilon
        self.alpha = alpha
        self.big_m = big_m

    def fit(self, X, y=None):
        if not isinstance(X, VertexColoredGraph):
            raise TypeError("BluePathPruner expects a VertexColoredGraph")
        c_m, big_m, n_long = prune_long_blue_paths(X, self.kappa, self.epsilon, self.alpha, self.big_m)
        self.support_ = c_m.graph.vertices
        self.big_m_ = big_m
        self.n_long_paths_ = n_long
        return self


class InducedCoreExtractor(_SupportTransformer):
    """Heavy-vertex removal followed by the two-case deletion process on an
    edge-coloured graph.

    Attributes
    ----------
    support_ : frozenset
    big_m_ : int
    trace_ : InducedTrace
    """

    def __init__(self, kappa="1/2", epsilon="1/2", alpha="1/2", big_m=None, search=None):
        self.kappa = kappa
        self.epsilon = epsilon
        self.alpha = alpha
        self.big_m = big_m
        self.search = search

    def fit(self, X, y=None):
        if not isinstance(X, EdgeColoredGraph):
            raise TypeError("InducedCoreExtractor expects an EdgeColoredGraph")
        core, big_m, trace = extract_induced_core(
            X, self.kappa, self.epsilon, self.alpha, big_m=self.big_m, search=self.search
        )
        self.support_ = core.graph.vertices
        self.big_m_ = big_m
        self.trace_ = trace
        return self


class InducedExpanderExtractor(_SupportTransformer):
    """End-to-end extraction of an expander from ``G`` given a large expander
    ``H`` inside it.

    ``route`` selects the relation between ``H`` and ``G``:

    * ``"topological-minor"``: ``H`` is a topological minor, certified by
      ``witness`` passed to :meth:`fit`; output is induced.
    * ``"subgraph"``: ``H`` is a subgraph; output is induced.
    * ``"topological-minor-subgraph"``: first reduction only; output is a
      subgraph (``transform`` still returns the induced graph on the
      support, use ``output_`` for the exact edge set).

    Attributes
    ----------
    support_ : frozenset
    output_ : MultiGraph
    report_ : PipelineReport
    kappa_prime_ : Fraction
    """

    def __init__(self, kappa="1/2", alpha="1/2", alpha_prime="1/4", route="topological-minor", verify=False):
        self.kappa = kappa
        self.alpha = alpha
        self.alpha_prime = alpha_prime
        self.route = route
        self.verify = verify

    def fit(self, X, y=None, witness=None):
        g, h = check_multigraph(X, "X"), check_multigraph(y, "y")
        args = (self.kappa, self.alpha, self.alpha_prime)
        if self.route == "subgraph":
            out, report = subgraph_to_induced(g, h, *args, verify=self.verify)
        elif self.route in ("topological-minor", "topological-minor-subgraph"):
            if witness is None:
                raise PreconditionError(f"route {self.route!r} needs a witness")
            run = topminor_to_induced if self.route == "topological-minor" else topminor_to_subgraph
            out, report = run(g, h, witness, *args, verify=self.verify)
        else:
            raise PreconditionError(f"unknown route {self.route!r}")
        self.output_ = out
        self.support_ = out.vertices
        self.report_ = report
        self.kappa_prime_ = report.kappa_prime
        return self
