"""Large induced expanders from expander topological minors, with exact
brute-force verification at small scale."""

from .coloring import (
    BluePath,
    EdgeColoredGraph,
    VertexColoredGraph,
    lift,
    maximal_blue_paths,
    red_degree,
    red_edge,
    red_vertex,
)
from .estimators import BluePathPruner, ExpanderTrimmer, InducedCoreExtractor, InducedExpanderExtractor
from .exceptions import (
    CapExceededError,
    DegenerateInputError,
    ExpanderError,
    ParseError,
    PreconditionError,
    UnknownVertexError,
)
from .extraction import (
    InducedTrace,
    TrimTrace,
    choose_m_blue_paths,
    choose_m_heavy,
    edge_addition_expansion_bound,
    extract_induced_core,
    find_bad_set,
    heavy_vertex_set,
    prune_long_blue_paths,
    subdivision_expansion_bound,
    trim_to_expander,
)
from .multigraph import (
    ExpansionCertificate,
    MultiGraph,
    cheeger_constant,
    cut_size,
    degree,
    edge_expansion,
    induced_subgraph,
    is_kappa_expander,
    smooth_vertex,
    volume,
)
from .oracle import InstanceSpec, brute_force_cheeger, generate_verified_expander, verify_report
from .pipeline import (
    PipelineReport,
    TopoMinorWitness,
    subgraph_to_edge_colored,
    subgraph_to_induced,
    topminor_to_induced,
    topminor_to_subgraph,
    validate_witness,
    witness_to_vertex_colored,
)

__version__ = "0.1.0"
