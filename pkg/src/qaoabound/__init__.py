"""Certified lower bounds for cuts and independent sets on high-girth regular graphs.

The package evaluates depth-``p`` alternating-operator expectation values
exactly on regular-tree edge neighborhoods, optimizes the angles, and turns
the optimized values into machine-readable bound certificates, with a dense
statevector simulator as the independent cross-check.
"""

from .engine import (
    BranchMessage,
    EdgeExpectation,
    DEFAULT_MEMORY_BUDGET,
    dump_message,
    edge_expectation,
    entrywise_power,
    level_step,
    load_message,
    mis_edge_objective,
    required_bytes,
    unit_message,
    zz_expectation,
)
from .errors import (
    GraphParseError,
    InvalidInputError,
    InvalidParameterError,
    NumericError,
    QaoaBoundError,
    ResourceLimitError,
)
from .graphs import (
    Graph,
    brute_force_maxcut,
    brute_force_maxcut_bits,
    certified_depth_for_girth,
    cut_value,
    edge_coloring,
    format_graph,
    girth,
    i1_value,
    i2_value,
    max_certified_depth,
    named_graph,
    parse_graph,
    repair_independent,
    two_independent_sets,
)
from .params import ParamSet
from .simulator import (
    CutOperator,
    MISOperator,
    SampleReport,
    SingleZ,
    Statevector,
    ZZ,
    expectation,
    qaoa_state,
    sample,
    sampling_experiment,
    tree_graph,
)

__version__ = "0.1.0"
