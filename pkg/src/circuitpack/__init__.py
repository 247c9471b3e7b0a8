"""Exact circuit packing and transversal duality for directed multigraphs,
with the special-arc minor order, the matching-side structure theory, and
composition/decomposition along sums."""

from .bipartite import (
    BipartiteGraph,
    Cycle,
    Edge,
    Matching,
    bipartite_from_json,
    bipartite_to_dot,
    bipartite_to_json,
    enumerate_cycles,
    has_perfect_matching,
    is_perfect,
    parse_bipartite,
    perfect_matchings,
    serialize_bipartite,
)
from .budget import Budget
from .canonical import (
    bipartite_canonical_form,
    bipartite_isomorphic,
    canonical_form,
    isomorphic,
)
from .circuits import (
    Circuit,
    enumerate_circuits,
    strongly_connected,
    strongly_connected_components,
    strongly_k_connected,
)
from .digraph import (
    Arc,
    Digraph,
    digraph_from_json,
    digraph_to_dot,
    digraph_to_json,
    parse_digraph,
    serialize_digraph,
)
from .errors import (
    BudgetExceededError,
    CircuitpackError,
    InternalConsistencyError,
    ParseError,
    PreconditionError,
    SizeGuardError,
)
from .matching import (
    ContainmentWitness,
    alternating_nu,
    alternating_tau,
    central_circuits,
    contains,
    contains_heawood,
    contains_k33,
    is_brace,
    k_extendable,
)
from .minors import (
    MinorWitness,
    Obstruction,
    contract_special,
    fano_digraph,
    find_obstruction,
    is_minor,
    odd_double_circuit,
    replay_witness,
    special_arcs,
)
from .named_graphs import cube, heawood, k33
from .planarity import planar, strongly_planar
from .solvers import (
    DualityReport,
    NonPackWitness,
    SolveResult,
    check_essential_vertex,
    nu,
    nu_edge,
    nu_weighted,
    packs,
    packs_bruteforce,
    packs_via_obstructions,
    planar_duality_check,
    tau,
    tau_edge,
    tau_weighted,
    weighted_obstruction_search,
)
from .sums import (
    DecompositionTree,
    FourCircuit,
    Imprint,
    check_part_min_edges,
    find_trisum_split,
    four_sum,
    imprint,
    one_sum,
    replay_tree,
    split_one_sum,
    split_zero_sum,
    sum_decompose,
    trisum,
    trisum_decompose,
    trisum_of_three_cubes,
    zero_sum,
)
from .transform import bipartite_double, dgm, vertex_split

__version__ = "0.1.0"
