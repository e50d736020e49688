"""Unions of comparability graphs: extremal constructions, proof procedures and oracles."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .poset import (  # noqa: F401
    Coloring,
    Graph,
    HomogeneousSet,
    LabeledUnionGraph,
    StrictOrder,
    comparability_graph,
    extract_homogeneous,
    is_partial_order,
    mirsky_coloring,
    product_coloring,
    transitive_closure,
    union_graphs,
)
from .grid import (  # noqa: F401
    GridConstruction,
    GridParams,
    alpha_witness,
    build_grid,
    greedy_clique_witness,
    grid_params_from_n,
    structural_clique,
)
from .expander import (  # noqa: F401
    ExpansionCertificate,
    PowerGraph,
    RegularGraph,
    check_expander_bound,
    closed_neighborhood,
    graph_power,
    random_regular,
    vertex_expansion,
)
from .ranked import (  # noqa: F401
    RankedConstruction,
    RankedParams,
    build_ranked,
    find_comparable_subsets,
    max_degree,
    prec,
    prec_disjoint,
    ranked_params_from_n,
    separate_multisets,
)
from .oracles import (  # noqa: F401
    OracleResult,
    enumerate_maximal_cliques,
    max_balanced_biclique_exact,
    max_clique_exact,
    max_independent_exact,
)
