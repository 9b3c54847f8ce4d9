"""Topology-aware synthesis of CNOT circuits.

A linear reversible map over GF(2) is decomposed into row additions, the
logical qubits are placed on a coupling graph to minimise routing cost, and
every addition is routed along a shortest path with nearest-neighbour CNOTs.
"""

from .arch import (
    ArchitectureGraph,
    DistanceTable,
    all_pairs_distances,
    builtin_architecture,
    load_architecture,
    parse_architecture,
    shortest_path,
)
from .errors import CompileError
from .gf2 import BitMatrix, CnotGate, Permutation, RowAdd, Swap, circuit_matrix, gauss_jordan, product
from .pipeline import (
    BenchConfig,
    BenchReport,
    CompileOptions,
    bench_table,
    compile_pipeline,
    load_input,
    random_circuit,
)
from .placer import (
    InteractionGraph,
    Placement,
    cost_s,
    exhaustive_place,
    export_milp,
    import_solution,
    interaction_graph,
    local_search_place,
    objective,
)
from .rewrite import Decomposition, decompose, push_swaps_left, rewrite_optimize, verify_decomposition
from .router import RoutedCircuit, expand_long_cnot, route_circuit, verify_routed
from .synth import decomposition_candidates, greedy_eliminate

__version__ = "0.1.0"
