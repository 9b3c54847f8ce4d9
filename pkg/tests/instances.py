"""Seeded random placement instances shared by several test modules."""

import random

from topocnot.arch import all_pairs_distances, parse_architecture
from topocnot.gf2 import RowAdd
from topocnot.placer import interaction_graph


def random_instance(seed, max_logical=6, max_physical=7):
    """A connected random graph on <= max_physical vertices and a random interaction graph."""
    rng = random.Random(seed)
    n_phys = rng.randint(3, max_physical)
    m = rng.randint(2, min(max_logical, n_phys))
    edges = {(rng.randint(1, v - 1), v) for v in range(2, n_phys + 1)}  # spanning tree
    for _ in range(rng.randint(0, n_phys)):
        u, v = sorted(rng.sample(range(1, n_phys + 1), 2))
        edges.add((u, v))
    text = f"qubits {n_phys}\n" + "".join(f"edge {u} {v}\n" for u, v in sorted(edges))
    t = all_pairs_distances(parse_architecture(text))
    ops = [RowAdd(*rng.sample(range(1, m + 1), 2)) for _ in range(rng.randint(1, 10))]
    return interaction_graph(ops, m), t
