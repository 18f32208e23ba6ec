"""
MatchEnt Graph Catalog

Named graph constructors and the bundled test catalogs used by the
verification sweeps.
"""

from typing import List, Tuple

import networkx as nx
import numpy as np

from errors import DomainError
from graph_core import Graph
from randmodels import ConfigModelParams, sample


# ==================== CONSTANTS ====================

RANDOM_CUBIC_COUNT = 20       # Random 3-regular bipartite graphs in the catalog
CATALOG_SEED = 2024
MAX_REJECTIONS = 10_000

NamedGraph = Tuple[str, Graph]


# ==================== CONSTRUCTORS ====================

def cycle(n: int) -> Graph:
    if n < 2:
        raise DomainError("a cycle needs at least 2 vertices")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def star(b: int) -> Graph:
    """K_{1,b}: centre 0, leaves 1..b."""
    return Graph(b + 1, tuple((0, i) for i in range(1, b + 1)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def cube() -> Graph:
    """The 3-dimensional hypercube Q3."""
    return Graph(8, tuple((v, v ^ (1 << i)) for v in range(8) for i in range(3) if v < v ^ (1 << i)))


def from_networkx(g: nx.Graph) -> Graph:
    mapping = {v: i for i, v in enumerate(g.nodes())}
    return Graph(len(mapping), tuple((mapping[u], mapping[w]) for u, w in g.edges()))


def heawood() -> Graph:
    return from_networkx(nx.heawood_graph())


def random_tree(v: int, seed: int) -> Graph:
    """Uniform labelled tree on v vertices from a random Pruefer sequence."""
    if v <= 1:
        return Graph(max(v, 0))
    if v == 2:
        return Graph(2, ((0, 1),))
    rng = np.random.default_rng(seed)
    sequence = [int(x) for x in rng.integers(0, v, size=v - 2)]
    return from_networkx(nx.from_prufer_sequence(sequence))


def random_bipartite(v: int, seed: int, density: float = 0.5) -> Graph:
    """Random simple bipartite graph with parts ceil(v/2), floor(v/2) and at least one edge."""
    rng = np.random.default_rng(seed)
    left = (v + 1) // 2
    while True:
        edges = tuple(
            (i, j) for i in range(left) for j in range(left, v) if rng.random() < density
        )
        if edges:
            return Graph(v, edges)


def random_simple(params: ConfigModelParams) -> Graph:
    """Configuration-model sample conditioned on having no parallel edges."""
    for attempt in range(MAX_REJECTIONS):
        g = sample(params, np.random.default_rng([params.seed, attempt]))
        if all(m == 1 for m in g.multiplicity.values()):
            return g
    raise DomainError(f"no simple graph after {MAX_REJECTIONS} configuration-model draws")


def random_regular_bipartite_simple(d: int, n: int, seed: int) -> Graph:
    return random_simple(ConfigModelParams.regular(d, n, seed))


# ==================== CATALOGS ====================

def regular_catalog() -> List[NamedGraph]:
    """
    d-regular bipartite graphs: C_{2n} for n <= 8, K_{d,d} for d <= 5,
    Q3, Heawood and 20 seeded random simple cubic bipartite graphs on
    at most 14 vertices.
    """
    graphs: List[NamedGraph] = [(f"C{2 * n}", cycle(2 * n)) for n in range(2, 9)]
    graphs += [(f"K{d},{d}", complete_bipartite(d, d)) for d in range(1, 6)]
    graphs += [("Q3", cube()), ("Heawood", heawood())]
    for i in range(RANDOM_CUBIC_COUNT):
        n = 3 + i % 5
        graphs.append((f"R3-{2 * n}-{i}", random_regular_bipartite_simple(3, n, CATALOG_SEED + i)))
    return graphs


def biregular_catalog() -> List[NamedGraph]:
    """Star K_{1,3}, K_{2,3} and a simple (3,2)-biregular graph on 6 + 9 vertices."""
    return [
        ("K1,3", star(3)),
        ("K2,3", complete_bipartite(2, 3)),
        ("B3,2-15", random_simple(ConfigModelParams.biregular(3, 2, 3, CATALOG_SEED))),
    ]
