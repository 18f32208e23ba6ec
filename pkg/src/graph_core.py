"""
MatchEnt Graph Core

Finite undirected multigraphs: construction, edge-list I/O, degree
profiles, girth, cycle counts and maximum matchings. Loops are
rejected, parallel edges are kept. A Graph is immutable once built.
"""

import hashlib
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

import networkx as nx

from errors import DomainError, GraphParseError, VertexRangeError


# ==================== CONSTANTS ====================

HEADER_TOKEN = "v"       # Optional first line: v <n>
COMMENT_CHAR = "#"

Edge = Tuple[int, int]


# ==================== GRAPH ====================

@dataclass(frozen=True)
class Graph:
    """
    A finite multigraph on vertices 0..vertex_count-1.

    Edges are stored as normalized (u, w) pairs with u < w, in input
    order. The edge tuple is a multiset: repeated pairs are parallel edges.
    """
    vertex_count: int
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.vertex_count < 0:
            raise DomainError("vertex_count must be non-negative")
        normalized = []
        for u, w in self.edges:
            u, w = int(u), int(w)
            if u == w:
                raise DomainError(f"loop at vertex {u}")
            if min(u, w) < 0 or max(u, w) >= self.vertex_count:
                raise VertexRangeError(
                    f"edge ({u}, {w}) outside vertex range 0..{self.vertex_count - 1}"
                )
            normalized.append((u, w) if u < w else (w, u))
        object.__setattr__(self, "edges", tuple(normalized))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def multiplicity(self) -> Counter:
        """Edge pair -> number of parallel copies."""
        return Counter(self.edges)

    @cached_property
    def adjacency(self) -> Dict[int, Counter]:
        """Vertex -> Counter of neighbours with edge multiplicity."""
        adj = {v: Counter() for v in range(self.vertex_count)}
        for u, w in self.edges:
            adj[u][w] += 1
            adj[w][u] += 1
        return adj

    def degree(self, v: int) -> int:
        return sum(self.adjacency[v].values())

    def degrees(self) -> List[int]:
        return [self.degree(v) for v in range(self.vertex_count)]

    def to_networkx(self, multi: bool = False) -> nx.Graph:
        g = nx.MultiGraph() if multi else nx.Graph()
        g.add_nodes_from(range(self.vertex_count))
        g.add_edges_from(self.edges)
        return g

    @cached_property
    def bipartition(self) -> Optional[Tuple[FrozenSet[int], FrozenSet[int]]]:
        """
        Two colour classes if the graph is bipartite, else None.
        The class holding the smallest vertex comes first.
        """
        if self.vertex_count == 0:
            return (frozenset(), frozenset())
        try:
            colour = nx.bipartite.color(self.to_networkx())
        except nx.NetworkXError:
            return None
        first = colour[0]
        left = frozenset(v for v, c in colour.items() if c == first)
        right = frozenset(v for v, c in colour.items() if c != first)
        return (left, right)

    @property
    def is_bipartite(self) -> bool:
        return self.bipartition is not None

    def is_forest(self) -> bool:
        if self.vertex_count == 0:
            return True
        return nx.is_forest(self.to_networkx(multi=True))

    def __repr__(self) -> str:
        return f"Graph(v={self.vertex_count}, e={self.edge_count})"


# ==================== EDGE-LIST I/O ====================

def load_graph(text: str) -> Graph:
    """
    Parse an edge-list document.

    Format: optional header `v <n>`, then one `<u> <w>` pair per line.
    `#` starts a comment. Without a header the vertex count is one more
    than the largest index seen.
    """
    declared: Optional[int] = None
    edges: List[Edge] = []
    seen_edge = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(COMMENT_CHAR, 1)[0].strip()
        if not line:
            continue
        tokens = line.split()

        if tokens[0] == HEADER_TOKEN:
            if declared is not None or seen_edge:
                raise GraphParseError("header must appear once, before any edge", lineno)
            if len(tokens) != 2:
                raise GraphParseError(f"expected 'v <n>', got {line!r}", lineno)
            declared = _parse_index(tokens[1], lineno)
            continue

        if len(tokens) != 2:
            raise GraphParseError(f"expected '<u> <w>', got {line!r}", lineno)
        u = _parse_index(tokens[0], lineno)
        w = _parse_index(tokens[1], lineno)
        if u == w:
            raise GraphParseError(f"loop at vertex {u}", lineno)
        if declared is not None and max(u, w) >= declared:
            raise VertexRangeError(
                f"line {lineno}: vertex {max(u, w)} >= declared count {declared}"
            )
        edges.append((u, w))
        seen_edge = True

    if declared is None:
        declared = 1 + max((max(e) for e in edges), default=-1)
    return Graph(declared, tuple(edges))


def _parse_index(token: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise GraphParseError(f"not an integer: {token!r}", lineno)
    if value < 0:
        raise GraphParseError(f"negative index {value}", lineno)
    return value


def load_graph_file(path: Union[str, Path]) -> Graph:
    with open(path) as f:
        return load_graph(f.read())


def dump_graph(g: Graph) -> str:
    lines = [f"{HEADER_TOKEN} {g.vertex_count}"]
    lines += [f"{u} {w}" for u, w in g.edges]
    return "\n".join(lines) + "\n"


def graph_hash(g: Graph) -> str:
    """SHA-256 of the canonical (sorted-edge) dump."""
    canonical = Graph(g.vertex_count, tuple(sorted(g.edges)))
    return hashlib.sha256(dump_graph(canonical).encode()).hexdigest()


# ==================== DEGREES ====================

@dataclass(frozen=True)
class DegreeProfile:
    """Regularity summary. For biregular graphs a >= b and class_a has degree a."""
    is_regular: bool
    degree: Optional[int]
    is_biregular: bool
    a: Optional[int]
    b: Optional[int]
    class_a: FrozenSet[int] = field(default_factory=frozenset)
    class_b: FrozenSet[int] = field(default_factory=frozenset)
    max_degree: int = 0


def degree_profile(g: Graph) -> DegreeProfile:
    degs = g.degrees()
    max_degree = max(degs, default=0)
    distinct = set(degs)

    if len(distinct) <= 1:
        d = max_degree
        parts = g.bipartition or (frozenset(range(g.vertex_count)), frozenset())
        return DegreeProfile(True, d, True, d, d, parts[0], parts[1], max_degree)

    if len(distinct) == 2:
        a, b = max(distinct), min(distinct)
        # every edge must join a degree-a vertex to a degree-b vertex
        if all((degs[u] == a) != (degs[w] == a) for u, w in g.edges):
            class_a = frozenset(v for v in range(g.vertex_count) if degs[v] == a)
            class_b = frozenset(v for v in range(g.vertex_count) if degs[v] == b)
            return DegreeProfile(False, None, True, a, b, class_a, class_b, max_degree)

    return DegreeProfile(False, None, False, None, None, max_degree=max_degree)


# ==================== CYCLES ====================

def girth(g: Graph) -> Union[int, float]:
    """Shortest cycle length; math.inf for forests, 2 with parallel edges."""
    if any(m > 1 for m in g.multiplicity.values()):
        return 2

    adj = {v: list(nbrs) for v, nbrs in g.adjacency.items()}
    best = math.inf
    for root in range(g.vertex_count):
        dist = {root: 0}
        parent = {root: -1}
        queue = [root]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            if 2 * dist[u] + 1 >= best:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def count_cycles(g: Graph, length: int) -> int:
    """
    Number of cycles of exactly `length` edges, each counted once.

    Length 2 counts pairs of parallel edges. Longer cycles are found by
    DFS from their smallest vertex with direction fixed by path[1] < path[-1],
    then weighted by the product of edge multiplicities.
    """
    if length < 2:
        raise DomainError("cycle length must be >= 2")
    if length == 2:
        return sum(math.comb(m, 2) for m in g.multiplicity.values())
    if length > g.vertex_count:
        return 0

    mult = g.multiplicity
    adj = {v: sorted(nbrs) for v, nbrs in g.adjacency.items()}
    total = 0

    def weight(path: List[int]) -> int:
        w = 1
        for i in range(len(path)):
            u, x = path[i], path[(i + 1) % len(path)]
            w *= mult[(u, x) if u < x else (x, u)]
        return w

    for start in range(g.vertex_count):
        path = [start]
        on_path = {start}

        def extend(u: int):
            nonlocal total
            if len(path) == length:
                if start in g.adjacency[u] and path[1] < path[-1]:
                    total += weight(path)
                return
            for w in adj[u]:
                if w > start and w not in on_path:
                    path.append(w)
                    on_path.add(w)
                    extend(w)
                    on_path.discard(w)
                    path.pop()

        extend(start)
    return total


# ==================== MATCHING & UNION ====================

def max_matching(g: Graph) -> int:
    """Exact matching number: Hopcroft-Karp when bipartite, blossom otherwise."""
    if g.edge_count == 0:
        return 0
    simple = g.to_networkx()
    parts = g.bipartition
    if parts is not None:
        matching = nx.bipartite.hopcroft_karp_matching(simple, top_nodes=parts[0])
        return len(matching) // 2
    return len(nx.max_weight_matching(simple, maxcardinality=True))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    shift = g.vertex_count
    edges = g.edges + tuple((u + shift, w + shift) for u, w in h.edges)
    return Graph(g.vertex_count + h.vertex_count, edges)


def replicate(g: Graph, r: int) -> Graph:
    """r disjoint copies of g."""
    result = Graph(0)
    for _ in range(r):
        result = disjoint_union(result, g)
    return result
