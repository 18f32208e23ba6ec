#!/usr/bin/env python3
"""
Graph core tests: edge-list parsing, degree profiles, girth, cycle
counts, matchings and unions.
"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from catalog import biregular_catalog, complete_bipartite, cycle, path, random_bipartite, regular_catalog, star
from errors import DomainError, GraphParseError, VertexRangeError
from graph_core import (
    Graph,
    count_cycles,
    degree_profile,
    disjoint_union,
    dump_graph,
    girth,
    graph_hash,
    load_graph,
    load_graph_file,
    max_matching,
    replicate,
)
from harness import check, header, main_for

GRAPHS_DIR = Path(__file__).parent.parent / "graphs"


def raises(exc, fn, *args) -> bool:
    try:
        fn(*args)
    except exc:
        return True
    return False


def test_parse():
    header("EDGE-LIST PARSING")

    g = load_graph("v 4\n0 1\n1 2\n2 3\n3 0")
    check("C4 parses", g.vertex_count == 4 and g.edge_count == 4)
    check("C4 bipartition", g.bipartition == (frozenset({0, 2}), frozenset({1, 3})),
          f"{g.bipartition}")

    g = load_graph("# comment\n0 1  # trailing\n\n1 2\n")
    check("No header: v = max index + 1", g.vertex_count == 3)

    try:
        load_graph("v 4\n0 1\n1 x\n")
        check("Bad token rejected", False)
    except GraphParseError as e:
        check("Bad token reports line 3", e.line == 3, str(e))

    check("Header after an edge rejected", raises(GraphParseError, load_graph, "0 1\nv 4\n"))
    check("Loop rejected", raises(GraphParseError, load_graph, "v 2\n0 0\n"))
    check("Endpoint beyond header rejected", raises(VertexRangeError, load_graph, "v 3\n0 3\n"))
    check("Graph() rejects loops", raises(DomainError, Graph, 2, ((1, 1),)))

    digon = load_graph_file(GRAPHS_DIR / "digon.el")
    check("Parallel edges kept", digon.multiplicity[(0, 1)] == 2)
    check("bad.el fails on line 4", raises(GraphParseError, load_graph_file, GRAPHS_DIR / "bad.el"))


def test_dump_and_hash():
    header("DUMP & HASH")

    g = load_graph_file(GRAPHS_DIR / "k33.el")
    again = load_graph(dump_graph(g))
    check("dump then load keeps edges", again.edges == g.edges)

    shuffled = Graph(g.vertex_count, tuple(reversed(g.edges)))
    check("Hash ignores edge order", graph_hash(shuffled) == graph_hash(g))
    check("Hash separates graphs", graph_hash(cycle(6)) != graph_hash(g))


def test_degree_profile():
    header("DEGREE PROFILES")

    c4 = degree_profile(cycle(4))
    check("C4 regular d=2", c4.is_regular and c4.degree == 2)

    k33 = degree_profile(complete_bipartite(3, 3))
    check("K3,3 regular d=3", k33.is_regular and k33.degree == 3)

    s = degree_profile(star(3))
    check("K1,3 biregular (3,1)", s.is_biregular and (s.a, s.b) == (3, 1), f"{s.a}, {s.b}")
    check("K1,3 degree-3 class is the centre", s.class_a == frozenset({0}))

    p = degree_profile(path(4))
    check("P4 is neither", not p.is_regular and not p.is_biregular)

    k23 = degree_profile(complete_bipartite(2, 3))
    check("K2,3 biregular (3,2)", (k23.a, k23.b) == (3, 2) and len(k23.class_a) == 2)


def test_girth_and_cycles():
    header("GIRTH & CYCLES")

    check("girth(C6) = 6", girth(cycle(6)) == 6)
    check("girth(K3,3) = 4", girth(complete_bipartite(3, 3)) == 4)
    check("girth(P4) = inf", math.isinf(girth(path(4))))
    check("girth(digon) = 2", girth(Graph(2, ((0, 1), (0, 1)))) == 2)

    check("C6 has one 6-cycle", count_cycles(cycle(6), 6) == 1)
    check("C6 has no 4-cycles", count_cycles(cycle(6), 4) == 0)
    k33 = complete_bipartite(3, 3)
    check("K3,3 has nine 4-cycles", count_cycles(k33, 4) == 9, f"{count_cycles(k33, 4)}")
    check("K3,3 has six 6-cycles", count_cycles(k33, 6) == 6)
    triple = Graph(2, ((0, 1),) * 3)
    check("Triple edge has three 2-cycles", count_cycles(triple, 2) == 3)
    check("Length 1 rejected", raises(DomainError, count_cycles, k33, 1))


def test_matching_and_union():
    header("MAX MATCHING & UNION")

    check("nu(K3,3) = 3", max_matching(complete_bipartite(3, 3)) == 3)
    check("nu(C6) = 3", max_matching(cycle(6)) == 3)
    check("nu(triangle) = 1", max_matching(cycle(3)) == 1)
    check("nu(empty) = 0", max_matching(Graph(5)) == 0)

    u = disjoint_union(cycle(4), cycle(4))
    check("C4 + C4 has 8 vertices, 8 edges", (u.vertex_count, u.edge_count) == (8, 8))
    check("replicate(C4, 3) has 12 vertices", replicate(cycle(4), 3).vertex_count == 12)

    pairs = [(random_bipartite(4 + i, seed=i), cycle(3 + i % 4)) for i in range(8)]
    additive = all(
        max_matching(disjoint_union(g, h)) == max_matching(g) + max_matching(h) for g, h in pairs
    )
    check("nu(G + H) = nu(G) + nu(H)", additive)

    def shape(profile):
        return (profile.is_regular, profile.degree, profile.is_biregular,
                profile.a, profile.b, profile.max_degree)

    changed = [
        name for name, g in regular_catalog() + biregular_catalog()
        if shape(degree_profile(disjoint_union(g, g))) != shape(degree_profile(g))
    ]
    check("Doubling keeps the degree profile", not changed, ", ".join(changed))


if __name__ == "__main__":
    main_for(__name__, "GRAPH CORE TESTS")
