#!/usr/bin/env python3
"""
Matching polynomial tests: exact counts, evaluation, roots, moments
and the tree/spectral coincidence.
"""

import math
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from catalog import biregular_catalog, complete_bipartite, cube, cycle, path, random_tree, regular_catalog, star
from errors import DomainError, MatchingTooLargeError
from graph_core import Graph, degree_profile, disjoint_union
from harness import check, header, main_for
from matchpoly import (
    MatchingPolynomial,
    convolve,
    evaluate_dM,
    evaluate_M,
    is_tree_spectral_match,
    matching_energy,
    matching_measure,
    matching_polynomial,
    mu_coefficients,
    power_sums,
)


def test_counts():
    header("EXACT COUNTS")

    cases = [
        ("C4", cycle(4), (1, 4, 2)),
        ("C6", cycle(6), (1, 6, 9, 2)),
        ("K3,3", complete_bipartite(3, 3), (1, 9, 18, 6)),
        ("triangle", cycle(3), (1, 3)),
        ("P4", path(4), (1, 3, 1)),
        ("digon", Graph(2, ((0, 1), (0, 1))), (1, 2)),
        ("empty", Graph(3), (1,)),
    ]
    for name, g, expected in cases:
        got = matching_polynomial(g).coefficients
        check(f"m({name}) = {expected}", got == expected, f"got {got}")

    q3 = matching_polynomial(cube())
    check("Q3 has 9 perfect matchings", q3.m(4) == 9, f"{q3.coefficients}")
    check("K3,3 log-concave", matching_polynomial(complete_bipartite(3, 3)).is_log_concave())

    poly = MatchingPolynomial.from_dict({"m": [1, 4, 2], "v": 4})
    check("from_dict / to_dict", poly.to_dict() == {"m": [1, 4, 2], "v": 4})
    check("p* of C4 = 1", poly.p_star == 1)


def test_size_guard():
    header("SIZE GUARD")

    try:
        matching_polynomial(cycle(40))
        check("C40 refused at the default limit", False)
    except MatchingTooLargeError as e:
        check("C40 refused at the default limit", e.limit == 30, str(e))

    check("Explicit limit lifts the guard", matching_polynomial(cycle(32), max_vertices=32).m(16) == 2)


def test_evaluation():
    header("EVALUATION")

    poly = matching_polynomial(cycle(4))
    check("M(C4, 1) = 7", evaluate_M(poly, 1) == 7)
    check("M(C4, 1/2) = 7/2", evaluate_M(poly, Fraction(1, 2)) == Fraction(7, 2))
    check("M'(C4, 1) = 8", evaluate_dM(poly, 1) == 8)
    check("Float t gives float", isinstance(evaluate_M(poly, 0.5), float))
    try:
        evaluate_M(poly, -1)
        check("Negative t rejected", False)
    except DomainError:
        check("Negative t rejected", True)
    check("mu(C4) = x^4 - 4x^2 + 2", mu_coefficients(poly) == [1, 0, -4, 0, 2])


def test_roots():
    header("MATCHING MEASURE")

    measure = matching_measure(matching_polynomial(cycle(4)))
    expected = sorted([
        -math.sqrt(2 + math.sqrt(2)), -math.sqrt(2 - math.sqrt(2)),
        math.sqrt(2 - math.sqrt(2)), math.sqrt(2 + math.sqrt(2)),
    ])
    got = measure.values()
    check("C4 roots", all(abs(a - b) < 1e-10 for a, b in zip(got, expected)), f"{got}")
    energy = matching_energy(measure)
    check("ME(C4) ~ 5.2263", abs(energy - 5.2263) < 1e-4, f"{energy:.6f}")

    s = matching_measure(matching_polynomial(star(3)))
    check("K1,3: double root at 0", dict(s.roots).get(0.0) == 2, f"{s.roots}")
    check("K1,3: +-sqrt(3)", abs(max(s.values()) - math.sqrt(3)) < 1e-10)

    k33 = matching_measure(matching_polynomial(complete_bipartite(3, 3)))
    check("Multiplicities sum to v", k33.total_multiplicity == 6)
    check("Roots are symmetric", all(abs(a + b) < 1e-12 for a, b in zip(k33.values(), reversed(k33.values()))))

    # repeated factor: two disjoint C4 give every root twice
    double = matching_measure(matching_polynomial(disjoint_union(cycle(4), cycle(4))))
    check("Repeated roots keep multiplicity 2", all(m == 2 for _, m in double.roots), f"{double.roots}")


def test_moments():
    header("POWER SUMS")

    poly = matching_polynomial(complete_bipartite(3, 3))
    sums = power_sums(poly, 4)
    check("p_1 = 0", sums[0] == 0)
    check("p_2 = 2 m_1", sums[1] == 2 * poly.m(1), f"{sums}")
    measure = matching_measure(poly)
    check("p_4 matches the roots", abs(sums[3] - measure.moment(4) * 6) < 1e-8)


def test_catalog_invariants():
    header("CATALOG INVARIANTS")

    catalog = regular_catalog() + biregular_catalog()
    polys = {name: matching_polynomial(g) for name, g in catalog}

    small = catalog[:8]
    bad = []
    for name_g, g in small:
        for name_h, h in small[:4]:
            union = matching_polynomial(disjoint_union(g, h)).coefficients
            if union != convolve(polys[name_g].coefficients, polys[name_h].coefficients):
                bad.append(f"{name_g}+{name_h}")
    check("m(G + H) is the convolution of m(G) and m(H)", not bad, ", ".join(bad))

    concave = [name for name, poly in polys.items() if not poly.is_log_concave()]
    check(f"Log-concave over {len(polys)} graphs", not concave, ", ".join(concave))

    tol = 1e-12
    outside, identity, sums_bad = [], [], []
    for name, g in catalog:
        poly = polys[name]
        measure = matching_measure(poly, tol)
        D = degree_profile(g).max_degree
        if D >= 2:
            box = 2 * math.sqrt(D - 1) + tol
            if any(abs(r) > box for r in measure.values()):
                outside.append(name)

        for t in (0.1, 1.0, 10.0):
            from_roots = math.fsum(m * 0.5 * math.log1p(t * r * r) for r, m in measure.roots)
            if abs(math.log(evaluate_M(poly, t)) - from_roots) > 1e-8:
                identity.append(f"{name} t={t}")

        exact = power_sums(poly, 10)
        for k, p_k in enumerate(exact, start=1):
            numeric = measure.moment(k) * g.vertex_count
            if abs(numeric - p_k) > 1e-6 * max(1, abs(p_k)):
                sums_bad.append(f"{name} k={k}")

    check("Roots inside [-2 sqrt(D-1), 2 sqrt(D-1)]", not outside, ", ".join(outside))
    check("ln M(G,t) = sum of (1/2) ln(1 + t r^2) at t = 0.1, 1, 10", not identity, ", ".join(identity[:5]))
    check("Newton power sums match the roots for k <= 10", not sums_bad, ", ".join(sums_bad[:5]))


def test_tree_spectral():
    header("TREES: MATCHING = CHARACTERISTIC POLYNOMIAL")

    for seed in range(50):
        v = 2 + seed % 11
        check(f"Random tree seed {seed} (v={v})", is_tree_spectral_match(random_tree(v, seed)))
    try:
        is_tree_spectral_match(cycle(4))
        check("Cycle rejected", False)
    except DomainError:
        check("Cycle rejected", True)


if __name__ == "__main__":
    main_for(__name__, "MATCHING POLYNOMIAL TESTS")
