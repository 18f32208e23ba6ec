#!/usr/bin/env python3
"""
2-lift tests: lift construction, the trivial-lift comparison, towers
and convergence toward the tree.
"""

import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from catalog import complete_bipartite, cycle, path, random_bipartite, star
from errors import DomainError
from graph_core import degree_profile, girth
from harness import check, header, main_for
from lifts import (
    Tower,
    apply_lift,
    boost_girth,
    convergence_probe,
    expected_lift_cycles,
    random_signing,
    replay_tower,
    verify_lift_lemma,
)
from matchpoly import matching_polynomial
from treeformulas import TreeParams


def raises(exc, fn, *args) -> bool:
    try:
        fn(*args)
    except exc:
        return True
    return False


def test_apply_lift():
    header("LIFT CONSTRUCTION")

    c4 = cycle(4)
    trivial = apply_lift(c4, (1, 1, 1, 1))
    check("All +1 gives C4 + C4", matching_polynomial(trivial).coefficients == (1, 8, 20, 16, 4))
    crossed = apply_lift(c4, (1, 1, 1, -1))
    check("One -1 gives C8", girth(crossed) == 8 and crossed.vertex_count == 8)
    check("C8 counts", matching_polynomial(crossed).coefficients == (1, 8, 20, 16, 2))

    def shape(g):
        p = degree_profile(g)
        return p.is_regular, p.degree, p.is_biregular, p.a, p.b

    rng = np.random.default_rng(11)
    for name, base in (("C6", cycle(6)), ("K3,3", complete_bipartite(3, 3)),
                       ("K2,3", complete_bipartite(2, 3)), ("K1,3", star(3))):
        for _ in range(5):
            lifted = apply_lift(base, random_signing(base, rng))
            same = (shape(lifted) == shape(base)
                    and lifted.degrees() == base.degrees() + base.degrees())
            if not same:
                break
        check(f"Lifts of {name} keep the degrees", same, f"{shape(lifted)} vs {shape(base)}")

    check("Wrong length rejected", raises(DomainError, apply_lift, c4, (1, 1)))
    check("Entries must be +-1", raises(DomainError, apply_lift, c4, (1, 1, 0, 1)))


def test_lift_lemma():
    header("LIFT LEMMA")

    cert = verify_lift_lemma(cycle(4), (1, 1, 1, -1))
    check("C4 / C8 margins (0,0,0,0,2)", cert.margins == [0, 0, 0, 0, 2], f"{cert.margins}")

    k33 = complete_bipartite(3, 3)
    signing = random_signing(k33, np.random.default_rng(7))
    cert = verify_lift_lemma(k33, signing)
    check("K3,3 seed 7: all margins >= 0", cert.passed and min(cert.margins) >= 0, f"{cert.margins}")

    checked = 0
    for i in range(10):
        base = random_bipartite(4 + i % 7, seed=100 + i)
        rng = np.random.default_rng(i)
        for _ in range(20):
            verify_lift_lemma(base, random_signing(base, rng))
            checked += 1
    check(f"{checked} random signings over 10 bases", checked == 200)

    check("Non-bipartite base rejected", raises(DomainError, verify_lift_lemma, cycle(3), (1, 1, 1)))

    check("Mean 4-cycles over lifts of C4 = 1", expected_lift_cycles(cycle(4), 4) == 1)
    check("Mean 8-cycles over lifts of C4 = 1/2", expected_lift_cycles(cycle(4), 8) == Fraction(1, 2))


def test_towers():
    header("TOWERS")

    tower = boost_girth(cycle(4), rng_seed=3, target_girth=8)
    check("C4 reaches girth 8", tower.status == "complete" and girth(tower.top) >= 8,
          f"status {tower.status}, girth {girth(tower.top)}")
    check("Within 2 levels", tower.height <= 2)

    data = json.loads(json.dumps(tower.to_dict()))
    check("Tower JSON replays", replay_tower(data))
    check("from_dict keeps the top", Tower.from_dict(data).top.edges == tower.top.edges)

    data["levels"][1]["signing"] = [-s for s in data["levels"][1]["signing"]]
    check("Tampered signing fails replay", not replay_tower(data))

    k33 = complete_bipartite(3, 3)
    tower = boost_girth(k33, rng_seed=7, target_girth=6)
    check("K3,3 reaches girth 6", girth(tower.top) >= 6, f"status {tower.status}")
    for i, level in enumerate(tower.levels[1:]):
        base = tower.levels[i].graph
        if base.vertex_count <= 12:
            check(f"Level {i + 1} passes the lift lemma", verify_lift_lemma(base, level.signing).passed)

    capped = boost_girth(cycle(4), rng_seed=0, target_girth=math.inf, max_vertices=16)
    check("Vertex cap stops the tower", capped.status == "capped" and capped.top.vertex_count <= 16)
    already = boost_girth(k33, 0, 2)
    check("Base already at the target gives height 0", already.status == "complete" and already.height == 0)
    forest = boost_girth(path(5), 0, 8)
    check("Forest base gives height 0", forest.status == "complete" and forest.height == 0,
          f"status {forest.status}, height {forest.height}")
    check("Target girth below 2 rejected", raises(DomainError, boost_girth, k33, 0, 1))


def test_convergence():
    header("CONVERGENCE TO T_2")

    tower = boost_girth(cycle(4), rng_seed=1, target_girth=16)
    check("C4 tower reaches girth 16", girth(tower.top) >= 16)
    report = convergence_probe(tower, TreeParams.regular(2), [Fraction(1)], [Fraction(1, 2)])
    top_gap = report.density_gaps[-1][0]
    check("|p(G_top, 1) - p(T_2, 1)| <= 0.02", top_gap <= 0.02, f"{top_gap:.5f}")
    check("Gaps shrink along the tower", report.monotone)
    check("lambda_G >= G_2 at every level", report.one_sided, f"{report.lambda_gaps}")

    report = convergence_probe(tower, TreeParams.regular(2),
                               [Fraction(1, 2), Fraction(1), Fraction(4)],
                               [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)])
    check("lambda is non-increasing up the tower", report.lambda_chain, f"{report.lambda_gaps}")
    check("ln M / v is non-increasing up the tower", report.free_energy_chain, f"{report.free_energies}")
    check("Chains reported", report.to_dict()["lambda_chain"] and report.to_dict()["free_energy_chain"])

    try:
        convergence_probe(tower, TreeParams.regular(3), [1], [Fraction(1, 2)])
        check("Degree mismatch rejected", False)
    except DomainError:
        check("Degree mismatch rejected", True)


if __name__ == "__main__":
    main_for(__name__, "LIFT TESTS")
