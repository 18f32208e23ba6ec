#!/usr/bin/env python3
"""
End-to-End Test for MatchEnt

Writes the bundled catalogs to edge-list files and drives the CLI over
them:
1. Edge-list files load back to the same matching polynomials
2. Regular catalog passes every claim of the 'all' suite
3. Biregular catalog passes the biregular and dominance suites
4. A tower written to JSON replays from its recorded signings
5. Configuration-model expectations through the CLI
"""

import io
import json
import shutil
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from catalog import biregular_catalog, regular_catalog
from cli import EXIT_OK, run
from graph_core import dump_graph
from harness import check, header
from lifts import replay_tower
from matchpoly import matching_polynomial

# Test data directory
TEST_DATA_DIR = Path(__file__).parent.parent / "data_test"


def cleanup():
    """Clean up test data."""
    if TEST_DATA_DIR.exists():
        shutil.rmtree(TEST_DATA_DIR)


def setup_module(module):
    cleanup()


def teardown_module(module):
    cleanup()


def write_catalog(entries) -> list:
    TEST_DATA_DIR.mkdir(exist_ok=True)
    paths = []
    for name, g in entries:
        path = TEST_DATA_DIR / f"{name.replace(',', '_')}.el"
        path.write_text(f"# {name}\n" + dump_graph(g))
        paths.append(str(path))
    return paths


def cli(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], out)
    return code, json.loads(out.getvalue()) if out.getvalue().strip() else None


def test_files_round_trip():
    header("CATALOG FILES")

    entries = regular_catalog()
    paths = write_catalog(entries)
    check(f"Wrote {len(paths)} regular graphs", len(paths) == len(entries))

    mismatched = []
    for (name, g), path in zip(entries, paths):
        code, payload = cli("poly", path)
        if code != EXIT_OK or payload["m"] != list(matching_polynomial(g).coefficients):
            mismatched.append(name)
    check("CLI counts equal library counts", not mismatched, ", ".join(mismatched))


def test_regular_suite():
    header("REGULAR CATALOG: SUITE all")

    paths = write_catalog(regular_catalog())
    code, payload = cli("report", "all", *paths, "--seed", 4)
    summary = payload["summary"]
    print(f"  {summary['certificates']} certificates over {summary['graphs']} graphs")
    check("No failures", code == EXIT_OK and summary["failed"] == 0, f"{summary}")
    check("No per-graph errors", summary["errors"] == 0, "; ".join(payload["warnings"]))

    claims = {c["claim"] for g in payload["graphs"] for c in g["certificates"]}
    expected = {"schrijver", "lmc", "direct", "biregular", "matching_energy", "energy_identity",
                "integral", "entropy_dominance", "hoeffding", "lift_lemma"}
    check("Every claim exercised", expected <= claims, f"missing {sorted(expected - claims)}")


def test_biregular_suites():
    header("BIREGULAR CATALOG")

    paths = write_catalog(biregular_catalog())
    for suite in ("biregular", "dominance"):
        code, payload = cli("report", suite, *paths)
        check(f"Suite {suite}", code == EXIT_OK and payload["summary"]["failed"] == 0,
              f"{payload['summary']}")


def test_tower_file():
    header("TOWER JSON")

    TEST_DATA_DIR.mkdir(exist_ok=True)
    base = TEST_DATA_DIR / "c6.el"
    base.write_text("v 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n")
    tower_path = TEST_DATA_DIR / "tower.json"
    code, payload = cli("lift", base, "--target-girth", 12, "--seed", 9, "--out", tower_path)
    check("Tower complete", code == EXIT_OK and payload["status"] == "complete")

    saved = json.loads(tower_path.read_text())
    check("File equals stdout", saved == payload)
    check("Replays from signings", replay_tower(saved))


def test_random_models():
    header("CONFIGURATION MODEL")

    code, payload = cli("random", "--a", 3, "--b", 2, "--n", 2, "--cycles", 2)
    check("Asymptotic 4-cycle count ((a-1)(b-1))^2/4", payload["asymptotic"] == 1.0)

    code, payload = cli("random", "--d", 2, "--n", 2, "--k", 2, "--samples", 400, "--seed", 3)
    gap = abs(payload["mean"] - payload["exact_float"])
    check("Monte-Carlo mean within 4 standard errors", gap <= 4 * payload["standard_error"],
          f"{payload['mean']:.4f} vs {payload['exact_float']:.4f}")


def main():
    """Run all tests."""
    print("""
    ╔═══════════════════════════════════════════════════╗
    ║                                                   ║
    ║           MATCHENT - END-TO-END TESTS             ║
    ║                                                   ║
    ║    Matching entropy on regular bipartite graphs   ║
    ║                                                   ║
    ╚═══════════════════════════════════════════════════╝
    """)

    # Clean start
    cleanup()

    tests = [
        ("Catalog Files", test_files_round_trip),
        ("Regular Suite", test_regular_suite),
        ("Biregular Suites", test_biregular_suites),
        ("Tower JSON", test_tower_file),
        ("Random Models", test_random_models),
    ]

    passed = 0
    failed = 0

    for name, test_fn in tests:
        try:
            test_fn()
            passed += 1
        except Exception as e:
            print(f"\n  ✗ EXCEPTION in {name}: {e}")
            import traceback
            traceback.print_exc()
            failed += 1

    # Cleanup
    cleanup()

    # Summary
    header("TEST SUMMARY")
    print(f"\n  Total:  {passed + failed}")
    print(f"  Passed: {passed}")
    print(f"  Failed: {failed}")

    if failed == 0:
        print("\n  All tests passed.")
    else:
        print(f"\n  {failed} test(s) need attention.")

    print()
    return failed == 0


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
