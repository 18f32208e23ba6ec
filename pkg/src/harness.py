"""
Shared helpers for the test modules.

check() prints a PASS/FAIL line in the same format as the e2e banner
output and asserts, so the same test functions run under pytest or
through each module's main().
"""

import sys
import traceback


def header(title: str):
    print(f"\n{'='*60}")
    print(f"  {title}")
    print('='*60)


def check(name: str, passed: bool, detail: str = ""):
    status = "✓ PASS" if passed else "✗ FAIL"
    print(f"  {status}: {name}")
    if detail:
        print(f"         {detail}")
    assert passed, f"{name} {detail}".strip()


def run_tests(title: str, tests: list) -> int:
    """Run (name, fn) pairs, print a summary and return an exit code."""
    print("\n" + "=" * 60)
    print(f"  {title}")
    print("=" * 60)

    failures = []
    for name, fn in tests:
        try:
            fn()
        except Exception as e:
            failures.append(name)
            print(f"\n  ✗ {name} failed: {e}")
            traceback.print_exc()

    header("SUMMARY")
    passed = len(tests) - len(failures)
    print(f"  {passed}/{len(tests)} test groups passed")
    for name in failures:
        print(f"  ✗ {name}")
    return 0 if not failures else 1


def collect(module) -> list:
    """All test_* functions of a module, in definition order."""
    names = [n for n in vars(module) if n.startswith("test_")]
    return [(n, getattr(module, n)) for n in names if callable(getattr(module, n))]


def main_for(module_name: str, title: str):
    module = sys.modules[module_name]
    sys.exit(run_tests(title, collect(module)))
