"""
MatchEnt CLI

Subcommands: poly, roots, entropy, tree, lift, verify, random, report.
Data goes to stdout as JSON (or CSV with --csv), status lines to stderr.
Exit codes: 0 success, 1 a verification failed, 2 usage or input error.
"""

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, TextIO

import numpy as np

from config import get_config, load_config, set_config
from console import log, summary_table, warn
from entropy import (
    as_fraction,
    density,
    entropy_curve,
    free_energy,
    parse_grid,
    rational_grid,
)
from errors import ConfigError, GraphParseError, LiftLemmaViolation, MatchEntError, VertexRangeError
from graph_core import Graph, degree_profile, load_graph_file
from lifts import apply_lift, boost_girth, random_signing, verify_lift_lemma
from matchpoly import matching_energy, matching_measure, matching_polynomial
from randmodels import (
    ConfigModelParams,
    empirical_moments,
    exact_expectation,
    expected_cycles_biregular,
    sample,
    tightness_upper,
)
from theorems import (
    Certificate,
    biregular_bipartite,
    certify,
    darroch_locate,
    render,
    verify_biregular,
    verify_direct,
    verify_energy_identity,
    verify_entropy_dominance,
    verify_gurvits_effective,
    verify_hoeffding_coefficient,
    verify_integral_inequality,
    verify_lmc,
    verify_matching_energy,
    verify_schrijver,
)
from treeformulas import (
    activity_biregular_tree,
    activity_regular_tree,
    density_biregular_tree,
    density_regular_tree,
    entropy_biregular,
    entropy_regular,
    eta,
    s_function,
    tree_matching_energy,
    walk_series,
)


# ==================== CONSTANTS ====================

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

DIRECT_GRID = "0:1:1/10"
DOMINANCE_GRID = "1/20:19/20:1/10"
INTEGRAL_GRID = ["1/2", "1", "2"]
LIFT_SIGNINGS = 5           # Seeded signings per graph in the lifts suite


# ==================== OUTPUT ====================

def emit(payload, out: TextIO, rows: Optional[List[dict]] = None, as_csv: bool = False):
    """JSON by default; CSV of `rows` when requested and available."""
    if as_csv and rows is not None:
        if rows:
            writer = csv.DictWriter(out, fieldnames=list(rows[0].keys()), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        return
    out.write(json.dumps(payload, indent=2) + "\n")


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    return repr(x)


# ==================== REPORT SUITES ====================

def _lift_certificates(g: Graph, seed: int) -> List[Certificate]:
    if not g.is_bipartite:
        raise MatchEntError("lifts suite needs a bipartite graph")
    rng = np.random.default_rng(seed)
    certs = []
    for i in range(LIFT_SIGNINGS):
        signing = random_signing(g, rng)
        inputs = {"signing": "".join("+" if s > 0 else "-" for s in signing), "index": i}
        try:
            result = verify_lift_lemma(g, signing)
        except LiftLemmaViolation as e:
            certs.append(certify("lift_lemma", inputs, e.margin, 0, exact=True, violated_k=e.k))
            continue
        certs.append(certify("lift_lemma", inputs, min(result.margins), 0, exact=True,
                             margins=str(result.margins)))
    return certs


def _suite_schrijver(g, poly, seed):
    return [verify_schrijver(g, poly)]


def _suite_lmc(g, poly, seed):
    n = g.vertex_count // 2
    return [verify_lmc(g, k, poly) for k in range(n + 1)]


def _suite_direct(g, poly, seed):
    return verify_direct(g, parse_grid(DIRECT_GRID), poly)


def _suite_biregular(g, poly, seed):
    _, _, size_a, _ = biregular_bipartite(g)
    return [verify_biregular(g, k, poly) for k in range(size_a + 1)]


def _suite_energy(g, poly, seed):
    return [verify_matching_energy(g, poly), verify_energy_identity(g, poly)]


def _suite_integral(g, poly, seed):
    return verify_integral_inequality(g, INTEGRAL_GRID, poly)


def _suite_dominance(g, poly, seed):
    return verify_entropy_dominance(g, None, parse_grid(DOMINANCE_GRID), poly)


def _suite_hoeffding(g, poly, seed):
    measure = matching_measure(poly)
    return [verify_hoeffding_coefficient(g, k, poly, measure) for k in range(poly.nu)]


def _suite_lifts(g, poly, seed):
    return _lift_certificates(g, seed)


SUITES: Dict[str, Callable] = {
    "schrijver": _suite_schrijver,
    "lmc": _suite_lmc,
    "direct": _suite_direct,
    "biregular": _suite_biregular,
    "energy": _suite_energy,
    "integral": _suite_integral,
    "dominance": _suite_dominance,
    "hoeffding": _suite_hoeffding,
    "lifts": _suite_lifts,
}
REGULAR_ONLY = {"schrijver", "lmc", "direct", "energy", "integral"}
ANY_GRAPH = {"hoeffding"}


def _applies(name: str, g: Graph, profile) -> bool:
    if name in ANY_GRAPH:
        return True
    if not g.is_bipartite or not profile.is_biregular:
        return False
    if name in REGULAR_ONLY:
        return profile.is_regular
    if name == "lifts":
        return 2 * g.vertex_count <= get_config()["max_vertices"]
    return True


def graph_certificates(g: Graph, suite: str, seed: int = 0) -> List[Certificate]:
    """All certificates of a suite for one graph. 'all' skips suites the graph does not fit."""
    poly = matching_polynomial(g)
    if suite != "all":
        return SUITES[suite](g, poly, seed)
    profile = degree_profile(g)
    certs = []
    for name, fn in SUITES.items():
        if not _applies(name, g, profile):
            continue
        certs += fn(g, poly, seed)
    return certs


def _report_one(path: str, suite: str, seed: int, config: dict) -> dict:
    set_config(config)
    try:
        g = load_graph_file(path)
        certs = graph_certificates(g, suite, seed)
        return {"path": path, "certificates": [c.to_dict() for c in certs]}
    except (MatchEntError, OSError) as e:
        return {"path": path, "error": f"{type(e).__name__}: {e}"}


def report(paths: Sequence[str], suite: str, seed: int = 0) -> dict:
    """One certificate per (graph, parameter); per-graph errors become warnings."""
    config = get_config()
    paths = list(paths)
    workers = int(config.get("workers", 1))
    if workers > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(_report_one, paths, [suite] * len(paths),
                                    [seed] * len(paths), [config] * len(paths)))
    else:
        entries = [_report_one(p, suite, seed, config) for p in paths]

    warnings = []
    passed = failed = 0
    for entry in entries:
        if "error" in entry:
            warnings.append(f"{entry['path']}: {entry['error']}")
            continue
        for cert in entry["certificates"]:
            if cert["verdict"] == "pass":
                passed += 1
            else:
                failed += 1

    return {
        "suite": suite,
        "graphs": [e for e in entries if "error" not in e],
        "warnings": warnings,
        "summary": {
            "graphs": len(paths),
            "certificates": passed + failed,
            "passed": passed,
            "failed": failed,
            "errors": len(warnings),
        },
    }


# ==================== COMMANDS ====================

def cmd_poly(args, out) -> int:
    poly = matching_polynomial(load_graph_file(args.graph))
    rows = [{"k": k, "m_k": m} for k, m in enumerate(poly.coefficients)]
    emit(poly.to_dict(), out, rows, args.csv)
    return EXIT_OK


def cmd_roots(args, out) -> int:
    g = load_graph_file(args.graph)
    measure = matching_measure(matching_polynomial(g), args.tol)
    payload = measure.to_dict()
    payload["energy"] = matching_energy(measure)
    rows = [{"root": r, "multiplicity": m} for r, m in measure.roots]
    emit(payload, out, rows, args.csv)
    return EXIT_OK


def cmd_entropy(args, out) -> int:
    poly = matching_polynomial(load_graph_file(args.graph))
    if args.t is not None:
        t = as_fraction(args.t)
        payload = {"t": float(t), "p": density(poly, t), "F": free_energy(poly, t)}
        emit(payload, out, [payload], args.csv)
        return EXIT_OK
    if args.p is not None:
        grid = [as_fraction(args.p)]
    elif args.grid:
        grid = parse_grid(args.grid)
    elif poly.p_star == 0:
        grid = [Fraction(0)]
    else:
        grid = rational_grid(0, poly.p_star, poly.p_star / 10)
    curve = entropy_curve(poly, grid)
    emit(curve.to_dict(), out, [pt.to_dict() for pt in curve.points], args.csv)
    return EXIT_OK


def _tree_point(args, p=None, t=None) -> dict:
    if args.d is not None:
        d = args.d
        if p is not None:
            t_val = activity_regular_tree(d, p) if p < 1 else math.inf
            row = {"p": p, "t": t_val, "lambda": entropy_regular(d, p)}
            if math.isfinite(t_val):
                row["S"] = s_function(d, t_val)
                row["eta"] = eta(d, t_val)
            else:
                row["t"] = "inf"
            return row
        return {"t": t, "p": density_regular_tree(d, t), "S": s_function(d, t), "eta": eta(d, t)}

    a, b = max(args.a, args.b), min(args.a, args.b)
    if p is not None:
        top = 2 * b / (a + b)
        t_val = activity_biregular_tree(a, b, p) if p < top else "inf"
        return {"p": p, "t": t_val, "lambda": entropy_biregular(a, b, p)}
    return {"t": t, "p": density_biregular_tree(a, b, t)}


def cmd_tree(args, out) -> int:
    if args.d is None and (args.a is None or args.b is None):
        raise UsageError("tree needs --d or both --a and --b")

    if args.walks is not None:
        a, b = (args.d, args.d) if args.d is not None else (args.a, args.b)
        series = {root: list(walk_series(a, b, root, args.walks).coefficients) for root in ("a", "b")}
        rows = [{"j": j, "W_a": wa, "W_b": wb} for j, (wa, wb) in enumerate(zip(series["a"], series["b"]))]
        emit({"a": a, "b": b, "walks": series}, out, rows, args.csv)
        return EXIT_OK

    if args.grid:
        rows = [_tree_point(args, p=float(p)) for p in parse_grid(args.grid)]
        payload = {"points": rows}
    elif args.t is not None:
        rows = [_tree_point(args, t=float(as_fraction(args.t)))]
        payload = rows[0]
    elif args.p is not None:
        rows = [_tree_point(args, p=float(as_fraction(args.p)))]
        payload = rows[0]
    else:
        d = args.d
        payload = {"d": d, "energy": tree_matching_energy(d)} if d else {"a": args.a, "b": args.b}
        rows = [payload]
    emit(payload, out, rows, args.csv)
    return EXIT_OK


def cmd_lift(args, out) -> int:
    g = load_graph_file(args.graph)
    if args.signing:
        signing = tuple(int(s) for s in args.signing.split(","))
        lifted = apply_lift(g, signing)
        payload = {"v": lifted.vertex_count, "edges": [list(e) for e in lifted.edges]}
        code = EXIT_OK
        if g.is_bipartite:
            try:
                payload["margins"] = verify_lift_lemma(g, signing).margins
            except LiftLemmaViolation as e:
                payload["violation"] = {"k": e.k, "margin": e.margin}
                code = EXIT_FAILED
        emit(payload, out)
        return code

    target = args.target_girth if args.target_girth is not None else math.inf
    tower = boost_girth(g, args.seed, target, args.max_attempts)
    log("lift", f"tower height {tower.height}, status {tower.status}")
    payload = tower.to_dict()
    if args.out:
        with open(args.out, "w") as f:
            json.dump(payload, f, indent=2)
    rows = [{"level": i, "v": lv.graph.vertex_count, "girth": lv.girth, "attempts": lv.attempts}
            for i, lv in enumerate(tower.levels)]
    emit(payload, out, rows, args.csv)
    return EXIT_OK


def _verify_certs(args, g: Graph) -> List[Certificate]:
    poly = matching_polynomial(g)
    claim = args.claim
    if claim == "schrijver":
        return [verify_schrijver(g, poly)]
    if claim == "lmc":
        ks = [args.k] if args.k is not None else range(g.vertex_count // 2 + 1)
        return [verify_lmc(g, k, poly) for k in ks]
    if claim == "direct":
        return verify_direct(g, parse_grid(args.grid or DIRECT_GRID), poly)
    if claim == "biregular":
        _, _, size_a, _ = biregular_bipartite(g)
        ks = [args.k] if args.k is not None else range(size_a + 1)
        return [verify_biregular(g, k, poly) for k in ks]
    if claim == "dominance":
        return verify_entropy_dominance(g, None, parse_grid(args.grid or DOMINANCE_GRID), poly)
    if claim == "integral":
        grid = parse_grid(args.grid) if args.grid else INTEGRAL_GRID
        return verify_integral_inequality(g, grid, poly)
    if claim == "energy":
        return [verify_matching_energy(g, poly)]
    if claim == "identity":
        return [verify_energy_identity(g, poly)]
    if claim == "gurvits":
        ks = [args.k] if args.k is not None else range(g.vertex_count // 2 + 1)
        return [verify_gurvits_effective(g, k, poly) for k in ks]
    if claim == "hoeffding":
        ks = [args.k] if args.k is not None else range(poly.nu)
        measure = matching_measure(poly, args.tol)
        return [verify_hoeffding_coefficient(g, k, poly, measure) for k in ks]
    if claim == "lifts":
        return _lift_certificates(g, args.seed)
    raise UsageError(f"unknown claim {claim!r}")


def cmd_verify(args, out) -> int:
    g = load_graph_file(args.graph)
    if args.claim == "darroch":
        t = as_fraction(args.t) if args.t is not None else Fraction(1)
        result = darroch_locate(matching_polynomial(g), t)
        emit(result.to_dict(), out)
        return EXIT_OK if result.consistent else EXIT_FAILED

    certs = _verify_certs(args, g)
    payload = [c.to_dict() for c in certs]
    rows = [{"claim": c.claim, "lhs": _fmt(c.lhs), "rhs": _fmt(c.rhs),
             "margin": _fmt(c.margin), "verdict": c.verdict} for c in certs]
    emit(payload if len(payload) != 1 else payload[0], out, rows, args.csv)
    if args.pretty:
        summary_table(f"verify {args.claim}", [[r["claim"], r["margin"], r["verdict"]] for r in rows],
                      ["claim", "margin", "verdict"])
    return EXIT_OK if all(c.passed for c in certs) else EXIT_FAILED


def _model_params(args) -> ConfigModelParams:
    if args.n is None:
        raise UsageError("random needs --n")
    if args.d is not None:
        return ConfigModelParams.regular(args.d, args.n, args.seed)
    if args.a is not None and args.b is not None:
        return ConfigModelParams.biregular(args.a, args.b, args.n, args.seed)
    raise UsageError("random needs --d or both --a and --b")


def cmd_random(args, out) -> int:
    params = _model_params(args)

    if args.tightness:
        if params.kind != "regular":
            raise UsageError("--tightness applies to the regular model")
        ks = [args.k] if args.k is not None else range(params.n)
        results = [tightness_upper(params.a, params.n, k) for k in ks]
        emit([r.to_dict() for r in results], out, [r.to_dict() for r in results], args.csv)
        return EXIT_OK if all(r.holds for r in results) else EXIT_FAILED

    if args.cycles is not None:
        asymptotic, exact = expected_cycles_biregular(params.a, params.b, args.cycles, params.n)
        emit({"j": args.cycles, "asymptotic": asymptotic, "exact": render(exact)}, out)
        return EXIT_OK

    if args.samples is not None:
        if args.k is None:
            raise UsageError("--samples needs --k")
        moments = empirical_moments(params, args.k, args.samples)
        emit(moments.to_dict(), out, [moments.to_dict()], args.csv)
        return EXIT_OK

    g = sample(params)
    top = min(params.left_size, params.right_size)
    expected = [exact_expectation(params, k) for k in range(top + 1)]
    payload = {
        "params": params.to_dict(),
        "graph": {"v": g.vertex_count, "edges": [list(e) for e in g.edges]},
        "expected_m": [render(e) for e in expected],
    }
    rows = [{"k": k, "expected_m_k": _fmt(e)} for k, e in enumerate(expected)]
    emit(payload, out, rows, args.csv)
    return EXIT_OK


def cmd_report(args, out) -> int:
    result = report(args.graphs, args.suite, args.seed)
    for message in result["warnings"]:
        warn("report", message)
    summary = result["summary"]
    if args.pretty:
        summary_table(f"report {args.suite}", [[k, v] for k, v in summary.items()], ["field", "value"])
    rows = [
        {"path": g["path"], "claim": c["claim"], "verdict": c["verdict"]}
        for g in result["graphs"] for c in g["certificates"]
    ]
    emit(result, out, rows, args.csv)
    return EXIT_OK if summary["failed"] == 0 else EXIT_FAILED


# ==================== PARSER ====================

class UsageError(Exception):
    """Flag combination that argparse cannot express."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--csv", action="store_true", help="CSV instead of JSON")
    common.add_argument("--pretty", action="store_true", help="rich summary table on stderr")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None, help="root refinement width")
    common.add_argument("--config", default=None, help="path to config.json")
    common.add_argument("--debug", action="store_true")

    parser = _Parser(prog="matchent", description="Matching polynomials, entropy and verification")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("poly", parents=[common], help="matching counts m_k")
    p.add_argument("graph")

    p = sub.add_parser("roots", parents=[common], help="matching measure and energy")
    p.add_argument("graph")

    p = sub.add_parser("entropy", parents=[common], help="density and entropy function")
    p.add_argument("graph")
    p.add_argument("--p")
    p.add_argument("--t")
    p.add_argument("--grid", help="lo:hi:step")

    p = sub.add_parser("tree", parents=[common], help="infinite tree closed forms")
    p.add_argument("--d", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--p")
    p.add_argument("--t")
    p.add_argument("--grid")
    p.add_argument("--walks", type=int, help="closed-walk series up to length 2J")

    p = sub.add_parser("lift", parents=[common], help="2-lift towers")
    p.add_argument("graph")
    p.add_argument("--target-girth", type=int, dest="target_girth")
    p.add_argument("--max-attempts", type=int, dest="max_attempts")
    p.add_argument("--signing", help="comma-separated +1/-1 list for a single lift")
    p.add_argument("--out", help="write the tower JSON here as well")

    p = sub.add_parser("verify", parents=[common], help="verify one claim on a graph")
    p.add_argument("claim", choices=["schrijver", "lmc", "direct", "biregular", "dominance",
                                     "integral", "energy", "identity", "gurvits", "hoeffding", "darroch", "lifts"])
    p.add_argument("graph")
    p.add_argument("--k", type=int)
    p.add_argument("--t")
    p.add_argument("--grid")

    p = sub.add_parser("random", parents=[common], help="configuration model")
    p.add_argument("--d", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--cycles", type=int, help="expected 2j-cycle count for j")
    p.add_argument("--tightness", action="store_true")

    p = sub.add_parser("report", parents=[common], help="batch verification")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("graphs", nargs="*")

    return parser


COMMANDS = {
    "poly": cmd_poly,
    "roots": cmd_roots,
    "entropy": cmd_entropy,
    "tree": cmd_tree,
    "lift": cmd_lift,
    "verify": cmd_verify,
    "random": cmd_random,
    "report": cmd_report,
}


def run(argv: Sequence[str], out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as e:
        print(f"matchent: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        config = load_config(args.config)
        if args.debug:
            config["debug"] = True
        if args.tol is not None:
            config["tol"] = args.tol
        set_config(config)
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        print(f"matchent: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphParseError, VertexRangeError, ConfigError, OSError) as e:
        print(f"matchent: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (MatchEntError, ValueError) as e:
        print(f"matchent: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
