"""
MatchEnt 2-Lifts

Signed 2-lifts, the matching-count comparison between a graph's lifts
and its trivial lift, girth-boosting towers and convergence reports
toward the infinite regular or biregular tree.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import get_config
from console import debug, log
from entropy import density, entropy_at, free_energy
from errors import DomainError, LiftLemmaViolation
from graph_core import Graph, count_cycles, degree_profile, disjoint_union, girth
from matchpoly import matching_polynomial
from treeformulas import TreeParams


# ==================== CONSTANTS ====================

MONOTONE_SLACK = 1e-3        # Allowed increase of a convergence gap between levels
LAMBDA_SLACK = 1e-9          # lambda_G(p) >= G(p) one-sided slack

Signing = Tuple[int, ...]


# ==================== LIFTS ====================

def apply_lift(g: Graph, signing: Sequence[int]) -> Graph:
    """
    The 2-lift of g for a +-1 signing of its edges. Vertex (u, i) is
    u + i*n. +1 edges lift parallel, -1 edges lift crossed.
    """
    if len(signing) != g.edge_count:
        raise DomainError(f"signing has {len(signing)} entries for {g.edge_count} edges")
    n = g.vertex_count
    edges = []
    for (u, w), s in zip(g.edges, signing):
        if s == 1:
            edges += [(u, w), (u + n, w + n)]
        elif s == -1:
            edges += [(u, w + n), (u + n, w)]
        else:
            raise DomainError(f"signing entries must be +1 or -1, got {s}")
    return Graph(2 * n, tuple(edges))


def random_signing(g: Graph, rng: np.random.Generator) -> Signing:
    return tuple(int(s) for s in rng.choice([1, -1], size=g.edge_count))


def all_signings(g: Graph):
    return itertools.product((1, -1), repeat=g.edge_count)


@dataclass
class LiftCertificate:
    margins: List[int]
    passed: bool

    def to_dict(self) -> dict:
        return {"margins": self.margins, "passed": self.passed}


def verify_lift_lemma(g: Graph, signing: Sequence[int]) -> LiftCertificate:
    """m_k(G+G) - m_k(H) for every k; any negative entry raises."""
    if not g.is_bipartite:
        raise DomainError("the lift comparison needs a bipartite base graph")
    trivial = matching_polynomial(disjoint_union(g, g))
    lifted = matching_polynomial(apply_lift(g, signing))
    size = max(len(trivial.coefficients), len(lifted.coefficients))
    margins = [trivial.m(k) - lifted.m(k) for k in range(size)]
    for k, margin in enumerate(margins):
        if margin < 0:
            raise LiftLemmaViolation(k, margin)
    return LiftCertificate(margins, True)


def expected_lift_cycles(g: Graph, length: int) -> Fraction:
    """Mean number of length-cycles over all 2^|E| lifts of g."""
    total = 0
    count = 0
    for signing in all_signings(g):
        total += count_cycles(apply_lift(g, signing), length)
        count += 1
    return Fraction(total, count)


# ==================== TOWERS ====================

@dataclass
class TowerLevel:
    """One graph in a tower and the signing that produced it from the previous level."""
    graph: Graph
    girth: float
    signing: Optional[Signing] = None
    attempts: int = 0

    def to_dict(self) -> dict:
        return {
            "v": self.graph.vertex_count,
            "edges": [list(e) for e in self.graph.edges],
            "girth": self.girth if math.isfinite(self.girth) else "inf",
            "signing": list(self.signing) if self.signing is not None else None,
            "attempts": self.attempts,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TowerLevel":
        g = Graph(int(data["v"]), tuple(tuple(e) for e in data["edges"]))
        girth_value = math.inf if data["girth"] == "inf" else data["girth"]
        signing = tuple(data["signing"]) if data.get("signing") is not None else None
        return cls(g, girth_value, signing, int(data.get("attempts", 0)))


@dataclass
class Tower:
    """G_0, G_1, ... with G_i a 2-lift of G_{i-1}."""
    levels: List[TowerLevel] = field(default_factory=list)
    seed: int = 0
    target_girth: float = 0
    status: str = "complete"       # complete | stalled | capped

    @property
    def base(self) -> Graph:
        return self.levels[0].graph

    @property
    def top(self) -> Graph:
        return self.levels[-1].graph

    @property
    def height(self) -> int:
        return len(self.levels) - 1

    def graphs(self) -> List[Graph]:
        return [level.graph for level in self.levels]

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "target_girth": self.target_girth if math.isfinite(self.target_girth) else "inf",
            "status": self.status,
            "levels": [level.to_dict() for level in self.levels],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Tower":
        target = math.inf if data.get("target_girth") == "inf" else data.get("target_girth", 0)
        return cls(
            [TowerLevel.from_dict(d) for d in data["levels"]],
            data.get("seed", 0), target, data.get("status", "complete"),
        )


def replay_tower(data: dict) -> bool:
    """Rebuild every level from the base and recorded signings; True if all match."""
    tower = Tower.from_dict(data)
    current = tower.base
    for level in tower.levels[1:]:
        current = apply_lift(current, level.signing)
        if sorted(current.edges) != sorted(level.graph.edges):
            return False
    return True


def _improves(base_girth: float, base_count: int, lifted: Graph) -> bool:
    g = girth(lifted)
    if g > base_girth:
        return True
    return g == base_girth and count_cycles(lifted, int(base_girth)) < base_count


def boost_girth(
    g: Graph,
    rng_seed: int,
    target_girth: float,
    max_attempts: Optional[int] = None,
    max_vertices: Optional[int] = None,
) -> Tower:
    """
    Build a tower by accepting, at each level, the first random signing
    whose lift has larger girth or fewer shortest cycles than its base.
    Small bases fall back to trying every signing. Stops at the target
    girth (complete), when no signing helps (stalled) or at the vertex
    cap (capped). A base already at the target, a forest for instance,
    gives a tower of height 0.
    """
    config = get_config()
    max_attempts = max_attempts if max_attempts is not None else config["max_attempts"]
    max_vertices = max_vertices if max_vertices is not None else config["max_tower_vertices"]
    exhaustive_limit = config["exhaustive_signing_vertices"]
    if target_girth < 2:
        raise DomainError(f"target girth must be at least 2, got {target_girth}")

    rng = np.random.default_rng(rng_seed)
    tower = Tower([TowerLevel(g, girth(g))], rng_seed, target_girth)

    while True:
        current = tower.levels[-1]
        if current.girth >= target_girth:
            tower.status = "complete"
            break
        if 2 * current.graph.vertex_count > max_vertices:
            tower.status = "capped"
            break

        base_count = count_cycles(current.graph, int(current.girth))
        accepted = None
        attempts = 0
        for attempts in range(1, max_attempts + 1):
            signing = random_signing(current.graph, rng)
            lifted = apply_lift(current.graph, signing)
            if _improves(current.girth, base_count, lifted):
                accepted = (signing, lifted)
                break

        if accepted is None and current.graph.vertex_count <= exhaustive_limit:
            debug("lifts", f"level {tower.height}: random search failed, trying all signings")
            for signing in all_signings(current.graph):
                attempts += 1
                lifted = apply_lift(current.graph, signing)
                if _improves(current.girth, base_count, lifted):
                    accepted = (tuple(signing), lifted)
                    break

        if accepted is None:
            tower.status = "stalled"
            log("lifts", f"stalled at level {tower.height} (girth {current.girth})")
            break

        signing, lifted = accepted
        tower.levels.append(TowerLevel(lifted, girth(lifted), signing, attempts))
        debug("lifts", f"level {tower.height}: v={lifted.vertex_count} girth={girth(lifted)}")

    return tower


# ==================== CONVERGENCE ====================

@dataclass
class ConvergenceReport:
    """
    Per-level gaps |p(G_i,t) - p(T,t)| and lambda_{G_i}(p) - G(p), plus
    ln M(G_i,t)/v(G_i) on the t grid.
    """
    density_gaps: List[List[float]]
    lambda_gaps: List[List[float]]
    free_energies: List[List[float]]
    t_grid: List[float]
    p_grid: List[float]
    monotone: bool
    one_sided: bool

    @property
    def lambda_chain(self) -> bool:
        """lambda_{G_0}(p) >= lambda_{G_1}(p) >= ... at every grid point."""
        return _non_increasing(self.lambda_gaps, LAMBDA_SLACK)

    @property
    def free_energy_chain(self) -> bool:
        """ln M(G_i,t)/v(G_i) is non-increasing in i at every grid point."""
        return _non_increasing(self.free_energies, LAMBDA_SLACK)

    def to_dict(self) -> dict:
        return {
            "t_grid": self.t_grid,
            "p_grid": self.p_grid,
            "density_gaps": self.density_gaps,
            "lambda_gaps": self.lambda_gaps,
            "free_energies": self.free_energies,
            "monotone": self.monotone,
            "one_sided": self.one_sided,
            "lambda_chain": self.lambda_chain,
            "free_energy_chain": self.free_energy_chain,
        }


def _non_increasing(table: List[List[float]], slack: float) -> bool:
    return all(
        later <= earlier + slack
        for prev, nxt in zip(table, table[1:])
        for earlier, later in zip(prev, nxt)
    )


def _check_params(g: Graph, params: TreeParams):
    profile = degree_profile(g)
    if not profile.is_biregular or (profile.a, profile.b) != (params.a, params.b):
        raise DomainError(
            f"base graph degrees ({profile.a}, {profile.b}) do not match tree ({params.a}, {params.b})"
        )


def convergence_probe(
    tower: Tower,
    params: TreeParams,
    t_grid: Sequence[float],
    p_grid: Sequence[float],
) -> ConvergenceReport:
    _check_params(tower.base, params)
    p_grid = [p for p in p_grid if p <= params.p_max]

    density_gaps, lambda_gaps, free_energies = [], [], []
    for graph in tower.graphs():
        poly = matching_polynomial(graph)
        density_gaps.append([abs(density(poly, t) - params.density(float(t))) for t in t_grid])
        lambda_gaps.append([entropy_at(poly, p).lam - params.entropy(float(p)) for p in p_grid])
        free_energies.append([free_energy(poly, t) for t in t_grid])

    monotone = all(_non_increasing(table, MONOTONE_SLACK) for table in (density_gaps, lambda_gaps))
    one_sided = all(gap >= -LAMBDA_SLACK for row in lambda_gaps for gap in row)
    return ConvergenceReport(
        density_gaps, lambda_gaps, free_energies,
        [float(t) for t in t_grid], [float(p) for p in p_grid],
        monotone, one_sided,
    )
