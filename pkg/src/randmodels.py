"""
MatchEnt Random Models

Configuration-model samplers for regular and biregular bipartite
multigraphs, exact expected matching and cycle counts, the tightness
bound for regular graphs and a Monte-Carlo second-moment estimate.
"""

import math
from dataclasses import dataclass, asdict
from fractions import Fraction
from typing import Optional, Tuple

import mpmath
import numpy as np

from config import get_config
from console import debug
from errors import DomainError
from graph_core import Graph
from matchpoly import matching_polynomial
from theorems import lmc_bound_exact


# ==================== PARAMETERS ====================

@dataclass(frozen=True)
class ConfigModelParams:
    """
    regular: classes of n vertices each side, degree d (stored as a = b = d).
    biregular: b*n vertices of degree a, then a*n vertices of degree b.
    """
    kind: str
    a: int
    b: int
    n: int
    seed: int = 0

    @classmethod
    def regular(cls, d: int, n: int, seed: int = 0) -> "ConfigModelParams":
        return cls("regular", d, d, n, seed)

    @classmethod
    def biregular(cls, a: int, b: int, n: int, seed: int = 0) -> "ConfigModelParams":
        return cls("biregular", a, b, n, seed)

    def __post_init__(self):
        if self.kind not in ("regular", "biregular"):
            raise DomainError(f"unknown model kind {self.kind!r}")
        if min(self.a, self.b) < 1 or self.n < 1:
            raise DomainError("degrees and n must be >= 1")

    @property
    def left_size(self) -> int:
        return self.n if self.kind == "regular" else self.b * self.n

    @property
    def right_size(self) -> int:
        return self.n if self.kind == "regular" else self.a * self.n

    @property
    def edge_count(self) -> int:
        return self.left_size * self.a

    def with_seed(self, seed) -> "ConfigModelParams":
        return ConfigModelParams(self.kind, self.a, self.b, self.n, seed)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ConfigModelParams":
        kind = data.get("kind", "regular")
        if kind == "regular":
            return cls.regular(int(data.get("d", data.get("a"))), int(data["n"]), data.get("seed", 0))
        return cls.biregular(int(data["a"]), int(data["b"]), int(data["n"]), data.get("seed", 0))


# ==================== SAMPLING ====================

def sample(params: ConfigModelParams, rng: Optional[np.random.Generator] = None) -> Graph:
    """
    Uniform pairing of half-edge slots. Left slot i belongs to left vertex
    i // a; a random permutation sends it to a right slot, which belongs to
    right vertex slot // b. Parallel edges are kept.
    """
    rng = rng if rng is not None else np.random.default_rng(params.seed)
    left, right = params.left_size, params.right_size
    slots = params.edge_count
    perm = rng.permutation(slots)
    edges = tuple(
        (i // params.a, left + int(perm[i]) // params.b) for i in range(slots)
    )
    return Graph(left + right, edges)


# ==================== EXACT EXPECTATIONS ====================

def expected_mk_regular(d: int, n: int, k: int) -> Fraction:
    """E m_k = C(n,k)^2 d^(2k) / C(dn,k)."""
    if not 0 <= k <= n:
        raise DomainError(f"k must lie in 0..{n}, got {k}")
    return Fraction(math.comb(n, k) ** 2 * d ** (2 * k), math.comb(d * n, k))


def expected_mk_biregular(a: int, b: int, n: int, k: int) -> Fraction:
    """E m_k = C(an,k) C(bn,k) (ab)^k / C(abn,k)."""
    if not 0 <= k <= min(a * n, b * n):
        raise DomainError(f"k must lie in 0..{min(a, b) * n}, got {k}")
    return Fraction(
        math.comb(a * n, k) * math.comb(b * n, k) * (a * b) ** k,
        math.comb(a * b * n, k),
    )


def expected_cycles_asymptotic(a: int, b: int, j: int) -> Fraction:
    """((a-1)(b-1))^j / (2j)."""
    if j < 1:
        raise DomainError("j must be >= 1")
    return Fraction(((a - 1) * (b - 1)) ** j, 2 * j)


def expected_cycles_exact(a: int, b: int, n: int, j: int) -> Fraction:
    """
    Finite-n expectation T_j S_j / N of the number of 2j-cycles in the
    (a,b) configuration model with an + bn vertices.
    """
    if j < 1:
        raise DomainError("j must be >= 1")
    if a < 2 or b < 2 or j > min(a * n, b * n):
        return Fraction(0)
    f = math.factorial
    E = a * b * n
    N = Fraction(f(E), f(a) ** (b * n)) * Fraction(f(E), f(b) ** (a * n))
    T = math.comb(E, 2 * j) * math.comb(a * n, j) * math.comb(b * n, j) * f(2 * j - 1) * f(j) ** 2
    S = (
        Fraction(f(E - 2 * j), f(a - 2) ** j * f(a) ** (b * n - j))
        * Fraction(f(E - 2 * j), f(b - 2) ** j * f(b) ** (a * n - j))
    )
    return T * S / N


def expected_cycles_biregular(a: int, b: int, j: int, n: Optional[int] = None) -> Tuple[float, Optional[Fraction]]:
    """(asymptotic value, exact finite-n value or None)."""
    exact = expected_cycles_exact(a, b, n, j) if n is not None else None
    return float(expected_cycles_asymptotic(a, b, j)), exact


# ==================== TIGHTNESS ====================

@dataclass
class TightnessResult:
    d: int
    n: int
    k: int
    lhs: Fraction
    rhs: float
    holds: bool
    exact: bool

    def to_dict(self) -> dict:
        return {
            "d": self.d, "n": self.n, "k": self.k,
            "lhs": str(self.lhs), "lhs_float": float(self.lhs),
            "rhs": self.rhs, "holds": self.holds, "exact": self.exact,
        }


def tightness_upper(d: int, n: int, k: int) -> TightnessResult:
    """
    E m_k <= sqrt((1-p/d)/(1-p)) p_mu exp(2n G_d(p)) with p = k/n.
    Compared exactly after squaring: E^2 <= ((1-p/d)/(1-p)) B^2.
    """
    if not 0 <= k < n:
        raise DomainError(f"need 0 <= k < n, got k={k}, n={n}")
    lhs = expected_mk_regular(d, n, k)
    bound = lmc_bound_exact(d, n, k)
    p = Fraction(k, n)
    ratio = (1 - p / d) / (1 - p)
    holds = lhs * lhs <= ratio * bound * bound
    with mpmath.workdps(get_config()["precision_digits"]):
        rhs = mpmath.sqrt(mpmath.mpf(ratio.numerator) / ratio.denominator) * (
            mpmath.mpf(bound.numerator) / bound.denominator
        )
    return TightnessResult(d, n, k, lhs, float(rhs), holds, True)


# ==================== MONTE CARLO ====================

@dataclass
class MomentReport:
    params: ConfigModelParams
    k: int
    samples: int
    mean: float
    standard_error: float
    exact: Fraction
    mean_ratio: float
    second_moment_ratio: float

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "k": self.k,
            "samples": self.samples,
            "mean": self.mean,
            "standard_error": self.standard_error,
            "exact": str(self.exact),
            "exact_float": float(self.exact),
            "mean_ratio": self.mean_ratio,
            "second_moment_ratio": self.second_moment_ratio,
        }


def exact_expectation(params: ConfigModelParams, k: int) -> Fraction:
    if params.kind == "regular":
        return expected_mk_regular(params.a, params.n, k)
    return expected_mk_biregular(params.a, params.b, params.n, k)


def empirical_moments(params: ConfigModelParams, k: int, samples: int) -> MomentReport:
    """
    Monte-Carlo mean of m_k and the ratio E[m_k^2] / E[m_k]^2. Sample i is
    drawn from default_rng([seed, i]) so results do not depend on order.
    Exploratory: no verdict is attached to the second-moment ratio.
    """
    if samples < 1:
        raise DomainError("samples must be >= 1")
    exact = exact_expectation(params, k)
    values = np.empty(samples, dtype=float)
    for i in range(samples):
        rng = np.random.default_rng([params.seed, i])
        poly = matching_polynomial(sample(params, rng))
        values[i] = float(poly.m(k))

    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    second = float(np.mean(values ** 2))
    ratio2 = second / (mean * mean) if mean else math.inf
    debug("randmodels", f"{params.kind} k={k}: mean {mean:.4f} vs exact {float(exact):.4f}")
    return MomentReport(
        params, k, samples, mean, stderr, exact,
        mean / float(exact) if exact else math.inf, ratio2,
    )
