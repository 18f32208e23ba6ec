"""
MatchEnt Entropy Functions

Density p(G,t), free energy F(G,t) = ln M(G,t)/v, the inverse activity
t(G,p) and the entropy function lambda_G(p) of a finite graph.

M and M' are evaluated on exact rationals; mpmath takes over only for
the final logarithms.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Union

import mpmath

from config import get_config
from errors import DomainError
from graph_core import Graph
from matchpoly import MatchingPolynomial, convolve, evaluate_dM, evaluate_M, matching_polynomial


# ==================== CONSTANTS ====================

ACTIVITY_TOL = Fraction(1, 10**12)   # |p(G,t) - p| target for the inverse
SNAP_TOL = 1e-12                     # p this close to p* is treated as p*

Number = Union[int, float, Fraction]
GraphLike = Union[Graph, MatchingPolynomial]


def _poly(g: GraphLike) -> MatchingPolynomial:
    return g if isinstance(g, MatchingPolynomial) else matching_polynomial(g)


def _mpf(x: Number) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def as_fraction(x: Number) -> Fraction:
    """Exact rational for int/Fraction/float/str input ('0.25', '1/3')."""
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


# ==================== TYPES ====================

@dataclass
class EntropyPoint:
    """One (p, t, lambda, F) sample. t is inf at and beyond p*."""
    p: float
    t: float
    lam: float
    f: float
    out_of_range: bool = False

    def to_dict(self) -> dict:
        def finite(x):
            return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")
        return {
            "p": self.p,
            "t": finite(self.t),
            "lambda": self.lam,
            "F": finite(self.f),
            "out_of_range": self.out_of_range,
        }


@dataclass
class EntropyCurve:
    points: List[EntropyPoint] = field(default_factory=list)

    @property
    def monotone_t(self) -> bool:
        ts = [pt.t for pt in self.points]
        return all(a <= b for a, b in zip(ts, ts[1:]))

    def to_dict(self) -> dict:
        return {"points": [pt.to_dict() for pt in self.points], "monotone_t": self.monotone_t}


# ==================== DENSITY & INVERSE ====================

def density_exact(g: GraphLike, t: Number) -> Fraction:
    """p(G,t) = 2t M'(t) / (v M(t)) as an exact rational."""
    poly = _poly(g)
    t = as_fraction(t)
    if t < 0:
        raise DomainError(f"activity t must be non-negative, got {t}")
    if poly.vertex_count == 0 or t == 0:
        return Fraction(0)
    return 2 * t * evaluate_dM(poly, t) / (poly.vertex_count * evaluate_M(poly, t))


def density(g: GraphLike, t: Number) -> float:
    if isinstance(t, float) and math.isinf(t):
        return float(_poly(g).p_star)
    return float(density_exact(g, t))


def activity_exact(g: GraphLike, p: Number) -> Fraction:
    """
    t with |p(G,t) - p| <= 1e-12, by doubling a bracket from t=1 and then
    bisecting. Exact hits are returned as-is.
    """
    poly = _poly(g)
    p = as_fraction(p)
    if p < 0:
        raise DomainError(f"density p must be non-negative, got {p}")
    if p >= poly.p_star:
        raise DomainError(f"p = {float(p)} is not below p* = {poly.p_star} ({float(poly.p_star):.6g})")
    if p == 0:
        return Fraction(0)

    lo, hi = Fraction(0), Fraction(1)
    while True:
        value = density_exact(poly, hi)
        if value == p:
            return hi
        if value > p:
            break
        lo, hi = hi, hi * 2

    while True:
        mid = (lo + hi) / 2
        value = density_exact(poly, mid)
        if abs(value - p) <= ACTIVITY_TOL:
            return mid
        if value < p:
            lo = mid
        else:
            hi = mid


def activity(g: GraphLike, p: Number) -> float:
    return float(activity_exact(g, p))


# ==================== ENTROPY ====================

def free_energy(g: GraphLike, t: Number) -> float:
    """F(G,t) = ln M(G,t) / v(G)."""
    poly = _poly(g)
    if poly.vertex_count == 0:
        return 0.0
    with mpmath.workdps(get_config()["precision_digits"]):
        return float(mpmath.log(_mpf(evaluate_M(poly, as_fraction(t)))) / poly.vertex_count)


def entropy_at(g: GraphLike, p: Number) -> EntropyPoint:
    """
    lambda_G(p) = ln M(G,t)/v - p ln(t)/2 at t = t(G,p).

    At p* the value is ln(m_nu)/v exactly; beyond p* it is reported as 0
    with out_of_range set.
    """
    poly = _poly(g)
    p_exact = as_fraction(p)
    if p_exact < 0 or p_exact > 1:
        raise DomainError(f"p must lie in [0, 1], got {float(p_exact)}")
    v = poly.vertex_count
    p_star = poly.p_star

    if p_exact == 0:
        return EntropyPoint(0.0, 0.0, 0.0, 0.0)

    with mpmath.workdps(get_config()["precision_digits"]):
        if abs(p_exact - p_star) <= SNAP_TOL:
            lam = mpmath.log(poly.coefficients[-1]) / v
            return EntropyPoint(float(p_star), math.inf, float(lam), math.inf)
        if p_exact > p_star:
            return EntropyPoint(float(p_exact), math.inf, 0.0, math.inf, out_of_range=True)

        t = activity_exact(poly, p_exact)
        f = mpmath.log(_mpf(evaluate_M(poly, t))) / v
        lam = f - _mpf(p_exact) * mpmath.log(_mpf(t)) / 2
        return EntropyPoint(float(p_exact), float(t), float(lam), float(f))


def entropy_curve(g: GraphLike, grid: Sequence[Number]) -> EntropyCurve:
    poly = _poly(g)
    return EntropyCurve([entropy_at(poly, p) for p in grid])


def replica_entropy(g: GraphLike, k: int, r: int) -> float:
    """ln m_k(rG) / (r v): lambda_G approximated through r disjoint copies."""
    poly = _poly(g)
    coeffs = (1,)
    for _ in range(r):
        coeffs = convolve(coeffs, poly.coefficients)
    if not 0 <= k < len(coeffs):
        raise DomainError(f"k = {k} outside 0..{len(coeffs) - 1}")
    with mpmath.workdps(get_config()["precision_digits"]):
        return float(mpmath.log(coeffs[k]) / (r * poly.vertex_count))


# ==================== GRIDS ====================

def rational_grid(lo: Number, hi: Number, step: Number) -> List[Fraction]:
    """Exact grid lo, lo+step, ..., up to and including hi when reached."""
    lo, hi, step = as_fraction(lo), as_fraction(hi), as_fraction(step)
    if step <= 0:
        raise DomainError("grid step must be positive")
    out = []
    x = lo
    while x <= hi:
        out.append(x)
        x += step
    return out


def parse_grid(text: str) -> List[Fraction]:
    """'lo:hi:step' -> rational_grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"grid must be lo:hi:step, got {text!r}")
    try:
        return rational_grid(*parts)
    except (ValueError, ZeroDivisionError) as e:
        raise DomainError(f"bad grid {text!r}: {e}") from e


def is_concave(points: Sequence[EntropyPoint], tol: float = 1e-9) -> bool:
    """Finite-difference slopes of lambda are non-increasing along p."""
    slopes = [
        (b.lam - a.lam) / (b.p - a.p)
        for a, b in zip(points, points[1:])
        if b.p > a.p
    ]
    return all(s2 <= s1 + tol for s1, s2 in zip(slopes, slopes[1:]))
