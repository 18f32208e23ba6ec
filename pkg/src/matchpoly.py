"""
MatchEnt Matching Polynomials

Exact matching counts m_k(G), the generating function M(G,t), the
matching polynomial mu(G,x), its real roots (the matching measure),
power sums and matching energy.

Coefficients stay Python integers throughout. Floats appear only when
roots are reported after exact Sturm isolation.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
import sympy

from config import get_config
from console import debug
from errors import DomainError, MatchingTooLargeError, RootIsolationError
from graph_core import Graph


# ==================== CONSTANTS ====================

RECONSTRUCTION_TOL = 1e-6    # Relative coefficient error allowed after root refinement

Number = Union[int, float, Fraction]
_X = sympy.Symbol("x")


# ==================== TYPES ====================

@dataclass(frozen=True)
class MatchingPolynomial:
    """Exact matching counts (m_0, ..., m_nu) of a graph on vertex_count vertices."""
    coefficients: Tuple[int, ...]
    vertex_count: int

    @property
    def nu(self) -> int:
        return len(self.coefficients) - 1

    @property
    def p_star(self) -> Fraction:
        """Largest coverable vertex fraction 2nu/v."""
        if self.vertex_count == 0:
            return Fraction(0)
        return Fraction(2 * self.nu, self.vertex_count)

    def m(self, k: int) -> int:
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else 0

    def is_log_concave(self) -> bool:
        c = self.coefficients
        return all(c[k] * c[k] >= c[k - 1] * c[k + 1] for k in range(1, len(c) - 1))

    def to_dict(self) -> dict:
        return {"m": list(self.coefficients), "v": self.vertex_count}

    @classmethod
    def from_dict(cls, data: dict) -> "MatchingPolynomial":
        return cls(tuple(int(c) for c in data["m"]), int(data["v"]))


@dataclass(frozen=True)
class MatchingMeasure:
    """Roots of mu(G,x) as sorted (value, multiplicity) pairs."""
    roots: Tuple[Tuple[float, int], ...]
    vertex_count: int

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.roots)

    def values(self) -> List[float]:
        """Roots repeated by multiplicity."""
        return [r for r, m in self.roots for _ in range(m)]

    def moment(self, k: int) -> float:
        """k-th moment of the uniform measure on the roots."""
        if self.vertex_count == 0:
            return 0.0
        return sum(m * r ** k for r, m in self.roots) / self.vertex_count

    def to_dict(self) -> dict:
        return {"roots": [[r, m] for r, m in self.roots], "v": self.vertex_count}


# ==================== EXACT COUNTS ====================

def convolve(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    """Coefficient vector of the product of two polynomials."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _add_shifted(base: List[int], other: Sequence[int], factor: int):
    """base += factor * t * other, growing base as needed."""
    need = len(other) + 1
    if len(base) < need:
        base.extend([0] * (need - len(base)))
    for k, c in enumerate(other):
        base[k + 1] += factor * c


def matching_polynomial(g: Graph, max_vertices: Optional[int] = None) -> MatchingPolynomial:
    """
    Exact m_k(G) for every k.

    Applies the edge recursion M(G) = M(G-e) + t M(G-u-w) to every edge at
    a pivot vertex at once. Pivots follow reverse Cuthill-McKee order so the
    live vertex sets stay narrow; components are factored and subproblems
    are memoized on their vertex bitmask for the duration of this call.
    """
    limit = max_vertices if max_vertices is not None else get_config()["max_vertices"]
    if g.vertex_count > limit:
        raise MatchingTooLargeError(g.vertex_count, limit)
    if g.vertex_count == 0:
        return MatchingPolynomial((1,), 0)

    order = list(nx.utils.reverse_cuthill_mckee_ordering(g.to_networkx()))
    position = {v: i for i, v in enumerate(order)}
    n = len(order)

    nbr_mask = [0] * n
    mult: List[Dict[int, int]] = [dict() for _ in range(n)]
    for (u, w), m in g.multiplicity.items():
        i, j = position[u], position[w]
        nbr_mask[i] |= 1 << j
        nbr_mask[j] |= 1 << i
        mult[i][j] = m
        mult[j][i] = m

    memo: Dict[int, Tuple[int, ...]] = {0: (1,)}

    def component(mask: int) -> int:
        low = mask & -mask
        comp = low
        frontier = low
        while frontier:
            bit = frontier & -frontier
            frontier ^= bit
            new = nbr_mask[bit.bit_length() - 1] & mask & ~comp
            comp |= new
            frontier |= new
        return comp

    def rec(mask: int) -> Tuple[int, ...]:
        cached = memo.get(mask)
        if cached is not None:
            return cached

        comp = component(mask)
        if comp != mask:
            result = convolve(rec(comp), rec(mask & ~comp))
        else:
            low = mask & -mask
            i = low.bit_length() - 1
            rest = mask & ~low
            acc = list(rec(rest))
            partners = nbr_mask[i] & rest
            while partners:
                bit = partners & -partners
                partners ^= bit
                j = bit.bit_length() - 1
                _add_shifted(acc, rec(rest & ~bit), mult[i][j])
            result = tuple(acc)

        memo[mask] = result
        return result

    coeffs = rec((1 << n) - 1)
    debug("matchpoly", f"{g!r}: {len(memo)} memo states")
    return MatchingPolynomial(coeffs, g.vertex_count)


# ==================== EVALUATION ====================

def _check_t(t: Number):
    if t < 0:
        raise DomainError(f"activity t must be non-negative, got {t}")


def evaluate_M(p: MatchingPolynomial, t: Number) -> Number:
    """M(G,t). Exact Fraction for int/Fraction t, float otherwise."""
    _check_t(t)
    if isinstance(t, float):
        return math.fsum(c * t ** k for k, c in enumerate(p.coefficients))
    t = Fraction(t)
    acc = Fraction(0)
    for c in reversed(p.coefficients):
        acc = acc * t + c
    return acc


def evaluate_dM(p: MatchingPolynomial, t: Number) -> Number:
    """M'(G,t) with respect to t."""
    _check_t(t)
    deriv = [k * c for k, c in enumerate(p.coefficients)][1:]
    if not deriv:
        return 0.0 if isinstance(t, float) else Fraction(0)
    if isinstance(t, float):
        return math.fsum(c * t ** k for k, c in enumerate(deriv))
    t = Fraction(t)
    acc = Fraction(0)
    for c in reversed(deriv):
        acc = acc * t + c
    return acc


def mu_coefficients(p: MatchingPolynomial) -> List[int]:
    """
    Coefficients of mu(G,x), highest degree first (length v+1).
    Entry 2k holds (-1)^k m_k; odd entries are zero.
    """
    out = [0] * (p.vertex_count + 1)
    for k, c in enumerate(p.coefficients):
        out[2 * k] = c if k % 2 == 0 else -c
    return out


# ==================== ROOTS ====================

def _integer_coeffs(poly: sympy.Poly) -> List[int]:
    _, cleared = poly.clear_denoms()
    return [int(c) for c in cleared.all_coeffs()]


def _horner(coeffs: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def _sign_changes(chain: List[List[int]], x: Fraction) -> int:
    changes = 0
    last = 0
    for coeffs in chain:
        value = _horner(coeffs, x)
        if value == 0:
            continue
        sign = 1 if value > 0 else -1
        if last and sign != last:
            changes += 1
        last = sign
    return changes


def _cauchy_bound(coeffs: Sequence[int]) -> Fraction:
    lead = abs(coeffs[0])
    return 1 + max((Fraction(abs(c), lead) for c in coeffs[1:]), default=Fraction(0))


def _positive_roots(factor: sympy.Poly, width: Fraction) -> List[Fraction]:
    """Isolate and refine every positive root of a square-free factor."""
    coeffs = _integer_coeffs(factor)
    chain = [_integer_coeffs(s) for s in sympy.sturm(factor)]
    hi = _cauchy_bound(coeffs)
    lo = Fraction(0)

    roots: List[Fraction] = []
    stack = [(lo, hi, _sign_changes(chain, lo), _sign_changes(chain, hi))]
    while stack:
        a, b, va, vb = stack.pop()
        count = va - vb
        if count <= 0:
            continue
        if count == 1:
            roots.append(_bisect(coeffs, a, b, width))
            continue
        mid = _split_point(coeffs, a, b)
        vm = _sign_changes(chain, mid)
        stack.append((a, mid, va, vm))
        stack.append((mid, b, vm, vb))
    return sorted(roots)


def _split_point(coeffs: Sequence[int], a: Fraction, b: Fraction) -> Fraction:
    """A point strictly inside (a, b) that is not a root."""
    denom = 2
    while True:
        for num in range(1, denom):
            mid = a + (b - a) * Fraction(num, denom)
            if _horner(coeffs, mid) != 0:
                return mid
        denom += 1


def _bisect(coeffs: Sequence[int], a: Fraction, b: Fraction, width: Fraction) -> Fraction:
    fa = _horner(coeffs, a)
    while b - a > width:
        mid = (a + b) / 2
        fm = _horner(coeffs, mid)
        if fm == 0:
            return mid
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return (a + b) / 2


def matching_measure(p: MatchingPolynomial, tol: Optional[float] = None) -> MatchingMeasure:
    """
    All roots of mu(G,x) with multiplicities.

    mu(G,x) = x^(v-2nu) R(x) where R(0) = (-1)^nu m_nu != 0. R is split
    into square-free factors; each factor's positive roots are isolated by
    Sturm sequences over the integers and bisected to width <= tol. The
    negative roots mirror the positive ones.
    """
    tol = tol if tol is not None else get_config()["tol"]
    if tol <= 0:
        raise DomainError("tol must be positive")
    width = Fraction(tol)

    zero_mult = p.vertex_count - 2 * p.nu
    reduced = mu_coefficients(p)[: 2 * p.nu + 1]
    roots: Dict[float, int] = {}

    if p.nu > 0:
        _, factors = sympy.Poly(reduced, _X).sqf_list()
        for factor, multiplicity in factors:
            positive = _positive_roots(factor, width)
            if 2 * len(positive) != factor.degree():
                raise RootIsolationError(
                    f"factor of degree {factor.degree()} gave {len(positive)} positive roots"
                )
            for r in positive:
                value = float(r)
                roots[value] = roots.get(value, 0) + multiplicity
                roots[-value] = roots.get(-value, 0) + multiplicity
    if zero_mult:
        roots[0.0] = roots.get(0.0, 0) + zero_mult

    measure = MatchingMeasure(tuple(sorted(roots.items())), p.vertex_count)
    if measure.total_multiplicity != p.vertex_count:
        raise RootIsolationError(
            f"found {measure.total_multiplicity} roots for degree {p.vertex_count}"
        )
    _check_reconstruction(p, measure)
    return measure


def _check_reconstruction(p: MatchingPolynomial, measure: MatchingMeasure):
    if p.vertex_count == 0:
        return
    rebuilt = np.poly(np.array(measure.values()))
    target = np.array(mu_coefficients(p), dtype=float)
    scale = max(1.0, float(np.max(np.abs(target))))
    error = float(np.max(np.abs(rebuilt - target))) / scale
    if error > RECONSTRUCTION_TOL:
        raise RootIsolationError(f"reconstruction error {error:.3e} exceeds {RECONSTRUCTION_TOL}")


# ==================== MOMENTS & ENERGY ====================

def power_sums(p: MatchingPolynomial, max_k: int) -> List[int]:
    """p_1..p_max_k of the roots of mu(G,x), exactly, by Newton's identities."""
    if max_k < 1:
        raise DomainError("max_k must be >= 1")
    c = mu_coefficients(p)  # monic, c[0] = 1
    n = p.vertex_count
    sums: List[int] = []
    for k in range(1, max_k + 1):
        total = k * c[k] if k <= n else 0
        for i in range(1, min(k, n + 1)):
            total += c[i] * sums[k - i - 1]
        sums.append(-total)
    return sums


def matching_energy(m: MatchingMeasure) -> float:
    return math.fsum(abs(r) * mult for r, mult in m.roots)


def is_tree_spectral_match(g: Graph) -> bool:
    """True iff mu(G,x) equals the adjacency characteristic polynomial."""
    if not g.is_forest():
        raise DomainError("spectral match is only defined here for forests")
    if g.vertex_count == 0:
        return True
    adjacency = sympy.zeros(g.vertex_count, g.vertex_count)
    for u, w in g.edges:
        adjacency[u, w] += 1
        adjacency[w, u] += 1
    charpoly = [int(c) for c in adjacency.charpoly(_X).all_coeffs()]
    return charpoly == mu_coefficients(matching_polynomial(g))
