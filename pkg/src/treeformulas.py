"""
MatchEnt Tree Formulas

Closed forms for the infinite d-regular tree T_d and the (a,b)-biregular
tree T_{a,b}: entropy functions G_d and G_{a,b}, density and activity,
S_d(t) and eta_t, spectral densities, closed-walk series and the tree
matching energy.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from scipy import integrate
from scipy.special import xlogy

from errors import DomainError


# ==================== CONSTANTS ====================

QUAD_ABS_TOL = 1e-10      # Absolute target for scipy quad
QUAD_LIMIT = 200          # Subinterval limit for scipy quad


# ==================== TYPES ====================

@dataclass(frozen=True)
class TreeParams:
    """regular(d): a = b = d. biregular(a, b): a >= b >= 1."""
    kind: str
    a: int
    b: int

    @classmethod
    def regular(cls, d: int) -> "TreeParams":
        if d < 1:
            raise DomainError("d must be >= 1")
        return cls("regular", d, d)

    @classmethod
    def biregular(cls, a: int, b: int) -> "TreeParams":
        a, b = max(a, b), min(a, b)
        if b < 1:
            raise DomainError("degrees must be >= 1")
        return cls("biregular", a, b)

    @property
    def d(self) -> int:
        return self.a

    @property
    def p_max(self) -> Fraction:
        """Coverable vertex fraction: 1 when regular, 2b/(a+b) otherwise."""
        return Fraction(2 * min(self.a, self.b), self.a + self.b)

    def entropy(self, p: float) -> float:
        if self.kind == "regular":
            return entropy_regular(self.d, p)
        return entropy_biregular(self.a, self.b, p)

    def density(self, t: float) -> float:
        if self.kind == "regular":
            return density_regular_tree(self.d, t)
        return density_biregular_tree(self.a, self.b, t)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "a": self.a, "b": self.b}

    @classmethod
    def from_dict(cls, data: dict) -> "TreeParams":
        return cls(data["kind"], int(data["a"]), int(data["b"]))


@dataclass(frozen=True)
class WalkSeries:
    """Closed-walk counts W_0..W_{2J} from a root of the given degree kind."""
    root: str
    coefficients: Tuple[int, ...]


# ==================== ENTROPY ====================

def binary_entropy(q: float) -> float:
    """H(q) with H(0) = H(1) = 0."""
    if q < 0 or q > 1:
        raise DomainError(f"H(q) needs 0 <= q <= 1, got {q}")
    return float(-xlogy(q, q) - xlogy(1 - q, 1 - q))


def entropy_regular(d: int, p: float) -> float:
    """G_d(p) = (p ln(d/p) + (d-p) ln(1-p/d) - 2(1-p) ln(1-p)) / 2."""
    if d < 1:
        raise DomainError("d must be >= 1")
    p = float(p)
    if p < 0 or p > 1:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    if p == 0:
        return 0.0
    if p == 1:
        return 0.5 * float(xlogy(d - 1, d - 1) - (d - 2) * math.log(d))
    return 0.5 * float(
        p * math.log(d) - xlogy(p, p)
        + (d - p) * math.log1p(-p / d)
        - 2 * (1 - p) * math.log1p(-p)
    )


def _biregular_range(a: int, b: int, p: float):
    if a < 1 or b < 1:
        raise DomainError("degrees must be >= 1")
    top = 2 * min(a, b) / (a + b)
    if p < 0 or p > top + 1e-15:
        raise DomainError(f"p must lie in [0, {top:.6g}], got {p}")


def entropy_biregular(a: int, b: int, p: float) -> float:
    """G_{a,b}(p) as a combination of binary entropies."""
    p = float(p)
    _biregular_range(a, b, p)
    s = a + b

    def H(q):
        return binary_entropy(min(max(q, 0.0), 1.0))

    return (
        a / s * H(s * p / (2 * a))
        + b / s * H(s * p / (2 * b))
        + 0.5 * p * math.log(a * b)
        - a * b / s * H(s * p / (2 * a * b))
    )


def entropy_biregular_rewritten(a: int, b: int, p: float) -> float:
    """G_{a,b}(p) in the four-logarithm form. Agrees with entropy_biregular."""
    p = float(p)
    _biregular_range(a, b, p)
    if p == 0:
        return 0.0
    s = a + b
    e = 2 * a * b / s
    return 0.5 * float(
        p * math.log(e) - xlogy(p, p)
        + xlogy(e - p, 1 - p / e)
        - xlogy(2 * a / s - p, max(0.0, 1 - s * p / (2 * a)))
        - xlogy(2 * b / s - p, max(0.0, 1 - s * p / (2 * b)))
    )


# ==================== DENSITY & ACTIVITY ====================

def density_regular_tree(d: int, t: float) -> float:
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    if math.isinf(t):
        return 1.0
    return (2 * d * d * t + d - d * math.sqrt(1 + 4 * (d - 1) * t)) / (2 * d * d * t + 2)


def activity_regular_tree(d: int, p: float) -> float:
    if p < 0 or p >= 1:
        raise DomainError(f"p must lie in [0, 1), got {p}")
    return p * (d - p) / (d * d * (1 - p) ** 2)


def density_biregular_tree(a: int, b: int, t: float) -> float:
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    c = 2 * a * b / (a + b)
    if math.isinf(t):
        return 2 * min(a, b) / (a + b)
    root = math.sqrt(1 + (2 * a + 2 * b - 4) * t + (a - b) ** 2 * t * t)
    return (2 * a * b * t + c - c * root) / (2 * a * b * t + 2)


def activity_biregular_tree(a: int, b: int, p: float) -> float:
    top = 2 * min(a, b) / (a + b)
    if p < 0 or p >= top:
        raise DomainError(f"p must lie in [0, {top:.6g}), got {p}")
    s = a + b
    return (s / (2 * a * b)) * p * (1 - s * p / (2 * a * b)) / (
        (1 - s * p / (2 * a)) * (1 - s * p / (2 * b))
    )


def eta(d: int, t: float) -> float:
    """eta_t = (sqrt(1+4(d-1)t) - 1) / (2(d-1)t); eta_0 = 1."""
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    if t == 0 or d == 1:
        return 1.0
    return (math.sqrt(1 + 4 * (d - 1) * t) - 1) / (2 * (d - 1) * t)


def s_function(d: int, t: float) -> float:
    """S_d(t) = eta^-2 ((d-1)/(d-eta))^(d-2)."""
    e = eta(d, t)
    if d == 1:
        return 1.0 + t
    return (1 / (e * e)) * ((d - 1) / (d - e)) ** (d - 2)


# ==================== SPECTRAL DENSITIES ====================

def kesten_mckay_density(d: int, x: float) -> float:
    if d < 2:
        raise DomainError("Kesten-McKay density needs d >= 2")
    r2 = 4 * (d - 1)
    if x * x >= r2:
        return 0.0
    return d * math.sqrt(r2 - x * x) / (2 * math.pi * (d * d - x * x))


def biregular_support(a: int, b: int) -> Tuple[float, float]:
    """Inner and outer |x| radius of the continuous part."""
    ra, rb = math.sqrt(a - 1), math.sqrt(b - 1)
    return abs(ra - rb), ra + rb


def biregular_atoms(a: int, b: int) -> List[Tuple[float, float]]:
    """
    Point masses of the biregular spectral measure as (x, mass).
    With b = 1 the whole measure is atomic: +-sqrt(a) carry 1/(a+1) each.
    """
    a, b = max(a, b), min(a, b)
    atoms = []
    if a != b:
        atoms.append((0.0, (a - b) / (a + b)))
    if b == 1:
        mass = 1 / (a + 1)
        atoms += [(-math.sqrt(a), mass), (math.sqrt(a), mass)]
    return atoms


def biregular_spectral_density(a: int, b: int, x: float) -> Tuple[float, float]:
    """(continuous density at x, atom mass at 0)."""
    a, b = max(a, b), min(a, b)
    atom = (a - b) / (a + b)
    if b == 1:
        return 0.0, atom
    lo, hi = biregular_support(a, b)
    ax = abs(x)
    if ax <= lo or ax >= hi:
        return 0.0, atom
    s = math.sqrt((a - 1) * (b - 1))
    x2 = x * x
    inner = -(x2 - a * b + (s - 1) ** 2) * (x2 - a * b + (s + 1) ** 2)
    if inner <= 0:
        return 0.0, atom
    value = a * b * math.sqrt(inner) / (math.pi * (a + b) * (a * b - x2) * ax)
    return value, atom


def integrate_kesten_mckay(d: int, fn) -> float:
    """
    Integral of fn(x) f_d(x) dx. Uses x = R cos(theta), which turns the
    square-root edges into a smooth integrand on [0, pi].
    """
    R = 2 * math.sqrt(d - 1)

    def integrand(theta):
        x = R * math.cos(theta)
        return fn(x) * d * (R * math.sin(theta)) ** 2 / (2 * math.pi * (d * d - x * x))

    value, _ = integrate.quad(integrand, 0.0, math.pi, epsabs=QUAD_ABS_TOL, limit=QUAD_LIMIT)
    return value


def integrate_biregular(a: int, b: int, fn, include_atoms: bool = True) -> float:
    """
    Integral of fn against the biregular spectral measure.
    The continuous part is even in x; it is written in u = x^2 with
    u = mid + half cos(theta) and both signs of x are summed.
    """
    a, b = max(a, b), min(a, b)
    total = 0.0
    if include_atoms:
        total += sum(mass * fn(x) for x, mass in biregular_atoms(a, b))
    if b == 1:
        return total

    lo, hi = biregular_support(a, b)
    mid = (hi * hi + lo * lo) / 2
    half = (hi * hi - lo * lo) / 2

    def integrand(theta):
        u = mid + half * math.cos(theta)
        if u <= 0.0:
            return 0.0
        x = math.sqrt(u)
        # density(x) dx over both signs = ab sqrt(-(u-u1)(u-u2)) / (pi (a+b)(ab-u) u) du
        # and sqrt(-(u-u1)(u-u2)) du = half^2 sin^2(theta) dtheta
        weight = a * b * (half * math.sin(theta)) ** 2 / (math.pi * (a + b) * (a * b - u) * u)
        return weight * (fn(x) + fn(-x)) / 2

    value, _ = integrate.quad(integrand, 0.0, math.pi, epsabs=QUAD_ABS_TOL, limit=QUAD_LIMIT)
    return total + value


# ==================== CLOSED WALKS ====================

def _series_mul(f: List[Fraction], g: List[Fraction], order: int) -> List[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(f[: order + 1]):
        if x:
            for j, y in enumerate(g[: order + 1 - i]):
                out[i + j] += x * y
    return out


def _series_inverse_one_minus(h: List[Fraction], order: int) -> List[Fraction]:
    """1 / (1 - h) for h with zero constant term."""
    out = [Fraction(0)] * (order + 1)
    out[0] = Fraction(1)
    for n in range(1, order + 1):
        out[n] = sum((h[k] * out[n - k] for k in range(1, n + 1)), Fraction(0))
    return out


def _shift2(f: List[Fraction], factor: int, order: int) -> List[Fraction]:
    """factor * z^2 * f, truncated."""
    out = [Fraction(0)] * (order + 1)
    for i in range(order - 1):
        out[i + 2] = factor * f[i]
    return out


def walk_generating_series(a: int, b: int, order: int):
    """
    (F_a, F_b) truncated at z^order, from R_a = (a-1) z^2 F_b,
    F_a = 1/(1-R_a) and the symmetric pair. Each pass fixes two more
    coefficients.
    """
    Fa = [Fraction(1)] + [Fraction(0)] * order
    Fb = list(Fa)
    for _ in range(order // 2 + 1):
        Ra = _shift2(Fb, a - 1, order)
        Rb = _shift2(Fa, b - 1, order)
        Fa, Fb = _series_inverse_one_minus(Ra, order), _series_inverse_one_minus(Rb, order)
    return Fa, Fb


def walk_series(a: int, b: int, root: str, J: int) -> WalkSeries:
    """W_0..W_{2J} for closed walks from an a-root or b-root of T_{a,b}."""
    if root not in ("a", "b"):
        raise DomainError("root must be 'a' or 'b'")
    if a < 1 or b < 1 or J < 0:
        raise DomainError("need a, b >= 1 and J >= 0")
    order = 2 * J
    Fa, Fb = walk_generating_series(a, b, order)
    if root == "a":
        G = _series_inverse_one_minus(_shift2(Fb, a, order), order)
    else:
        G = _series_inverse_one_minus(_shift2(Fa, b, order), order)
    coeffs = []
    for c in G:
        if c.denominator != 1 or c < 0:
            raise ArithmeticError(f"walk series coefficient {c} is not a non-negative integer")
        coeffs.append(int(c))
    return WalkSeries(root, tuple(coeffs))


def biregular_moment_from_walks(a: int, b: int, j: int) -> Fraction:
    """Exact 2j-th moment: (b/(a+b)) W_{2j}^a + (a/(a+b)) W_{2j}^b."""
    wa = walk_series(a, b, "a", j).coefficients[2 * j]
    wb = walk_series(a, b, "b", j).coefficients[2 * j]
    return Fraction(b * wa + a * wb, a + b)


# ==================== ENERGY ====================

def tree_matching_energy(d: int) -> float:
    """Integral of |z| against the Kesten-McKay measure, in closed form."""
    if d < 2:
        raise DomainError("tree matching energy needs d >= 2")
    root = math.sqrt(d - 1)
    if d == 2:
        return 4 / math.pi
    return (d / math.pi) * (2 * root - (d - 2) * math.atan(2 * root / (d - 2)))
