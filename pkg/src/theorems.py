"""
MatchEnt Theorem Verification

Every inequality is checked on a concrete graph and returned as a
Certificate. When both sides are rational the comparison is exact with
zero tolerance; otherwise the certificate states its tolerance and the
numeric error bound of the high-precision evaluation.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np
from scipy import integrate
from scipy.special import logsumexp

from config import get_config
from console import debug
from entropy import activity_exact, as_fraction, entropy_at, free_energy
from errors import DomainError
from graph_core import Graph, degree_profile, graph_hash
from matchpoly import (
    MatchingMeasure,
    MatchingPolynomial,
    evaluate_M,
    matching_energy,
    matching_measure,
    matching_polynomial,
)
from treeformulas import TreeParams, s_function, tree_matching_energy


# ==================== CONSTANTS ====================

HOEFFDING_TOL = 1e-10     # Slack for coefficient checks at an approximate t
ENERGY_TOL = 1e-8         # Slack for matching-energy comparisons
IDENTITY_TOL = 1e-6       # Quadrature slack for the energy integral identity

Value = Union[int, Fraction, float]


# ==================== CERTIFICATES ====================

def render(x: Any) -> Any:
    """JSON form: rationals as {decimal, num, den}, reals as floats."""
    if isinstance(x, bool):
        return x
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        with mpmath.workdps(30):
            decimal = mpmath.nstr(mpmath.mpf(x.numerator) / x.denominator, 20)
        return {"decimal": decimal, "num": x.numerator, "den": x.denominator}
    if isinstance(x, mpmath.mpf):
        return float(x)
    return x


@dataclass
class Certificate:
    """One checked inequality lhs >= rhs."""
    claim: str
    inputs: Dict[str, Any]
    lhs: Value
    rhs: Value
    margin: Value
    exact: bool
    tolerance: float = 0.0
    error_bound: float = 0.0
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.margin >= -self.tolerance

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "inputs": {k: render(v) for k, v in self.inputs.items()},
            "lhs": render(self.lhs),
            "rhs": render(self.rhs),
            "margin": render(self.margin),
            "exact": self.exact,
            "tolerance": self.tolerance,
            "error_bound": self.error_bound,
            "verdict": self.verdict,
            "extras": {k: render(v) for k, v in self.extras.items()},
        }


def certify(claim: str, inputs: dict, lhs: Value, rhs: Value, exact: bool,
            tolerance: float = 0.0, error_bound: float = 0.0, **extras) -> Certificate:
    if exact:
        margin = Fraction(lhs) - Fraction(rhs)
    else:
        margin = float(lhs) - float(rhs)
        lhs, rhs = float(lhs), float(rhs)
    cert = Certificate(claim, inputs, lhs, rhs, margin, exact, tolerance, error_bound, extras)
    debug("theorems", f"{claim} {inputs.get('k', '')}: margin {float(margin):.6g} -> {cert.verdict}")
    return cert


# ==================== HELPERS ====================

def _mpf(x: Value) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _inputs(g: Graph, **params) -> dict:
    out = {"graph": graph_hash(g)[:16], "v": g.vertex_count}
    out.update(params)
    return out


def regular_bipartite(g: Graph) -> Tuple[int, int]:
    """(d, n) for a d-regular bipartite graph on 2n vertices."""
    profile = degree_profile(g)
    if not profile.is_regular or not g.is_bipartite or g.vertex_count == 0:
        raise DomainError("graph is not regular bipartite")
    return profile.degree, g.vertex_count // 2


def biregular_bipartite(g: Graph) -> Tuple[int, int, int, int]:
    """(a, b, |A|, |B|) with a >= b and A the degree-a class."""
    profile = degree_profile(g)
    if not profile.is_biregular or not g.is_bipartite or g.vertex_count == 0:
        raise DomainError("graph is not biregular bipartite")
    return profile.a, profile.b, len(profile.class_a), len(profile.class_b)


def tree_params_for(g: Graph) -> TreeParams:
    profile = degree_profile(g)
    if profile.is_regular:
        return TreeParams.regular(profile.degree)
    if profile.is_biregular:
        return TreeParams.biregular(profile.a, profile.b)
    raise DomainError("graph is neither regular nor biregular")


# ==================== p_mu ====================

def p_mu(n: int, k: int) -> Fraction:
    """P(Binomial(n, k/n) = k)."""
    if not 0 <= k <= n or n < 1:
        raise DomainError(f"need 0 <= k <= n, n >= 1; got k={k}, n={n}")
    p = Fraction(k, n)
    return math.comb(n, k) * p ** k * (1 - p) ** (n - k)


def log_p_mu(n: int, k: int) -> mpmath.mpf:
    if not 0 <= k <= n or n < 1:
        raise DomainError(f"need 0 <= k <= n, n >= 1; got k={k}, n={n}")
    p = mpmath.mpf(k) / n
    out = mpmath.log(mpmath.binomial(n, k))
    if k:
        out += k * mpmath.log(p)
    if n - k:
        out += (n - k) * mpmath.log(1 - p)
    return out


def p_mu_lower_bound_ok(n: int, k: int) -> bool:
    return p_mu(n, k) >= Fraction(1, n + 1)


# ==================== EXACT EXPONENTIALS ====================

def exp_regular_entropy(d: int, n: int, k: int) -> Fraction:
    """exp(2n G_d(k/n)) = (d/p)^k (1-p/d)^(nd-k) (1-p)^(-2(n-k)), exactly."""
    p = Fraction(k, n)
    out = (1 - p / d) ** (n * d - k) / (1 - p) ** (2 * (n - k))
    if k:
        out *= (d / p) ** k
    return out


def _exp_nh(N: int, k: int) -> Fraction:
    """exp(N H(k/N)) = N^N / (k^k (N-k)^(N-k))."""
    return Fraction(N ** N, k ** k * (N - k) ** (N - k))


def exp_biregular_entropy(a: int, b: int, size_a: int, size_b: int, k: int) -> Fraction:
    """exp(v G_{a,b}(2k/v)) for |A| = size_a degree-a and |B| = size_b degree-b vertices."""
    edges = a * size_a
    return _exp_nh(size_b, k) * _exp_nh(size_a, k) * (a * b) ** k / _exp_nh(edges, k)


def lmc_bound_exact(d: int, n: int, k: int) -> Fraction:
    return p_mu(n, k) * exp_regular_entropy(d, n, k)


def _entropy_regular_mp(d: int, p: mpmath.mpf) -> mpmath.mpf:
    if p == 0:
        return mpmath.mpf(0)
    if p == 1:
        return (mpmath.mpf(d - 1) * mpmath.log(d - 1) if d > 1 else 0) / 2 - (d - 2) * mpmath.log(d) / 2
    return (p * mpmath.log(d / p) + (d - p) * mpmath.log(1 - p / d)
            - 2 * (1 - p) * mpmath.log(1 - p)) / 2


# ==================== SCHRIJVER & LMC ====================

def schrijver_base(d: int) -> Fraction:
    """(d-1)^(d-1) / d^(d-2); 1 for d = 1."""
    if d <= 1:
        return Fraction(1)
    return Fraction((d - 1) ** (d - 1), d ** (d - 2))


def verify_schrijver(g: Graph, poly: Optional[MatchingPolynomial] = None) -> Certificate:
    d, n = regular_bipartite(g)
    poly = poly or matching_polynomial(g)
    if poly.nu != n:
        raise DomainError(f"graph has no perfect matching (nu = {poly.nu}, n = {n})")
    return certify("schrijver", _inputs(g, d=d, n=n), poly.m(n), schrijver_base(d) ** n, exact=True)


def verify_lmc(g: Graph, k: int, poly: Optional[MatchingPolynomial] = None) -> Certificate:
    """
    m_k >= p_mu exp(2n G_d(k/n)). Exact for n <= exact_limit, otherwise
    compared in log space at the configured precision.
    """
    d, n = regular_bipartite(g)
    if not 0 <= k <= n:
        raise DomainError(f"k must lie in 0..{n}, got {k}")
    poly = poly or matching_polynomial(g)
    lhs = poly.m(k)
    inputs = _inputs(g, d=d, n=n, k=k)
    config = get_config()

    if n <= config["exact_limit"]:
        rhs = lmc_bound_exact(d, n, k)
        conj_rhs = math.comb(n, k) ** 2 * (Fraction(d * n - k, d * n)) ** (n * d - k) * Fraction(d * k, n) ** k
        return certify(
            "lmc", inputs, lhs, rhs, exact=True,
            conjecture_rhs=conj_rhs,
            conjecture_margin=lhs - conj_rhs,
        )

    digits = config["precision_digits"]
    with mpmath.workdps(digits):
        p = mpmath.mpf(k) / n
        log_rhs = log_p_mu(n, k) + 2 * n * _entropy_regular_mp(d, p)
        log_lhs = mpmath.log(lhs)
        # margin in log space keeps huge counts finite
        margin = log_lhs - log_rhs
    error = 10.0 ** (10 - digits)
    return certify(
        "lmc_log", inputs, float(log_lhs), float(log_rhs), exact=False,
        tolerance=error, error_bound=error, log_margin=float(margin),
    )


def verify_direct(g: Graph, p_grid: Sequence, poly: Optional[MatchingPolynomial] = None) -> List[Certificate]:
    """sum_k m_k ((p/d)(1-p/d))^k (1-p)^(2(n-k)) >= (1-p/d)^(nd), exactly."""
    d, n = regular_bipartite(g)
    poly = poly or matching_polynomial(g)
    certs = []
    for p in p_grid:
        p = as_fraction(p)
        if p < 0 or p > 1:
            raise DomainError(f"p must lie in [0, 1], got {p}")
        x = (p / d) * (1 - p / d)
        lhs = sum(
            (m * x ** k * (1 - p) ** (2 * (n - k)) for k, m in enumerate(poly.coefficients)),
            Fraction(0),
        )
        rhs = (1 - p / d) ** (n * d)
        certs.append(certify("direct", _inputs(g, d=d, n=n, p=p), lhs, rhs, exact=True))
    return certs


def verify_biregular(g: Graph, k: int, poly: Optional[MatchingPolynomial] = None) -> Certificate:
    """m_k >= p_mu exp(v G_{a,b}(p)), p_mu over Binomial(|A|, q), exactly."""
    a, b, size_a, size_b = biregular_bipartite(g)
    if not 0 <= k <= size_a:
        raise DomainError(f"k must lie in 0..{size_a}, got {k}")
    poly = poly or matching_polynomial(g)
    q = Fraction(k, size_a)
    rhs = p_mu(size_a, k) * exp_biregular_entropy(a, b, size_a, size_b, k)
    inputs = _inputs(g, a=a, b=b, k=k, A=size_a, q=q)
    return certify("biregular", inputs, poly.m(k), rhs, exact=True)


def verify_gurvits_effective(g: Graph, k: int, poly: Optional[MatchingPolynomial] = None) -> Certificate:
    """ln m_k / v >= G_d(k/n) - ln v / v."""
    d, n = regular_bipartite(g)
    if not 0 <= k <= n:
        raise DomainError(f"k must lie in 0..{n}, got {k}")
    poly = poly or matching_polynomial(g)
    v = g.vertex_count
    with mpmath.workdps(get_config()["precision_digits"]):
        lhs = mpmath.log(poly.m(k)) / v
        rhs = _entropy_regular_mp(d, mpmath.mpf(k) / n) - mpmath.log(v) / v
    return certify("gurvits_effective", _inputs(g, d=d, k=k), lhs, rhs, exact=False,
                   tolerance=get_config()["entropy_tol"])


# ==================== ENTROPY-LEVEL CLAIMS ====================

def verify_entropy_dominance(g: Graph, params: Optional[TreeParams], p_grid: Sequence,
                             poly: Optional[MatchingPolynomial] = None) -> List[Certificate]:
    """lambda_G(p) >= G(p) on the grid points inside the valid range."""
    params = params or tree_params_for(g)
    if not g.is_bipartite:
        raise DomainError("entropy dominance needs a bipartite graph")
    poly = poly or matching_polynomial(g)
    tol = get_config()["entropy_tol"]
    certs = []
    for p in p_grid:
        p = as_fraction(p)
        if p < 0 or p > params.p_max or p > poly.p_star:
            continue
        point = entropy_at(poly, p)
        certs.append(certify(
            "entropy_dominance", _inputs(g, a=params.a, b=params.b, p=p),
            point.lam, params.entropy(float(p)), exact=False, tolerance=tol,
        ))
    return certs


def verify_integral_inequality(g: Graph, t_grid: Sequence,
                               poly: Optional[MatchingPolynomial] = None) -> List[Certificate]:
    """ln M(G,t)/v >= ln S_d(t) / 2."""
    d, n = regular_bipartite(g)
    poly = poly or matching_polynomial(g)
    tol = get_config()["entropy_tol"]
    certs = []
    for t in t_grid:
        t = as_fraction(t)
        if t < 0:
            raise DomainError(f"t must be non-negative, got {t}")
        rhs = 0.5 * math.log(s_function(d, float(t)))
        certs.append(certify("integral", _inputs(g, d=d, t=t), free_energy(poly, t), rhs,
                             exact=False, tolerance=tol))
    return certs


def verify_matching_energy(g: Graph, poly: Optional[MatchingPolynomial] = None) -> Certificate:
    """ME(G)/v >= integral of |z| against the Kesten-McKay measure."""
    d, n = regular_bipartite(g)
    poly = poly or matching_polynomial(g)
    measure = matching_measure(poly)
    lhs = matching_energy(measure) / g.vertex_count
    rhs = tree_matching_energy(d) if d >= 2 else 1.0
    return certify("matching_energy", _inputs(g, d=d), lhs, rhs, exact=False, tolerance=ENERGY_TOL)


# ==================== DARROCH & HOEFFDING ====================

@dataclass
class DarrochResult:
    mean: Fraction
    kind: str                   # unique | pair | indeterminate
    modes: Tuple[int, ...]
    argmax: Tuple[int, ...]     # true maximisers of the weighted coefficients

    @property
    def consistent(self) -> bool:
        if self.kind == "indeterminate":
            return True
        return bool(set(self.argmax) & set(self.modes)) and set(self.argmax) <= set(self.modes)

    def to_dict(self) -> dict:
        return {
            "mean": render(self.mean),
            "kind": self.kind,
            "modes": list(self.modes),
            "argmax": list(self.argmax),
            "consistent": self.consistent,
        }


def darroch_classify(coeffs: Sequence[Fraction]) -> DarrochResult:
    """Locate the mode of a real-rooted positive-coefficient polynomial from its mean."""
    total = sum(coeffs, Fraction(0))
    mean = sum((j * c for j, c in enumerate(coeffs)), Fraction(0)) / total
    n = len(coeffs) - 1
    best = max(coeffs)
    argmax = tuple(j for j, c in enumerate(coeffs) if c == best)

    k = math.floor(mean)
    for j in (k, k + 1):
        if 0 <= j <= n and j - Fraction(1, n - j + 2) < mean < j + Fraction(1, j + 2):
            return DarrochResult(mean, "unique", (j,), argmax)
    if k + 1 <= n and k + Fraction(1, k + 2) < mean < k + 1 - Fraction(1, n - k + 1):
        return DarrochResult(mean, "pair", (k, k + 1), argmax)
    return DarrochResult(mean, "indeterminate", (), argmax)


def darroch_locate(poly: MatchingPolynomial, t) -> DarrochResult:
    """Mode of P(x) = M(G, t x) predicted from P'(1)/P(1)."""
    t = as_fraction(t)
    if t <= 0:
        raise DomainError("t must be positive")
    return darroch_classify([m * t ** k for k, m in enumerate(poly.coefficients)])


@dataclass
class CoefficientLaw:
    """
    a_j = m_j t^j / M(G,t), the law of the size of a random matching
    drawn with weight t per edge. By real-rootedness it is the law of a
    sum of independent Bernoulli(p_i), p_i = gamma_i t / (1 + gamma_i t)
    with gamma_i the squared positive roots of mu(G,x).
    """
    poly: MatchingPolynomial
    t: Fraction
    coefficients: List[Fraction]
    measure: Optional[MatchingMeasure] = None

    @cached_property
    def probabilities(self) -> List[float]:
        measure = self.measure or matching_measure(self.poly)
        gammas = [r * r for r, m in measure.roots if r > 0 for _ in range(m)]
        t = float(self.t)
        return [g * t / (1 + g * t) for g in gammas]

    def bernoulli_law(self) -> np.ndarray:
        """Poisson-binomial distribution of the probabilities."""
        law = np.array([1.0])
        for q in self.probabilities:
            law = np.convolve(law, [1 - q, q])
        return law

    def bernoulli_error(self) -> float:
        law = self.bernoulli_law()
        if len(law) != len(self.coefficients):
            raise ArithmeticError(f"{len(self.probabilities)} Bernoulli factors for nu = {self.poly.nu}")
        return float(max(abs(x - float(a)) for x, a in zip(law, self.coefficients)))

    def to_dict(self) -> dict:
        return {
            "t": render(self.t),
            "a": [render(a) for a in self.coefficients],
            "p": self.probabilities,
        }


def coefficient_distribution(poly: MatchingPolynomial, t,
                             measure: Optional[MatchingMeasure] = None) -> CoefficientLaw:
    t = as_fraction(t)
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    total = evaluate_M(poly, t)
    return CoefficientLaw(poly, t, [m * t ** j / total for j, m in enumerate(poly.coefficients)], measure)


def verify_hoeffding_coefficient(g: Graph, k: int, poly: Optional[MatchingPolynomial] = None,
                                 measure: Optional[MatchingMeasure] = None) -> Certificate:
    """
    a_k >= p_mu(nu, k) at t = t(G, 2k/v). Given the matching measure, the
    Bernoulli decomposition of the a_j is checked as well.
    """
    poly = poly or matching_polynomial(g)
    nu = poly.nu
    p = Fraction(2 * k, g.vertex_count)
    if k < 0 or p >= poly.p_star and k > 0:
        raise DomainError(f"p = 2k/v = {p} must be below p* = {poly.p_star}")
    t = activity_exact(poly, p)
    law = coefficient_distribution(poly, t, measure)
    dist = law.coefficients
    mean = sum((j * a for j, a in enumerate(dist)), Fraction(0))
    total = sum(dist, Fraction(0))
    extras = {"total": total, "mean_error": float(abs(mean - k))}
    if measure is not None:
        extras["bernoulli_error"] = law.bernoulli_error()
    return certify(
        "hoeffding", _inputs(g, k=k, n=nu, t=float(t)), dist[k], p_mu(nu, k),
        exact=False, tolerance=HOEFFDING_TOL, **extras,
    )


def hoeffding_interval(g: Graph, k: int, lo: int, hi: int,
                       poly: Optional[MatchingPolynomial] = None) -> Certificate:
    """P(lo <= S <= hi) >= sum_{j=lo..hi} C(n,j) p^j (1-p)^(n-j), p = k/n."""
    poly = poly or matching_polynomial(g)
    nu = poly.nu
    if not lo <= k <= hi:
        raise DomainError("need lo <= k <= hi")
    t = activity_exact(poly, Fraction(2 * k, g.vertex_count))
    dist = coefficient_distribution(poly, t).coefficients
    p = Fraction(k, nu)
    lhs = sum(dist[max(lo, 0): hi + 1], Fraction(0))
    rhs = sum(
        (math.comb(nu, j) * p ** j * (1 - p) ** (nu - j) for j in range(max(lo, 0), min(hi, nu) + 1)),
        Fraction(0),
    )
    return certify("hoeffding_interval", _inputs(g, k=k, lo=lo, hi=hi), lhs, rhs,
                   exact=False, tolerance=HOEFFDING_TOL)


# ==================== ENERGY IDENTITY ====================

def _log_M(log_m: np.ndarray, x: float) -> float:
    if x <= 0:
        return 0.0
    return float(logsumexp(log_m + np.arange(len(log_m)) * math.log(x)))


def energy_by_integral(poly: MatchingPolynomial) -> float:
    """
    (1/pi) int_0^inf t^-2 int ln(1 + t^2 z^2) d rho(z) dt. The inner
    integral is 2 ln M(G, t^2) / v, so no roots are needed.
    """
    if poly.vertex_count == 0:
        return 0.0
    log_m = np.array([math.log(m) for m in poly.coefficients])
    m1 = poly.m(1)

    def integrand(t):
        if t < 1e-8:
            return float(m1)
        return _log_M(log_m, t * t) / (t * t)

    value, _ = integrate.quad(integrand, 0, np.inf, limit=200)
    return 2 * value / (math.pi * poly.vertex_count)


def verify_energy_identity(g: Graph, poly: Optional[MatchingPolynomial] = None) -> Certificate:
    """ME(G)/v from the roots agrees with the integral form."""
    poly = poly or matching_polynomial(g)
    from_roots = matching_energy(matching_measure(poly)) / max(g.vertex_count, 1)
    from_integral = energy_by_integral(poly)
    return certify(
        "energy_identity", _inputs(g), -abs(from_roots - from_integral), 0.0,
        exact=False, tolerance=IDENTITY_TOL,
        from_roots=from_roots, from_integral=from_integral,
    )
