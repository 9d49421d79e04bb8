"""Multigraphs whose vertex degrees lie in a finite set D.

The degree polynomial is ``Delta(x) = sum_{d in D} x^d / d!`` and the saddle
point ``chi`` solves ``chi Delta'(chi) / Delta(chi) = 2m/n``.  Numerics go
through the tilted law ``P(X = d) = chi^d / (d! Delta(chi))``: every ratio
``Delta^(s)(chi) / Delta(chi)`` equals ``E[X (X-1) ... (X-s+1)] / chi^s``,
which keeps the evaluations overflow-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable

from .graphs import (
    LabeledMultigraph,
    automorphism_count,
    essential_density,
    is_strictly_balanced,
)
from .census import HypothesisError, poisson_pmf
from .series import (
    DegreeMarkedGF,
    MarkedTerm,
    TruncSeries,
    TruncationError,
    int_poly_pow,
    substitute_degree_marks,
)

CHI_TOLERANCE = 1e-12


class InfeasibleParameters(ValueError):
    """The edge ratio is outside the open interval (min D, max D)."""


@dataclass(frozen=True)
class DegreeSet:
    degrees: tuple

    def __init__(self, degrees: Iterable[int]):
        ds = tuple(sorted(set(int(d) for d in degrees)))
        if not ds:
            raise ValueError("degree set must be nonempty")
        if ds[0] < 0:
            raise ValueError("degrees must be nonnegative")
        object.__setattr__(self, "degrees", ds)

    @classmethod
    def parse(cls, text: str) -> "DegreeSet":
        return cls(int(t) for t in text.split(",") if t.strip())

    @property
    def min(self) -> int:
        return self.degrees[0]

    @property
    def max(self) -> int:
        return self.degrees[-1]

    @property
    def is_aperiodic(self) -> bool:
        """``gcd(d - min D) == 1``; needs at least two degrees."""
        return reduce(math.gcd, (d - self.min for d in self.degrees), 0) == 1

    def require_two_degrees(self) -> None:
        if len(self.degrees) < 2:
            raise InfeasibleParameters(f"D={set(self.degrees)} has a single degree (regular case)")

    def poly(self) -> list[Fraction]:
        """Dense coefficients of Delta(x)."""
        out = [Fraction(0)] * (self.max + 1)
        for d in self.degrees:
            out[d] = Fraction(1, math.factorial(d))
        return out

    def derivative(self, s: int) -> list[Fraction]:
        """Coefficients of the s-th derivative; the zero polynomial once s > max D."""
        out = [Fraction(0)] * max(1, self.max - s + 1)
        for d in self.degrees:
            if d >= s:
                out[d - s] = Fraction(1, math.factorial(d - s))
        return out

    def evaluate(self, x: float, s: int = 0) -> float:
        return sum(x ** (d - s) / math.factorial(d - s) for d in self.degrees if d >= s)

    def tilted(self, x: float) -> dict[int, float]:
        """``P(X = d) = x^d / (d! Delta(x))``."""
        if x <= 0:
            return {self.min: 1.0}
        logs = {d: d * math.log(x) - math.lgamma(d + 1) for d in self.degrees}
        top = max(logs.values())
        weights = {d: math.exp(v - top) for d, v in logs.items()}
        total = sum(weights.values())
        return {d: w / total for d, w in weights.items()}

    def falling_moment(self, x: float, s: int) -> float:
        """``E[X (X-1) ... (X-s+1)]`` under the tilted law."""
        return sum(p * math.perm(d, s) for d, p in self.tilted(x).items() if d >= s)

    def log_delta(self, x: float) -> float:
        logs = [d * math.log(x) - math.lgamma(d + 1) for d in self.degrees]
        top = max(logs)
        return top + math.log(sum(math.exp(v - top) for v in logs))

    def mean(self, x: float) -> float:
        return self.falling_moment(x, 1)

    def variance(self, x: float) -> float:
        p = self.tilted(x)
        mu = sum(d * q for d, q in p.items())
        return sum(q * (d - mu) ** 2 for d, q in p.items())

    def __iter__(self):
        return iter(self.degrees)

    def __len__(self) -> int:
        return len(self.degrees)

    def __str__(self) -> str:
        return ",".join(str(d) for d in self.degrees)


@dataclass(frozen=True)
class ChiSolution:
    chi: float
    target: float
    residual: float
    iterations: int


def check_ratio(D: DegreeSet, ratio: float) -> None:
    if ratio == D.min or ratio == D.max:
        raise InfeasibleParameters(
            f"2m/n = {ratio} sits on the boundary of [min D, max D] = [{D.min}, {D.max}]: "
            "every vertex has the extreme degree (regular case)"
        )
    if not D.min < ratio < D.max:
        raise InfeasibleParameters(
            f"2m/n = {ratio} lies outside [min D, max D] = [{D.min}, {D.max}]: "
            "no multigraph has these parameters"
        )


def solve_chi(D: DegreeSet, ratio: float, max_iter: int = 200) -> ChiSolution:
    """Unique positive root of ``x Delta'(x) / Delta(x) = ratio``.

    The left side is the tilted mean, strictly increasing with derivative
    ``Var / x``.  Newton steps run inside a bisection bracket.
    """
    D.require_two_degrees()
    check_ratio(D, ratio)
    lo, hi = 0.0, 1.0
    while D.mean(hi) < ratio:
        lo, hi = hi, hi * 2
        if hi > 1e300:
            raise ArithmeticError("could not bracket chi")
    x = (lo + hi) / 2 if lo > 0 else hi / 2
    for it in range(1, max_iter + 1):
        f = D.mean(x) - ratio
        if abs(f) <= CHI_TOLERANCE:
            return ChiSolution(x, ratio, abs(f), it)
        if f < 0:
            lo = x
        else:
            hi = x
        slope = D.variance(x) / x
        step = x - f / slope if slope > 0 else None
        x = step if step is not None and lo < step < hi else (lo + hi) / 2
    f = D.mean(x) - ratio
    if abs(f) > CHI_TOLERANCE:
        raise ArithmeticError(f"chi iteration stalled with residual {abs(f)}")
    return ChiSolution(x, ratio, abs(f), max_iter)


def chi_for(n: int, m: int, D: DegreeSet) -> ChiSolution:
    return solve_chi(D, 2 * m / n)


# --- exact counts ----------------------------------------------------------


def delta_power_coefficient(D: DegreeSet, n: int, j: int) -> Fraction:
    """``[x^j] Delta(x)^n`` exactly."""
    scale = math.factorial(D.max)
    ints = [int(c * scale) for c in D.poly()]
    raw = int_poly_pow(ints, n, j)
    return Fraction(raw[j], scale ** n)


def mg_count(n: int, m: int, D: DegreeSet) -> int:
    """``(2m)! [x^{2m}] Delta(x)^n``: number of (n, m, D)-multigraphs."""
    if n == 0:
        return 1 if m == 0 else 0
    if 2 * m > n * D.max or 2 * m < n * D.min:
        return 0
    value = delta_power_coefficient(D, n, 2 * m) * math.factorial(2 * m)
    assert value.denominator == 1
    return int(value)


def pattern_marked_gf(f: LabeledMultigraph) -> DegreeMarkedGF:
    """``prod_v delta_{deg v} w^l z^k / aut(F)`` for a multigraph pattern."""
    return DegreeMarkedGF((MarkedTerm(Fraction(1, automorphism_count(f)), f.n, f.m, tuple(f.degrees())),))


def single_edge_gf() -> DegreeMarkedGF:
    """Family of one-edge multigraphs: a link between two vertices, or a loop."""
    return DegreeMarkedGF(
        (
            MarkedTerm(Fraction(1, 2), 2, 1, (1, 1)),
            MarkedTerm(Fraction(1, 2), 1, 1, (2,)),
        )
    )


def distinguished_dc_exact(g: DegreeMarkedGF, n: int, m: int, D: DegreeSet) -> int:
    """(n, m, D)-multigraphs with one distinguished family subgraph.

    ``n! 2^m m! [z^n w^m] sum_j (2j)! [x^{2j}] F(z, w, (Delta, Delta', ...)) e^{z Delta(x)} w^j/(2^j j!)``
    """
    if n == 0:
        return 0
    fam = substitute_degree_marks(g, D.poly(), 2 * m).truncate({"z": n, "w": m})
    z_delta = TruncSeries(
        {(1, 0, 0, p): c for p, c in enumerate(D.poly()) if c}, {"z": n, "x": 2 * m}
    )
    series = fam * z_delta.exp()
    total = Fraction(0)
    for j in range(m + 1):
        c = series.extract(z=n, w=m - j, x=2 * j)
        if c:
            total += c * Fraction(math.factorial(2 * j), 2 ** j * math.factorial(j))
    value = total * math.factorial(n) * 2 ** m * math.factorial(m)
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral count {value}")
    return int(value)


def _log_family_at_saddle(term: MarkedTerm, n: int, m: int, D: DegreeSet, chi: float) -> float:
    # log of coeff (n/Delta)^k (chi^2/2m)^l prod Delta^(s)(chi), -inf when a mark vanishes
    log_ratio_sum = 0.0
    for s in term.degrees:
        fm = D.falling_moment(chi, s)
        if fm <= 0:
            return -math.inf
        log_ratio_sum += math.log(fm) - s * math.log(chi)
    log_delta = D.log_delta(chi)
    return (
        math.log(term.coeff)
        + term.z_pow * (math.log(n) - log_delta)
        + term.w_pow * (2 * math.log(chi) - math.log(2 * m))
        + len(term.degrees) * log_delta
        + log_ratio_sum
    )


def family_at_saddle(g: DegreeMarkedGF, n: int, m: int, D: DegreeSet) -> float:
    """``F(n/Delta(chi), chi^2/(2m), (Delta(chi), Delta'(chi), ...))``."""
    chi = chi_for(n, m, D).chi
    return sum(math.exp(v) for v in (_log_family_at_saddle(t, n, m, D, chi) for t in g.terms) if v > -math.inf)


def distinguished_dc_asymptotic(g: DegreeMarkedGF, n: int, m: int, D: DegreeSet) -> float:
    """``MG(n, m, D) * F(n/Delta(chi), chi^2/(2m), (Delta(chi), ...))``."""
    fam = family_at_saddle(g, n, m, D)
    if fam == 0:
        return 0.0
    return math.exp(math.log(mg_count(n, m, D)) + math.log(fam))


# --- limit laws -------------------------------------------------------------


def rho(n: int, m: int, D: DegreeSet) -> float:
    """``(n/2m) chi^2 Delta''(chi) / Delta(chi)``, the per-step cycle weight."""
    chi = chi_for(n, m, D).chi
    return D.falling_moment(chi, 2) / (2 * m / n)


def expected_count_dc(f: LabeledMultigraph, n: int, m: int, D: DegreeSet) -> tuple[float, float]:
    """Exact mean count of F in a uniform (n, m, D)-multigraph, with the growth exponent ``l*(1/d* - 1)``."""
    total = mg_count(n, m, D)
    if total == 0:
        raise InfeasibleParameters(f"no ({n}, {m}, D={D})-multigraphs")
    mean = float(Fraction(distinguished_dc_exact(pattern_marked_gf(f), n, m, D), total))
    return mean, growth_exponent_dc(f)


def growth_exponent_dc(f: LabeledMultigraph) -> float:
    d_star, _, ell_star = essential_density(f)
    return ell_star * (1 / float(d_star) - 1)


def is_aas_absent(f) -> bool:
    """Essential density above 1: neither a forest nor unicyclic, so a.a.s. absent."""
    d_star, _, _ = essential_density(f)
    return d_star > 1


def poisson_lambda_dc(f: LabeledMultigraph, n: int, m: int, D: DegreeSet) -> float:
    """``(1/aut) n^k/(2m)^l chi^{2l}/Delta(chi)^k prod_v Delta^(deg v)(chi)`` at the current (n, m)."""
    if not is_strictly_balanced(f):
        raise HypothesisError("the Poisson limit needs a strictly balanced pattern")
    chi = chi_for(n, m, D).chi
    # chi powers cancel because the degrees sum to 2l
    log_lam = -math.log(automorphism_count(f)) + f.n * math.log(n) - f.m * math.log(2 * m)
    for s in f.degrees():
        fm = D.falling_moment(chi, s)
        if fm <= 0:
            return 0.0
        log_lam += math.log(fm)
    return math.exp(log_lam)


def poisson_lambda_dc_drift(f: LabeledMultigraph, ratio: float) -> int:
    """Exponent of n in the parameter when m = ratio * n / 2; nonzero means it drifts to 0 or infinity."""
    return f.n - f.m


def cycle_lambdas(k_max: int, n: int, m: int, D: DegreeSet, include_short: bool = False) -> dict[int, float]:
    """Poisson means ``rho^j / (2j)`` of j-cycle counts; j from 3 (or 1) to k_max."""
    if k_max < 3:
        raise ValueError("k_max must be at least 3")
    r = rho(n, m, D)
    start = 1 if include_short else 3
    return {j: r ** j / (2 * j) for j in range(start, k_max + 1)}


def simple_probability(n: int, m: int, D: DegreeSet) -> float:
    """Limit probability that a uniform (n, m, D)-multigraph has no loop and no double edge."""
    r = rho(n, m, D)
    return math.exp(-r / 2 - r * r / 4)


def log_simple_graph_count_estimate(n: int, m: int, D: DegreeSet) -> float:
    mg = mg_count(n, m, D)
    if mg == 0:
        return -math.inf
    return math.log(mg) - m * math.log(2) - math.lgamma(m + 1) + math.log(simple_probability(n, m, D))


def simple_graph_count_estimate(n: int, m: int, D: DegreeSet) -> float:
    """``MG/(2^m m!) * exp(-rho/2 - rho^2/4)``: asymptotic number of (n, m, D)-graphs."""
    return math.exp(log_simple_graph_count_estimate(n, m, D))


def cycle_joint_pmf(lams: dict[int, float], counts: dict[int, int]) -> float:
    out = 1.0
    for j, lam in lams.items():
        out *= poisson_pmf(lam, counts.get(j, 0))
    return out
