"""Exact and asymptotic subgraph counts in uniform random (n, m)-graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import (
    LabeledGraph,
    automorphism_count,
    density,
    essential_density,
    is_strictly_balanced,
)
from .patchwork import PatchworkTable, cached_table, max_copies, patchwork_gf, pattern_gf
from .series import TruncSeries, TruncationError, binom_power, exp_z


class HypothesisError(ValueError):
    """The pattern or regime does not satisfy the assumptions of a limit law."""


@dataclass(frozen=True)
class RegimeSpec:
    """Asymptotic regime ``m = c * n**beta``."""

    c: float
    beta: float
    description: str = ""

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("regime constant must be positive")
        if not 0 < self.beta < 2:
            raise ValueError("regime exponent must lie in (0, 2)")

    @classmethod
    def poisson_window(cls, f: LabeledGraph, c: float) -> "RegimeSpec":
        d = density(f)
        return cls(c, float(2 - 1 / d), f"m ~ {c} n^(2 - 1/{d})")

    def edges(self, n: int) -> int:
        return round(self.c * n ** self.beta)


@dataclass
class CensusResult:
    n: int
    m: int
    pattern: str
    formula: str
    exact: int | Fraction | None = None
    asymptotic: float | None = None
    distribution: dict = field(default_factory=dict)

    @property
    def relative_error(self) -> float | None:
        if self.exact is None or self.asymptotic is None or self.exact == 0:
            return None
        return abs(float(self.exact) - self.asymptotic) / float(self.exact)

    def to_json_dict(self) -> dict:
        out = {
            "n": self.n,
            "m": self.m,
            "pattern": self.pattern,
            "exact": None if self.exact is None else str(self.exact),
            "asymptotic": self.asymptotic,
            "relative_error": self.relative_error,
        }
        if self.distribution:
            out["distribution"] = {str(t): str(c) for t, c in sorted(self.distribution.items())}
        return out


def _graph_kernel(n: int, m: int) -> TruncSeries:
    # e^z (1+w)^C(n,2) truncated at z^n w^m
    return exp_z(n) * binom_power(math.comb(n, 2), m)


def _require_trunc(series: TruncSeries, n: int, m: int) -> None:
    for name, need in (("z", n), ("w", m)):
        order = series.order(name)
        if order is not None and order < need:
            raise TruncationError(f"family GF truncated at {name}^{order}, need {name}^{need}")


def distinguished_count_exact(family_gf: TruncSeries, n: int, m: int) -> int:
    """``n! [z^n w^m] F(z, w/(1+w)) e^z (1+w)^C(n,2)``."""
    if m > math.comb(n, 2):
        raise ValueError(f"no (n, m)-graphs with n={n}, m={m}")
    _require_trunc(family_gf, n, m)
    fam = family_gf.truncate({"z": n, "w": m}).subst_edge_var()
    value = (fam * _graph_kernel(n, m)).extract(z=n, w=m) * math.factorial(n)
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral count {value}")
    return int(value)


def log_binomial(a: int, b: int) -> float:
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


def pattern_eval(f: LabeledGraph, n: float, p: float) -> float:
    """``F(n, p) = p**l * n**k / aut(F)`` for the family of F-graphs."""
    return p ** f.m * n ** f.n / automorphism_count(f)


def distinguished_count_asymptotic(family_eval: float, n: int, m: int) -> float:
    """``C(C(n,2), m) * F(n, m/C(n,2))`` given the evaluated family GF."""
    if family_eval == 0:
        return 0.0
    return math.exp(log_binomial(math.comb(n, 2), m) + math.log(family_eval))


def census_distinguished(f: LabeledGraph, n: int, m: int, name: str = "") -> CensusResult:
    exact = distinguished_count_exact(pattern_gf(f, n, m), n, m)
    p = m / math.comb(n, 2) if n >= 2 else 0.0
    asym = distinguished_count_asymptotic(pattern_eval(f, n, p), n, m)
    return CensusResult(n, m, name or f"({f.n},{f.m})-pattern", "distinguished", exact, asym)


def expected_count(f: LabeledGraph, n: int, m: int, exact: bool = True) -> float:
    """Mean number of F-subgraphs in a uniform (n, m)-graph."""
    total = math.comb(math.comb(n, 2), m)
    if exact:
        return float(Fraction(distinguished_count_exact(pattern_gf(f, n, m), n, m), total))
    p = m / math.comb(n, 2)
    return pattern_eval(f, n, p)


def expected_count_exponent(f: LabeledGraph, alpha: float) -> float:
    """Growth exponent ``l* (alpha - 2 + 1/d*)`` of the mean count when m = O(n^alpha)."""
    d_star, _, ell_star = essential_density(f)
    return ell_star * (alpha - 2 + 1 / float(d_star))


def aas_absence_threshold(f: LabeledGraph) -> Fraction:
    """Below ``m = n**(2 - 1/d*)`` a random graph a.a.s. has no F-subgraph."""
    d_star, _, _ = essential_density(f)
    return 2 - 1 / d_star


def expected_count_log_slope(f: LabeledGraph, ns, alpha: float, c: float = 1.0, exact: bool = True) -> float:
    """Least-squares slope of log E(G[F]) against log n along ``m = c n**alpha``."""
    xs, ys = [], []
    for n in ns:
        m = max(0, min(math.comb(n, 2), round(c * n ** alpha)))
        e = expected_count(f, n, m, exact=exact)
        if e > 0:
            xs.append(math.log(n))
            ys.append(math.log(e))
    if len(xs) < 2:
        raise ValueError("need at least two grid points with a positive mean")
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)


def sg_exact(f: LabeledGraph, n: int, m: int, table: PatchworkTable | None = None) -> list[int]:
    """Number of (n, m)-graphs with exactly t F-subgraphs, for t = 0, 1, ...

    ``n! [z^n w^m u^t] Patch_F(z, w/(1+w), u-1) e^z (1+w)^C(n,2)``.
    """
    if m > math.comb(n, 2):
        raise ValueError(f"no (n, m)-graphs with n={n}, m={m}")
    if table is None:
        table = cached_table(f, n)
    if table.pattern != f:
        raise ValueError("patchwork table was built for a different pattern")
    if table.n_max < n or table.m_max < m or not table.complete_in_t:
        raise TruncationError(
            f"patchwork table bounds (n<={table.n_max}, m<={table.m_max}, t<={table.t_max}) "
            f"do not cover ({n}, {m}) with every t"
        )
    patch = patchwork_gf(table).truncate({"z": n, "w": m}).subst_edge_var().shift("u", -1)
    series = patch * _graph_kernel(n, m)
    top = max_copies(f, n)
    dist = []
    for t in range(top + 1):
        v = series.extract(z=n, w=m, u=t) * math.factorial(n)
        if v.denominator != 1 or v < 0:
            raise ArithmeticError(f"SG coefficient at t={t} is not a count: {v}")
        dist.append(int(v))
    while len(dist) > 1 and dist[-1] == 0:
        dist.pop()
    return dist


def poisson_lambda_gnm(f: LabeledGraph, regime: RegimeSpec) -> float:
    """Poisson mean ``(2c)**l / aut(F)`` at the threshold ``m ~ c n^(2 - 1/d)``."""
    if not is_strictly_balanced(f):
        raise HypothesisError("the Poisson limit needs a strictly balanced pattern")
    want = 2 - 1 / float(density(f))
    if not math.isclose(regime.beta, want, rel_tol=1e-12, abs_tol=1e-12):
        raise HypothesisError(f"regime exponent {regime.beta} differs from 2 - 1/d = {want}")
    return (2 * regime.c) ** f.m / automorphism_count(f)


def poisson_pmf(lam: float, t: int) -> float:
    if t < 0:
        return 0.0
    if lam == 0:
        return 1.0 if t == 0 else 0.0
    return math.exp(t * math.log(lam) - lam - math.lgamma(t + 1))
