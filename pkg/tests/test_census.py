import math
from collections import Counter
from fractions import Fraction

import pytest

from subgraph_gf.census import (
    CensusResult,
    HypothesisError,
    RegimeSpec,
    aas_absence_threshold,
    census_distinguished,
    distinguished_count_asymptotic,
    distinguished_count_exact,
    expected_count,
    expected_count_exponent,
    expected_count_log_slope,
    pattern_eval,
    poisson_lambda_gnm,
    poisson_pmf,
    sg_exact,
)
from subgraph_gf.graphs import complete_graph, cycle_graph, enumerate_graphs, path_graph, subgraph_count
from subgraph_gf.patchwork import build_table, pattern_gf
from subgraph_gf.series import TruncationError

K2 = complete_graph(2)
C3 = cycle_graph(3)
C4 = cycle_graph(4)
K4 = complete_graph(4)


def oracle_hist(f, n, m):
    return Counter(subgraph_count(g, f) for g in enumerate_graphs(n, m))


def test_distinguished_examples():
    assert distinguished_count_exact(pattern_gf(C3), 4, 3) == 4
    assert distinguished_count_exact(pattern_gf(K2), 3, 2) == 6
    assert distinguished_count_exact(pattern_gf(C3), 6, 0) == 0


@pytest.mark.parametrize("f", [path_graph(3), C4])
@pytest.mark.parametrize("n", [4, 5])
def test_distinguished_matches_oracle(f, n):
    for m in range(math.comb(n, 2) + 1):
        want = sum(t * c for t, c in oracle_hist(f, n, m).items())
        assert distinguished_count_exact(pattern_gf(f), n, m) == want


def test_distinguished_rejects_short_truncation():
    with pytest.raises(TruncationError):
        distinguished_count_exact(pattern_gf(C3, 3, 3), 5, 4)


def test_asymptotic_examples():
    # n^3/6 against C(n,3) and p^3 against falling ratios: the gap at n = 12 is about 64%
    errs = [census_distinguished(C3, n, n).relative_error for n in (8, 10, 12)]
    assert errs[0] > errs[1] > errs[2] > 0.5
    assert distinguished_count_asymptotic(pattern_eval(C3, 10, 0.0), 10, 0) == 0.0
    # the K2 estimate is C(N, m) * m * n/(n-1); the exact count is C(N, m) * m
    n, m = 8, 8
    r = census_distinguished(K2, n, m)
    assert r.exact == math.comb(28, 8) * 8
    assert r.asymptotic == pytest.approx(r.exact * n / (n - 1), rel=1e-12)


def test_census_result_json():
    r = CensusResult(4, 3, "c3", "distinguished", 4, 3.5, {0: 16, 1: 4})
    out = r.to_json_dict()
    assert out["exact"] == "4"
    assert out["distribution"] == {"0": "16", "1": "4"}
    assert out["relative_error"] == pytest.approx(0.125)


def test_thresholds_and_expectations():
    assert aas_absence_threshold(C3) == 1
    # d*(K4) = 3/2, so 2 - 1/d* = 4/3
    assert aas_absence_threshold(K4) == Fraction(4, 3)
    assert expected_count(C3, 4, 3) == pytest.approx(0.2)
    assert expected_count_exponent(C3, 1.0) == pytest.approx(0.0)
    assert expected_count_exponent(K4, 1.0) == pytest.approx(-2.0)


def test_expected_count_slope_tracks_exponent():
    # m = n^1.25 for triangles: exponent 3 * (1.25 - 1)
    slope = expected_count_log_slope(C3, [200, 400, 800, 1600], 1.25, exact=False)
    assert slope == pytest.approx(0.75, abs=0.02)


def test_sg_examples():
    assert sg_exact(C3, 4, 3) == [16, 4]
    dist = sg_exact(K2, 5, 4)
    assert dist[4] == 210 and sum(dist[:4]) == 0
    hist = oracle_hist(C3, 5, 4)
    assert sg_exact(C3, 5, 4) == [hist.get(t, 0) for t in range(max(hist) + 1)]


def test_sg_needs_complete_table():
    partial = build_table(C3, 5, t_max=1)
    with pytest.raises(TruncationError):
        sg_exact(C3, 5, 4, table=partial)


@pytest.mark.parametrize("f, c, want", [
    (C3, 0.5, 1 / 6),
    (C4, 0.5, 1 / 8),
    (K4, 1.0, 8 / 3),
])
def test_poisson_lambda_examples(f, c, want):
    assert poisson_lambda_gnm(f, RegimeSpec.poisson_window(f, c)) == pytest.approx(want)


def test_poisson_lambda_hypotheses():
    with pytest.raises(HypothesisError):
        poisson_lambda_gnm(C3, RegimeSpec(0.5, 1.2))
    pendant = complete_graph(4)
    pendant = type(pendant)(5, pendant.edges | {(4, 5)})
    with pytest.raises(HypothesisError):
        poisson_lambda_gnm(pendant, RegimeSpec(1.0, 1.5))


def test_regime_validation():
    with pytest.raises(ValueError):
        RegimeSpec(-1, 1.0)
    with pytest.raises(ValueError):
        RegimeSpec(1, 2.5)
    assert RegimeSpec.poisson_window(C3, 0.5).edges(3000) == 1500


def test_poisson_pmf_examples():
    assert poisson_pmf(0, 0) == 1
    assert poisson_pmf(1, 1) == pytest.approx(math.exp(-1))
    assert poisson_pmf(1 / 6, 0) == pytest.approx(math.exp(-1 / 6))
    assert poisson_pmf(2, -1) == 0
