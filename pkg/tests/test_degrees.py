import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subgraph_gf.census import HypothesisError
from subgraph_gf.degrees import (
    DegreeSet,
    InfeasibleParameters,
    cycle_lambdas,
    distinguished_dc_asymptotic,
    distinguished_dc_exact,
    expected_count_dc,
    growth_exponent_dc,
    is_aas_absent,
    mg_count,
    pattern_marked_gf,
    poisson_lambda_dc,
    poisson_lambda_dc_drift,
    rho,
    simple_graph_count_estimate,
    simple_probability,
    single_edge_gf,
    solve_chi,
)
from subgraph_gf.graphs import (
    LabeledMultigraph,
    complete_graph,
    enumerate_graphs,
    enumerate_multigraphs,
    multigraph_cycle,
    path_graph,
    subgraph_count,
)

D13 = DegreeSet({1, 3})
D02 = DegreeSet({0, 2})


def test_chi_examples():
    assert solve_chi(D13, 2.0).chi == pytest.approx(math.sqrt(6), rel=1e-13)
    assert solve_chi(D02, 1.0).chi == pytest.approx(math.sqrt(2), rel=1e-13)
    assert solve_chi(D13, 2.0).residual <= 1e-12


def test_chi_tends_to_zero_at_lower_boundary():
    chis = [solve_chi(D13, 1 + eps).chi for eps in (0.5, 0.1, 0.01, 0.001)]
    assert all(a > b for a, b in zip(chis, chis[1:]))
    assert chis[-1] < 0.06


def test_ratio_trichotomy():
    with pytest.raises(InfeasibleParameters, match="regular"):
        solve_chi(D13, 3.0)
    with pytest.raises(InfeasibleParameters, match="regular"):
        solve_chi(D13, 1.0)
    with pytest.raises(InfeasibleParameters):
        solve_chi(D13, 3.5)
    with pytest.raises(InfeasibleParameters):
        solve_chi(DegreeSet({2}), 2.0)


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(0, 6), min_size=2, max_size=4), st.floats(0.01, 0.99))
def test_chi_solves_saddle_equation(degs, frac):
    D = DegreeSet(degs)
    ratio = D.min + frac * (D.max - D.min)
    sol = solve_chi(D, ratio)
    assert D.mean(sol.chi) == pytest.approx(ratio, rel=1e-10)


@pytest.mark.parametrize("n, m, D, want", [
    (2, 1, {1}, 2),
    (1, 1, {2}, 1),
    (3, 3, {2}, 90),
    (3, 3, {1}, 0),
    (0, 0, {1}, 1),
])
def test_mg_examples(n, m, D, want):
    assert mg_count(n, m, DegreeSet(D)) == want


@pytest.mark.parametrize("n, m", [(2, 2), (3, 2), (4, 2)])
@pytest.mark.parametrize("D", [{1, 2}, {0, 2}, {1, 3}, {0, 1, 2, 3}])
def test_mg_matches_enumeration(n, m, D):
    assert mg_count(n, m, DegreeSet(D)) == sum(1 for _ in enumerate_multigraphs(n, m, D))


def test_mg_large_is_consistent_with_small_recurrence():
    # D = {0, 1}: choose the 2m vertices of degree one, then pair half-edges
    n, m = 200, 40
    assert mg_count(n, m, DegreeSet({0, 1})) == math.comb(n, 2 * m) * math.factorial(2 * m)


def test_single_edge_family_is_m_times_mg():
    for n, m, D in [(3, 3, {2}), (2, 2, {1, 3}), (3, 2, {0, 1, 2})]:
        D = DegreeSet(D)
        assert distinguished_dc_exact(single_edge_gf(), n, m, D) == m * mg_count(n, m, D)


def _oracle(f, n, m, D, **bounds):
    return sum(subgraph_count(g, f) for g in enumerate_multigraphs(n, m, D, **bounds))


def test_loop_family_matches_oracle():
    loop = multigraph_cycle(1)
    assert distinguished_dc_exact(pattern_marked_gf(loop), 2, 2, DegreeSet({2})) == _oracle(loop, 2, 2, {2})


@pytest.mark.parametrize("n, m, D", [(4, 4, {1, 3}), (4, 4, {1, 2, 3}), (3, 3, {2}), (3, 3, {2, 3})])
def test_triangle_family_matches_oracle(n, m, D):
    c3 = multigraph_cycle(3)
    assert distinguished_dc_exact(pattern_marked_gf(c3), n, m, DegreeSet(D)) == _oracle(c3, n, m, D)


def test_double_edge_family_matches_oracle():
    c2 = multigraph_cycle(2)
    assert distinguished_dc_exact(pattern_marked_gf(c2), 3, 3, DegreeSet({1, 2, 3})) == _oracle(c2, 3, 3, {1, 2, 3})


def test_asymptotic_vanishes_for_excess_degree():
    star = LabeledMultigraph(5, ((1, 2), (1, 3), (1, 4), (1, 5)))
    assert distinguished_dc_asymptotic(pattern_marked_gf(star), 20, 20, D13) == 0.0


def test_asymptotic_ratio_improves_with_n():
    g = pattern_marked_gf(multigraph_cycle(3))
    errs = []
    for n in (8, 10, 12):
        exact = distinguished_dc_exact(g, n, n, D13)
        errs.append(abs(exact - distinguished_dc_asymptotic(g, n, n, D13)) / exact)
    assert errs[0] > errs[1] > errs[2]


def test_growth_exponents():
    tree = LabeledMultigraph.from_graph(path_graph(4))
    assert growth_exponent_dc(tree) > 0 and not is_aas_absent(tree)
    assert growth_exponent_dc(multigraph_cycle(4)) == pytest.approx(0.0)
    k4 = LabeledMultigraph.from_graph(complete_graph(4))
    assert growth_exponent_dc(k4) < 0 and is_aas_absent(k4)
    mean, expo = expected_count_dc(multigraph_cycle(3), 4, 4, DegreeSet({1, 2, 3}))
    assert mean > 0 and expo == pytest.approx(0.0)


def test_poisson_lambda_examples():
    n, m = 10_000, 10_000
    assert poisson_lambda_dc(multigraph_cycle(3), n, m, D13) == pytest.approx(9 / 16, rel=1e-9)
    assert poisson_lambda_dc(multigraph_cycle(1), n, m, D13) == pytest.approx(3 / 4, rel=1e-9)
    assert poisson_lambda_dc_drift(LabeledMultigraph.from_graph(complete_graph(4)), 2.0) == -2
    assert poisson_lambda_dc_drift(multigraph_cycle(5), 2.0) == 0
    with pytest.raises(HypothesisError):
        two_triangles = LabeledMultigraph(6, ((1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)))
        poisson_lambda_dc(two_triangles, n, m, D13)


def test_cycle_lambda_examples():
    assert rho(1000, 1000, D13) == pytest.approx(1.5, rel=1e-12)
    lams = cycle_lambdas(5, 1000, 1000, D13)
    assert lams[3] == pytest.approx(9 / 16) and lams[4] == pytest.approx(81 / 128)
    assert lams[5] == pytest.approx(1.5 ** 5 / 10)
    lams = cycle_lambdas(6, 100, 50, D02, include_short=True)
    for j, lam in lams.items():
        assert lam == pytest.approx(1 / (2 * j))
    assert all(v == 0 for v in cycle_lambdas(5, 10, 3, DegreeSet({0, 1})).values())


def test_simple_probability_examples():
    assert simple_probability(10, 3, DegreeSet({0, 1})) == 1.0
    assert simple_probability(1000, 1000, D13) == pytest.approx(math.exp(-3 / 4 - 9 / 16))


@pytest.mark.parametrize("n, m, D", [(5, 5, {1, 2, 3}), (5, 4, {1, 2}), (5, 6, {2, 3}), (4, 4, {1, 2, 3})])
def test_simple_graph_estimate_against_oracle(n, m, D):
    D = DegreeSet(D)
    exact = sum(1 for g in enumerate_graphs(n, m) if all(d in D for d in g.degrees()))
    ratio = simple_graph_count_estimate(n, m, D) / exact
    assert 0.5 < ratio < 2.0


def test_degree_set_validation():
    with pytest.raises(ValueError):
        DegreeSet([])
    with pytest.raises(ValueError):
        DegreeSet([-1, 2])
    assert DegreeSet.parse("3,1") == DegreeSet({1, 3})
    assert not D13.is_aperiodic and DegreeSet({1, 2}).is_aperiodic
