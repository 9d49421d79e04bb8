"""Acceptance suite: eight end-to-end checks at their stated tolerances.

Each test prints one ``PASS``/``FAIL`` line.  Run directly with
``python tests/test_acceptance.py`` for the summary alone.
"""

import itertools
import math
import sys
import time
from collections import Counter

import pytest

from subgraph_gf.census import (
    census_distinguished,
    distinguished_count_exact,
    poisson_pmf,
    sg_exact,
)
from subgraph_gf.degrees import (
    DegreeSet,
    cycle_lambdas,
    distinguished_dc_asymptotic,
    distinguished_dc_exact,
    mg_count,
    pattern_marked_gf,
    simple_probability,
    single_edge_gf,
)
from subgraph_gf.graphs import (
    complete_graph,
    cycle_graph,
    enumerate_graphs,
    enumerate_multigraphs,
    multigraph_cycle,
    named_pattern,
    path_graph,
    subgraph_count,
)
from subgraph_gf.patchwork import pattern_gf
from subgraph_gf.sampler import (
    DegreeModel,
    GnmModel,
    chi_square_uniform,
    empirical_distribution,
    gnm_histogram,
    joint_independence_gap,
    mg_histogram,
    tv_distance,
)

SEED = 20240601


def report(number: int, ok: bool, detail: str, capsys=None) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)


def all_degree_sets():
    base = (0, 1, 2, 3)
    for r in range(1, 5):
        yield from (DegreeSet(c) for c in itertools.combinations(base, r))


# --- 1: distinguished counts in (n, m)-graphs --------------------------------


def check_1():
    patterns = {"k2": complete_graph(2), "path3": path_graph(3), "c3": cycle_graph(3),
                "c4": cycle_graph(4), "k4": complete_graph(4)}
    bad = []
    cells = 0
    for n in range(0, 7):
        for m in range(math.comb(n, 2) + 1):
            graphs = list(enumerate_graphs(n, m))
            for name, f in patterns.items():
                want = sum(subgraph_count(g, f) for g in graphs)
                got = distinguished_count_exact(pattern_gf(f), n, m)
                cells += 1
                if got != want:
                    bad.append((name, n, m, got, want))
    return not bad, f"{cells} cells, mismatches={bad[:3]}"


# --- 2: full subgraph-count distributions ---------------------------------------


def check_2():
    bad = []
    cells = 0
    for name in ("k2", "c3"):
        f = named_pattern(name)
        for n in range(0, 6):
            for m in range(math.comb(n, 2) + 1):
                hist = Counter(subgraph_count(g, f) for g in enumerate_graphs(n, m))
                oracle = [hist.get(t, 0) for t in range(max(hist) + 1)]
                while len(oracle) > 1 and oracle[-1] == 0:
                    oracle.pop()
                got = sg_exact(f, n, m)
                cells += 1
                if got != oracle or sum(got) != math.comb(math.comb(n, 2), m):
                    bad.append((name, n, m, got, oracle))
    return not bad, f"{cells} cells, mismatches={bad[:3]}"


# --- 3: multigraph counts ---------------------------------------------------------


def check_3():
    bad = []
    cells = 0
    for D in all_degree_sets():
        for n in range(1, 4):
            for m in range(0, 4):
                want = sum(1 for _ in enumerate_multigraphs(n, m, D))
                cells += 1
                if mg_count(n, m, D) != want:
                    bad.append((n, m, str(D)))
    spots = mg_count(2, 1, DegreeSet({1})) == 2 and mg_count(3, 3, DegreeSet({2})) == 90
    return not bad and spots, f"{cells} cells, spot values ok={spots}, mismatches={bad[:3]}"


# --- 4: distinguished counts in (n, m, D)-multigraphs -------------------------------


def check_4():
    bad = []
    cells = 0
    for D in all_degree_sets():
        for n in range(1, 4):
            for m in range(0, 4):
                cells += 1
                if distinguished_dc_exact(single_edge_gf(), n, m, D) != m * mg_count(n, m, D):
                    bad.append(("edge", n, m, str(D)))
    c3 = multigraph_cycle(3)
    tri = {}
    for n, m, D in [(4, 4, {1, 3}), (4, 4, {1, 2, 3}), (4, 5, {1, 3})]:
        want = sum(subgraph_count(g, c3) for g in enumerate_multigraphs(n, m, D, edge_bound=5))
        got = distinguished_dc_exact(pattern_marked_gf(c3), n, m, DegreeSet(D))
        tri[(n, m, "".join(map(str, sorted(D))))] = (got, want)
        if got != want:
            bad.append(("c3", n, m, D, got, want))
    return not bad, f"{cells} edge cells, triangle cells={tri}, mismatches={bad[:3]}"


# --- 5: triangle counts in G(n, m) near the threshold ----------------------------------


def check_5():
    n, m, lam = 3000, 1500, 1 / 6
    batch = empirical_distribution(GnmModel(n, m), [cycle_graph(3)], 100_000, SEED)
    tv = tv_distance(batch.marginal(0), lambda t: poisson_pmf(lam, t))
    mean = batch.mean(0)
    ok = tv <= 0.02 and abs(mean - lam) <= 0.1 * lam
    return ok, f"TV={tv:.4f} (<=0.02), mean={mean:.4f} vs {lam:.4f} (+-10%)"


# --- 6: cycle counts in degree-constrained graphs -------------------------------------


def check_6():
    D = DegreeSet({1, 3})
    n = 10_000
    m = n
    lams = cycle_lambdas(5, n, m, D)
    targets = {3: 9 / 16, 4: 81 / 128, 5: 1.5 ** 5 / 10}
    lam_ok = all(math.isclose(lams[j], targets[j], rel_tol=1e-9) for j in targets)
    batch = empirical_distribution(DegreeModel(n, m, D), [cycle_graph(j) for j in (3, 4, 5)], 20_000, SEED)
    tvs = {j: tv_distance(batch.marginal(i), lambda t, lam=targets[j]: poisson_pmf(lam, t))
           for i, j in enumerate((3, 4, 5))}
    gap = joint_independence_gap(batch.counts, [lambda t, lam=targets[j]: poisson_pmf(lam, t) for j in (3, 4, 5)])
    p = math.exp(-3 / 4 - 9 / 16)
    rate = batch.acceptance_rate
    sigma = math.sqrt(p * (1 - p) / batch.attempts)
    z = (rate - p) / sigma
    ok = lam_ok and all(v <= 0.03 for v in tvs.values()) and gap <= 0.05 and abs(z) <= 3
    tv_txt = ", ".join(f"TV{j}={v:.4f}" for j, v in tvs.items())
    return ok, (f"{tv_txt} (<=0.03), joint gap={gap:.4f} (<=0.05), "
                f"acceptance={rate:.4f} vs {p:.4f} ({z:+.2f} sigma, {batch.attempts} draws)")


# --- 7: convergence of the asymptotic estimators ------------------------------------------


def check_7():
    grid = (8, 10, 12)
    c3 = cycle_graph(3)
    gnm = [census_distinguished(c3, n, n).relative_error for n in grid]
    D = DegreeSet({1, 3})
    g = pattern_marked_gf(multigraph_cycle(3))
    dc = []
    for n in grid:
        exact = distinguished_dc_exact(g, n, n, D)
        dc.append(abs(exact - distinguished_dc_asymptotic(g, n, n, D)) / exact)

    def monotone(errs):
        return all(math.isfinite(e) for e in errs) and all(a >= b for a, b in zip(errs, errs[1:]))

    k2 = [census_distinguished(complete_graph(2), n, n).relative_error for n in grid]
    k2_exact = all(e == 0 for e in k2)
    ok = monotone(gnm) and monotone(dc) and k2_exact
    fmt = lambda xs: "[" + ", ".join(f"{x:.4f}" for x in xs) + "]"
    return ok, (f"C3 Gnm rel.err {fmt(gnm)} non-increasing={monotone(gnm)}; "
                f"C3 DC{{1,3}} rel.err {fmt(dc)} non-increasing={monotone(dc)}; "
                f"K2 Gnm rel.err {fmt(k2)} exact={k2_exact}")


# --- 8: sampler uniformity ---------------------------------------------------------------


def check_8():
    hist, cells = gnm_histogram(4, 3, 100_000, SEED)
    p_gnm = chi_square_uniform(hist, cells)
    mhist, mcells = mg_histogram(3, 3, DegreeSet({2}), 1_000_000, SEED)
    p_mg = chi_square_uniform(mhist, mcells)
    ok = cells == 20 and mcells == 90 and p_gnm > 1e-3 and p_mg > 1e-3
    return ok, f"(4,3): {len(hist)}/{cells} cells p={p_gnm:.4f}; (3,3,{{2}}): {len(mhist)}/{mcells} cells p={p_mg:.4f}"


CHECKS = {1: check_1, 2: check_2, 3: check_3, 4: check_4, 5: check_5, 6: check_6, 7: check_7, 8: check_8}


@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number, capsys):
    start = time.perf_counter()
    ok, detail = CHECKS[number]()
    report(number, ok, f"{detail} [{time.perf_counter() - start:.1f}s]", capsys)
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for number, check in sorted(CHECKS.items()):
        start = time.perf_counter()
        ok, detail = check()
        report(number, ok, f"{detail} [{time.perf_counter() - start:.1f}s]")
        failures += not ok
    sys.exit(1 if failures else 0)
