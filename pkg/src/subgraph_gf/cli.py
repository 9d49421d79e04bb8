"""Command-line front end: ``census``, ``degseq`` and ``sample``.

Exit codes: 0 success, 2 verification mismatch, 3 infeasible parameters,
4 bounds exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from collections import Counter
from fractions import Fraction
from pathlib import Path

from .census import (
    HypothesisError,
    RegimeSpec,
    census_distinguished,
    poisson_lambda_gnm,
    poisson_pmf,
    sg_exact,
)
from .degrees import (
    DegreeSet,
    InfeasibleParameters,
    cycle_lambdas,
    log_simple_graph_count_estimate,
    mg_count,
    rho,
    simple_probability,
    solve_chi,
)
from .graphs import (
    BoundsExceeded,
    LabeledGraph,
    cycle_graph,
    density,
    enumerate_graphs,
    named_pattern,
    parse_graph,
    subgraph_count,
)
from .sampler import (
    DegreeModel,
    GnmModel,
    empirical_distribution,
    joint_independence_gap,
    tv_distance,
)

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_INFEASIBLE = 3
EXIT_BOUNDS = 4

CENSUS_VERIFY_BOUND = 6
CENSUS_DISTRIBUTION_BOUND = 6
INT64_MAX = 2 ** 63 - 1


class VerifyMismatch(RuntimeError):
    pass


def _num(v):
    # JSON numbers beyond 64-bit range become decimal strings
    if isinstance(v, int) and abs(v) > INT64_MAX:
        return str(v)
    if isinstance(v, Fraction):
        return str(v)
    return v


def _emit(args, json_obj: dict, csv_rows: list[tuple], csv_header: tuple, stem_suffix: str = "") -> None:
    text_json = json.dumps(json_obj, indent=2, sort_keys=True) + "\n"
    text_csv = ",".join(csv_header) + "\n" + "".join(",".join(str(c) for c in row) + "\n" for row in csv_rows)
    if args.out:
        base = Path(args.out)
        base.parent.mkdir(parents=True, exist_ok=True)
        Path(f"{base}{stem_suffix}.csv").write_text(text_csv)
        Path(f"{base}.json").write_text(text_json)
    else:
        sys.stdout.write(text_json if args.format == "json" else text_csv)


def _load_pattern(args) -> tuple[str, LabeledGraph]:
    if args.pattern_file:
        g = parse_graph(Path(args.pattern_file).read_text())
        if not isinstance(g, LabeledGraph):
            raise InfeasibleParameters("census patterns must be simple graphs")
        return Path(args.pattern_file).stem, g
    if not args.pattern:
        raise InfeasibleParameters("give --pattern or --pattern-file")
    return args.pattern, named_pattern(args.pattern)


# --- census -----------------------------------------------------------------


def cmd_census(args) -> int:
    name, f = _load_pattern(args)
    n, m = args.n, args.m
    if m > math.comb(n, 2):
        raise InfeasibleParameters(f"no (n, m)-graphs with n={n}, m={m}")
    if args.verify and n > args.bound:
        raise BoundsExceeded(f"--verify enumerates all ({n}, {m})-graphs; n={n} exceeds the bound {args.bound}")
    result = census_distinguished(f, n, m, name)
    dist = None
    if n <= max(args.bound, CENSUS_DISTRIBUTION_BOUND):
        dist = sg_exact(f, n, m)
        result.distribution = dict(enumerate(dist))
    if args.verify:
        hist = Counter(subgraph_count(g, f) for g in enumerate_graphs(n, m, bound=args.bound))
        oracle = [hist.get(t, 0) for t in range(max(hist, default=0) + 1)]
        total = sum(t * c for t, c in hist.items())
        if oracle != dist or total != result.exact:
            raise VerifyMismatch(
                f"verification failed: formula distribution {dist}, oracle {oracle}; "
                f"distinguished {result.exact} vs oracle {total}"
            )
    out = result.to_json_dict()
    out["verified"] = bool(args.verify)
    rows = [(t, c) for t, c in enumerate(dist)] if dist is not None else []
    _emit(args, out, rows, ("t", "count"))
    return EXIT_OK


# --- degseq -----------------------------------------------------------------


def _resolve_nm(args) -> tuple[int, int]:
    if args.n is None:
        raise InfeasibleParameters("--n is required")
    if args.m is not None:
        return args.n, args.m
    if args.edge_ratio is None:
        raise InfeasibleParameters("give --m or --edge-ratio")
    twice_m = args.edge_ratio * args.n
    if abs(twice_m - round(twice_m)) > 1e-9 or round(twice_m) % 2:
        raise InfeasibleParameters(f"edge ratio {args.edge_ratio} with n={args.n} gives a non-integral m")
    return args.n, round(twice_m) // 2


def cmd_degseq(args) -> int:
    D = DegreeSet.parse(args.degrees)
    n, m = _resolve_nm(args)
    sol = solve_chi(D, 2 * m / n)
    r = rho(n, m, D)
    lams = cycle_lambdas(args.k_max, n, m, D, include_short=True)
    mg = mg_count(n, m, D)
    log_est = log_simple_graph_count_estimate(n, m, D)
    out = {
        "degrees": str(D),
        "aperiodic": D.is_aperiodic,
        "n": n,
        "m": m,
        "edge_ratio": 2 * m / n,
        "chi": sol.chi,
        "chi_residual": sol.residual,
        "chi_iterations": sol.iterations,
        "mg_count": _num(mg),
        "rho": r,
        "lambdas": {str(j): lam for j, lam in lams.items()},
        "simple_probability": simple_probability(n, m, D),
        "simple_graph_estimate_log": log_est,
        "simple_graph_estimate": math.exp(log_est) if log_est < 700 else None,
    }
    rows = [("chi", repr(sol.chi)), ("rho", repr(r)), ("mg_count", str(mg))]
    rows += [(f"lambda_{j}", repr(lam)) for j, lam in lams.items()]
    rows += [("simple_probability", repr(out["simple_probability"])), ("simple_graph_estimate_log", repr(log_est))]
    _emit(args, out, rows, ("quantity", "value"))
    return EXIT_OK


# --- sample -------------------------------------------------------------------


def _hist_rows(counter: Counter) -> list[tuple]:
    return sorted(counter.items())


def cmd_sample(args) -> int:
    if args.model == "gnm":
        name, f = _load_pattern(args)
        n = args.n
        regime = None
        if args.m is not None:
            m = args.m
            beta = float(2 - 1 / density(f))
            regime = RegimeSpec(m / n ** beta, beta)
        elif args.c is not None:
            regime = RegimeSpec.poisson_window(f, args.c)
            m = regime.edges(n)
        else:
            raise InfeasibleParameters("give --m or --c")
        if m > math.comb(n, 2):
            raise InfeasibleParameters(f"m={m} exceeds C({n}, 2)")
        lam = poisson_lambda_gnm(f, regime)
        batch = empirical_distribution(GnmModel(n, m), [f], args.samples, args.seed, workers=args.threads)
        side = {
            "model": "gnm",
            "n": n,
            "m": m,
            "D": None,
            "seed": args.seed,
            "rng": batch.rng,
            "num_samples": batch.num_samples,
            "pattern": name,
            "lambda_target": lam,
            "empirical_mean": None if not batch.num_samples else batch.mean(0),
            "tv_distance": None if not batch.num_samples else tv_distance(batch.marginal(0), lambda t: poisson_pmf(lam, t)),
        }
        _emit(args, side, _hist_rows(batch.marginal(0)), ("t", "count"), f"_{name.replace(':', '')}")
        return EXIT_OK

    D = DegreeSet.parse(args.degrees)
    n, m = _resolve_nm(args)
    cycles = [int(j) for j in args.cycles.split(",")]
    lams = cycle_lambdas(max(3, max(cycles)), n, m, D)
    patterns = [cycle_graph(j) for j in cycles]
    batch = empirical_distribution(DegreeModel(n, m, D), patterns, args.samples, args.seed, workers=args.threads)
    targets = {f"c{j}": lams[j] for j in cycles}
    tvs = {}
    for i, j in enumerate(cycles):
        tvs[f"c{j}"] = None if not batch.num_samples else tv_distance(batch.marginal(i), lambda t, lam=lams[j]: poisson_pmf(lam, t))
    pmfs = [lambda t, lam=lams[j]: poisson_pmf(lam, t) for j in cycles]
    side = {
        "model": "dc",
        "n": n,
        "m": m,
        "D": str(D),
        "seed": args.seed,
        "rng": batch.rng,
        "num_samples": batch.num_samples,
        "attempts": batch.attempts,
        "acceptance_rate": None if not batch.attempts else batch.acceptance_rate,
        "acceptance_target": simple_probability(n, m, D),
        "lambda_target": targets,
        "tv_distance": tvs,
        "joint_independence_gap": None if not batch.num_samples else joint_independence_gap(batch.counts, pmfs),
    }
    if args.out:
        for i, j in enumerate(cycles):
            _emit(args, side, _hist_rows(batch.marginal(i)), ("t", "count"), f"_c{j}")
        joint_rows = [(*key, c) for key, c in sorted(batch.counts.items())]
        Path(f"{args.out}_joint.csv").write_text(
            ",".join([f"c{j}" for j in cycles] + ["count"]) + "\n"
            + "".join(",".join(str(x) for x in row) + "\n" for row in joint_rows)
        )
    else:
        _emit(args, side, [(*key, c) for key, c in sorted(batch.counts.items())],
              tuple(f"c{j}" for j in cycles) + ("count",))
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subgraph-gf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="output path prefix; writes PREFIX.json and PREFIX*.csv")
        sp.add_argument("--format", choices=("csv", "json"), default="json", help="stdout format without --out")

    c = sub.add_parser("census", help="exact subgraph counts in (n, m)-graphs")
    c.add_argument("--pattern", help="k2|path3|c3|c4|k4|cycle:<j>")
    c.add_argument("--pattern-file", help="pattern in the graph text format")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--verify", action="store_true", help="check against exhaustive enumeration")
    c.add_argument("--bound", type=int, default=CENSUS_VERIFY_BOUND, help="largest n for --verify")
    common(c)
    c.set_defaults(func=cmd_census)

    d = sub.add_parser("degseq", help="saddle point, multigraph counts and cycle laws for a degree set")
    d.add_argument("--degrees", required=True, help="comma list, e.g. 1,3")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--m", type=int)
    d.add_argument("--edge-ratio", type=float, help="2m/n")
    d.add_argument("--k-max", type=int, default=5, help="largest cycle length reported")
    common(d)
    d.set_defaults(func=cmd_degseq)

    s = sub.add_parser("sample", help="Monte Carlo subgraph-count histograms")
    s.add_argument("model", choices=("gnm", "dc"))
    s.add_argument("--pattern", help="gnm pattern name")
    s.add_argument("--pattern-file")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int)
    s.add_argument("--c", type=float, help="gnm: m = c n^(2 - 1/d)")
    s.add_argument("--degrees", help="dc: comma list")
    s.add_argument("--edge-ratio", type=float, help="dc: 2m/n")
    s.add_argument("--cycles", default="3", help="dc: comma list of cycle lengths (3..5)")
    s.add_argument("--samples", type=int, default=10000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=1, help="worker processes")
    common(s)
    s.set_defaults(func=cmd_sample)
    return p


def main(argv=None) -> int:
    # exact multigraph counts routinely exceed the default digit limit
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    args = build_parser().parse_args(argv)
    if args.command == "sample" and args.model == "dc" and not args.degrees:
        print("error: sample dc needs --degrees", file=sys.stderr)
        return EXIT_INFEASIBLE
    try:
        return args.func(args)
    except VerifyMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (InfeasibleParameters, HypothesisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except BoundsExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUNDS


if __name__ == "__main__":
    sys.exit(main())
