"""F-patchworks: sets of distinct F-copies whose union is a whole graph."""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .graphs import (
    BoundsExceeded,
    LabeledGraph,
    all_pairs,
    automorphism_count,
    format_graph,
)
from .series import TruncSeries

PATCHWORK_VERTEX_BOUND = 7
CACHE_ENV = "SUBGRAPH_GF_PATCHWORK_CACHE"


@dataclass
class PatchworkTable:
    pattern: LabeledGraph
    n_max: int
    m_max: int
    t_max: int | None  # None: every t was kept
    entries: dict = field(default_factory=dict)  # (n, m, t) -> count

    def get(self, n: int, m: int, t: int) -> int:
        if n > self.n_max or m > self.m_max or (self.t_max is not None and t > self.t_max):
            raise BoundsExceeded(f"({n}, {m}, {t}) outside table bounds")
        return self.entries.get((n, m, t), 0)

    @property
    def complete_in_t(self) -> bool:
        return self.t_max is None or self.t_max >= max_copies(self.pattern, self.n_max)

    def to_json(self) -> str:
        return json.dumps(
            {
                "pattern": format_graph(self.pattern),
                "n_max": self.n_max,
                "m_max": self.m_max,
                "t_max": self.t_max,
                "entries": [[n, m, t, str(c)] for (n, m, t), c in sorted(self.entries.items())],
            }
        )

    @classmethod
    def from_json(cls, text: str, pattern: LabeledGraph) -> "PatchworkTable":
        raw = json.loads(text)
        entries = {(n, m, t): int(c) for n, m, t, c in raw["entries"]}
        return cls(pattern, raw["n_max"], raw["m_max"], raw["t_max"], entries)


def max_copies(f: LabeledGraph, n: int) -> int:
    """Copies of ``f`` in the complete graph on n vertices (upper bound on G[F])."""
    if f.n > n:
        return 0
    if f.n == 0:
        return 1
    return math.comb(n, f.n) * math.factorial(f.n) // automorphism_count(f)


def _copies(f: LabeledGraph, g: LabeledGraph, edge_bit: dict) -> list[tuple[int, int]]:
    # every F-copy of g as (vertex mask, edge mask); found by injection then deduplicated
    k = f.n
    fedges = [(u - 1, v - 1) for u, v in f.edges]
    adj = [[False] * (g.n + 1) for _ in range(g.n + 1)]
    for u, v in g.edges:
        adj[u][v] = adj[v][u] = True
    seen = set()
    for img in itertools.permutations(range(1, g.n + 1), k):
        ok = True
        emask = 0
        for a, b in fedges:
            x, y = img[a], img[b]
            if not adj[x][y]:
                ok = False
                break
            emask |= edge_bit[(min(x, y), max(x, y))]
        if ok:
            vmask = sum(1 << (v - 1) for v in img)
            seen.add((vmask, emask))
    return sorted(seen)


def _covering_subsets(copies, full_v: int, full_e: int, t_max: int | None) -> dict[int, int]:
    """Number of t-subsets of ``copies`` whose unions hit ``full_v`` and ``full_e``."""
    # DP over copies keyed by the running union
    states: dict[tuple[int, int, int], int] = {(0, 0, 0): 1}
    for vm, em in copies:
        new = dict(states)
        for (v, e, t), c in states.items():
            if t_max is not None and t + 1 > t_max:
                continue
            key = (v | vm, e | em, t + 1)
            new[key] = new.get(key, 0) + c
        states = new
    out: dict[int, int] = {}
    for (v, e, t), c in states.items():
        if v == full_v and e == full_e:
            out[t] = out.get(t, 0) + c
    return out


def build_table(f: LabeledGraph, n_max: int, m_max: int | None = None, t_max: int | None = None) -> PatchworkTable:
    """Count patchworks of ``f`` reducing to each (n, m)-graph with n <= n_max."""
    if n_max > PATCHWORK_VERTEX_BOUND:
        raise BoundsExceeded(f"patchwork tables are exhaustive; n_max={n_max} > {PATCHWORK_VERTEX_BOUND}")
    if m_max is None:
        m_max = math.comb(n_max, 2)
    table = PatchworkTable(f, n_max, m_max, t_max)
    entries = table.entries
    entries[(0, 0, 0)] = 1
    if f.n == 0:
        return table
    no_isolated = min(f.degrees()) > 0
    for n in range(max(1, f.n), n_max + 1):
        pairs = all_pairs(n)
        edge_bit = {p: 1 << i for i, p in enumerate(pairs)}
        full_v = (1 << n) - 1
        for m in range(f.m, min(m_max, len(pairs)) + 1):
            for combo in itertools.combinations(pairs, m):
                touched = set(itertools.chain.from_iterable(combo))
                if no_isolated and len(touched) != n:
                    continue
                g = LabeledGraph(n, frozenset(combo))
                copies = _copies(f, g, edge_bit)
                if not copies:
                    continue
                full_e = sum(edge_bit[p] for p in combo)
                for t, c in _covering_subsets(copies, full_v, full_e, t_max).items():
                    entries[(n, m, t)] = entries.get((n, m, t), 0) + c
    return table


def _cache_path(f: LabeledGraph, n_max: int, m_max: int, t_max) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    digest = hashlib.sha256(format_graph(f).encode()).hexdigest()[:16]
    return Path(root) / f"patch_{digest}_{n_max}_{m_max}_{t_max}.json"


def cached_table(f: LabeledGraph, n_max: int, m_max: int | None = None, t_max: int | None = None) -> PatchworkTable:
    """:func:`build_table` backed by a JSON cache when ``SUBGRAPH_GF_PATCHWORK_CACHE`` is set."""
    if m_max is None:
        m_max = math.comb(n_max, 2)
    path = _cache_path(f, n_max, m_max, t_max)
    if path is not None and path.exists():
        return PatchworkTable.from_json(path.read_text(), f)
    table = build_table(f, n_max, m_max, t_max)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(table.to_json())
    return table


def patchwork_gf(table: PatchworkTable) -> TruncSeries:
    """``sum Patch[n,m,t] u^t w^m z^n / n!``.

    The u order is left exact when the table holds every t, so that the
    shift ``u <- u - 1`` stays valid.
    """
    coeffs = {
        (n, m, t, 0): Fraction(c, math.factorial(n)) for (n, m, t), c in table.entries.items()
    }
    t_order = None if table.complete_in_t else table.t_max
    return TruncSeries(coeffs, {"z": table.n_max, "w": table.m_max, "u": t_order})


def pattern_gf(f: LabeledGraph, trunc_z: int | None = None, trunc_w: int | None = None) -> TruncSeries:
    """Family GF of the F-graphs, ``w^l z^k / aut(F)``."""
    return TruncSeries.monomial(
        Fraction(1, automorphism_count(f)), {"z": trunc_z, "w": trunc_w}, z=f.n, w=f.m
    )


def disjoint_approx_gf(f: LabeledGraph, trunc) -> TruncSeries:
    """``exp(u F(z, w))``: patchworks made only of vertex-disjoint copies."""
    t = dict(trunc)
    if t.get("u") is None:
        raise ValueError("disjoint_approx_gf needs a finite u truncation")
    fz = pattern_gf(f).truncate(t)
    return (fz * TruncSeries.var("u", t)).exp()
