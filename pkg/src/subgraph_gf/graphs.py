"""Labeled graphs and multigraphs, subgraph census and exhaustive enumerators.

Vertices are labeled ``1..n``.  Simple graphs store edges as sorted pairs;
multigraphs store a sequence of oriented edges whose labels are their
positions ``1..m`` in the sequence.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence, Union

DEFAULT_GRAPH_ORACLE_BOUND = 7
DEFAULT_MULTIGRAPH_VERTEX_BOUND = 4
DEFAULT_MULTIGRAPH_EDGE_BOUND = 4


class BoundsExceeded(ValueError):
    """An exhaustive oracle was asked to run past its configured size limit."""


@dataclass(frozen=True)
class LabeledGraph:
    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f"loop at vertex {u} is not allowed in a simple graph")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge {e} has an endpoint outside 1..{self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges) -> "LabeledGraph":
        edges = list(edges)
        g = cls(n, frozenset(edges))
        if len(g.edges) != len(edges):
            raise ValueError("repeated edge in a simple graph")
        return g

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * (self.n + 1)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg[1:]

    def relabel(self, perm: Sequence[int]) -> "LabeledGraph":
        """Apply ``perm`` where ``perm[i-1]`` is the new label of vertex ``i``."""
        return LabeledGraph(self.n, frozenset((perm[u - 1], perm[v - 1]) for u, v in self.edges))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


@dataclass(frozen=True)
class LabeledMultigraph:
    n: int
    edges: tuple = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge {(u, v)} has an endpoint outside 1..{self.n}")
        object.__setattr__(self, "edges", edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        # a loop contributes two half-edges to its vertex
        deg = [0] * (self.n + 1)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg[1:]

    def half_edges(self) -> list[tuple[int, int]]:
        """(half-edge label, vertex) pairs; edge ``e`` yields labels ``2e-1`` and ``2e``."""
        out = []
        for e, (u, v) in enumerate(self.edges, start=1):
            out.append((2 * e - 1, u))
            out.append((2 * e, v))
        return out

    def multiplicities(self) -> dict[tuple[int, int], int]:
        mult: dict[tuple[int, int], int] = {}
        for u, v in self.edges:
            key = (min(u, v), max(u, v))
            mult[key] = mult.get(key, 0) + 1
        return mult

    def loop_count(self) -> int:
        return sum(1 for u, v in self.edges if u == v)

    def is_simple(self) -> bool:
        mult = self.multiplicities()
        return all(u != v and c == 1 for (u, v), c in mult.items())

    def to_simple(self) -> LabeledGraph:
        if not self.is_simple():
            raise ValueError("multigraph has loops or repeated edges")
        return LabeledGraph(self.n, frozenset(self.edges))

    @classmethod
    def from_graph(cls, g: LabeledGraph) -> "LabeledMultigraph":
        return cls(g.n, tuple(g.sorted_edges()))


AnyGraph = Union[LabeledGraph, LabeledMultigraph]


def _multiplicity_table(g: AnyGraph) -> list[list[int]]:
    # 0-based symmetric table; simple graphs have entries 0/1
    t = [[0] * g.n for _ in range(g.n)]
    for u, v in g.edges:
        a, b = u - 1, v - 1
        t[a][b] += 1
        if a != b:
            t[b][a] += 1
    return t


def _search_order(mult: list[list[int]]) -> list[int]:
    # Connected-first order: each next vertex has the most links to the placed ones.
    k = len(mult)
    deg = [sum(row) for row in mult]
    order: list[int] = []
    remaining = set(range(k))
    while remaining:
        best = max(
            remaining,
            key=lambda v: (sum(1 for u in order if mult[v][u]), deg[v], -v),
        )
        order.append(best)
        remaining.remove(best)
    return order


def _falling(a: int, b: int) -> int:
    return math.perm(a, b) if a >= b else 0


def _count_embeddings(pattern: AnyGraph, host: AnyGraph) -> int:
    """Weighted count of vertex injections of ``pattern`` into ``host``.

    Each vertex injection is weighted by the number of ways to send the
    pattern's parallel edges injectively onto the host's parallel edges.  For
    simple graphs every weight is 1 and this counts monomorphisms.
    """
    k = pattern.n
    if k > host.n:
        return 0
    if k == 0:
        return 1
    fm = _multiplicity_table(pattern)
    hm = _multiplicity_table(host)
    fdeg = [sum(r) for r in fm]
    hdeg = [sum(r) for r in hm]
    order = _search_order(fm)
    image = [-1] * k
    used = [False] * host.n

    def extend(pos: int) -> int:
        if pos == k:
            return 1
        fv = order[pos]
        total = 0
        for hv in range(host.n):
            if used[hv] or hdeg[hv] < fdeg[fv] or hm[hv][hv] < fm[fv][fv]:
                continue
            weight = _falling(hm[hv][hv], fm[fv][fv])
            for prev in order[:pos]:
                need = fm[fv][prev]
                if need:
                    have = hm[hv][image[prev]]
                    if have < need:
                        weight = 0
                        break
                    weight *= _falling(have, need)
            if not weight:
                continue
            image[fv] = hv
            used[hv] = True
            total += weight * extend(pos + 1)
            used[hv] = False
        image[fv] = -1
        return total

    return extend(0)


def _check_same_kind(a: AnyGraph, b: AnyGraph) -> None:
    if type(a) is not type(b):
        raise TypeError("cannot mix simple graphs and multigraphs")


def automorphism_count(f: AnyGraph) -> int:
    """Size of the automorphism group of ``f``.

    For multigraphs the group acts jointly on vertices, edges and edge
    orientations; a loop can be reversed in place, so each loop doubles the
    count.
    """
    base = _count_embeddings(f, f)
    if isinstance(f, LabeledMultigraph):
        base *= 2 ** f.loop_count()
    return base


def subgraph_count(g: AnyGraph, f: AnyGraph) -> int:
    """Number of subgraphs of ``g`` isomorphic to ``f`` (the census ``G[F]``).

    Multigraph isomorphism may permute edge labels and reverse orientations,
    so a copy is a pair (vertex subset, edge subset).
    """
    _check_same_kind(g, f)
    if f.n == 0:
        return 1
    emb = _count_embeddings(f, g)
    if emb == 0:
        return 0
    # joint automorphisms without the loop flips, matching _count_embeddings
    stab = _count_embeddings(f, f)
    count, rem = divmod(emb, stab)
    assert rem == 0
    return count


# --- densities ---------------------------------------------------------------


def density(f: AnyGraph) -> Fraction:
    if f.n == 0:
        raise ValueError("density of the empty graph is undefined")
    return Fraction(f.m, f.n)


def _subset_edge_counts(f: AnyGraph) -> list[int]:
    # induced edge count for every vertex bitmask
    k = f.n
    counts = [0] * (1 << k)
    masks = [(1 << (u - 1)) | (1 << (v - 1)) for u, v in f.edges]
    for s in range(1 << k):
        counts[s] = sum(1 for em in masks if em & s == em)
    return counts


MAX_DENSEST_VERTICES = 20


def essential_density(f: AnyGraph) -> tuple[Fraction, frozenset, int]:
    """Densest induced subgraph by subset sweep.

    Returns ``(d*, witness vertex set, edges of the witness)``.  Ties go to
    the smaller subset, then to the lexicographically smallest label set.
    """
    k = f.n
    if k == 0:
        raise ValueError("essential density needs at least one vertex")
    if k > MAX_DENSEST_VERTICES:
        raise BoundsExceeded(f"subset sweep limited to {MAX_DENSEST_VERTICES} vertices")
    counts = _subset_edge_counts(f)
    best = None
    for size in range(1, k + 1):
        for combo in itertools.combinations(range(k), size):
            s = sum(1 << v for v in combo)
            d = Fraction(counts[s], size)
            if best is None or d > best[0]:
                best = (d, combo, counts[s])
    d, combo, ell = best
    return d, frozenset(v + 1 for v in combo), ell


def is_strictly_balanced(f: AnyGraph) -> bool:
    k = f.n
    if k == 0:
        return False
    counts = _subset_edge_counts(f)
    full = (1 << k) - 1
    d = Fraction(f.m, k)
    for s in range(1, full):
        if Fraction(counts[s], bin(s).count("1")) >= d:
            return False
    return True


@dataclass(frozen=True)
class GraphStats:
    density: Fraction
    essential_density: Fraction
    densest_witness: frozenset
    strictly_balanced: bool
    automorphism_count: int

    @property
    def densest_edges(self) -> int:
        return int(self.essential_density * len(self.densest_witness))


def graph_stats(f: AnyGraph) -> GraphStats:
    d_star, witness, _ = essential_density(f)
    return GraphStats(
        density=density(f),
        essential_density=d_star,
        densest_witness=witness,
        strictly_balanced=is_strictly_balanced(f),
        automorphism_count=automorphism_count(f),
    )


# --- enumeration oracles ----------------------------------------------------


def all_pairs(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(1, n + 1), 2))


def enumerate_graphs(n: int, m: int, bound: int = DEFAULT_GRAPH_ORACLE_BOUND) -> Iterator[LabeledGraph]:
    """Every (n, m)-graph exactly once, in lexicographic order of edge sets."""
    if n > bound:
        raise BoundsExceeded(f"enumerate_graphs: n={n} exceeds the oracle bound {bound}")
    pairs = all_pairs(n)
    if not 0 <= m <= len(pairs):
        return
    for combo in itertools.combinations(pairs, m):
        yield LabeledGraph(n, frozenset(combo))


def enumerate_multigraphs(
    n: int,
    m: int,
    degrees=None,
    vertex_bound: int = DEFAULT_MULTIGRAPH_VERTEX_BOUND,
    edge_bound: int = DEFAULT_MULTIGRAPH_EDGE_BOUND,
) -> Iterator[LabeledMultigraph]:
    """Every (n, m)-multigraph, optionally restricted to degrees in ``degrees``.

    Each of the 2m half-edges is placed on one of the n vertices, so the
    unconstrained stream has n**(2m) elements.
    """
    if n > vertex_bound or m > edge_bound:
        raise BoundsExceeded(
            f"enumerate_multigraphs: (n, m)=({n}, {m}) exceeds bounds ({vertex_bound}, {edge_bound})"
        )
    allowed = None if degrees is None else frozenset(degrees)
    verts = range(1, n + 1)
    for placement in itertools.product(verts, repeat=2 * m):
        edges = tuple(zip(placement[0::2], placement[1::2]))
        g = LabeledMultigraph(n, edges)
        if allowed is not None and any(d not in allowed for d in g.degrees()):
            continue
        yield g


# --- named patterns -------------------------------------------------------


def cycle_graph(j: int) -> LabeledGraph:
    if j < 3:
        raise ValueError("simple cycles need at least 3 vertices")
    return LabeledGraph(j, frozenset((i, i % j + 1) for i in range(1, j + 1)))


def complete_graph(k: int) -> LabeledGraph:
    return LabeledGraph(k, frozenset(all_pairs(k)))


def path_graph(k: int) -> LabeledGraph:
    return LabeledGraph(k, frozenset((i, i + 1) for i in range(1, k)))


def multigraph_cycle(j: int) -> LabeledMultigraph:
    """Cycle of length j as a multigraph: a loop for j=1, a double edge for j=2."""
    if j < 1:
        raise ValueError("cycle length must be positive")
    return LabeledMultigraph(j, tuple((i, i % j + 1) for i in range(1, j + 1)))


def named_pattern(name: str) -> LabeledGraph:
    key = name.strip().lower()
    if key == "k2":
        return complete_graph(2)
    if key == "path3":
        return path_graph(3)
    if key == "c3":
        return cycle_graph(3)
    if key == "c4":
        return cycle_graph(4)
    if key == "k4":
        return complete_graph(4)
    if key.startswith("cycle:"):
        return cycle_graph(int(key.split(":", 1)[1]))
    raise ValueError(f"unknown pattern {name!r}")


# --- text format ----------------------------------------------------------


def format_graph(g: AnyGraph) -> str:
    lines = [f"{g.n} {g.m}"]
    if isinstance(g, LabeledMultigraph):
        lines += [f"{u} {v} {e}" for e, (u, v) in enumerate(g.edges, start=1)]
    else:
        lines += [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> AnyGraph:
    """Parse the ``n m`` header plus edge lines; three columns mean a multigraph."""
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows:
        raise ValueError("empty graph text")
    n, m = (int(t) for t in rows[0])
    body = rows[1:]
    if len(body) != m:
        raise ValueError(f"header announces {m} edges, found {len(body)}")
    if m and len(body[0]) == 3:
        by_label = {}
        for row in body:
            u, v, e = (int(t) for t in row)
            if e in by_label:
                raise ValueError(f"duplicate edge label {e}")
            by_label[e] = (u, v)
        if sorted(by_label) != list(range(1, m + 1)):
            raise ValueError("edge labels must be exactly 1..m")
        return LabeledMultigraph(n, tuple(by_label[e] for e in range(1, m + 1)))
    edges = []
    for row in body:
        if len(row) != 2:
            raise ValueError(f"bad edge line {' '.join(row)!r}")
        u, v = int(row[0]), int(row[1])
        if not u < v:
            raise ValueError(f"simple-graph edges must satisfy u < v, got {u} {v}")
        edges.append((u, v))
    return LabeledGraph.from_edges(n, edges)
