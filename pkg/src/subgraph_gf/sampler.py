"""Monte Carlo samplers for G(n, m) and degree-constrained multigraphs.

Randomness comes from numpy's PCG64.  A run is split into fixed-size
chunks and chunk ``i`` draws from ``SeedSequence(seed, spawn_key=(i,))``,
so histograms do not depend on how many worker processes share the work.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy import stats

from .degrees import DegreeSet, InfeasibleParameters, mg_count, solve_chi
from .graphs import LabeledGraph, LabeledMultigraph, subgraph_count

RNG_ALGORITHM = "numpy.PCG64 via SeedSequence(seed, spawn_key=(chunk,))"
CHUNK_SIZE = 1000
MAX_DEGREE_ATTEMPTS = 1_000_000
DC_DRAW_BLOCK = 32


class RejectionStall(RuntimeError):
    """Degree-sequence rejection sampling exceeded its attempt budget."""


def make_rng(seed: int, chunk: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))


# --- G(n, m) ----------------------------------------------------------------


def pair_from_index(k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Colex decoding of pair indices: index k maps to 0-based (i, j), i < j."""
    k = np.asarray(k, dtype=np.int64)
    j = ((1 + np.sqrt(1 + 8 * k.astype(np.float64))) / 2).astype(np.int64)
    # float rounding can be off by one either way
    j = np.where(j * (j - 1) // 2 > k, j - 1, j)
    j = np.where((j + 1) * j // 2 <= k, j + 1, j)
    i = k - j * (j - 1) // 2
    return i, j


def gnm_edge_indices(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """m distinct pair indices by a sparse partial Fisher-Yates shuffle of range(C(n, 2))."""
    N = n * (n - 1) // 2
    if m > N:
        raise ValueError(f"m={m} exceeds C({n}, 2)={N}")
    offsets = rng.integers(0, N - np.arange(m, dtype=np.int64)) if m else np.empty(0, np.int64)
    swapped: dict[int, int] = {}
    out = np.empty(m, dtype=np.int64)
    for i, off in enumerate(offsets.tolist()):
        r = i + off
        out[i] = swapped.get(r, r)
        swapped[r] = swapped.get(i, i)
    return out


def gnm_edges(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """(m, 2) array of 0-based endpoints of a uniform (n, m)-graph."""
    i, j = pair_from_index(gnm_edge_indices(n, m, rng))
    return np.stack([i, j], axis=1)


def sample_gnm(n: int, m: int, seed: int) -> LabeledGraph:
    edges = gnm_edges(n, m, make_rng(seed))
    return LabeledGraph(n, frozenset((int(a) + 1, int(b) + 1) for a, b in edges))


# --- (n, m, D)-multigraphs -----------------------------------------------------


def _tilt(D: DegreeSet, n: int, m: int) -> float:
    # any positive tilt gives exact uniformity; chi maximises the acceptance rate
    if len(D.degrees) < 2:
        return 1.0
    try:
        return solve_chi(D, 2 * m / n).chi
    except InfeasibleParameters:
        return 1.0


def _degree_rows(D: DegreeSet, n: int, m: int, size: int, rng: np.random.Generator,
                 max_attempts: int) -> tuple[np.ndarray, int]:
    """``size`` degree sequences, i.i.d. tilted degrees conditioned on summing to 2m.

    The multinomial count vector is drawn first and rejected until the degree
    sum is right; a uniform shuffle then places the degrees on vertices,
    which is the same law as conditioning n i.i.d. draws.
    """
    ds = np.array(D.degrees, dtype=np.int64)
    probs = D.tilted(_tilt(D, n, m))
    p = np.array([probs[d] for d in D.degrees])
    p = p / p.sum()
    rows: list[np.ndarray] = []
    attempts = 0
    block = 64
    while len(rows) < size:
        counts = rng.multinomial(n, p, size=block)
        attempts += block
        ok = counts @ ds == 2 * m
        for c in counts[ok]:
            if len(rows) < size:
                rows.append(np.repeat(ds, c))
        if attempts > max_attempts and len(rows) < size:
            rate = len(rows) / attempts
            raise RejectionStall(
                f"degree rejection accepted {len(rows)} of {attempts} draws (rate {rate:.3g}); "
                f"check feasibility of (n, m, D)=({n}, {m}, {D})"
            )
        block = min(4096, block * 2)
    deg = np.stack(rows) if rows else np.empty((0, n), dtype=np.int64)
    return rng.permuted(deg, axis=1), attempts


def mg_dc_batch(n: int, m: int, D: DegreeSet, size: int, rng: np.random.Generator,
                max_attempts: int = MAX_DEGREE_ATTEMPTS) -> tuple[np.ndarray, int]:
    """``size`` uniform (n, m, D)-multigraphs as a (size, m, 2) array of 0-based endpoints.

    Half-edge labels 1..2m are dealt to vertices uniformly given the degrees;
    edge e joins the owners of half-edges 2e-1 and 2e.
    """
    if n == 0 or 2 * m > n * D.max or 2 * m < n * D.min:
        raise InfeasibleParameters(f"no ({n}, {m}, D={D})-multigraphs")
    if size == 0:
        return np.empty((0, m, 2), dtype=np.int64), 0
    deg, attempts = _degree_rows(D, n, m, size, rng, max_attempts)
    owners = np.repeat(np.tile(np.arange(n, dtype=np.int64), size), deg.ravel())
    owners = rng.permuted(owners.reshape(size, 2 * m), axis=1)
    return owners.reshape(size, m, 2), attempts


def sample_mg_dc(n: int, m: int, D: DegreeSet, seed: int) -> LabeledMultigraph:
    edges, _ = mg_dc_batch(n, m, D, 1, make_rng(seed))
    return LabeledMultigraph(n, tuple((int(a) + 1, int(b) + 1) for a, b in edges[0]))


def is_simple_edges(n: int, edges: np.ndarray) -> bool:
    u, v = edges[:, 0], edges[:, 1]
    if np.any(u == v):
        return False
    keys = np.minimum(u, v) * n + np.maximum(u, v)
    return np.unique(keys).size == keys.size


# --- cycle counting -----------------------------------------------------------


def _adjacency(n: int, edges: np.ndarray) -> sp.csr_matrix:
    u, v = edges[:, 0], edges[:, 1]
    data = np.ones(2 * len(u), dtype=np.int64)
    return sp.csr_matrix((data, (np.concatenate([u, v]), np.concatenate([v, u]))), shape=(n, n))


FAST_CYCLE_LENGTHS = (3, 4, 5)


def cycle_counts(n: int, edges: np.ndarray, lengths: Sequence[int]) -> dict[int, int]:
    """Counts of 3-, 4- and 5-cycles of a simple graph from sparse closed-walk traces."""
    bad = [j for j in lengths if j not in FAST_CYCLE_LENGTHS]
    if bad:
        raise ValueError(f"trace counter handles cycle lengths {FAST_CYCLE_LENGTHS}, got {bad}")
    a = _adjacency(n, edges)
    a2 = a @ a
    diag3 = np.asarray(a2.multiply(a).sum(axis=1)).ravel()
    tr3 = int(diag3.sum())
    out = {}
    if 3 in lengths:
        out[3] = tr3 // 6
    if 4 in lengths or 5 in lengths:
        deg = np.asarray(a.sum(axis=1)).ravel()
    if 4 in lengths:
        tr4 = int(a2.multiply(a2).sum())
        out[4] = (tr4 - 2 * int((deg * deg).sum()) + int(deg.sum())) // 8
    if 5 in lengths:
        a3 = a2 @ a
        tr5 = int(a2.multiply(a3).sum())
        out[5] = (tr5 - 5 * tr3 - 5 * int(((deg - 2) * diag3).sum())) // 10
    return {j: out[j] for j in lengths}


def cycle_length(f) -> int | None:
    """Length j if ``f`` is a simple cycle C_j, else None."""
    if not isinstance(f, LabeledGraph) or f.n < 3 or f.m != f.n:
        return None
    if any(d != 2 for d in f.degrees()):
        return None
    adj = {v: [] for v in range(1, f.n + 1)}
    for u, v in f.edges:
        adj[u].append(v)
        adj[v].append(u)
    seen, stack = {1}, [1]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return f.n if len(seen) == f.n else None


# --- empirical distributions ---------------------------------------------------


@dataclass(frozen=True)
class GnmModel:
    n: int
    m: int

    name = "gnm"


@dataclass(frozen=True)
class DegreeModel:
    n: int
    m: int
    degrees: DegreeSet
    simple: bool = True  # keep only samples without loops or repeated edges

    name = "dc"


@dataclass
class SampleBatch:
    model: str
    n: int
    m: int
    seed: int
    patterns: tuple
    counts: Counter = field(default_factory=Counter)  # tuple of per-pattern counts -> frequency
    num_samples: int = 0
    attempts: int = 0  # raw draws, including those discarded by conditioning
    degrees: tuple | None = None
    rng: str = RNG_ALGORITHM

    def marginal(self, i: int = 0) -> Counter:
        out: Counter = Counter()
        for key, c in self.counts.items():
            out[key[i]] += c
        return out

    def mean(self, i: int = 0) -> float:
        if not self.num_samples:
            return math.nan
        return sum(t * c for t, c in self.marginal(i).items()) / self.num_samples

    @property
    def acceptance_rate(self) -> float:
        return self.num_samples / self.attempts if self.attempts else math.nan

    def merge(self, other: "SampleBatch") -> "SampleBatch":
        out = SampleBatch(self.model, self.n, self.m, self.seed, self.patterns, self.counts + other.counts,
                          self.num_samples + other.num_samples, self.attempts + other.attempts,
                          self.degrees, self.rng)
        return out


def _pattern_counter(model, patterns) -> Callable[[np.ndarray], tuple]:
    lengths = [cycle_length(p) for p in patterns]
    n = model.n
    if all(j in FAST_CYCLE_LENGTHS for j in lengths):
        def count(edges):
            c = cycle_counts(n, edges, lengths)
            return tuple(c[j] for j in lengths)
        return count

    def count_generic(edges):
        g = LabeledGraph(n, frozenset((int(a) + 1, int(b) + 1) for a, b in edges))
        return tuple(subgraph_count(g, p) for p in patterns)
    return count_generic


def _run_chunk(args) -> SampleBatch:
    model, patterns, seed, chunk, size = args
    rng = make_rng(seed, chunk)
    counter = _pattern_counter(model, patterns)
    batch = SampleBatch(model.name, model.n, model.m, seed, tuple(patterns))
    if isinstance(model, GnmModel):
        for _ in range(size):
            batch.counts[counter(gnm_edges(model.n, model.m, rng))] += 1
        batch.num_samples = batch.attempts = size
        return batch
    batch.degrees = model.degrees.degrees
    kept = 0
    while kept < size:
        draws, _ = mg_dc_batch(model.n, model.m, model.degrees, min(DC_DRAW_BLOCK, size - kept), rng)
        for edges in draws:
            batch.attempts += 1
            if model.simple and not is_simple_edges(model.n, edges):
                continue
            batch.counts[counter(edges)] += 1
            kept += 1
            if kept == size:
                break
    batch.num_samples = kept
    return batch


def empirical_distribution(model, patterns, num_samples: int, seed: int, workers: int = 1) -> SampleBatch:
    """Joint histogram of pattern counts over ``num_samples`` kept samples.

    Under a :class:`DegreeModel` with ``simple=True`` the multigraphs with a
    loop or a repeated edge are discarded and counted only in ``attempts``.
    """
    if isinstance(model, DegreeModel) and not model.simple:
        raise ValueError("pattern counts under the multigraph law need simple=True conditioning")
    patterns = tuple(patterns)
    chunks = [(model, patterns, seed, i, min(CHUNK_SIZE, num_samples - i * CHUNK_SIZE))
              for i in range(math.ceil(num_samples / CHUNK_SIZE))]
    empty = SampleBatch(model.name, model.n, model.m, seed, patterns,
                        degrees=getattr(getattr(model, "degrees", None), "degrees", None))
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, chunks))
    else:
        parts = [_run_chunk(c) for c in chunks]
    out = empty
    for part in parts:
        out = out.merge(part)
    return out


# --- comparisons ------------------------------------------------------------------


def _normalized(hist) -> dict:
    total = sum(hist.values())
    return {k: c / total for k, c in hist.items()} if total else {}


def tv_distance(hist, pmf: Callable[[int], float]) -> float:
    """Total variation between an empirical histogram and a target pmf on the integers.

    Cells never observed contribute their full target mass, accounted for
    through ``1 - sum(target over observed cells)``.
    """
    if isinstance(hist, SampleBatch):
        hist = hist.marginal(0)
    emp = _normalized(hist)
    if not emp:
        return math.nan
    seen = sum(abs(p - pmf(t)) for t, p in emp.items())
    unseen = max(0.0, 1.0 - sum(pmf(t) for t in emp))
    return 0.5 * (seen + unseen)


def joint_independence_gap(hist, pmfs: Sequence[Callable[[int], float]]) -> float:
    """TV between the joint empirical histogram and the product of target marginals."""
    if isinstance(hist, SampleBatch):
        hist = hist.counts
    emp = _normalized(hist)
    if not emp:
        return math.nan

    def prod(key):
        out = 1.0
        for t, f in zip(key, pmfs):
            out *= f(t)
        return out

    seen = sum(abs(p - prod(k)) for k, p in emp.items())
    unseen = max(0.0, 1.0 - sum(prod(k) for k in emp))
    return 0.5 * (seen + unseen)


def chi_square_uniform(counts, num_cells: int) -> float:
    """p-value of the chi-square test that ``counts`` is uniform over ``num_cells`` cells."""
    observed = list(counts.values()) + [0] * (num_cells - len(counts))
    if len(observed) != num_cells:
        raise ValueError("more observed cells than the declared support")
    return float(stats.chisquare(observed).pvalue)


def multigraph_key(edges: np.ndarray) -> tuple:
    return tuple(int(v) for v in np.asarray(edges).ravel())


def mg_histogram(n: int, m: int, D: DegreeSet, num_samples: int, seed: int) -> tuple[Counter, int]:
    """Frequencies of each sampled (n, m, D)-multigraph (keyed by its endpoint sequence)."""
    hist: Counter = Counter()
    for chunk in range(math.ceil(num_samples / (100 * CHUNK_SIZE))):
        size = min(100 * CHUNK_SIZE, num_samples - chunk * 100 * CHUNK_SIZE)
        draws, _ = mg_dc_batch(n, m, D, size, make_rng(seed, chunk))
        flat = draws.reshape(size, 2 * m)
        codes = flat @ (n ** np.arange(2 * m, dtype=np.int64))
        vals, cnt = np.unique(codes, return_counts=True)
        for v, c in zip(vals.tolist(), cnt.tolist()):
            hist[v] += c
    return hist, mg_count(n, m, D)


def gnm_histogram(n: int, m: int, num_samples: int, seed: int) -> tuple[Counter, int]:
    """Frequencies of each sampled (n, m)-graph (keyed by its sorted pair indices)."""
    hist: Counter = Counter()
    for chunk in range(math.ceil(num_samples / CHUNK_SIZE)):
        rng = make_rng(seed, chunk)
        for _ in range(min(CHUNK_SIZE, num_samples - chunk * CHUNK_SIZE)):
            hist[tuple(sorted(gnm_edge_indices(n, m, rng).tolist()))] += 1
    return hist, math.comb(n * (n - 1) // 2, m)
