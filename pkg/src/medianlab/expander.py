"""Regular graphs with certified edge expansion.

The adversarial games need a d-regular anchor graph whose edges can
never be removed, with a guaranteed lower bound on edge expansion:
every vertex set S with |S| <= n/2 must have at least alpha * d * |S|
edges leaving it.  Two certification routes are provided and kept
deliberately independent of each other:

* exhaustive: enumerate every candidate set (exact, n <= 24),
* spectral: alpha >= (d - lambda2) / (2d) from the second-largest
  adjacency eigenvalue.

Construction samples the uniform pairing model under a fixed seed and
retries deterministically (seed + attempt) until the sample is a simple
connected graph whose lambda2 clears the acceptance threshold.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .metric import DisconnectedGraphError, bfs_hop_row

__all__ = [
    "InfeasibleError",
    "NotRegularError",
    "RegularGraph",
    "ExpansionReport",
    "build_regular",
    "certify_expansion",
    "bfs_levels",
    "boundary_distance_sum",
    "verify_level_decay",
    "default_lambda2_threshold",
]

EXHAUSTIVE_LIMIT = 24
_ALPHA_GRAIN = 10**9  # spectral bounds are floored to this grid, conservatively


class InfeasibleError(ValueError):
    """No graph with the requested degree sequence exists (or d < 3)."""


class NotRegularError(ValueError):
    """A graph that must be d-regular is not."""


class RegularGraph:
    """An undirected d-regular graph given by its edge set."""

    def __init__(self, n: int, d: int, edges: Iterable[tuple[int, int]]):
        norm = sorted({(min(u, v), max(u, v)) for u, v in edges})
        for u, v in norm:
            if u == v:
                raise ValueError("self loops are not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside vertex range")
        self.n = n
        self.d = d
        self.edges = tuple(norm)
        degrees = [0] * n
        for u, v in self.edges:
            degrees[u] += 1
            degrees[v] += 1
        if any(deg != d for deg in degrees):
            raise NotRegularError(f"graph is not {d}-regular")
        self._adj: np.ndarray | None = None
        # populated by build_regular for reporting
        self.build_attempts: int | None = None
        self.expansion: ExpansionReport | None = None

    def adjacency(self) -> np.ndarray:
        if self._adj is None:
            adj = np.zeros((self.n, self.n), dtype=bool)
            for u, v in self.edges:
                adj[u, v] = True
                adj[v, u] = True
            self._adj = adj
        return self._adj

    def neighbors(self, v: int) -> list[int]:
        return [int(u) for u in np.nonzero(self.adjacency()[v])[0]]

    def is_connected(self) -> bool:
        return not (bfs_hop_row(self.adjacency(), 0) < 0).any()

    def __repr__(self) -> str:
        return f"RegularGraph(n={self.n}, d={self.d}, edges={len(self.edges)})"


@dataclass(frozen=True)
class ExpansionReport:
    method: str  # "exhaustive" | "spectral"
    alpha_lower: Fraction
    lambda2: float | None


def default_lambda2_threshold(d: int) -> float:
    """Acceptance threshold for construction: 2*sqrt(d-1) + 0.75."""
    return 2.0 * math.sqrt(d - 1) + 0.75


def _circulant_base(n: int, d: int) -> set[tuple[int, int]]:
    """Deterministic simple d-regular start: chords 1..d//2, plus the
    antipodal matching when d is odd (which forces n even)."""
    edges: set[tuple[int, int]] = set()
    for off in range(1, d // 2 + 1):
        for v in range(n):
            u = (v + off) % n
            edges.add((min(v, u), max(v, u)))
    if d % 2 == 1:
        half = n // 2
        for v in range(half):
            edges.add((v, v + half))
    return edges


def _swap_randomize(n: int, edges: set[tuple[int, int]], swaps: int, rng: random.Random) -> None:
    """Shuffle a regular graph in place by double-edge swaps.

    Each accepted move replaces edges (a,b),(c,e) with (a,c),(b,e),
    which preserves every degree; moves creating loops or parallel
    edges are skipped.  Simplicity is therefore invariant.
    """
    pool = list(edges)
    for _ in range(swaps):
        i = rng.randrange(len(pool))
        j = rng.randrange(len(pool))
        if i == j:
            continue
        a, b = pool[i]
        c, e = pool[j]
        if rng.getrandbits(1):
            c, e = e, c
        if len({a, b, c, e}) < 4:
            continue
        new1 = (min(a, c), max(a, c))
        new2 = (min(b, e), max(b, e))
        if new1 in edges or new2 in edges:
            continue
        edges.discard((min(a, b), max(a, b)))
        edges.discard((min(c, e), max(c, e)))
        edges.add(new1)
        edges.add(new2)
        pool[i] = new1
        pool[j] = new2


def build_regular(
    n: int,
    d: int,
    seed: int,
    lambda2_threshold: float | None = None,
    max_attempts: int = 40,
) -> RegularGraph:
    """Build a random d-regular graph that certifies as an expander.

    Starts from a fixed circulant and randomizes it with double-edge
    swaps (so the graph stays simple and d-regular by construction),
    then keeps swapping until the sample is connected with lambda2 at
    or below the threshold.  Deterministic for a fixed (n, d, seed).
    """
    if d < 3:
        raise InfeasibleError("need degree at least 3")
    if d >= n:
        raise InfeasibleError(f"degree {d} needs more than {n} vertices")
    if (n * d) % 2 != 0:
        raise InfeasibleError(f"no {d}-regular graph exists on {n} vertices (odd stub count)")
    threshold = default_lambda2_threshold(d) if lambda2_threshold is None else lambda2_threshold
    rng = random.Random(seed)
    edges = _circulant_base(n, d)
    swaps = max(2000, 10 * n * d)
    for attempt in range(max_attempts):
        _swap_randomize(n, edges, swaps, rng)
        g = RegularGraph(n, d, sorted(edges))
        try:
            report = certify_expansion(g, "spectral")
        except DisconnectedGraphError:
            continue
        if report.lambda2 is not None and report.lambda2 <= threshold:
            g.build_attempts = attempt + 1
            g.expansion = report
            return g
    raise RuntimeError(f"no acceptable {d}-regular graph on {n} vertices after {max_attempts} attempts")


def _neighbor_bitmasks(g: RegularGraph) -> list[int]:
    masks = [0] * g.n
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def _exhaustive_alpha(g: RegularGraph) -> Fraction:
    """Exact edge expansion by dynamic programming over all vertex sets.

    internal_edges(S) = internal_edges(S minus its lowest vertex v) plus
    |N(v) & S|, filled in one vectorized sweep per vertex.  The cut of S
    is then d|S| - 2*internal_edges(S).
    """
    n, d = g.n, g.d
    if n > EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive certification is capped at n = {EXHAUSTIVE_LIMIT}")
    nbr = _neighbor_bitmasks(g)
    size = 1 << n
    internal = np.zeros(size, dtype=np.int32)
    for v in range(n - 1, -1, -1):
        high = np.arange(0, size, 1 << (v + 1), dtype=np.uint32)
        if high.size == 0:
            continue
        masks = high | np.uint32(1 << v)
        overlap = np.bitwise_count(np.bitwise_and(high, np.uint32(nbr[v])))
        internal[masks] = internal[high] + overlap.astype(np.int32)
    sizes = np.bitwise_count(np.arange(size, dtype=np.uint32)).astype(np.int32)
    best: Fraction | None = None
    for s in range(1, n // 2 + 1):
        sel = sizes == s
        if not sel.any():
            continue
        min_cut = int((d * s - 2 * internal[sel]).min())
        cand = Fraction(min_cut, d * s)
        if best is None or cand < best:
            best = cand
    assert best is not None
    return best


def _lambda2(g: RegularGraph) -> float:
    """Second-largest adjacency eigenvalue, deterministic."""
    if g.n <= 600:
        vals = np.linalg.eigvalsh(g.adjacency().astype(np.float64))
        return float(vals[-2])
    rows = np.repeat(np.arange(g.n), g.d)
    cols = np.concatenate([np.nonzero(g.adjacency()[v])[0] for v in range(g.n)])
    mat = scipy.sparse.csr_matrix(
        (np.ones(rows.size), (rows, cols)), shape=(g.n, g.n)
    )
    v0 = np.random.default_rng(1234).standard_normal(g.n)
    vals = scipy.sparse.linalg.eigsh(mat, k=2, which="LA", v0=v0, return_eigenvectors=False)
    return float(np.sort(vals)[0])


def certify_expansion(g: RegularGraph, method: str = "spectral") -> ExpansionReport:
    """Certified lower bound on the edge expansion of g.

    exhaustive: exact minimum of cut(S) / (d |S|) over all S with
    1 <= |S| <= n/2 (n <= 24 only).  spectral: the floor-rounded value
    of (d - lambda2) / (2d), valid for every set size at once.  Both
    raise DisconnectedGraphError instead of certifying alpha = 0.
    """
    if not g.is_connected():
        raise DisconnectedGraphError("graph is disconnected")
    if method == "exhaustive":
        lam = _lambda2(g) if g.n <= 600 else None
        return ExpansionReport("exhaustive", _exhaustive_alpha(g), lam)
    if method == "spectral":
        lam = _lambda2(g)
        raw = (g.d - lam) / (2.0 * g.d)
        floored = max(0, math.floor(raw * _ALPHA_GRAIN) - 1)
        return ExpansionReport("spectral", Fraction(floored, _ALPHA_GRAIN), lam)
    raise ValueError(f"unknown certification method {method!r}")


def bfs_levels(g: RegularGraph, root_set: Iterable[int]) -> list[list[int]]:
    """BFS level sets from a multi-source root set; level 0 is the root set."""
    roots = sorted(set(int(v) for v in root_set))
    if not roots:
        raise ValueError("root set is empty")
    adj = g.adjacency()
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[roots] = 0
    frontier = np.zeros(g.n, dtype=bool)
    frontier[roots] = True
    levels = [roots]
    while True:
        reached = adj[frontier].any(axis=0) & (dist < 0)
        if not reached.any():
            break
        dist[reached] = len(levels)
        levels.append([int(v) for v in np.nonzero(reached)[0]])
        frontier = reached
    return levels


def boundary_distance_sum(g: RegularGraph, U: Sequence[int]) -> int:
    """Sum over u in U of the hop distance from u to the complement of U."""
    inside = sorted(set(int(v) for v in U))
    if not inside:
        raise ValueError("U is empty")
    if len(inside) >= g.n:
        raise ValueError("U must be a proper subset of the vertices")
    comp = sorted(set(range(g.n)) - set(inside))
    levels = bfs_levels(g, comp)
    return sum(i * len(level) for i, level in enumerate(levels))


def verify_level_decay(g: RegularGraph, U: Sequence[int], alpha) -> bool:
    """Check the geometric decay that expansion forces on BFS tails.

    With levels L_1, L_2, ... of U (measured from the complement of U)
    and tails S_i = L_i + L_(i+1) + ..., expansion alpha demands
    |S_(i+1)| <= (1 - alpha) |S_i| for every i >= 1, and in total
    boundary_distance_sum(g, U) <= |U| / alpha**2.  Returns False as
    soon as either bound is violated, so feeding an inflated alpha is a
    cheap way to watch it fail.
    """
    a = Fraction(alpha)
    if not (0 < a <= 1):
        raise ValueError("alpha must be in (0, 1]")
    inside = set(int(v) for v in U)
    if not inside or len(inside) >= g.n:
        raise ValueError("U must be a nonempty proper subset")
    if 2 * len(inside) > g.n:
        raise ValueError("expansion arguments need |U| <= n/2")
    comp = sorted(set(range(g.n)) - inside)
    levels = bfs_levels(g, comp)
    tail_sizes = []
    running = sum(len(lv) for lv in levels[1:])
    for lv in levels[1:]:
        tail_sizes.append(running)
        running -= len(lv)
    for i in range(len(tail_sizes) - 1):
        if Fraction(tail_sizes[i + 1]) > (1 - a) * tail_sizes[i]:
            return False
    bsum = sum(i * len(lv) for i, lv in enumerate(levels))
    return Fraction(bsum) <= Fraction(len(inside)) / (a * a)
