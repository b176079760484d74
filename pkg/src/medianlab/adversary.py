"""An answer-now, commit-later distance adversary.

The adversary hosts an n-point space whose metric is decided while the
game runs.  It starts from the complete graph with a d-regular expander
marked as permanent scaffolding, and answers every query (a, b) with
the current shortest-path hop distance.  The edges of one chosen
shortest path are then marked permanent, and any vertex whose permanent
degree has climbed above the cap C loses all of its non-permanent edges
at once.  Permanent edges are never removed, so all answers given so
far remain exactly the shortest-path distances of every later graph,
including the final one: an algorithm cannot distinguish this game from
an honest metric fixed in advance.

The cost of the construction is that heavily queried vertices end up
isolated behind their few permanent edges, far from everything, while
at least half the space (the "good" vertices, permanent degree below C)
keeps pairwise distance 1.  A returned point that was queried heavily
is therefore an expensive median, which is what the lower-bound games
exploit.

The cap must satisfy C > 2d + 4q/n for a game of q rounds, which keeps
the bookkeeping honest: each round marks at most one brand-new edge
permanent, at most two per vertex, so few vertices can ever go bad.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .distances import ExactDistance
from .metric import HopMetric, Transcript
from .expander import NotRegularError, RegularGraph

__all__ = [
    "BadConstantError",
    "BudgetExhaustedError",
    "PadOverflowError",
    "Adversary",
    "Certificate",
    "LiveAdversaryBacking",
    "minimal_cap",
    "verify_consistency",
    "verify_path_discipline",
    "good_point_bound",
    "ball_growth_ok",
    "verify_certificate",
]

Edge = tuple[int, int]


class BadConstantError(ValueError):
    """The pruning cap does not strictly dominate 2d + 4q/n."""


class BudgetExhaustedError(RuntimeError):
    """The adversary has already served its full round budget."""


class PadOverflowError(RuntimeError):
    """Finalize needs n pad rounds and the remaining budget is smaller.

    Signals a game configured with fewer total rounds than points; such
    budgets are served through the glued small-space construction in
    :mod:`medianlab.lowerbound` instead.
    """


def minimal_cap(n: int, rounds: int, degree: int) -> int:
    """Smallest integer cap C with C > 2*degree + 4*rounds/n."""
    return 2 * degree + (4 * rounds) // n + 1


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Adversary:
    """One playable game instance; single use, deterministic."""

    def __init__(self, n: int, rounds: int, degree: int, cap: int, anchor: RegularGraph):
        if n < 2:
            raise ValueError("the game needs at least two points")
        if rounds < 1:
            raise ValueError("the game needs at least one round")
        if anchor.n != n:
            raise NotRegularError(f"anchor graph has {anchor.n} vertices, expected {n}")
        if anchor.d != degree:
            raise NotRegularError(f"anchor graph is {anchor.d}-regular, expected {degree}")
        # strict inequality, checked exactly: C*n > 2*d*n + 4*rounds
        if cap * n <= 2 * degree * n + 4 * rounds:
            raise BadConstantError(
                f"cap {cap} must exceed 2*{degree} + 4*{rounds}/{n} = "
                f"{Fraction(2 * degree * n + 4 * rounds, n)}"
            )
        self.n = n
        self.rounds = rounds
        self.degree = degree
        self.cap = cap
        self.anchor = anchor

        self._adj = ~np.eye(n, dtype=bool)
        self._perm = np.zeros((n, n), dtype=bool)
        self._perm_deg = np.zeros(n, dtype=np.int64)
        self._pruned = np.zeros(n, dtype=bool)
        for u, v in anchor.edges:
            self._perm[u, v] = self._perm[v, u] = True
            self._perm_deg[u] += 1
            self._perm_deg[v] += 1
        exp = np.asarray(anchor.edges, dtype=np.int64)
        self._exp_u, self._exp_v = exp[:, 0], exp[:, 1]

        self.transcript = Transcript()
        self.paths: list[tuple[int, ...]] = []
        self.removal_log: list[tuple[Edge, ...]] = []
        self.rounds_served = 0

    # -- play ----------------------------------------------------------

    def answer(self, a: int, b: int) -> int:
        """Serve one round: answer, mark the reply path, prune."""
        if self.rounds_served >= self.rounds:
            raise BudgetExhaustedError(f"all {self.rounds} rounds already served")
        if not (0 <= a < self.n and 0 <= b < self.n):
            raise IndexError(f"query ({a}, {b}) outside space of size {self.n}")
        dist, path = self._distance_and_path(a, b)
        touched = self._mark_path(path)
        removed = self._prune(touched)
        self.paths.append(tuple(path))
        self.removal_log.append(tuple(removed))
        self.transcript.append(a, b, ExactDistance(dist))
        self.rounds_served += 1
        assert self._adj[self._exp_u, self._exp_v].all(), "anchor edge lost"
        return dist

    def _distance_and_path(self, a: int, b: int) -> tuple[int, list[int]]:
        if a == b:
            return 0, [a]
        adj = self._adj
        if adj[a, b]:
            return 1, [a, b]
        dist = np.full(self.n, -1, dtype=np.int64)
        dist[a] = 0
        frontier = np.zeros(self.n, dtype=bool)
        frontier[a] = True
        level = 0
        while True:
            level += 1
            reached = adj[frontier].any(axis=0) & (dist < 0)
            if not reached.any():
                raise AssertionError("adversary graph lost connectivity")
            dist[reached] = level
            if reached[b]:
                break
            frontier = reached
        # walk back choosing the lowest-index predecessor at every step;
        # any shortest path is valid, this one is deterministic
        path = [b]
        cur = b
        while cur != a:
            prev = np.nonzero(adj[:, cur] & (dist == dist[cur] - 1))[0]
            cur = int(prev[0])
            path.append(cur)
        path.reverse()
        return level, path

    def _mark_path(self, path: Sequence[int]) -> set[int]:
        touched: set[int] = set()
        for u, v in zip(path, path[1:]):
            assert self._adj[u, v], "reply path uses a missing edge"
            if not self._perm[u, v]:
                self._perm[u, v] = self._perm[v, u] = True
                self._perm_deg[u] += 1
                self._perm_deg[v] += 1
                touched.add(u)
                touched.add(v)
        return touched

    def _prune(self, touched: Iterable[int]) -> list[Edge]:
        removed: list[Edge] = []
        for v in sorted(touched):
            if self._pruned[v] or self._perm_deg[v] <= self.cap:
                continue
            gone = self._adj[v] & ~self._perm[v]
            idx = np.nonzero(gone)[0]
            self._adj[v, idx] = False
            self._adj[idx, v] = False
            self._pruned[v] = True
            removed.extend(_norm_edge(v, int(u)) for u in idx)
        return removed

    # -- settle --------------------------------------------------------

    def finalize(self, output: int) -> "Certificate":
        """Pad to the full budget, freeze the metric, and grade the output.

        Padding first queries (output, x) for every point x, then
        repeats (output, output+1 mod n) until exactly ``rounds`` rounds
        have been served.
        """
        if not (0 <= output < self.n):
            raise IndexError(f"output {output} outside space of size {self.n}")
        if self.rounds_served + self.n > self.rounds:
            raise PadOverflowError(
                f"{self.rounds - self.rounds_served} rounds left, "
                f"padding needs {self.n}; configure rounds >= queries + n"
            )
        for x in range(self.n):
            self.answer(output, x)
        filler = (output + 1) % self.n
        while self.rounds_served < self.rounds:
            self.answer(output, filler)

        final = HopMetric(self._adj)
        bad = tuple(int(v) for v in np.nonzero(self._perm_deg >= self.cap)[0])
        good = sorted(set(range(self.n)) - set(bad))
        assert good, "fewer than half the points may go bad"
        z_cost = final.cost_of(output)
        y, y_cost = final.cheapest(good)
        return Certificate(
            n=self.n,
            rounds=self.rounds,
            degree=self.degree,
            cap=self.cap,
            final_metric=final,
            perm=self._perm.copy(),
            anchor_edges=self.anchor.edges,
            paths=tuple(self.paths),
            removal_log=tuple(self.removal_log),
            transcript=self.transcript,
            bad=bad,
            z_star=output,
            z_star_cost=z_cost,
            best_good=(y, y_cost),
            ratio=Fraction(z_cost, y_cost),
        )


@dataclass
class Certificate:
    """Everything needed to audit one finished game."""

    n: int
    rounds: int
    degree: int
    cap: int
    final_metric: HopMetric
    perm: np.ndarray
    anchor_edges: tuple[Edge, ...]
    paths: tuple[tuple[int, ...], ...]
    removal_log: tuple[tuple[Edge, ...], ...]
    transcript: Transcript
    bad: tuple[int, ...]
    z_star: int
    z_star_cost: int
    best_good: tuple[int, int]
    ratio: Fraction

    @property
    def max_perm_degree(self) -> int:
        return int(self.perm.sum(axis=1).max())

    def snapshot_adjacency(self, i: int) -> np.ndarray:
        """Adjacency after round i (0 = before any query)."""
        if not (0 <= i <= len(self.removal_log)):
            raise IndexError(f"round {i} out of range")
        adj = ~np.eye(self.n, dtype=bool)
        for removed in self.removal_log[:i]:
            for u, v in removed:
                adj[u, v] = adj[v, u] = False
        return adj


class LiveAdversaryBacking:
    """Adapter so a CountingOracle can front a running game."""

    def __init__(self, adversary: Adversary):
        self._adv = adversary

    @property
    def n(self) -> int:
        return self._adv.n

    @property
    def epsilon(self) -> Fraction:
        return Fraction(1, 2**self._adv.n)

    def distance(self, a: int, b: int) -> ExactDistance:
        return ExactDistance(self._adv.answer(a, b))


# -- auditors -----------------------------------------------------------


def verify_consistency(cert: Certificate, transcript: Transcript | None = None) -> bool:
    """Every answer ever given equals the final metric's distance."""
    tr = cert.transcript if transcript is None else transcript
    for entry in tr:
        if entry.answer.eps_count != 0:
            return False
        if int(cert.final_metric.row(entry.a)[entry.b]) != entry.answer.units:
            return False
    return True


def verify_path_discipline(source: Adversary | Certificate) -> bool:
    """Re-derive the permanence timeline from the recorded reply paths.

    Checks, per round: the reply path contained at most one edge that
    was not yet permanent when it was picked, and at most two of its
    edges touch any one vertex.  The recomputed final permanent edge set
    must also match the recorded one exactly.
    """
    anchor = source.anchor.edges if isinstance(source, Adversary) else source.anchor_edges
    paths = source.paths
    perm: set[Edge] = set(anchor)
    for path in paths:
        edges = [_norm_edge(u, v) for u, v in zip(path, path[1:])]
        if len(edges) != len(set(edges)):
            return False  # reply paths are simple
        fresh = [e for e in edges if e not in perm]
        if len(fresh) > 1:
            return False
        per_vertex: dict[int, int] = {}
        for u, v in edges:
            per_vertex[u] = per_vertex.get(u, 0) + 1
            per_vertex[v] = per_vertex.get(v, 0) + 1
        if per_vertex and max(per_vertex.values()) > 2:
            return False
        perm.update(edges)
    if isinstance(source, Certificate):
        recorded = {
            _norm_edge(int(u), int(v))
            for u, v in np.argwhere(source.perm)
            if u < v
        }
        if recorded != perm:
            return False
    return True


def good_point_bound(cert: Certificate) -> tuple[int, int]:
    """Recompute the cheapest point that never went bad."""
    good = sorted(set(range(cert.n)) - set(cert.bad))
    if not good:
        raise ValueError("no good points to choose from")
    return cert.final_metric.cheapest(good)


def ball_growth_ok(cert: Certificate) -> bool:
    """Permanent-graph balls around the output grow at most like (C+2)^k."""
    hops = _perm_hops(cert.perm, cert.z_star)
    base = cert.cap + 2
    reach = 1
    bound = 1
    term = 1
    for k in range(1, int(hops.max()) + 1):
        reach += int((hops == k).sum())
        term *= base
        bound += term
        if reach > bound:
            return False
    return True


def _perm_hops(perm: np.ndarray, source: int) -> np.ndarray:
    n = perm.shape[0]
    dist = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    frontier = np.zeros(n, dtype=bool)
    frontier[source] = True
    level = 0
    while frontier.any():
        level += 1
        reached = perm[frontier].any(axis=0) & (dist < 0)
        if not reached.any():
            break
        dist[reached] = level
        frontier = reached
    if (dist < 0).any():
        raise AssertionError("permanent graph must stay connected (it holds the anchor)")
    return dist


def _anchor_preserved(cert: Certificate) -> bool:
    anchor = set(cert.anchor_edges)
    adj = cert.final_metric.adjacency
    if not all(adj[u, v] for u, v in anchor):
        return False
    for removed in cert.removal_log:
        if anchor.intersection(removed):
            return False
    return True


def verify_certificate(cert: Certificate, metric_axioms_cap: int = 0) -> dict[str, bool]:
    """Run every per-game audit; all values must be True for a clean game."""
    y, y_cost = good_point_bound(cert)
    checks = {
        "consistency": verify_consistency(cert),
        "path_discipline": verify_path_discipline(cert),
        "anchor_preserved": _anchor_preserved(cert),
        "bad_at_most_half": 2 * len(cert.bad) <= cert.n,
        "perm_degree_cap": cert.max_perm_degree <= cert.cap + 2,
        "ball_growth": ball_growth_ok(cert),
        "best_good_matches": (y, y_cost) == cert.best_good,
        "ratio_exact": cert.ratio == Fraction(cert.z_star_cost, cert.best_good[1]),
    }
    if metric_axioms_cap and cert.n <= metric_axioms_cap:
        from .metric import is_metric

        checks["metric_axioms"] = is_metric(cert.final_metric.to_table(metric_axioms_cap))
    return checks
