"""Deterministic query algorithms that play against live oracles.

A player is anything with a ``name`` attribute and a
``run(oracle, n) -> int`` method: it may call ``oracle.query(a, b)``
with 0-based points of an n-point space and must finally return one
point as its median guess.  Players are deterministic given their
constructor arguments, which is what makes every game replayable.
"""

from __future__ import annotations

import math
import random
from typing import Protocol

from .distances import ZERO
from .solvers import PivotInner, _sampling_over_points

__all__ = [
    "QueryAlgorithm",
    "ExactOnPrefix",
    "PivotOnPrefix",
    "SamplingPlayer",
    "RandomFuzzer",
    "StreamPlayer",
    "make_player",
    "largest_prefix_for_budget",
]


class QueryAlgorithm(Protocol):
    name: str

    def run(self, oracle, n: int) -> int: ...


def largest_prefix_for_budget(n: int, budget: int) -> int:
    """Largest s <= n with s*(s-1)/2 <= budget (at least 1)."""
    s = (1 + math.isqrt(1 + 8 * budget)) // 2
    while s * (s - 1) // 2 > budget:
        s -= 1
    return max(1, min(n, s))


class ExactOnPrefix:
    """Brute-force median of the largest affordable prefix subset."""

    def __init__(self, budget: int):
        self.budget = budget
        self.name = "exact"

    def run(self, oracle, n: int) -> int:
        s = largest_prefix_for_budget(n, self.budget)
        pts = list(range(s))
        cost = {p: ZERO for p in pts}
        for i, p in enumerate(pts):
            for q in pts[i + 1 :]:
                d = oracle.query(p, q)
                cost[p] = cost[p] + d
                cost[q] = cost[q] + d
        return min(pts, key=lambda p: (cost[p], p))


class PivotOnPrefix:
    """Pivot tournament on a prefix sized so its 3s queries fit the budget."""

    def __init__(self, budget: int):
        self.budget = budget
        self.name = "pivot"

    def run(self, oracle, n: int) -> int:
        s = max(1, min(n, self.budget // 3))
        return PivotInner().solve(oracle, list(range(s))).output


class SamplingPlayer:
    """Seeded sampling baseline sized to roughly sqrt(budget) picks."""

    def __init__(self, budget: int, seed: int):
        self.budget = budget
        self.seed = seed
        self.name = "sampling"

    def run(self, oracle, n: int) -> int:
        k = max(1, min(math.isqrt(max(self.budget, 1)), n))
        if k >= n and n * (n - 1) // 2 > self.budget:
            k = max(1, n - 1)
        return _sampling_over_points(oracle, list(range(n)), k, self.seed).output


class RandomFuzzer:
    """Spends the whole budget on seeded uniform queries, answers ignored."""

    def __init__(self, budget: int, seed: int):
        self.budget = budget
        self.seed = seed
        self.name = "fuzzer"

    def run(self, oracle, n: int) -> int:
        rng = random.Random(self.seed)
        for _ in range(self.budget):
            oracle.query(rng.randrange(n), rng.randrange(n))
        return rng.randrange(n)


class StreamPlayer:
    """Bridge to an external process speaking the line protocol.

    Reads "QUERY a b" / "OUTPUT z" lines (1-based points) from
    ``infile``, writes "ANSWER v" lines to ``outfile``, and returns the
    announced output.  Used by the CLI to host foreign algorithms.
    """

    def __init__(self, infile, outfile):
        self.infile = infile
        self.outfile = outfile
        self.name = "extern"

    def run(self, oracle, n: int) -> int:
        for raw in self.infile:
            line = raw.strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "QUERY" and len(parts) == 3:
                a, b = int(parts[1]) - 1, int(parts[2]) - 1
                answer = oracle.query(a, b)
                self.outfile.write(f"ANSWER {answer.units}\n")
                self.outfile.flush()
            elif parts[0] == "OUTPUT" and len(parts) == 2:
                return int(parts[1]) - 1
            else:
                raise ValueError(f"malformed protocol line: {line!r}")
        raise ValueError("stream ended before an OUTPUT line")


def make_player(name: str, budget: int, seed: int = 0) -> QueryAlgorithm:
    if name == "exact":
        return ExactOnPrefix(budget)
    if name == "pivot":
        return PivotOnPrefix(budget)
    if name == "sampling":
        return SamplingPlayer(budget, seed)
    if name in ("random", "fuzzer"):
        return RandomFuzzer(budget, seed)
    raise ValueError(f"unknown player {name!r}")
