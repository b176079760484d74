"""Instance generators, experiment sweeps, and audit helpers.

Everything here is deterministic in (kind, n, seed): generators use
their own random.Random instances, sweeps sort their rows, and reports
serialize to plain JSON dictionaries so two runs with the same inputs
produce byte-identical artifacts.  Timings are carried for curiosity
but excluded from equality so round-tripped reports still compare.
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .adversary import Adversary, Certificate, LiveAdversaryBacking, minimal_cap, verify_certificate
from .expander import build_regular
from .metric import (
    CountingOracle,
    MetricTable,
    StubOracle,
    brute_force_cost,
    brute_force_median,
    graph_metric,
)
from .solvers import make_inner, restrict_and_solve, subset_schedule, subset_size, transfer_bound

__all__ = [
    "INSTANCE_KINDS",
    "generate_instance",
    "replay_verify",
    "verify_nonadaptive",
    "SweepConfig",
    "sweep_upper_bound",
    "play_adversary_game",
    "RunReport",
    "write_csv",
    "rows_to_csv_text",
]

INSTANCE_KINDS = ("star-path", "random-graph", "grid", "table")


def _star_path_edges(n: int) -> list[tuple[int, int]]:
    if n <= 4:
        return [(i, i + 1) for i in range(n - 1)]
    k = (n + 1) // 2
    edges = [(i, i + 1) for i in range(k - 1)]
    edges.extend((0, leaf) for leaf in range(k, n))
    return edges


def _random_graph_edges(n: int, rng: random.Random) -> list[tuple[int, int]]:
    edges = {(rng.randrange(i), i) for i in range(1, n)}
    for _ in range(n // 3):
        a = rng.randrange(n)
        b = rng.randrange(n)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return sorted(edges)


def _grid_edges(n: int) -> list[tuple[int, int]]:
    rows = max(1, math.isqrt(n))
    cols = -(-n // rows)
    edges = []
    for v in range(n):
        r, c = divmod(v, cols)
        if c + 1 < cols and v + 1 < n and (v + 1) // cols == r:
            edges.append((v, v + 1))
        if (r + 1) * cols + c < n:
            edges.append((v, (r + 1) * cols + c))
    return edges


def _random_table(n: int, rng: random.Random) -> MetricTable:
    units = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            units[i, j] = units[j, i] = rng.randint(1, 9)
    # shortest-path closure turns arbitrary symmetric weights into a metric
    for k in range(n):
        units = np.minimum(units, units[:, k][:, None] + units[k, :][None, :])
    np.fill_diagonal(units, 0)
    return MetricTable(units, np.zeros_like(units))


def generate_instance(kind: str, n: int, seed: int = 0) -> MetricTable:
    """Build one deterministic test metric of the given family and size."""
    if n < 1:
        raise ValueError("instances need at least one point")
    if kind == "star-path":
        return graph_metric(n, _star_path_edges(n))
    if kind == "random-graph":
        return graph_metric(n, _random_graph_edges(n, random.Random(seed)))
    if kind == "grid":
        return graph_metric(n, _grid_edges(n))
    if kind == "table":
        return _random_table(n, random.Random(seed))
    raise ValueError(f"unknown instance kind {kind!r} (have {', '.join(INSTANCE_KINDS)})")


def replay_verify(transcript, metric) -> bool:
    """True iff every recorded answer matches the metric it claims to describe."""
    return all(metric.distance(e.a, e.b) == e.answer for e in transcript)


def verify_nonadaptive(inner, s: int) -> bool:
    """Probe whether a solver's query sequence ignores the answers.

    Runs the solver twice against constant oracles with different
    constants; both query sequences must exist, match each other, and
    match the schedule the solver publishes up front.
    """
    S = list(range(s))
    planned = inner.schedule(S)
    if planned is None:
        return False
    seqs = []
    for constant in (1, 3):
        stub = StubOracle(s, constant)
        inner.solve(stub, S)
        seqs.append([(e.a, e.b) for e in stub.transcript])
    return seqs[0] == seqs[1] == list(planned)


@dataclass(frozen=True)
class SweepConfig:
    """One cell of an upper-bound experiment grid."""

    kind: str
    n: int
    f_of_n: int
    inner: str
    seed: int = 0

    def key(self) -> tuple:
        return (self.kind, self.n, self.f_of_n, self.inner, self.seed)


def sweep_upper_bound(configs: Sequence[SweepConfig], brute_force_cap: int = 4096) -> list[dict]:
    """Run the subset pipeline over a grid and score each run against its bound.

    Rows come back sorted by config key.  The bound comparison is exact
    (integer cross-multiplication through Fraction); the ratio columns
    are floats for display only.
    """
    rows = []
    for cfg in sorted(configs, key=SweepConfig.key):
        table = generate_instance(cfg.kind, cfg.n, cfg.seed)
        if cfg.n > brute_force_cap:
            raise ValueError(f"n={cfg.n} exceeds the brute-force cap {brute_force_cap}")
        oracle = CountingOracle(table, record_transcript=False)
        inner = make_inner(cfg.inner, rng_seed=cfg.seed)
        t0 = time.perf_counter()
        result = restrict_and_solve(oracle, cfg.n, cfg.f_of_n, inner)
        elapsed = time.perf_counter() - t0

        s = subset_size(cfg.n, cfg.f_of_n)
        S = subset_schedule(cfg.n, s)
        opt_point, opt_cost = brute_force_median(table)
        out_cost = brute_force_cost(table, result.output)
        ratio = Fraction(out_cost.units) / Fraction(opt_cost.units) if opt_cost.units else Fraction(1)

        if result.claimed_beta is not None:
            beta = result.claimed_beta
        else:
            sub_opt, sub_opt_cost = brute_force_median(table, S)
            sub_out_cost = brute_force_cost(table, result.output, S)
            beta = (
                Fraction(sub_out_cost.units) / Fraction(sub_opt_cost.units)
                if sub_opt_cost.units
                else Fraction(1)
            )
        bound = transfer_bound(beta, cfg.n, s)

        rows.append(
            {
                "kind": cfg.kind,
                "n": cfg.n,
                "f_of_n": cfg.f_of_n,
                "inner": cfg.inner,
                "seed": cfg.seed,
                "subset_size": s,
                "queries": result.queries_used,
                "output": result.output + 1,
                "output_cost": out_cost.units,
                "opt": opt_point + 1,
                "opt_cost": opt_cost.units,
                "ratio": float(ratio),
                "beta": float(beta),
                "bound": float(bound),
                "bound_satisfied": bool(ratio <= bound),
                "seconds": round(elapsed, 6),
            }
        )
    return rows


def play_adversary_game(
    n: int,
    q: int,
    degree: int,
    player,
    seed: int = 0,
    cap: int | None = None,
    metric_axioms_cap: int = 512,
) -> tuple[Certificate, dict[str, bool]]:
    """Pit one query algorithm against the pruning adversary, then audit.

    The adversary is budgeted q + n rounds so its finalization padding
    always fits after the player's q queries.
    """
    anchor = build_regular(n, degree, seed)
    rounds = q + n
    if cap is None:
        cap = minimal_cap(n, rounds, degree)
    adv = Adversary(n, rounds, degree, cap, anchor)
    oracle = CountingOracle(LiveAdversaryBacking(adv), record_transcript=False)
    output = player.run(oracle, n)
    cert = adv.finalize(output)
    checks = verify_certificate(cert, metric_axioms_cap=metric_axioms_cap)
    return cert, checks


@dataclass
class RunReport:
    """Config, measurements, and pass/fail audits for one experiment run."""

    config: dict
    measured: dict
    checks: dict
    timings: dict = field(default_factory=dict, compare=False)

    @property
    def all_ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> str:
        payload = {
            "config": self.config,
            "measured": self.measured,
            "checks": self.checks,
            "timings": self.timings,
        }
        return json.dumps(payload, sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        data = json.loads(text)
        return cls(
            config=data["config"],
            measured=data["measured"],
            checks=data["checks"],
            timings=data.get("timings", {}),
        )


def write_csv(rows: Sequence[dict], stream) -> None:
    """Write dict rows as CSV with the first row fixing the column order."""
    if not rows:
        return
    writer = csv.DictWriter(stream, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    writer.writerows(rows)


def rows_to_csv_text(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()
