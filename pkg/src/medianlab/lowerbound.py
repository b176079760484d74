"""Hard instances for budgeted median selection on huge spaces.

A q-query algorithm can only ever touch 2q+1 distinct points (two per
query, one more for its output).  The renaming wrapper below exploits
that: it intercepts an algorithm aimed at an n-point space and maps
each point to a fresh small name on first sight, so the whole game fits
inside a (2q+1)-point adversary no matter how large n is.  Afterwards
the small adversarial metric is blown back up to n points by gluing a
cluster of near-copies (mutual distance eps = 1/2**n) onto the best
good point, which leaves every answer the algorithm received intact
while making its output point expensive by comparison.

The measured quantity is cost(output) / cost(best good point) on the
glued space, reported exactly as a Fraction.  It grows with n for a
fixed query budget, which is the whole point of the construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .adversary import (
    Adversary,
    Certificate,
    LiveAdversaryBacking,
    minimal_cap,
    verify_certificate,
)
from .distances import EPS, ExactDistance
from .expander import build_regular
from .metric import CountingOracle, HopMetric, MetricTable, is_metric

__all__ = [
    "BudgetExceededError",
    "Renaming",
    "RenamedRun",
    "run_renamed",
    "GluedMetric",
    "glue_metric",
    "GameReport",
    "hard_instance_game",
]


class BudgetExceededError(RuntimeError):
    """The wrapped algorithm tried to spend more queries than its budget."""


class Renaming:
    """First-sight renaming of points onto the prefix 0, 1, 2, ..."""

    def __init__(self) -> None:
        self._names: dict[int, int] = {}

    def assign(self, point: int) -> int:
        name = self._names.get(point)
        if name is None:
            name = len(self._names)
            self._names[point] = name
        return name

    @property
    def count(self) -> int:
        return len(self._names)

    @property
    def mapping(self) -> dict[int, int]:
        return dict(self._names)

    def inverse(self) -> dict[int, int]:
        return {name: point for point, name in self._names.items()}


@dataclass
class RenamedRun:
    output: int  # the algorithm's answer, in its own coordinates
    output_name: int  # the same answer after renaming
    renaming: Renaming
    queries_used: int
    inner_transcript: list[tuple[int, int, ExactDistance]]
    outer_transcript: list[tuple[int, int, ExactDistance]]


class _RenamingProxy:
    """Oracle facade handed to the wrapped algorithm."""

    def __init__(self, oracle, n: int, budget: int, run: RenamedRun):
        self._oracle = oracle
        self.n = n
        self._budget = budget
        self._run = run

    @property
    def epsilon(self):
        return self._oracle.epsilon

    @property
    def queries_made(self) -> int:
        return self._run.queries_used

    def query(self, a: int, b: int) -> ExactDistance:
        if self._run.queries_used >= self._budget:
            raise BudgetExceededError(f"budget of {self._budget} queries exhausted")
        if not (0 <= a < self.n and 0 <= b < self.n):
            raise IndexError(f"query ({a}, {b}) outside space of size {self.n}")
        ren = self._run.renaming
        na = ren.assign(a)
        nb = ren.assign(b)
        answer = self._oracle.query(na, nb)
        self._run.queries_used += 1
        self._run.inner_transcript.append((a, b, answer))
        self._run.outer_transcript.append((na, nb, answer))
        return answer


def run_renamed(algorithm, oracle, n: int, budget: int) -> RenamedRun:
    """Run an algorithm meant for an n-point space through the renamer.

    The algorithm believes it plays on n points; the oracle only ever
    sees names below 2*budget+1.  The output gets a name too (fresh if
    the algorithm returns a point it never queried).
    """
    run = RenamedRun(-1, -1, Renaming(), 0, [], [])
    proxy = _RenamingProxy(oracle, n, budget, run)
    output = algorithm.run(proxy, n)
    if not (0 <= output < n):
        raise IndexError(f"algorithm returned {output}, outside the space")
    run.output = output
    run.output_name = run.renaming.assign(output)
    return run


class GluedMetric:
    """An m-point base metric with n-m+1 points fused at eps around one of them.

    The cluster holds the chosen base point y together with all the
    artificial points m, ..., n-1; any two cluster members sit at
    distance eps = 1/2**n from each other, and every other point sees
    the whole cluster at its base distance to y.
    """

    def __init__(self, base: HopMetric | MetricTable, y: int, n: int):
        m = base.n
        if not (0 <= y < m):
            raise ValueError(f"gluing point {y} outside the base space")
        if n <= m:
            raise ValueError("the glued space must be strictly larger than the base")
        # lexicographic (units, eps_count) comparisons stay faithful while
        # every sum keeps its eps count below 2**n; costs sum at most n of them
        if 2 * n >= 2**n:
            raise ValueError("space too small for the eps regime")
        if isinstance(base, MetricTable) and base.has_eps():
            raise ValueError("the base metric must be integer-valued before gluing")
        self.base = base
        self.y = y
        self.n = n
        self.m = m

    @property
    def epsilon(self) -> Fraction:
        return Fraction(1, 2**self.n)

    def _in_cluster(self, p: int) -> bool:
        return p == self.y or p >= self.m

    def distance(self, a: int, b: int) -> ExactDistance:
        if not (0 <= a < self.n and 0 <= b < self.n):
            raise IndexError(f"({a}, {b}) outside space of size {self.n}")
        if a == b:
            return ExactDistance(0)
        ca, cb = self._in_cluster(a), self._in_cluster(b)
        if ca and cb:
            return EPS
        if cb:
            return self.base.distance(a, self.y)
        if ca:
            return self.base.distance(b, self.y)
        return self.base.distance(a, b)

    def _base_row_sum(self, p: int) -> int:
        if isinstance(self.base, HopMetric):
            return self.base.cost_of(p)
        return int(self.base.units[p].sum())

    def cost_of(self, p: int) -> ExactDistance:
        """Total glued distance from p to the whole n-point space, closed form."""
        if self._in_cluster(p):
            return ExactDistance(self._base_row_sum(self.y), self.n - self.m)
        dy = self.base.distance(p, self.y).units
        return ExactDistance(self._base_row_sum(p) + (self.n - self.m) * dy)

    def to_table(self, cap: int = 4096) -> MetricTable:
        if self.n > cap:
            raise ValueError(f"refusing to materialize {self.n}x{self.n} table (cap {cap})")
        m, n, y = self.m, self.n, self.y
        if isinstance(self.base, HopMetric):
            bu = self.base.to_table(cap).units
        else:
            bu = self.base.units
        units = np.zeros((n, n), dtype=np.int64)
        units[:m, :m] = bu
        col = bu[:, y]
        units[:m, m:] = col[:, None]
        units[m:, :m] = col[None, :]
        eps = np.zeros((n, n), dtype=np.int64)
        cluster = np.array([y] + list(range(m, n)), dtype=np.int64)
        units[np.ix_(cluster, cluster)] = 0
        eps[np.ix_(cluster, cluster)] = 1
        np.fill_diagonal(units, 0)
        np.fill_diagonal(eps, 0)
        return MetricTable(units, eps)


def glue_metric(base: HopMetric | MetricTable, y: int, n: int) -> GluedMetric:
    return GluedMetric(base, y, n)


@dataclass
class GameReport:
    """Outcome and audit trail of one hard-instance game."""

    n: int
    q: int
    m: int
    degree: int
    cap: int
    seed: int
    algorithm: str
    queries_used: int
    names_used: int
    z_star: int
    y: int
    dist_z_y: int
    glued_cost_z: ExactDistance
    glued_cost_y: ExactDistance
    ratio: Fraction
    ratio_float: float
    f_hat: float
    certificate: Certificate = field(repr=False)
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def all_ok(self) -> bool:
        return all(self.checks.values())

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "m": self.m,
            "degree": self.degree,
            "cap": self.cap,
            "seed": self.seed,
            "algorithm": self.algorithm,
            "queries_used": self.queries_used,
            "names_used": self.names_used,
            "z_star": self.z_star + 1,
            "best_good": self.y + 1,
            "dist_z_y": self.dist_z_y,
            "glued_cost_z": {"units": self.glued_cost_z.units, "eps_count": self.glued_cost_z.eps_count},
            "glued_cost_y": {"units": self.glued_cost_y.units, "eps_count": self.glued_cost_y.eps_count},
            "ratio": self.ratio_float,
            "ratio_exact": f"{self.ratio.numerator}/{self.ratio.denominator}",
            "f_hat": self.f_hat,
            "checks": dict(sorted(self.checks.items())),
        }


def _safe_eps_float(n: int) -> float:
    return 2.0**-n if n < 1074 else 0.0


def hard_instance_game(
    algorithm,
    n: int,
    q: int,
    degree: int = 8,
    cap: int | None = None,
    seed: int = 0,
    metric_axioms_cap: int = 512,
) -> GameReport:
    """Play one full lower-bound game and audit every step.

    The adversary lives on m = 2q+1 points and is budgeted q + m rounds
    so the mandatory padding always fits after the algorithm's q
    queries.  Needs 2q+1 < n and an even degree (m is odd).
    """
    if q < 1:
        raise ValueError("the game needs a positive query budget")
    m = 2 * q + 1
    if m >= n:
        raise ValueError(f"need n > 2q+1 = {m} so the glued cluster is nonempty")
    anchor = build_regular(m, degree, seed)
    rounds = q + m
    if cap is None:
        cap = minimal_cap(m, rounds, degree)
    adv = Adversary(m, rounds, degree, cap, anchor)
    oracle = CountingOracle(LiveAdversaryBacking(adv), record_transcript=False)

    run = run_renamed(algorithm, oracle, n, q)
    cert = adv.finalize(run.output_name)

    z = run.output_name
    y, _ = cert.best_good
    glued = glue_metric(cert.final_metric, y, n)
    cost_z = glued.cost_of(z)
    cost_y = glued.cost_of(y)
    eps_val = glued.epsilon
    ratio = cost_z.to_fraction(eps_val) / cost_y.to_fraction(eps_val)
    eps_f = _safe_eps_float(n)
    ratio_float = cost_z.approx_float(eps_f) / cost_y.approx_float(eps_f)
    dzy = int(cert.final_metric.row(z)[y])

    checks = dict(verify_certificate(cert, metric_axioms_cap=0))
    checks.update(_game_checks(run, cert, glued, z, y, q))
    if n <= metric_axioms_cap:
        checks["glued_metric_axioms"] = is_metric(glued.to_table(metric_axioms_cap))

    return GameReport(
        n=n,
        q=q,
        m=m,
        degree=degree,
        cap=cap,
        seed=seed,
        algorithm=getattr(algorithm, "name", type(algorithm).__name__),
        queries_used=run.queries_used,
        names_used=run.renaming.count,
        z_star=z,
        y=y,
        dist_z_y=dzy,
        glued_cost_z=cost_z,
        glued_cost_y=cost_y,
        ratio=ratio,
        ratio_float=ratio_float,
        f_hat=ratio_float / math.log2(n),
        certificate=cert,
        checks=checks,
    )


def _game_checks(run: RenamedRun, cert: Certificate, glued: GluedMetric, z: int, y: int, q: int) -> dict[str, bool]:
    names = list(run.renaming.mapping.values())
    m = cert.n
    out: dict[str, bool] = {}
    out["renaming_injective"] = len(set(names)) == len(names)
    out["names_in_window"] = run.renaming.count <= 2 * q + 1 and all(0 <= v < m for v in names)
    out["budget_respected"] = run.queries_used <= q
    out["transcripts_aligned"] = _transcripts_aligned(run)
    out["replay_glued"] = all(
        glued.distance(e.a, e.b) == e.answer for e in cert.transcript
    )
    cost_z = glued.cost_of(z)
    cost_y = glued.cost_of(y)
    base_y = glued._base_row_sum(y)
    spread = glued.n - glued.m
    if z == y:
        out["cost_split_z"] = cost_z == cost_y
    else:
        base_z = glued._base_row_sum(z)
        dzy = int(cert.final_metric.row(z)[y])
        out["cost_split_z"] = cost_z == ExactDistance(base_z + spread * dzy)
    out["cost_split_y"] = cost_y == ExactDistance(base_y, spread)
    # the advertised floor on the measured ratio, checked exactly
    eps_val = glued.epsilon
    dzy = int(cert.final_metric.row(z)[y])
    floor = Fraction(spread * dzy) / (Fraction(base_y) + max(spread - 1, 0) * eps_val)
    out["ratio_floor"] = cost_z.to_fraction(eps_val) / cost_y.to_fraction(eps_val) >= floor
    return out


def _transcripts_aligned(run: RenamedRun) -> bool:
    if len(run.inner_transcript) != len(run.outer_transcript):
        return False
    fwd = run.renaming.mapping
    for (a, b, ans_in), (na, nb, ans_out) in zip(run.inner_transcript, run.outer_transcript):
        if fwd.get(a) != na or fwd.get(b) != nb or ans_in != ans_out:
            return False
    return True
