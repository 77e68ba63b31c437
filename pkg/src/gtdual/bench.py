"""Wall-clock comparison of the inference engines on one instance."""

from __future__ import annotations

import statistics
import time
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from . import dual, oracle
from .graph import PoolingGraph, ReducedProblem, reduce
from .model import Observation, PriorVector
from .report import METHODS, compute_posteriors, posterior_report


@dataclass(frozen=True)
class BenchRecord:
    method: str
    n: int
    m: int
    wall_time: Optional[float]
    checksum: Optional[float]
    status: str = "ok"

    def to_dict(self) -> dict:
        return asdict(self)


def feasible(rp: ReducedProblem, method: str, naive_cap: int = oracle.NAIVE_CAP, dual_cap: int = dual.DUAL_CAP) -> bool:
    if method == "naive":
        return rp.n <= naive_cap
    return rp.m <= dual_cap


def time_engine(rp: ReducedProblem, method: str, repeat: int = 5, workers: int = 1) -> float:
    """Median wall time in seconds of ``repeat`` runs of one engine on ``rp``."""
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        compute_posteriors(rp, method, workers=workers, naive_cap=rp.n, dual_cap=rp.m)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def run_bench(
    graph: PoolingGraph,
    priors: PriorVector,
    observation: Observation,
    methods: Sequence[str] = METHODS,
    repeat: int = 1,
    workers: int = 1,
    naive_cap: int = oracle.NAIVE_CAP,
    dual_cap: int = dual.DUAL_CAP,
) -> list[BenchRecord]:
    """One record per method; engines beyond their cap are marked infeasible, not run."""
    rp = reduce(graph, observation, priors)
    records = []
    for method in methods:
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}")
        if not feasible(rp, method, naive_cap, dual_cap):
            records.append(BenchRecord(method, rp.n, rp.m, None, None, "infeasible"))
            continue
        times = []
        for _ in range(max(1, repeat)):
            t0 = time.perf_counter()
            rep = posterior_report(graph, priors, observation, method, workers, naive_cap, dual_cap)
            times.append(time.perf_counter() - t0)
        records.append(BenchRecord(method, rp.n, rp.m, statistics.median(times), sum(rep.p_positive)))
    return records


def format_table(records: Sequence[BenchRecord]) -> str:
    lines = [f"{'method':<10} {'n':>5} {'m':>4} {'wall_s':>10} {'checksum':>20}"]
    for r in records:
        if r.status != "ok":
            lines.append(f"{r.method:<10} {r.n:>5} {r.m:>4} {'infeasible':>10} {'-':>20}")
        else:
            lines.append(f"{r.method:<10} {r.n:>5} {r.m:>4} {r.wall_time:>10.4f} {r.checksum:>20.12f}")
    return "\n".join(lines)
