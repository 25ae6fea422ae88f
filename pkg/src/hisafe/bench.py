"""Offline/online cost measurement for one hierarchical secure round."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from hisafe.hierarchy import TieConfig, deal_round_triples, partition, run_hierarchical_round, subgroup_polynomial
from hisafe.protocol import OpCounter
from hisafe.sharing import STREAM_INPUTS, DealerConfig, dealt_element_count, derive_rng


@dataclass(frozen=True)
class BenchResult:
    n: int
    l: int
    n1: int
    d: int
    gates: int
    offline_seconds: float
    online_seconds: float
    offline_elements: int
    online_mults: int

    @property
    def l_times_d(self) -> int:
        return self.l * self.d


def run_bench(n: int, l: int, d: int, ties: TieConfig, seed: int = 0, workers: int = 1) -> BenchResult:
    layout = partition(n, l)
    t0 = time.perf_counter()
    poly = subgroup_polynomial(layout.n1, ties.intra)
    triples = deal_round_triples(seed, 0, layout, poly, d)
    t1 = time.perf_counter()

    inputs = np.where(derive_rng(seed, STREAM_INPUTS).random((n, d)) < 0.5, -1, 1)
    counter = OpCounter()
    run_hierarchical_round(inputs, layout, ties, triples, 0, counter, workers)
    t2 = time.perf_counter()

    gates = poly.schedule.mult_count
    offline = l * dealt_element_count(DealerConfig(seed, layout.n1, poly.p, gates, d))
    return BenchResult(n, l, layout.n1, d, gates, t1 - t0, t2 - t1, offline, counter.mults)


def linear_fit_r2(x: list[float], y: list[float]) -> tuple[float, float, float]:
    """Least-squares line y = a*x + b; returns (a, b, R^2)."""
    xs, ys = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    a, b = np.polyfit(xs, ys, 1)
    resid = ys - (a * xs + b)
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot else 1.0
    return float(a), float(b), r2
