"""Desk-scale signSGD with (hierarchical) majority vote.

Users hold quadratic objectives f_i(theta) = 0.5 * ||theta - target_i||^2 and
draw stochastic gradients (theta - target_i) + N(0, sigma^2). Each round the
users' gradient signs are aggregated either in the clear or through the
secure protocol, and the model moves by -eta * vote.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from hisafe.hierarchy import (
    TieConfig,
    deal_round_triples,
    partition,
    plaintext_hierarchical_vote,
    run_hierarchical_round,
    subgroup_polynomial,
)
from hisafe.mvpoly import MvPolynomial
from hisafe.protocol import OpCounter, ProtocolTranscript, run_flat_round
from hisafe.sharing import (
    STREAM_GRADIENTS,
    STREAM_TASK,
    BeaverTripleSet,
    DealerConfig,
    deal_additive_shares,
    deal_beaver_triples,
    derive_rng,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SyntheticTask:
    targets: np.ndarray  # (n, d) per-user optima
    noise_sigma: float
    seed: int

    @classmethod
    def quadratic(
        cls,
        n: int,
        d: int,
        noise_sigma: float = 1.0,
        spread: float = 0.5,
        scale: float = 2.0,
        seed: int = 0,
    ) -> SyntheticTask:
        """Targets scattered by ``spread`` around a global optimum drawn with std ``scale``."""
        rng = derive_rng(seed, STREAM_TASK)
        centre = scale * rng.standard_normal(d)
        targets = centre + spread * rng.standard_normal((n, d))
        return cls(targets, float(noise_sigma), seed)

    @property
    def n(self) -> int:
        return self.targets.shape[0]

    @property
    def d(self) -> int:
        return self.targets.shape[1]

    @property
    def optimum(self) -> np.ndarray:
        return self.targets.mean(axis=0)

    def stochastic_gradients(self, theta: np.ndarray, round_index: int) -> np.ndarray:
        noise = derive_rng(self.seed, STREAM_GRADIENTS, round_index).standard_normal(self.targets.shape)
        return (theta - self.targets) + self.noise_sigma * noise

    def mean_gradient(self, theta: np.ndarray) -> np.ndarray:
        return theta - self.optimum

    def objective(self, theta: np.ndarray) -> float:
        return float(0.5 * np.mean(np.sum((theta - self.targets) ** 2, axis=1)))


@dataclass(frozen=True)
class SimConfig:
    n: int
    l: int
    d: int
    ties: TieConfig
    rounds: int
    eta: float
    seed: int = 0
    mode: str = "plaintext"
    theta0: np.ndarray | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        if self.eta <= 0:
            raise ValueError("learning rate must be positive")
        if self.mode not in ("plaintext", "secure"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.rounds < 0:
            raise ValueError("rounds must be non-negative")


@dataclass(frozen=True)
class RoundMetrics:
    round: int
    l1_grad_norm: float
    objective: float
    vote_agreement: float


@dataclass
class SimResult:
    metrics: list[RoundMetrics]
    theta: np.ndarray
    votes: np.ndarray  # (rounds, d)
    transcripts: list[ProtocolTranscript] = field(default_factory=list)
    online_mults: int = 0


def quantize(g: np.ndarray) -> np.ndarray:
    """1-bit sign quantisation; an exactly zero gradient maps to +1."""
    return np.where(g >= 0, 1, -1).astype(np.int64)


def _simulate(
    task: SyntheticTask,
    cfg: SimConfig,
    aggregate: Callable[[np.ndarray, int], np.ndarray],
) -> SimResult:
    if task.n != cfg.n or task.d != cfg.d:
        raise ValueError("task shape does not match the configuration")
    theta = np.zeros(cfg.d) if cfg.theta0 is None else np.array(cfg.theta0, dtype=float)
    metrics = []
    votes = np.zeros((cfg.rounds, cfg.d), dtype=np.int64)
    for t in range(cfg.rounds):
        true_grad = task.mean_gradient(theta)
        x = quantize(task.stochastic_gradients(theta, t))
        vote = aggregate(x, t)
        votes[t] = vote
        metrics.append(
            RoundMetrics(
                t,
                float(np.abs(true_grad).sum()),
                task.objective(theta),
                float(np.mean(vote == np.sign(true_grad))) if cfg.d else 1.0,
            )
        )
        theta = theta - cfg.eta * vote
    return SimResult(metrics, theta, votes)


def run_signsgd_mv(task: SyntheticTask, cfg: SimConfig) -> SimResult:
    layout = partition(cfg.n, cfg.l)
    return _simulate(task, cfg, lambda x, t: plaintext_hierarchical_vote(x, layout, cfg.ties))


def run_hisafe(task: SyntheticTask, cfg: SimConfig, keep_transcripts: bool = False) -> SimResult:
    layout = partition(cfg.n, cfg.l)
    poly = subgroup_polynomial(layout.n1, cfg.ties.intra)
    counter = OpCounter()
    transcripts: list[ProtocolTranscript] = []

    def aggregate(x: np.ndarray, t: int) -> np.ndarray:
        triples = deal_round_triples(cfg.seed, t, layout, poly, cfg.d)
        vote, tr = run_hierarchical_round(x, layout, cfg.ties, triples, t, counter, cfg.workers)
        if keep_transcripts:
            transcripts.append(tr)
        return vote

    result = _simulate(task, cfg, aggregate)
    result.transcripts = transcripts
    result.online_mults = counter.mults
    logger.debug("secure run finished: %d rounds, %d online multiplications", cfg.rounds, counter.mults)
    return result


def run(task: SyntheticTask, cfg: SimConfig) -> SimResult:
    return run_hisafe(task, cfg) if cfg.mode == "secure" else run_signsgd_mv(task, cfg)


# ---------------------------------------------------------------------------
# Opening uniformity
# ---------------------------------------------------------------------------

Dealer = Callable[[DealerConfig], BeaverTripleSet]


def zero_mask_dealer(cfg: DealerConfig) -> BeaverTripleSet:
    """Broken dealer with a = 0 in every triple (negative control)."""
    honest = deal_beaver_triples(cfg)
    rng = derive_rng(cfg.seed, 99, cfg.round, cfg.subgroup)
    a = np.zeros_like(honest.a)
    c = np.stack([deal_additive_shares(np.zeros(cfg.d, dtype=np.int64), cfg.n, cfg.p, rng).shares for _ in range(cfg.gate_count)])
    return BeaverTripleSet(a, honest.b, c, cfg.p)


def collect_openings(
    inputs: np.ndarray,
    poly: MvPolynomial,
    rounds: int,
    seed: int = 0,
    dealer: Dealer = deal_beaver_triples,
) -> np.ndarray:
    """Run ``rounds`` flat rounds with fresh triples on fixed inputs.

    Returns an array (rounds, positions) where the positions enumerate
    (gate, delta|epsilon, coordinate) in transcript order.
    """
    x = np.asarray(inputs, dtype=np.int64)
    gates = poly.schedule.mult_count
    rows = []
    for t in range(rounds):
        triples = dealer(DealerConfig(seed, poly.n, poly.p, gates, x.shape[1], round=t))
        _, tr = run_flat_round(x, poly, triples, t)
        rows.append(np.concatenate([np.concatenate([o.delta, o.epsilon]) for o in tr.openings()]))
    return np.array(rows, dtype=np.int64)


@dataclass(frozen=True)
class UniformityReport:
    p: int
    samples: int
    chi2: tuple[float, ...]
    pvalues: tuple[float, ...]
    two_sample_pvalues: tuple[float, ...] | None
    alpha: float

    @property
    def uniform(self) -> bool:
        return all(pv >= self.alpha for pv in self.pvalues)

    @property
    def input_independent(self) -> bool:
        if self.two_sample_pvalues is None:
            return True
        return all(pv >= self.alpha for pv in self.two_sample_pvalues)

    @property
    def passed(self) -> bool:
        return self.uniform and self.input_independent


def _counts(column: np.ndarray, p: int) -> np.ndarray:
    return np.bincount(column, minlength=p)


def uniformity_report(
    openings: np.ndarray,
    p: int,
    other: np.ndarray | None = None,
    alpha: float = 0.01,
    min_samples: int = 10_000,
) -> UniformityReport:
    """Chi-square goodness of fit to uniform on F_p per opening position, plus
    (if ``other`` is given) a per-position two-sample homogeneity test."""
    openings = np.asarray(openings, dtype=np.int64)
    if openings.shape[0] < min_samples:
        raise ValueError(f"need at least {min_samples} samples, got {openings.shape[0]}")
    chi2, pvals = [], []
    for col in openings.T:
        res = stats.chisquare(_counts(col, p))
        chi2.append(float(res.statistic))
        pvals.append(float(res.pvalue))
    two = None
    if other is not None:
        other = np.asarray(other, dtype=np.int64)
        if other.shape[1] != openings.shape[1]:
            raise ValueError("profiles have different opening layouts")
        two_list = []
        for c1, c2 in zip(openings.T, other.T):
            table = np.vstack([_counts(c1, p), _counts(c2, p)])
            table = table[:, table.sum(axis=0) > 0]
            if table.shape[1] < 2:
                # both profiles constant: identical iff the same constant
                two_list.append(1.0 if np.array_equal(c1[:1], c2[:1]) else 0.0)
                continue
            two_list.append(float(stats.chi2_contingency(table).pvalue))
        two = tuple(two_list)
    return UniformityReport(p, openings.shape[0], tuple(chi2), tuple(pvals), two, alpha)


def subgroup_agreement(
    n: int, ls: Sequence[int], seeds: Sequence[int], *, d: int = 20, rounds: int = 50,
    sigma: float = 4.0, eta: float = 0.05, ties: TieConfig | None = None,
) -> dict[int, float]:
    """Mean vote agreement per subgroup count, averaged over seeds (plaintext)."""
    ties = ties or TieConfig.preset("A1")
    out = {}
    for l in ls:
        vals = []
        for s in seeds:
            task = SyntheticTask.quadratic(n, d, sigma, seed=s)
            res = run_signsgd_mv(task, SimConfig(n, l, d, ties, rounds, eta, s))
            vals.append(np.mean([m.vote_agreement for m in res.metrics]))
        out[l] = float(np.mean(vals))
    return out
