"""Monte Carlo simulator of the harvest-then-relay protocol.

Random numbers are counter based.  Trial ``i`` under seed ``s`` owns the
Philox blocks ``[i * B, (i + 1) * B)`` keyed by ``s``, where ``B`` is the
number of 4-word blocks needed for one trial's exponential draws.  Any
trial can therefore be regenerated on its own, and a run split into chunks
across threads reproduces the single-threaded result bit for bit.
Chunk statistics are reduced in chunk order.

Each trial draws every constituent link gain and forms the maxima and sums
explicitly; no closed-form distribution is sampled directly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .distributions import exponential_from_uniform
from .params import SystemParams

CHUNK_TRIALS = 1 << 14
MIN_TRIALS = 1000
DEFAULT_TRIALS = 1_000_000


@dataclass(frozen=True)
class ChannelSample:
    """One realisation of every fading aggregate.

    ``x1, x2``: information-link gains; ``y1, y2``: strongest link to a PU
    receiver; ``z1, z2, z3``: total received PU power at SS, SR and SD.
    Fields may also be equal-length arrays holding many trials.
    """

    x1: float
    x2: float
    y1: float
    y2: float
    z1: float
    z2: float
    z3: float

    def harvested_energy_source(self, p: SystemParams, slot: float = 1.0):
        return p.eta * self.z1 * p.alpha * slot

    def harvested_energy_relay(self, p: SystemParams, slot: float = 1.0):
        return p.eta * self.z2 * p.alpha * slot

    def source_power(self, p: SystemParams):
        """Harvest-limited power capped by the peak interference constraint."""
        with np.errstate(divide="ignore"):
            return np.minimum(self.harvested_energy_source(p) / p.transmit_fraction,
                              p.p_interference / self.y1)

    def relay_power(self, p: SystemParams):
        with np.errstate(divide="ignore"):
            return np.minimum(self.harvested_energy_relay(p) / p.transmit_fraction,
                              p.p_interference / self.y2)


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std_error: float
    trials: int
    seed: int


def draws_per_trial(p: SystemParams) -> int:
    return 2 + 2 * p.m_receivers + 3 * p.n_transmitters


def _blocks_per_trial(p: SystemParams) -> int:
    return -(-draws_per_trial(p) // 4)


def _check_seed(base_seed: int) -> int:
    base_seed = int(base_seed)
    if not 0 <= base_seed < 1 << 128:
        raise ValueError("base_seed must be in [0, 2**128)")
    return base_seed


def _unit_exponentials(p: SystemParams, first: int, count: int, base_seed: int):
    """Unit-mean exponential draws for trials ``first .. first + count - 1``."""
    blocks = _blocks_per_trial(p)
    bitgen = np.random.Philox(key=base_seed, counter=first * blocks)
    raw = bitgen.random_raw(count * 4 * blocks).reshape(count, 4 * blocks)
    u = (raw[:, :draws_per_trial(p)] >> np.uint64(11)) * (1.0 / (1 << 53))
    return exponential_from_uniform(u, 1.0)


def _samples(p: SystemParams, first: int, count: int, base_seed: int) -> ChannelSample:
    e = _unit_exponentials(p, first, count, base_seed)
    m, n = p.m_receivers, p.n_transmitters
    c = p.channel
    g1 = e[:, 2:2 + m]
    g2 = e[:, 2 + m:2 + 2 * m]
    f = e[:, 2 + 2 * m:]
    return ChannelSample(
        x1=c.lambda1 * e[:, 0],
        x2=c.lambda2 * e[:, 1],
        y1=c.omega1 * g1.max(axis=1),
        y2=c.omega2 * g2.max(axis=1),
        z1=p.p_putx * c.nu1 * f[:, :n].sum(axis=1),
        z2=p.p_putx * c.nu2 * f[:, n:2 * n].sum(axis=1),
        z3=p.p_putx * c.nu3 * f[:, 2 * n:].sum(axis=1),
    )


def sample_network(p: SystemParams, trial_index: int, base_seed: int) -> ChannelSample:
    """The channel realisation of one trial, independent of any batching."""
    if trial_index < 0:
        raise ValueError("trial_index must be nonnegative")
    s = _samples(p, int(trial_index), 1, _check_seed(base_seed))
    return ChannelSample(*(float(getattr(s, k)[0]) for k in ChannelSample.__dataclass_fields__))


def sir(s: ChannelSample, p: SystemParams):
    """SIR at the relay and at the destination: ``(gamma_r, gamma_d)``.

    Raises
    ------
    ValueError
        If any aggregate interference power ``z2`` or ``z3`` is zero.
    """
    if np.any(np.asarray(s.z2) <= 0) or np.any(np.asarray(s.z3) <= 0):
        raise ValueError("zero PU interference power gives an undefined SIR")
    with np.errstate(divide="ignore"):
        gamma_r = np.minimum(p.rho * s.z1, p.p_interference / s.y1) * s.x1 / s.z2
        gamma_d = np.minimum(p.rho * s.z2, p.p_interference / s.y2) * s.x2 / s.z3
    return gamma_r, gamma_d


def _chunks(trials: int):
    return [(start, min(CHUNK_TRIALS, trials - start))
            for start in range(0, trials, CHUNK_TRIALS)]


def _map_chunks(fn, trials: int, workers: int):
    chunks = _chunks(trials)
    if workers <= 1 or len(chunks) == 1:
        return [fn(*c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: fn(*c), chunks))


def min_sir(p: SystemParams, trials: int, base_seed: int = 0, workers: int = 1) -> np.ndarray:
    """End-to-end SIR ``min(gamma_r, gamma_d)`` for trials ``0 .. trials - 1``."""
    base_seed = _check_seed(base_seed)

    def run(first, count):
        return np.minimum(*sir(_samples(p, first, count, base_seed), p))

    return np.concatenate(_map_chunks(run, trials, workers))


def _check_trials(trials: int) -> int:
    if trials < MIN_TRIALS:
        raise ValueError(f"need at least {MIN_TRIALS} trials, got {trials}")
    return int(trials)


def simulate(p: SystemParams, thresholds: Sequence[float], trials: int = DEFAULT_TRIALS,
             base_seed: int = 0, workers: int = 1):
    """Outage at several thresholds and ergodic capacity from one trial stream.

    Returns ``(outages, capacity)``: a list of :class:`MonteCarloEstimate`,
    one per threshold, and the estimate of ``E[log2(1 + min SIR)]``.
    """
    trials = _check_trials(trials)
    base_seed = _check_seed(base_seed)
    thresholds = np.asarray(thresholds, dtype=float).reshape(-1)

    def run(first, count):
        s = np.minimum(*sir(_samples(p, first, count, base_seed), p))
        rate = np.log2(1.0 + s)
        counts = (s[:, None] < thresholds[None, :]).sum(axis=0)
        return counts, float(rate.sum()), float(np.square(rate).sum())

    parts = _map_chunks(run, trials, workers)
    counts = np.zeros(thresholds.size, dtype=np.int64)
    total = 0.0
    total_sq = 0.0
    for c, r, r2 in parts:
        counts += c
        total += r
        total_sq += r2
    outages = []
    for c in counts:
        mean = int(c) / trials
        outages.append(MonteCarloEstimate(mean, math.sqrt(mean * (1.0 - mean) / trials),
                                          trials, base_seed))
    mean = total / trials
    var = max(total_sq - trials * mean * mean, 0.0) / (trials - 1)
    capacity = MonteCarloEstimate(mean, math.sqrt(var / trials), trials, base_seed)
    return outages, capacity


def estimate_outage(gamma_th: float, p: SystemParams, trials: int = DEFAULT_TRIALS,
                    base_seed: int = 0, workers: int = 1) -> MonteCarloEstimate:
    """Fraction of trials whose end-to-end SIR falls below ``gamma_th``."""
    return simulate(p, [gamma_th], trials, base_seed, workers)[0][0]


def estimate_ergodic_capacity(p: SystemParams, trials: int = DEFAULT_TRIALS,
                              base_seed: int = 0, workers: int = 1) -> MonteCarloEstimate:
    """Sample mean of ``log2(1 + min SIR)`` in bits/s/Hz."""
    return simulate(p, [], trials, base_seed, workers)[1]


class EmpiricalOutage:
    """Outage evaluator backed by the empirical CDF of simulated SIRs.

    Draws once; every later threshold query is a binary search, so it can be
    handed to the throughput evaluators.
    """

    source = "monte-carlo"
    thread_safe = True

    def __init__(self, p: SystemParams, trials: int = DEFAULT_TRIALS, base_seed: int = 0,
                 workers: int = 1):
        self.trials = _check_trials(trials)
        self.base_seed = _check_seed(base_seed)
        self._sorted = np.sort(min_sir(p, self.trials, self.base_seed, workers))

    def __call__(self, gamma_th):
        g = np.asarray(gamma_th, dtype=float)
        out = np.searchsorted(self._sorted, g, side="left") / self.trials
        return out[()] if out.ndim == 0 else out
