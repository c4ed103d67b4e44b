"""M/G/1 FIFO simulation by the Lindley recursion.

Arrivals are Poisson, service times are ``8 * size / C`` with sizes drawn from
a :class:`PacketSizeDistribution`. The buffer is infinite and there is a
single server, so per-packet waits follow exactly

    W[0] = 0,   W[n+1] = max(0, W[n] + X[n] - A[n+1])

where A[n+1] is the gap between arrivals n and n+1. Writing U[n] = X[n-1] - A[n]
and S[n] = U[1] + ... + U[n], the recursion unrolls to
W[n] = S[n] - min(0, S[1], ..., S[n]), which numpy evaluates in O(n) without
a Python-level loop.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import distributions as dists
from .distributions import PacketSizeDistribution
from .errors import EmptySample, ValidationError

DEFAULT_PACKETS = 1_000_000
MIN_WARMUP = 10_000

# Stream ids for SeedSequence spawn keys; one independent stream per purpose.
ARRIVAL_STREAM = 0
SERVICE_STREAM = 1


def default_warmup(n_packets: int) -> int:
    """1% of the run, at least 10^4 packets, never the whole run."""
    return min(max(n_packets // 100, MIN_WARMUP), n_packets // 2)


def stream(seed: int, purpose: int) -> np.random.Generator:
    """Independent PCG64 generator derived from (seed, purpose)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(purpose,))))


@dataclass(frozen=True)
class SimConfig:
    capacity_bps: float
    load: float
    distribution: PacketSizeDistribution
    n_packets: int = DEFAULT_PACKETS
    warmup_packets: int | None = None
    seed: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.capacity_bps) and self.capacity_bps > 0):
            raise ValidationError(f"capacity_bps must be positive, got {self.capacity_bps}")
        if not 0 < self.load < 1:
            raise ValidationError(f"load must satisfy 0 < load < 1, got {self.load}")
        if int(self.n_packets) != self.n_packets or self.n_packets < 1:
            raise ValidationError(f"n_packets must be a positive integer, got {self.n_packets}")
        object.__setattr__(self, "n_packets", int(self.n_packets))
        if self.warmup_packets is None:
            object.__setattr__(self, "warmup_packets", default_warmup(self.n_packets))
        if not 0 <= self.warmup_packets < self.n_packets:
            raise ValidationError(
                f"need 0 <= warmup_packets < n_packets, got {self.warmup_packets} / {self.n_packets}"
            )
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")

    @property
    def mean_service(self) -> float:
        return 8.0 * dists.mean_bytes(self.distribution) / self.capacity_bps

    def to_dict(self) -> dict:
        return {
            "capacity_bps": self.capacity_bps,
            "load": self.load,
            "distribution": self.distribution.name,
            "n_packets": self.n_packets,
            "warmup_packets": self.warmup_packets,
            "seed": self.seed,
        }


@dataclass
class DelaySample:
    sojourns: np.ndarray  # seconds, in packet order
    config: SimConfig | None = None
    service: np.ndarray | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.sojourns)

    @property
    def mean(self) -> float:
        if len(self.sojourns) == 0:
            raise EmptySample("empty delay sample")
        return float(np.mean(self.sojourns))

    def quantiles(self, probs) -> np.ndarray:
        return empirical_quantiles(self, probs)


def arrival_rate(config: SimConfig) -> float:
    """Packets per second giving the configured load: rho / E(X)."""
    return config.load / config.mean_service


def lindley_waits(service: np.ndarray, interarrival: np.ndarray) -> np.ndarray:
    """Waiting times for a FIFO single-server queue.

    ``interarrival[n]`` is the gap between arrivals n-1 and n; ``interarrival[0]``
    is ignored because the first packet finds the system empty.
    """
    n = len(service)
    if n == 0:
        return np.empty(0)
    steps = np.empty(n)
    steps[0] = 0.0
    steps[1:] = service[:-1] - interarrival[1:]
    walk = np.cumsum(steps)
    low = np.minimum.accumulate(walk)
    np.minimum(low, 0.0, out=low)
    waits = walk - low
    # round-off can leave -0.0 or -1e-22 where the queue just emptied
    np.maximum(waits, 0.0, out=waits)
    return waits


ServiceSampler = Callable[[np.random.Generator, int, SimConfig], np.ndarray]


def simulate_mg1(config: SimConfig, service_sampler: ServiceSampler | None = None) -> DelaySample:
    """Run one simulation and return post-warmup sojourn times.

    ``service_sampler(rng, n, config)`` replaces packet-size service times;
    it exists so the engine can be checked against M/M/1 closed forms. The
    arrival rate is always ``config.load / config.mean_service``, so a sampler
    must keep the same mean to hold the load.
    """
    n = config.n_packets
    lam = arrival_rate(config)
    interarrival = stream(config.seed, ARRIVAL_STREAM).exponential(1.0 / lam, n)
    service_rng = stream(config.seed, SERVICE_STREAM)
    if service_sampler is None:
        sizes = dists.sample(config.distribution, service_rng, n)
        service = sizes * (8.0 / config.capacity_bps)
    else:
        service = np.asarray(service_sampler(service_rng, n, config), dtype=float)
    waits = lindley_waits(service, interarrival)
    k = config.warmup_packets
    return DelaySample(waits[k:] + service[k:], config, service[k:])


def exponential_service(rng: np.random.Generator, n: int, config: SimConfig) -> np.ndarray:
    """Exponential service with the configured mean, turning the run into M/M/1."""
    return rng.exponential(config.mean_service, n)


def empirical_quantiles(sample, probs: Sequence[float]) -> np.ndarray:
    """Linearly interpolated order-statistic quantiles (Hyndman-Fan type 7).

    With sorted data x[0..n-1], p maps to position h = (n-1)p and the result
    is x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h]).
    """
    data = sample.sojourns if isinstance(sample, DelaySample) else np.asarray(sample, dtype=float)
    if len(data) == 0:
        raise EmptySample("cannot take quantiles of an empty sample")
    p = np.asarray(probs, dtype=float)
    if np.any((p < 0) | (p > 1)):
        raise ValidationError("probabilities must lie in [0, 1]")
    if np.any(np.diff(p) < 0):
        raise ValidationError("probabilities must be sorted ascending")
    x = np.sort(data)
    h = (len(x) - 1) * p
    lo = np.floor(h).astype(np.int64)
    hi = np.minimum(lo + 1, len(x) - 1)
    frac = h - lo
    out = x[lo] + frac * (x[hi] - x[lo])
    # interpolation can undershoot by one ulp between equal neighbours
    return np.maximum.accumulate(out)


# --- export -----------------------------------------------------------------

def write_delays_csv(sample: DelaySample, fh) -> None:
    for v in sample.sojourns:
        fh.write(f"{v:.12e}\n")


def read_delays_csv(fh) -> DelaySample:
    values = []
    for lineno, line in enumerate(fh, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(float(line.split(",")[0]))
        except ValueError:
            raise ValidationError(f"line {lineno}: not a number: {line!r}") from None
    if not values:
        raise EmptySample("delay file contains no samples")
    return DelaySample(np.asarray(values))


SUMMARY_PROBS = (0.5, 0.9, 0.95, 0.99)


def summary(sample: DelaySample, probs: Sequence[float] = SUMMARY_PROBS) -> dict:
    qs = empirical_quantiles(sample, probs)
    return {
        "n": len(sample),
        "mean": sample.mean,
        "quantiles": {f"{p:g}": float(v) for p, v in zip(probs, qs)},
    }
