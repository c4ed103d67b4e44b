"""Discrete packet-size distributions: construction, I/O, moments, sampling.

Sizes are in bytes. A distribution is immutable once built; sampling takes an
externally owned ``numpy.random.Generator`` so that threads never share state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import InfeasibleMoments, ParseError, ValidationError

SUM_TOL = 1e-9
RENORMALIZE_TOL = 1e-3

# Minimum Ethernet frame, IPv4 minimum reassembly MTU, Ethernet MTU, jumbo.
LANDMARK_SIZES = (64, 576, 1500, 9000)
ETHERNET_MIN_FRAME = 64


def _as_exact(x: float) -> int | float:
    x = float(x)
    return int(x) if x.is_integer() else x


@dataclass(frozen=True)
class PacketSizeDistribution:
    sizes: tuple
    probs: tuple
    name: str = ""

    def __post_init__(self):
        if len(self.sizes) == 0:
            raise ValidationError("distribution needs at least one entry")
        if len(self.sizes) != len(self.probs):
            raise ValidationError("sizes and probs differ in length")
        prev = -math.inf
        for s in self.sizes:
            if not (math.isfinite(s) and s > 0):
                raise ValidationError(f"packet size must be positive and finite, got {s}")
            if s <= prev:
                raise ValidationError("sizes must be strictly increasing")
            prev = s
        for p in self.probs:
            if not (0.0 < p <= 1.0):
                raise ValidationError(f"probability must lie in (0, 1], got {p}")
        total = math.fsum(self.probs)
        if abs(total - 1.0) > SUM_TOL:
            raise ValidationError(f"probabilities sum to {total!r}, not 1")

    @classmethod
    def from_entries(cls, entries: Iterable[tuple[float, float]], name: str = "") -> PacketSizeDistribution:
        """Build from unordered ``(size, probability)`` pairs.

        Duplicate sizes are rejected rather than merged.
        """
        pairs = sorted((_as_exact(s), float(p)) for s, p in entries)
        for (a, _), (b, _) in zip(pairs, pairs[1:]):
            if a == b:
                raise ValidationError(f"duplicate packet size {a}")
        return cls(tuple(s for s, _ in pairs), tuple(p for _, p in pairs), name)

    @property
    def entries(self) -> list[tuple[float, float]]:
        return list(zip(self.sizes, self.probs))

    @property
    def size_array(self) -> np.ndarray:
        return np.asarray(self.sizes, dtype=float)

    @property
    def prob_array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)

    def __len__(self):
        return len(self.sizes)


def mean_bytes(d: PacketSizeDistribution) -> float:
    return math.fsum(p * s for s, p in d.entries)


def std_bytes(d: PacketSizeDistribution) -> float:
    m = mean_bytes(d)
    # central form avoids cancellation in sum(p s^2) - m^2
    var = math.fsum(p * (s - m) ** 2 for s, p in d.entries)
    return math.sqrt(var)


def scv(d: PacketSizeDistribution) -> float:
    """Squared coefficient of variation; equals the service-time SCV at a fixed link rate."""
    m = mean_bytes(d)
    return std_bytes(d) ** 2 / (m * m)


def sample(d: PacketSizeDistribution, rng: np.random.Generator, size=None):
    """Draw packet sizes by inverse-CDF lookup on one uniform per draw.

    The i-th draw depends only on the i-th uniform of ``rng``, so a fixed seed
    gives the same sequence regardless of how the draws are batched.
    """
    cum = np.cumsum(d.prob_array)
    cum[-1] = 1.0
    u = rng.random(size)
    idx = np.searchsorted(cum, u, side="right")
    idx = np.minimum(idx, len(d) - 1)
    out = d.size_array[idx]
    if size is None:
        return _as_exact(out)
    return out


def parse_distribution(text: str, name: str = "") -> PacketSizeDistribution:
    """Parse ``size_bytes,probability`` lines; ``#`` lines and blanks are skipped."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'size,probability', got {raw!r}")
        try:
            size, prob = float(parts[0]), float(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-numeric field in {raw!r}") from None
        if not (math.isfinite(size) and size > 0):
            raise ValidationError(f"line {lineno}: packet size must be positive, got {parts[0].strip()}")
        if not (math.isfinite(prob) and prob > 0):
            raise ValidationError(f"line {lineno}: probability must be positive, got {parts[1].strip()}")
        entries.append((size, prob))
    if not entries:
        raise ParseError("no distribution entries found")
    total = math.fsum(p for _, p in entries)
    if abs(total - 1.0) > RENORMALIZE_TOL:
        raise ValidationError(f"probabilities sum to {total:.6g}, outside [0.999, 1.001]")
    return PacketSizeDistribution.from_entries(((s, p / total) for s, p in entries), name)


def load_distribution(path) -> PacketSizeDistribution:
    path = Path(path)
    return parse_distribution(path.read_text(), name=path.stem)


def format_distribution(d: PacketSizeDistribution) -> str:
    lines = [f"# {d.name}"] if d.name else []
    lines += [f"{s},{p!r}" for s, p in d.entries]
    return "\n".join(lines) + "\n"


def moment_matched(mean: float, sd: float, anchor_small: float, name: str = "") -> PacketSizeDistribution:
    """Two-point distribution {anchor_small, s_big} with the given mean and sd."""
    if not mean > 0:
        raise InfeasibleMoments(f"mean must be positive, got {mean}")
    if sd < 0:
        raise InfeasibleMoments(f"sd must be nonnegative, got {sd}")
    if sd == 0:
        return PacketSizeDistribution((_as_exact(mean),), (1.0,), name)
    if not 0 < anchor_small < mean:
        raise InfeasibleMoments(f"anchor {anchor_small} must lie in (0, mean={mean})")
    s_big = mean + sd * sd / (mean - anchor_small)
    p_small = (s_big - mean) / (s_big - anchor_small)
    if not 0.0 < p_small < 1.0:
        raise InfeasibleMoments(f"two-point solution has probability {p_small}")
    return PacketSizeDistribution(
        (_as_exact(anchor_small), _as_exact(s_big)), (p_small, 1.0 - p_small), name
    )


def max_entropy_on_support(
    mean: float, sd: float, support: Sequence[float] = LANDMARK_SIZES, name: str = ""
) -> PacketSizeDistribution:
    """Maximum-entropy distribution on a fixed support matching mean and sd.

    The solution has the form ``p_i ∝ exp(a*s_i + b*s_i**2)``; (a, b) come from
    minimising the convex dual. Raises InfeasibleMoments when the target lies
    outside what the support can reach.
    """
    s = np.asarray(sorted(support), dtype=float)
    if len(s) < 3:
        raise InfeasibleMoments("need at least three support points")
    if not (s[0] < mean < s[-1]) or sd <= 0:
        raise InfeasibleMoments(f"mean {mean} / sd {sd} not reachable on support")
    scale = s[-1]
    z = np.vstack([s / scale, (s / scale) ** 2])
    target = np.array([mean / scale, (sd * sd + mean * mean) / scale**2])

    def weights(theta):
        w = theta @ z
        w = np.exp(w - w.max())
        return w / w.sum()

    def dual(theta):
        w = theta @ z
        top = w.max()
        return top + math.log(np.exp(w - top).sum()) - theta @ target

    def grad(theta):
        return z @ weights(theta) - target

    def hess(theta):
        p = weights(theta)
        m = z @ p
        return (z * p) @ z.T - np.outer(m, m)

    res = minimize(dual, np.zeros(2), jac=grad, hess=hess, method="trust-exact",
                   options={"gtol": 1e-14, "maxiter": 500})
    p = weights(res.x)
    got_mean = float(p @ s)
    got_sd = math.sqrt(max(float(p @ (s - got_mean) ** 2), 0.0))
    if abs(got_mean / mean - 1) > 1e-9 or abs(got_sd / sd - 1) > 1e-9 or np.any(p <= 0):
        raise InfeasibleMoments(
            f"max-entropy fit reached mean={got_mean:.6g}, sd={got_sd:.6g}; target {mean}, {sd}"
        )
    # renormalise exactly so the stored probabilities sum to one in fsum
    p = p / math.fsum(p)
    return PacketSizeDistribution(tuple(_as_exact(x) for x in s), tuple(float(x) for x in p), name)


AMSIX_MEAN, AMSIX_SD = 1019.03, 1161.66
SFMIX_MEAN, SFMIX_SD = 1750.41, 2062.69


def trimodal() -> PacketSizeDistribution:
    return PacketSizeDistribution((40, 576, 1500), (7 / 12, 4 / 12, 1 / 12), "trimodal")


def _build(name: str) -> PacketSizeDistribution:
    if name == "trimodal":
        return trimodal()
    if name == "amsix":
        return max_entropy_on_support(AMSIX_MEAN, AMSIX_SD, LANDMARK_SIZES, name)
    if name == "sfmix":
        return max_entropy_on_support(SFMIX_MEAN, SFMIX_SD, LANDMARK_SIZES, name)
    if name == "amsix-2pt":
        return moment_matched(AMSIX_MEAN, AMSIX_SD, ETHERNET_MIN_FRAME, name)
    if name == "sfmix-2pt":
        return moment_matched(SFMIX_MEAN, SFMIX_SD, ETHERNET_MIN_FRAME, name)
    raise KeyError(name)


BUILTIN_NAMES = ("trimodal", "amsix", "sfmix", "amsix-2pt", "sfmix-2pt")
_CACHE: dict[str, PacketSizeDistribution] = {}


def builtin(name: str) -> PacketSizeDistribution:
    if name not in BUILTIN_NAMES:
        raise ValidationError(f"unknown distribution {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    if name not in _CACHE:
        _CACHE[name] = _build(name)
    return _CACHE[name]
