"""Smallest-load M/M/1 envelope dominating an empirical delay sample."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .des import DelaySample, empirical_quantiles
from .errors import EmptySample, NoEnvelopeFound, ValidationError
from .queueing import Mm1Params, mm1_quantile


def grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive arithmetic grid, rounded so 0.5 + 49 * 0.01 is exactly 0.99."""
    if step <= 0:
        raise ValidationError("grid step must be positive")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(n), 10)


PERCENTILES = grid(0.50, 0.99, 0.01)
CANDIDATE_LOADS = grid(0.01, 0.99, 0.01)


@dataclass
class EnvelopeResult:
    rho_env: float
    mean_env: float
    mean_service: float
    percentile_grid: np.ndarray
    candidates: np.ndarray  # loads evaluated, ascending
    dominated: np.ndarray  # per candidate: envelope strictly above sample everywhere
    real_quantiles: np.ndarray

    @property
    def env_quantiles(self) -> np.ndarray:
        return envelope_quantiles(self, self.mean_service, self.percentile_grid)

    def to_dict(self) -> dict:
        env = self.env_quantiles
        return {
            "rho_env": self.rho_env,
            "mean_env_seconds": self.mean_env,
            "mean_service_seconds": self.mean_service,
            "grid": {f"{p:.4g}": float(v) for p, v in zip(self.percentile_grid, env)},
            "margins": {
                f"{p:.4g}": float(e - r)
                for p, e, r in zip(self.percentile_grid, env, self.real_quantiles)
            },
        }


def _env_matrix(loads: np.ndarray, probs: np.ndarray, mean_service: float) -> np.ndarray:
    # rows: candidate loads; columns: percentiles. Same arithmetic as
    # mm1_quantile so search and verification agree to the last bit.
    rates = (1.0 - loads) / mean_service
    return -np.log1p(-probs)[None, :] / rates[:, None]


def find_envelope_load(
    sample: DelaySample | np.ndarray,
    mean_service: float,
    mean_real: float | None = None,
    percentiles: np.ndarray = PERCENTILES,
    candidate_loads: np.ndarray = CANDIDATE_LOADS,
) -> EnvelopeResult:
    """Return the first candidate load whose M/M/1 sojourn quantiles lie strictly
    above the sample's quantiles at every percentile on the grid.

    ``mean_real`` is accepted for parity with the published inputs and unused.
    """
    del mean_real
    if not mean_service > 0:
        raise ValidationError("mean_service must be positive")
    data = sample.sojourns if isinstance(sample, DelaySample) else np.asarray(sample, dtype=float)
    if len(data) == 0:
        raise EmptySample("cannot search an envelope for an empty sample")
    probs = np.asarray(percentiles, dtype=float)
    loads = np.asarray(candidate_loads, dtype=float)
    if np.any((loads <= 0) | (loads >= 1)) or np.any(np.diff(loads) <= 0):
        raise ValidationError("candidate loads must be ascending in (0, 1)")
    real = empirical_quantiles(data, probs)
    env = _env_matrix(loads, probs, mean_service)
    ok = np.all(real[None, :] < env, axis=1)
    hits = np.flatnonzero(ok)
    if len(hits) == 0:
        raise NoEnvelopeFound(
            f"no candidate load up to {loads[-1]:g} dominates the sample "
            f"(worst 99th-pct ratio {real[-1] / env[-1, -1]:.3g})"
        )
    rho = float(loads[hits[0]])
    return EnvelopeResult(
        rho_env=rho,
        mean_env=mean_service / (1.0 - rho),
        mean_service=mean_service,
        percentile_grid=probs,
        candidates=loads,
        dominated=ok,
        real_quantiles=real,
    )


def envelope_quantiles(r: EnvelopeResult, mean_service: float, probs) -> np.ndarray:
    return np.atleast_1d(mm1_quantile(probs, Mm1Params(mean_service, r.rho_env)))


@dataclass
class DominanceCheck:
    dominated: bool
    margins: np.ndarray  # envelope minus empirical, seconds
    probs: np.ndarray

    @property
    def min_margin(self) -> float:
        return float(self.margins.min())

    @property
    def worst_percentile(self) -> float:
        return float(self.probs[int(np.argmin(self.margins))])


def verify_dominance(
    sample: DelaySample | np.ndarray,
    r: EnvelopeResult | float,
    mean_service: float,
    percentiles: np.ndarray = PERCENTILES,
) -> DominanceCheck:
    """Check strict dominance at each grid percentile, independently of the search.

    ``r`` may be a result or a bare load, which is how minimality is probed.
    """
    rho = r.rho_env if isinstance(r, EnvelopeResult) else float(r)
    probs = np.asarray(percentiles, dtype=float)
    real = empirical_quantiles(sample, probs)
    env = np.atleast_1d(mm1_quantile(probs, Mm1Params(mean_service, rho)))
    margins = env - real
    return DominanceCheck(bool(np.all(margins > 0)), margins, probs)
