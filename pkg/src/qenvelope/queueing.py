"""Closed-form M/M/1 and M/G/1 results.

Every "delay" here is a sojourn time (queueing wait plus transmission); the
only wait-only quantity is :func:`pk_mean_wait`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError


@dataclass(frozen=True)
class Mm1Params:
    mean_service: float  # seconds, E(X) = 1/mu
    load: float

    def __post_init__(self):
        if not self.mean_service > 0:
            raise ValidationError(f"mean_service must be positive, got {self.mean_service}")
        if not 0 <= self.load < 1:
            raise ValidationError(f"load must lie in [0, 1), got {self.load}")

    @property
    def rate(self) -> float:
        """Rate of the exponential sojourn law, (1 - rho) / E(X)."""
        return (1.0 - self.load) / self.mean_service


def service_time(mean_bytes: float, capacity_bps: float) -> float:
    if not (mean_bytes > 0 and capacity_bps > 0):
        raise DomainError("mean_bytes and capacity_bps must be positive")
    return 8.0 * mean_bytes / capacity_bps


def mm1_sojourn_cdf(t, p: Mm1Params):
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("t must be nonnegative")
    out = -np.expm1(-p.rate * t_arr)
    return float(out) if out.ndim == 0 else out


def mm1_quantile(q, p: Mm1Params):
    q_arr = np.asarray(q, dtype=float)
    if np.any((q_arr < 0) | (q_arr >= 1)) or np.any(np.isnan(q_arr)):
        raise DomainError("q must lie in [0, 1)")
    out = -np.log1p(-q_arr) / p.rate
    return float(out) if out.ndim == 0 else out


def mm1_mean_sojourn(p: Mm1Params) -> float:
    return p.mean_service / (1.0 - p.load)


def _check_pk(mean_service: float, load: float, scv: float):
    if not mean_service > 0:
        raise DomainError("mean_service must be positive")
    if not 0 <= load < 1:
        raise DomainError(f"load must lie in [0, 1), got {load}")
    if not scv >= 0:
        raise DomainError("scv must be nonnegative")


def pk_mean_wait(mean_service: float, load: float, scv: float) -> float:
    """Pollaczek-Khinchine mean time in queue, transmission excluded."""
    _check_pk(mean_service, load, scv)
    return mean_service * load / (1.0 - load) * (1.0 + scv) / 2.0


def pk_mean_sojourn(mean_service: float, load: float, scv: float) -> float:
    return pk_mean_wait(mean_service, load, scv) + mean_service


def exp_quantile(q, mean: float):
    """Quantile of an exponential law with the given mean."""
    q_arr = np.asarray(q, dtype=float)
    if np.any((q_arr < 0) | (q_arr >= 1)):
        raise DomainError("q must lie in [0, 1)")
    out = -mean * np.log1p(-q_arr)
    return float(out) if out.ndim == 0 else out
