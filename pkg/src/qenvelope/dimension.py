"""Dimensioning a node that aggregates many users' traffic.

The aggregate of N independent users is treated as Gaussian (central limit
theorem), dimensioned at mean + k standard deviations, mapped to an envelope
load through a :class:`QuadraticModel`, and turned into M/M/1 delay figures.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

from . import distributions as dists
from .errors import Unstable, ValidationError
from .queueing import Mm1Params, mm1_mean_sojourn, mm1_quantile, service_time
from .regress import QuadraticModel, predict


@dataclass(frozen=True)
class AggregationScenario:
    n_users: int
    user_mean_bps: float
    user_sd_bps: float
    capacity_bps: float
    sigma_multiplier: float = 3.0

    def __post_init__(self):
        if not self.n_users >= 1:
            raise ValidationError("n_users must be at least 1")
        if not self.user_mean_bps > 0:
            raise ValidationError("user_mean_bps must be positive")
        if not self.user_sd_bps >= 0:
            raise ValidationError("user_sd_bps must be nonnegative")
        if not self.capacity_bps > 0:
            raise ValidationError("capacity_bps must be positive")
        if not self.sigma_multiplier >= 0:
            raise ValidationError("sigma_multiplier must be nonnegative")


def aggregate_peak(s: AggregationScenario) -> tuple[float, float, float]:
    mean = s.n_users * s.user_mean_bps
    sd = math.sqrt(s.n_users) * s.user_sd_bps
    return mean, sd, mean + s.sigma_multiplier * sd


@dataclass
class DimensionReport:
    aggregate_mean_bps: float
    aggregate_sd_bps: float
    peak_bps: float
    rho_real: float
    rho_env: float
    mean_service_s: float
    mean_delay_s: float
    percentiles: dict = field(default_factory=dict)  # q -> seconds
    model: str = ""
    distribution: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["percentiles"] = {f"{q:g}": v for q, v in self.percentiles.items()}
        return d

    def table(self) -> str:
        rows = [
            ("aggregate mean", f"{self.aggregate_mean_bps:.6e} b/s"),
            ("aggregate sd", f"{self.aggregate_sd_bps:.6e} b/s"),
            ("peak", f"{self.peak_bps:.6e} b/s"),
            ("rho_real", f"{self.rho_real:.6f}"),
            ("rho_env", f"{self.rho_env:.6f}"),
            ("E(X)", f"{self.mean_service_s:.6e} s"),
            ("mean delay", f"{self.mean_delay_s:.6e} s"),
        ]
        rows += [(f"D_{q:g}", f"{v:.6e} s") for q, v in self.percentiles.items()]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def dimension_delay(
    s: AggregationScenario,
    model: QuadraticModel,
    dist: dists.PacketSizeDistribution,
    quantiles: Sequence[float] = (0.9, 0.99),
) -> DimensionReport:
    mean, sd, peak = aggregate_peak(s)
    if peak >= s.capacity_bps:
        raise Unstable(
            f"unstable: peak {peak:.6g} b/s reaches capacity {s.capacity_bps:.6g} b/s"
        )
    rho_real = peak / s.capacity_bps
    rho_env = predict(model, rho_real)
    ex = service_time(dists.mean_bytes(dist), s.capacity_bps)
    params = Mm1Params(ex, rho_env)
    table = {float(q): float(mm1_quantile(q, params)) for q in quantiles}
    return DimensionReport(
        aggregate_mean_bps=mean,
        aggregate_sd_bps=sd,
        peak_bps=peak,
        rho_real=rho_real,
        rho_env=rho_env,
        mean_service_s=ex,
        mean_delay_s=mm1_mean_sojourn(params),
        percentiles=table,
        model=model.label,
        distribution=dist.name,
    )
