"""M/M/1 envelope models for latency percentiles of M/G/1 packet queues."""

__version__ = "0.1.0"

from .distributions import (PacketSizeDistribution, builtin, load_distribution, max_entropy_on_support,
                            mean_bytes, moment_matched, sample, scv, std_bytes)
from .des import DelaySample, SimConfig, arrival_rate, empirical_quantiles, simulate_mg1
from .dimension import AggregationScenario, DimensionReport, aggregate_peak, dimension_delay
from .envelope import EnvelopeResult, envelope_quantiles, find_envelope_load, verify_dominance
from .errors import (DegenerateDesign, DomainError, EmptySample, InfeasibleMoments, NoEnvelopeFound,
                     ParseError, QEnvelopeError, Unstable, ValidationError)
from .queueing import (Mm1Params, mm1_mean_sojourn, mm1_quantile, mm1_sojourn_cdf, pk_mean_sojourn,
                       pk_mean_wait, service_time)
from .regress import PAPER_MODELS, QuadraticModel, SweepPoint, fit_quadratic, predict, sweep_envelope

__all__ = [
    "AggregationScenario",
    "DegenerateDesign",
    "DelaySample",
    "DimensionReport",
    "DomainError",
    "EmptySample",
    "EnvelopeResult",
    "InfeasibleMoments",
    "Mm1Params",
    "NoEnvelopeFound",
    "PAPER_MODELS",
    "PacketSizeDistribution",
    "ParseError",
    "QEnvelopeError",
    "QuadraticModel",
    "SimConfig",
    "SweepPoint",
    "Unstable",
    "ValidationError",
    "aggregate_peak",
    "arrival_rate",
    "builtin",
    "dimension_delay",
    "empirical_quantiles",
    "envelope_quantiles",
    "find_envelope_load",
    "fit_quadratic",
    "load_distribution",
    "max_entropy_on_support",
    "mean_bytes",
    "mm1_mean_sojourn",
    "mm1_quantile",
    "mm1_sojourn_cdf",
    "moment_matched",
    "pk_mean_sojourn",
    "pk_mean_wait",
    "predict",
    "sample",
    "scv",
    "service_time",
    "simulate_mg1",
    "std_bytes",
    "sweep_envelope",
    "verify_dominance",
    "__version__",
]
