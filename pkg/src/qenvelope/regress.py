"""Load sweeps and the quadratic map from real load to envelope load."""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .des import DEFAULT_PACKETS, SimConfig, simulate_mg1
from .distributions import PacketSizeDistribution
from .envelope import find_envelope_load, grid
from .errors import DegenerateDesign, DomainError, NoEnvelopeFound, ValidationError

RHO_MIN, RHO_MAX = 0.01, 0.99
DEFAULT_LOAD_GRID = grid(0.05, 0.95, 0.05)


@dataclass(frozen=True)
class QuadraticModel:
    c0: float
    c1: float
    c2: float
    label: str = ""
    rms: float | None = None
    points: tuple = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {"label": self.label, "c0": self.c0, "c1": self.c1, "c2": self.c2, "rms": self.rms}

    @classmethod
    def from_dict(cls, d: dict) -> QuadraticModel:
        try:
            return cls(float(d["c0"]), float(d["c1"]), float(d["c2"]),
                       str(d.get("label", "")), d.get("rms"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad model record: {exc}") from None


PAPER_MODELS = {
    "paper-trimodal": QuadraticModel(0.49, 0.13, 0.39, "paper-trimodal"),
    "paper-amsix": QuadraticModel(0.43, 0.13, 0.47, "paper-amsix"),
    "paper-sfmix": QuadraticModel(0.50, 0.16, 0.34, "paper-sfmix"),
}


def load_model(name_or_path: str) -> QuadraticModel:
    if name_or_path in PAPER_MODELS:
        return PAPER_MODELS[name_or_path]
    try:
        with open(name_or_path) as fh:
            return QuadraticModel.from_dict(json.load(fh))
    except FileNotFoundError:
        raise ValidationError(
            f"model {name_or_path!r} is neither a built-in ({', '.join(PAPER_MODELS)}) nor a file"
        ) from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{name_or_path}: {exc}") from None


def raw_prediction(model: QuadraticModel, rho_real):
    return model.c0 + model.c1 * rho_real + model.c2 * rho_real * rho_real


def predict(model: QuadraticModel, rho_real: float) -> float:
    """Envelope load for a real load, clamped to the candidate range [0.01, 0.99]."""
    if not 0 < rho_real < 1:
        raise DomainError(f"rho_real must lie in (0, 1), got {rho_real}")
    return float(min(max(raw_prediction(model, rho_real), RHO_MIN), RHO_MAX))


@dataclass(frozen=True)
class SweepPoint:
    rho_real: float
    rho_env: float
    seed: int
    n_packets: int


def point_seed(base_seed: int, index: int) -> int:
    """Per-point seed from (base_seed, grid index); stable under grid edits elsewhere."""
    ss = np.random.SeedSequence(base_seed, spawn_key=(0x5EE9, index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _run_point(args) -> SweepPoint:
    dist, capacity_bps, load, seed, n_packets, warmup = args
    cfg = SimConfig(capacity_bps, load, dist, n_packets, warmup, seed)
    sample = simulate_mg1(cfg)
    try:
        res = find_envelope_load(sample, cfg.mean_service)
    except NoEnvelopeFound as exc:
        raise NoEnvelopeFound(f"load {load:g}: {exc}", load=load) from None
    return SweepPoint(float(load), res.rho_env, seed, n_packets)


def sweep_envelope(
    dist: PacketSizeDistribution,
    capacity_bps: float,
    load_grid: Sequence[float] = DEFAULT_LOAD_GRID,
    n_packets: int = DEFAULT_PACKETS,
    base_seed: int = 1,
    warmup_packets: int | None = None,
    workers: int = 1,
) -> list[SweepPoint]:
    """Simulate and search the envelope at each load; one point per load."""
    loads = [float(x) for x in load_grid]
    for x in loads:
        if not 0 < x < 1:
            raise ValidationError(f"sweep load must lie in (0, 1), got {x}")
    jobs = [
        (dist, capacity_bps, x, point_seed(base_seed, i), int(n_packets), warmup_packets)
        for i, x in enumerate(loads)
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_point, jobs))
    return [_run_point(j) for j in jobs]


def fit_quadratic(points: Sequence[SweepPoint] | Iterable[tuple[float, float]], label: str = "fitted") -> QuadraticModel:
    """Least squares on {1, rho, rho^2} via QR of the design matrix."""
    xy = [(p.rho_real, p.rho_env) if isinstance(p, SweepPoint) else (float(p[0]), float(p[1]))
          for p in points]
    x = np.array([a for a, _ in xy], dtype=float)
    y = np.array([b for _, b in xy], dtype=float)
    if len(np.unique(x)) < 3:
        raise DegenerateDesign(f"need at least 3 distinct loads, got {len(np.unique(x))}")
    design = np.vander(x, 3, increasing=True)
    q, r = np.linalg.qr(design)
    coef = np.linalg.solve(r, q.T @ y)
    resid = y - design @ coef
    rms = math.sqrt(float(np.mean(resid * resid)))
    c0, c1, c2 = (float(c) for c in coef)
    return QuadraticModel(c0, c1, c2, label, rms, tuple(xy))


SWEEP_FIELDS = ("rho_real", "rho_env", "seed", "n_packets")


def write_sweep_csv(points: Sequence[SweepPoint], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SWEEP_FIELDS)
    for p in points:
        w.writerow([repr(p.rho_real), repr(p.rho_env), p.seed, p.n_packets])


def read_sweep_csv(fh) -> list[SweepPoint]:
    reader = csv.DictReader(line for line in fh if not line.startswith("#"))
    if reader.fieldnames is None or not {"rho_real", "rho_env"} <= set(reader.fieldnames):
        raise ValidationError("sweep file needs a header with rho_real,rho_env")
    out = []
    for row in reader:
        try:
            out.append(SweepPoint(
                float(row["rho_real"]), float(row["rho_env"]),
                int(row.get("seed") or 0), int(float(row.get("n_packets") or 0)),
            ))
        except ValueError as exc:
            raise ValidationError(f"bad sweep row {row}: {exc}") from None
    return out
