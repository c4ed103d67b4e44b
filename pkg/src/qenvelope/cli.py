"""Command-line front end.

Exit codes: 0 success, 1 runtime failure (e.g. no envelope found), 2 invalid
usage or input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path


from . import __version__
from . import distributions as dists
from .des import SimConfig, read_delays_csv, simulate_mg1, summary, write_delays_csv
from .dimension import AggregationScenario, dimension_delay
from .envelope import find_envelope_load, grid, verify_dominance
from .errors import DegenerateDesign, QEnvelopeError, ValidationError
from .queueing import Mm1Params, mm1_mean_sojourn, mm1_quantile, pk_mean_sojourn, pk_mean_wait, service_time
from .regress import (PAPER_MODELS, fit_quadratic, load_model, point_seed, predict, read_sweep_csv,
                      sweep_envelope, write_sweep_csv)


# --- argument types ----------------------------------------------------------

def number(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def count(text: str) -> int:
    value = number(text)
    if not value.is_integer() or value < 0:
        raise argparse.ArgumentTypeError(f"not a nonnegative integer: {text!r}")
    return int(value)


def number_list(text: str) -> list[float]:
    return [number(t) for t in text.split(",") if t.strip()]


def load_grid(text: str) -> list[float]:
    """``start:stop:step`` (inclusive) or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("grid must be start:stop:step")
        start, stop, step = (number(p) for p in parts)
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError("grid needs step > 0 and stop >= start")
        return [float(x) for x in grid(start, stop, step)]
    return number_list(text)


def default_seed() -> int:
    env = os.environ.get("DETNET_SEED")
    if env is None:
        return 1
    try:
        return count(env)
    except argparse.ArgumentTypeError:
        raise ValidationError(f"DETNET_SEED must be a nonnegative integer, got {env!r}") from None


# --- manifests and output ----------------------------------------------------

def manifest(command: str, argv: list[str], params: dict) -> dict:
    return {
        "command": command,
        "argv": list(argv),
        "params": params,
        "seed": params.get("seed"),
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def sidecar(path: str) -> Path:
    return Path(f"{path}.manifest.json")


def dump_json(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


@contextmanager
def open_out(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


@contextmanager
def open_in(path: str):
    if path == "-":
        yield sys.stdin
    else:
        try:
            fh = open(path)
        except OSError as exc:
            raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
        with fh:
            yield fh


def resolve_dist(args) -> dists.PacketSizeDistribution:
    if getattr(args, "dist_file", None):
        try:
            return dists.load_distribution(args.dist_file)
        except OSError as exc:
            raise ValidationError(f"cannot read {args.dist_file}: {exc.strerror}") from None
    if getattr(args, "dist", None) is None:
        raise ValidationError("give --dist or --dist-file")
    return dists.builtin(args.dist)


def add_dist_args(p):
    p.add_argument("--dist", choices=dists.BUILTIN_NAMES, help="built-in packet-size distribution")
    p.add_argument("--dist-file", help="distribution file (size_bytes,probability per line); overrides --dist")


def add_sim_args(p):
    p.add_argument("--capacity", type=number, required=True, help="link rate, bit/s")
    p.add_argument("--packets", type=count, default=1_000_000)
    p.add_argument("--warmup", type=count, default=None, help="default: 1%% of packets, at least 1e4")
    p.add_argument("--seed", type=count, default=None, help="default: $DETNET_SEED or 1")


# --- commands ------------------------------------------------------------------

def cmd_simulate(args, argv) -> int:
    dist = resolve_dist(args)
    seed = args.seed if args.seed is not None else default_seed()
    cfg = SimConfig(args.capacity, args.load, dist, args.packets, args.warmup, seed)
    sample = simulate_mg1(cfg)
    params = {**cfg.to_dict(), "mean_service_s": cfg.mean_service}
    man = manifest("simulate", argv, params)
    if args.csv:
        with open_out(args.csv) as fh:
            write_delays_csv(sample, fh)
        if args.csv != "-":
            dump_json(man, str(sidecar(args.csv)))
    out = summary(sample)
    out["mean_service"] = cfg.mean_service
    out["manifest"] = man
    dump_json(out, args.json)
    return 0


def _mean_service_for(args) -> float:
    if args.ex is not None:
        return args.ex
    if args.dist or args.dist_file:
        if args.capacity is None:
            raise ValidationError("--capacity is required with --dist/--dist-file")
        return service_time(dists.mean_bytes(resolve_dist(args)), args.capacity)
    if args.input != "-" and sidecar(args.input).exists():
        params = json.loads(sidecar(args.input).read_text()).get("params", {})
        if "mean_service_s" in params:
            return float(params["mean_service_s"])
    raise ValidationError("mean service time unknown: give --ex, or --dist and --capacity")


def cmd_envelope(args, argv) -> int:
    ex = _mean_service_for(args)
    with open_in(args.input) as fh:
        sample = read_delays_csv(fh)
    probs = grid(0.50, 0.99, args.percentile_step)
    loads = grid(args.grid_step, 0.99, args.grid_step)
    res = find_envelope_load(sample, ex, percentiles=probs, candidate_loads=loads)
    check = verify_dominance(sample, res, ex, probs)
    out = res.to_dict()
    out["real_mean_seconds"] = sample.mean
    out["min_margin_seconds"] = check.min_margin
    out["manifest"] = manifest("envelope", argv, {
        "input": args.input, "mean_service_s": ex,
        "grid_step": args.grid_step, "percentile_step": args.percentile_step,
    })
    dump_json(out, args.json)
    return 0


def cmd_fit(args, argv) -> int:
    if args.sweep_in:
        with open_in(args.sweep_in) as fh:
            points = read_sweep_csv(fh)
        params = {"sweep_in": args.sweep_in}
        label = args.label or "fitted"
    else:
        dist = resolve_dist(args)
        if args.capacity is None:
            raise ValidationError("--capacity is required unless --sweep-in is given")
        loads = args.grid
        if len(set(loads)) < 3:
            raise DegenerateDesign(f"need at least 3 distinct loads, got {len(set(loads))}")
        seed = args.seed if args.seed is not None else default_seed()
        points = sweep_envelope(dist, args.capacity, loads, args.packets, seed, args.warmup, args.workers)
        params = {"distribution": dist.name, "capacity_bps": args.capacity, "grid": loads,
                  "n_packets": args.packets, "warmup_packets": args.warmup, "seed": seed}
        label = args.label or f"fitted-{dist.name}"
    model = fit_quadratic(points, label)
    man = manifest("fit", argv, params)
    if args.sweep_out:
        with open_out(args.sweep_out) as fh:
            write_sweep_csv(points, fh)
        if args.sweep_out != "-":
            dump_json(man, str(sidecar(args.sweep_out)))
    out = model.to_dict()
    out["n_points"] = len(points)
    out["manifest"] = man
    dump_json(out, args.model_out)
    return 0


def cmd_analyze(args, argv) -> int:
    p = Mm1Params(args.ex, args.rho)
    qs = args.q
    values = [float(mm1_quantile(q, p)) for q in qs]
    out = {
        "mean_service_s": args.ex,
        "rho": args.rho,
        "mm1_mean_sojourn_s": mm1_mean_sojourn(p),
        "quantiles": {f"{q:g}": v for q, v in zip(qs, values)},
    }
    if args.scv is not None:
        out["pk_mean_wait_s"] = pk_mean_wait(args.ex, args.rho, args.scv)
        out["pk_mean_sojourn_s"] = pk_mean_sojourn(args.ex, args.rho, args.scv)
    if args.json:
        dump_json(out, args.json)
        return 0
    rows = [("M/M/1 mean sojourn", out["mm1_mean_sojourn_s"])]
    rows += [(f"D_{q:g}", v) for q, v in zip(qs, values)]
    if args.scv is not None:
        rows += [("P-K mean wait", out["pk_mean_wait_s"]), ("P-K mean sojourn", out["pk_mean_sojourn_s"])]
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  {v:.9e} s")
    return 0


def cmd_dimension(args, argv) -> int:
    scen = AggregationScenario(args.users, args.user_mean, args.user_sd, args.capacity, args.k)
    report = dimension_delay(scen, load_model(args.model), resolve_dist(args), args.q)
    if args.json:
        out = report.to_dict()
        out["manifest"] = manifest("dimension", argv, {
            "n_users": args.users, "user_mean_bps": args.user_mean, "user_sd_bps": args.user_sd,
            "capacity_bps": args.capacity, "sigma_multiplier": args.k, "model": args.model,
            "distribution": report.distribution, "quantiles": args.q,
        })
        dump_json(out, args.json)
    if not args.json or args.json != "-":
        print(report.table())
    return 0


COMPARE_FIELDS = ("rho_real", "sim_mean", "sim_p90", "sim_p99", "env_mean", "env_p90", "env_p99")


def compare_rows(dist, capacity, loads, model, n_packets, seed, warmup=None):
    rows = []
    for i, load in enumerate(loads):
        cfg = SimConfig(capacity, load, dist, n_packets, warmup, point_seed(seed, i))
        sample = simulate_mg1(cfg)
        p90, p99 = sample.quantiles([0.9, 0.99])
        env = Mm1Params(cfg.mean_service, predict(model, load))
        rows.append((load, sample.mean, float(p90), float(p99), mm1_mean_sojourn(env),
                     float(mm1_quantile(0.9, env)), float(mm1_quantile(0.99, env))))
    return rows


def cmd_compare(args, argv) -> int:
    dist = resolve_dist(args)
    if args.model is None:
        guess = f"paper-{args.dist}" if args.dist else None
        if guess not in PAPER_MODELS:
            raise ValidationError("--model is required for this distribution")
        args.model = guess
    model = load_model(args.model)
    seed = args.seed if args.seed is not None else default_seed()
    rows = compare_rows(dist, args.capacity, args.grid, model, args.packets, seed, args.warmup)
    with open_out(args.csv) as fh:
        fh.write(",".join(COMPARE_FIELDS) + "\n")
        for r in rows:
            fh.write(f"{r[0]:g}," + ",".join(f"{v:.9e}" for v in r[1:]) + "\n")
    if args.csv and args.csv != "-":
        dump_json(manifest("compare", argv, {
            "distribution": dist.name, "capacity_bps": args.capacity, "grid": args.grid,
            "model": model.to_dict(), "n_packets": args.packets, "warmup_packets": args.warmup,
            "seed": seed,
        }), str(sidecar(args.csv)))
    return 0


def cmd_rerun(args, argv) -> int:
    try:
        man = json.loads(Path(args.manifest).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read manifest {args.manifest}: {exc}") from None
    old = man.get("argv")
    if not old:
        raise ValidationError("manifest has no argv")
    return main(old)


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qenvelope", description="M/M/1 envelope bounds for M/G/1 packet delays")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate an M/G/1 queue and summarise sojourn times")
    add_dist_args(p)
    add_sim_args(p)
    p.add_argument("--load", type=number, required=True)
    p.add_argument("--csv", help="write per-packet sojourns here")
    p.add_argument("--json", help="summary JSON path (default stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("envelope", help="find the smallest dominating M/M/1 load for a delay file")
    p.add_argument("--input", required=True, help="delay CSV, '-' for stdin")
    p.add_argument("--ex", type=number, help="mean service time, seconds")
    add_dist_args(p)
    p.add_argument("--capacity", type=number)
    p.add_argument("--grid-step", type=number, default=0.01, help="candidate load step")
    p.add_argument("--percentile-step", type=number, default=0.01)
    p.add_argument("--json", help="result path (default stdout)")
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("fit", help="sweep loads and fit the quadratic load map")
    add_dist_args(p)
    p.add_argument("--capacity", type=number)
    p.add_argument("--grid", type=load_grid, default="0.05:0.95:0.05")
    p.add_argument("--packets", type=count, default=1_000_000)
    p.add_argument("--warmup", type=count, default=None)
    p.add_argument("--seed", type=count, default=None)
    p.add_argument("--workers", type=count, default=1)
    p.add_argument("--sweep-in", help="fit an existing sweep CSV instead of simulating ('-' = stdin)")
    p.add_argument("--sweep-out", help="write sweep CSV")
    p.add_argument("--model-out", help="model JSON path (default stdout)")
    p.add_argument("--label")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("analyze", help="closed-form M/M/1 and P-K calculator")
    p.add_argument("--ex", type=number, required=True, help="mean service time, seconds")
    p.add_argument("--rho", type=number, required=True)
    p.add_argument("--q", type=number_list, default=[0.5, 0.9, 0.99])
    p.add_argument("--scv", type=number, help="service-time SCV, enables P-K output")
    p.add_argument("--json", help="write JSON instead of a table ('-' = stdout)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("dimension", help="delay guarantees for an aggregation node")
    p.add_argument("--users", type=count, required=True)
    p.add_argument("--user-mean", type=number, required=True, help="bit/s per user")
    p.add_argument("--user-sd", type=number, required=True, help="bit/s per user")
    p.add_argument("--k", type=number, default=3.0, help="peak = mean + k sd")
    p.add_argument("--capacity", type=number, required=True)
    p.add_argument("--model", default="paper-sfmix", help="built-in model name or model JSON file")
    add_dist_args(p)
    p.add_argument("--q", type=number_list, default=[0.9, 0.99])
    p.add_argument("--json", help="also write the report as JSON ('-' = stdout only)")
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("compare", help="simulated vs envelope mean/p90/p99 over a load grid")
    add_dist_args(p)
    add_sim_args(p)
    p.add_argument("--grid", type=load_grid, default="0.1:0.9:0.1")
    p.add_argument("--model", help="model name or JSON file (default paper-<dist>)")
    p.add_argument("--csv", help="output path (default stdout)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("rerun", help="re-execute the command recorded in a manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_rerun)
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, argv)
    except ValidationError as exc:
        print(f"qenvelope {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except QEnvelopeError as exc:
        print(f"qenvelope {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
