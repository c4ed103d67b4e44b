"""AMS-IX at 400 Gb/s: simulated mean/p90/p99 against the envelope.

Uses results/sweep_models.json when present, else the published AMS-IX model.
"""
import argparse
import csv
import json
from pathlib import Path

from qenvelope import PAPER_MODELS, QuadraticModel, builtin
from qenvelope.cli import COMPARE_FIELDS, compare_rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--packets", type=float, default=1e6)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(exist_ok=True)

    fitted = out / "sweep_models.json"
    if fitted.exists():
        model = QuadraticModel.from_dict(json.loads(fitted.read_text())["amsix"])
    else:
        model = PAPER_MODELS["paper-amsix"]
    loads = [round(0.1 * k, 1) for k in range(1, 10)]
    rows = compare_rows(builtin("amsix"), 400e9, loads, model, int(args.packets), args.seed)
    with open(out / "compare_400g.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COMPARE_FIELDS)
        w.writerows(rows)
    print(f"model {model.label}")
    for r in rows:
        flag = "" if (r[1] < r[4] and r[2] < r[5] and r[3] < r[6]) else "   <-- simulated above envelope"
        print(f"rho {r[0]:.1f}  mean {r[1] * 1e9:8.2f}/{r[4] * 1e9:8.2f} ns  "
              f"p90 {r[2] * 1e9:8.2f}/{r[5] * 1e9:8.2f}  p99 {r[3] * 1e9:8.2f}/{r[6] * 1e9:8.2f}{flag}")


if __name__ == "__main__":
    main()
