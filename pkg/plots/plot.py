"""Figure generation from the simulation CSVs.

Three figure kinds, one per CSV schema:

    convergence_loglog  aggregate CSVs (t,metric,mean,q10,q90); overlays one
                        curve per input file with a fitted-slope label
    trajectory          trajectory CSV (seed,t,phase_id,reserve,...); per-seed
                        reserve paths, their mean, phase boundaries, and
                        optional reference lines
    bias_variance       revenue-curve CSV (r,revenue,smoothed_revenue); both
                        curves with their argmax positions marked

The scripts are read-only consumers of the CSVs and never import the
simulation library. Output is deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

AGGREGATE_COLUMNS = ["t", "metric", "mean", "q10", "q90"]
TRAJECTORY_COLUMNS = ["seed", "t", "phase_id", "reserve", "bid",
                      "instant_revenue", "expected_gap", "sq_error"]
CURVE_COLUMNS = ["r", "revenue", "smoothed_revenue"]

FIGSIZE = (6.4, 4.2)
DPI = 120


class SchemaError(ValueError):
    """CSV missing, empty, or not matching the documented schema."""


def read_csv(path: str, columns: list[str]) -> dict[str, np.ndarray]:
    if not os.path.exists(path):
        raise SchemaError(f"{path}: no such file")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if header != columns:
            raise SchemaError(
                f"{path}: header {header} does not match schema {columns}"
            )
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    out: dict[str, np.ndarray] = {}
    for j, name in enumerate(columns):
        col = [row[j] for row in rows]
        if name in ("metric",):
            out[name] = np.array(col)
        else:
            out[name] = np.array([float(v) for v in col])
    return out


def _fit_slope(t: np.ndarray, y: np.ndarray) -> float:
    mask = y > 0
    if mask.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(t[mask]), np.log(y[mask]), 1)[0])


def plot_convergence_loglog(inputs: list[str], out: str,
                            metric: str = "sq_error",
                            xlabel: str = "t", ylabel: str | None = None) -> str:
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for path in inputs:
        data = read_csv(path, AGGREGATE_COLUMNS)
        sel = data["metric"] == metric
        if not np.any(sel):
            raise SchemaError(f"{path}: no rows for metric {metric!r}")
        t, mean = data["t"][sel], data["mean"][sel]
        q10, q90 = data["q10"][sel], data["q90"][sel]
        label = os.path.splitext(os.path.basename(path))[0]
        slope = _fit_slope(t, mean)
        ax.loglog(t, mean, label=f"{label} (slope {slope:.2f})")
        ax.fill_between(t, np.clip(q10, 1e-300, None), np.clip(q90, 1e-300, None),
                        alpha=0.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel or metric)
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.savefig(out, dpi=DPI)
    plt.close(fig)
    return out


def plot_trajectory(inputs: list[str], out: str, refs: list[float] = (),
                    xlabel: str = "t", ylabel: str = "reserve") -> str:
    if len(inputs) != 1:
        raise SchemaError("trajectory takes exactly one input CSV")
    data = read_csv(inputs[0], TRAJECTORY_COLUMNS)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    seeds = np.unique(data["seed"])
    t0 = None
    curves = []
    for seed in seeds:
        sel = data["seed"] == seed
        t, r = data["t"][sel], data["reserve"][sel]
        order = np.argsort(t)
        t, r = t[order], r[order]
        if t0 is None:
            t0 = t
        curves.append(r)
        ax.plot(t, r, color="steelblue", alpha=0.25, linewidth=0.7)
    if len(curves) > 1 and all(c.size == t0.size for c in curves):
        ax.plot(t0, np.mean(curves, axis=0), color="navy", linewidth=1.8,
                label="mean reserve")
    # phase boundaries: first step of each later phase
    sel = data["seed"] == seeds[0]
    t, pid = data["t"][sel], data["phase_id"][sel]
    order = np.argsort(t)
    t, pid = t[order], pid[order]
    for i in np.nonzero(np.diff(pid) != 0)[0]:
        ax.axvline(t[i + 1], color="gray", linestyle=":", linewidth=1.0)
    for ref in refs:
        ax.axhline(ref, color="firebrick", linestyle="--", linewidth=1.0, alpha=0.7)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if len(curves) > 1:
        ax.legend()
    fig.savefig(out, dpi=DPI)
    plt.close(fig)
    return out


def plot_bias_variance(inputs: list[str], out: str,
                       xlabel: str = "reserve r", ylabel: str = "expected revenue"):
    """Raw vs smoothed revenue curves; returns (path, argmax, smoothed argmax)."""
    if len(inputs) != 1:
        raise SchemaError("bias_variance takes exactly one input CSV")
    data = read_csv(inputs[0], CURVE_COLUMNS)
    r = data["r"]
    order = np.argsort(r)
    r = r[order]
    rev = data["revenue"][order]
    smooth = data["smoothed_revenue"][order]
    r_star = float(r[np.argmax(rev)])
    r_k_star = float(r[np.argmax(smooth)])
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(r, rev, color="navy", label="expected revenue")
    ax.plot(r, smooth, color="darkorange", label="smoothed expected revenue")
    ax.axvline(r_star, color="navy", linestyle="--", linewidth=1.0)
    ax.axvline(r_k_star, color="darkorange", linestyle="--", linewidth=1.0)
    ax.annotate(f"r* = {r_star:.3f}", (r_star, float(np.max(rev))),
                textcoords="offset points", xytext=(4, 2), color="navy")
    ax.annotate(f"r_k* = {r_k_star:.3f}", (r_k_star, float(np.max(smooth))),
                textcoords="offset points", xytext=(4, -12), color="darkorange")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(loc="lower center")
    fig.savefig(out, dpi=DPI)
    plt.close(fig)
    return out, r_star, r_k_star


KINDS = {
    "convergence_loglog": plot_convergence_loglog,
    "trajectory": plot_trajectory,
    "bias_variance": plot_bias_variance,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plot.py")
    parser.add_argument("--kind", required=True, choices=sorted(KINDS))
    parser.add_argument("--in", dest="inputs", action="append", required=True,
                        metavar="CSV", help="input CSV (repeatable for overlays)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--metric", default="sq_error",
                        help="aggregate metric for convergence_loglog")
    parser.add_argument("--ref", dest="refs", action="append", type=float,
                        default=[], help="horizontal reference line (repeatable)")
    args = parser.parse_args(argv)
    try:
        if args.kind == "convergence_loglog":
            plot_convergence_loglog(args.inputs, args.out, metric=args.metric)
        elif args.kind == "trajectory":
            plot_trajectory(args.inputs, args.out, refs=args.refs)
        else:
            plot_bias_variance(args.inputs, args.out)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
