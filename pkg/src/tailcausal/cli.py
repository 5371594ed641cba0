"""Command-line front end.

Subcommands wire the library into a file-based pipeline: simulate models and
samples, discover orderings, estimate scalings, evaluate SID, run benchmark
sweeps, bootstrap and decluster. Stochastic commands require a seed and are
bit-reproducible; report-style commands (benchmark, bootstrap) render a PNG
figure next to their CSV unless --no-plot is given.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .baseline import gamma_order
from .data import decluster, load_csv
from .discovery import AlgoParams, causal_order, ordering_result_to_json
from .extremes import FRECHET2, RAW, SampleMatrix, default_threshold_count, pit_frechet2
from .extremes import estimate_scaling_init, estimate_scaling_scaled, estimate_scaling_unscaled
from .graph import dag_from_text, dag_to_text
from .lsem import (
    coefficient_matrix,
    model_from_json,
    model_to_json,
    random_lsem,
    simulate,
    standardize,
)
from .metrics import bootstrap_sid, full_dag_from_order, sid

logger = logging.getLogger(__name__)

USAGE_ERROR = 2
RUNTIME_ERROR = 1


class CliUsageError(Exception):
    """Invalid arguments or unusable input files."""


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {text}")
    return value


def _scale_factor(text: str) -> float:
    value = float(text)
    if value <= 1.0:
        raise argparse.ArgumentTypeError(f"must exceed 1, got {text}")
    return value


def _existing(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise CliUsageError(f"input file not found: {path}")
    return p


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def _read_samples(path: Path, margins: str) -> SampleMatrix:
    try:
        values = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise CliUsageError(f"malformed samples file {path}: {exc}") from exc
    return SampleMatrix(values, margins=margins)


def _standardised(sample: SampleMatrix) -> SampleMatrix:
    if sample.margins == RAW:
        logger.warning("raw margins supplied; applying the empirical PIT")
        return pit_frechet2(sample)
    return sample


def _write_text(path, text: str) -> None:
    Path(path).write_text(text)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _write_csv(path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(cell) for cell in row])


# ---------------------------------------------------------------- simulate

def _cmd_simulate(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.model is not None:
        model = model_from_json(_existing(args.model).read_text())
    elif args.d is not None and args.p is not None:
        model = random_lsem(args.d, args.p, rng, alpha=args.alpha)
    else:
        raise CliUsageError("provide either --model or both --d and --p")
    abar = standardize(coefficient_matrix(model), model.alpha)
    sample = simulate(abar, args.n, model.alpha, rng)
    _write_text(args.out_model, model_to_json(model))
    np.savetxt(args.out_samples, sample.values, delimiter=",", fmt="%.17g")
    if args.out_dag:
        _write_text(args.out_dag, dag_to_text(model.dag))
    logger.info("wrote %s and %s", args.out_model, args.out_samples)
    return 0


# ---------------------------------------------------------------- discover

def _cmd_discover(args) -> int:
    sample = _read_samples(_existing(args.samples), args.margins)
    if args.k is not None and args.k > sample.n:
        raise CliUsageError(f"k={args.k} exceeds the sample size {sample.n}")
    params = AlgoParams(a=args.a, epsilon=args.epsilon, k=args.k)
    result = causal_order(_standardised(sample), params)
    _write_text(args.out, ordering_result_to_json(result))
    return 0


# ---------------------------------------------------------------- scalings

def _cmd_scalings(args) -> int:
    sample = _read_samples(_existing(args.samples), args.margins)
    subset = tuple(args.identified)
    k = args.k if args.k is not None else default_threshold_count(sample.n)
    if k > sample.n:
        raise CliUsageError(f"k={k} exceeds the sample size {sample.n}")
    std = _standardised(sample)
    try:
        record = {
            "i": args.i,
            "j": args.j,
            "identified": list(subset),
            "a": args.a,
            "k": k,
            "sigma2_scaled_max": estimate_scaling_scaled(std, args.i, args.j, subset, args.a, k),
            "sigma2_max": estimate_scaling_unscaled(std, args.i, args.j, subset, args.a, k),
            "sigma2_max_init": estimate_scaling_init(std, (args.i, args.j) + subset, k),
        }
    except ValueError as exc:
        raise CliUsageError(str(exc)) from exc
    if args.format == "json":
        _write_text(args.out, json.dumps(record, indent=2) + "\n")
    else:
        keys = list(record)
        row = [
            " ".join(map(str, record[key])) if isinstance(record[key], list) else record[key]
            for key in keys
        ]
        _write_csv(args.out, keys, [row])
    return 0


# ---------------------------------------------------------------- evaluate

def _cmd_evaluate(args) -> int:
    true_dag = dag_from_text(_existing(args.true_dag).read_text())
    if args.est_dag:
        est = dag_from_text(_existing(args.est_dag).read_text())
    else:
        payload = json.loads(_existing(args.ordering).read_text())
        est = full_dag_from_order(payload["ancestral_order"])
    if est.d != true_dag.d:
        raise CliUsageError("graphs must share the node count")
    score = sid(true_dag, est)
    _write_text(
        args.out,
        json.dumps({"d": true_dag.d, "raw": score.raw, "normalized": score.normalized}, indent=2) + "\n",
    )
    return 0


# ---------------------------------------------------------------- benchmark

_BENCH_HEADER = [
    "method", "epsilon", "d", "p", "alpha", "n", "a", "k",
    "replicate", "seed", "sid_raw", "sid_normalized",
]


def _bench_label(method: str, epsilon) -> str:
    return f"scaling eps={epsilon:g}" if method == "scaling" else "gamma baseline"


def _cmd_benchmark(args) -> int:
    from .report import render_benchmark_figure, render_sweep_figure

    k_grid = args.k_grid or [default_threshold_count(args.n)]
    for k in k_grid:
        if k > args.n:
            raise CliUsageError(f"k={k} exceeds the sample size {args.n}")
    sweep = bool(args.a_grid)
    rows: list[dict] = []
    children = np.random.SeedSequence(args.seed).spawn(args.reps)
    for rep, child in enumerate(children):
        rng = np.random.default_rng(child)
        model = random_lsem(args.d, args.p, rng, alpha=args.alpha)
        abar = standardize(coefficient_matrix(model), model.alpha)
        sample = simulate(abar, args.n, model.alpha, rng)
        std = pit_frechet2(sample)
        base = {
            "d": args.d, "p": args.p, "alpha": args.alpha, "n": args.n,
            "replicate": rep, "seed": args.seed,
        }
        if sweep:
            k = k_grid[0]
            eps = args.epsilons[0]
            for a in args.a_grid:
                result = causal_order(std, AlgoParams(a=a, epsilon=eps, k=k))
                score = sid(model.dag, full_dag_from_order(result.ancestral_order))
                rows.append({**base, "method": "scaling", "epsilon": eps, "a": a, "k": k,
                             "sid_raw": score.raw, "sid_normalized": score.normalized})
        else:
            for k in k_grid:
                for eps in args.epsilons:
                    result = causal_order(std, AlgoParams(a=args.a, epsilon=eps, k=k))
                    score = sid(model.dag, full_dag_from_order(result.ancestral_order))
                    rows.append({**base, "method": "scaling", "epsilon": eps, "a": args.a, "k": k,
                                 "sid_raw": score.raw, "sid_normalized": score.normalized})
                order = gamma_order(std, k)
                score = sid(model.dag, full_dag_from_order(order))
                rows.append({**base, "method": "gamma", "epsilon": "", "a": args.a, "k": k,
                             "sid_raw": score.raw, "sid_normalized": score.normalized})
    _write_csv(args.out, _BENCH_HEADER, [[row[key] for key in _BENCH_HEADER] for row in rows])
    out = Path(args.out)
    if sweep:
        summary = []
        for a in args.a_grid:
            vals = [row["sid_normalized"] for row in rows if row["a"] == a]
            summary.append([a, float(np.mean(vals)), float(np.median(vals))])
        _write_csv(out.with_name(out.stem + "_summary.csv"), ["a", "mean_sid", "median_sid"], summary)
    if args.plot:
        figure_path = out.with_suffix(".png")
        if sweep:
            render_sweep_figure(rows, figure_path)
        else:
            for row in rows:
                row["label"] = _bench_label(row["method"], row["epsilon"])
            render_benchmark_figure(rows, figure_path)
        logger.info("wrote figure %s", figure_path)
    return 0


# ---------------------------------------------------------------- bootstrap

def _cmd_bootstrap(args) -> int:
    from .report import render_bootstrap_figure

    sample = _read_samples(_existing(args.samples), args.margins)
    true_dag = dag_from_text(_existing(args.true_dag).read_text())
    if true_dag.d != sample.d:
        raise CliUsageError("samples and DAG disagree on the dimension")
    k = args.k
    if k is not None and k > sample.n:
        raise CliUsageError(f"k={k} exceeds the sample size {sample.n}")
    params = AlgoParams(a=args.a, epsilon=args.epsilon, k=k)
    rng = np.random.default_rng(args.seed)
    scores = bootstrap_sid(sample, true_dag, params, args.replicates, rng)
    observed = sid(
        true_dag,
        full_dag_from_order(causal_order(_standardised(sample), params).ancestral_order),
    )
    rows = [[b, score.raw, score.normalized, args.seed] for b, score in enumerate(scores)]
    _write_csv(args.out, ["replicate", "raw", "normalized", "seed"], rows)
    if args.plot:
        figure_path = Path(args.out).with_suffix(".png")
        render_bootstrap_figure([s.normalized for s in scores], observed.normalized, figure_path)
        logger.info("wrote figure %s", figure_path)
    return 0


# ---------------------------------------------------------------- decluster

def _cmd_decluster(args) -> int:
    path = _existing(args.data)
    segment_col = None
    boundaries = None
    if args.segments is not None:
        try:
            segment_col = int(args.segments)
        except ValueError:
            boundaries = [int(line) for line in _existing(args.segments).read_text().split()]
    try:
        panel = load_csv(
            path,
            header=args.header,
            timestamp_col=args.timestamp_col,
            segment_col=segment_col,
            na_policy=args.na,
        )
    except ValueError as exc:
        raise CliUsageError(str(exc)) from exc
    if boundaries is not None:
        from .data import TimeSeriesPanel

        panel = TimeSeriesPanel(panel.values, panel.timestamps, tuple(boundaries))
    result = decluster(panel, args.window)
    rows = []
    for r in range(result.n):
        row = [result.timestamps[r]] if args.timestamp_col is not None else []
        rows.append(row + list(result.values[r]))
    header = (["time"] if args.timestamp_col is not None else []) + [
        f"x{c + 1}" for c in range(result.d)
    ]
    _write_csv(args.out, header, rows)
    logger.info("retained %d of %d rows", result.n, panel.n)
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tailcausal",
        description="Extremal causal discovery for heavy-tailed linear SEMs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="draw a random model and heavy-tailed samples")
    p.add_argument("--d", type=_positive_int, default=None)
    p.add_argument("--p", type=_probability, default=None)
    p.add_argument("--model", default=None,
                   help="simulate from an existing model JSON instead of drawing "
                        "one (its stored alpha takes precedence)")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-model", required=True)
    p.add_argument("--out-samples", required=True)
    p.add_argument("--out-dag", default=None, help="optionally write the DAG text file")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("discover", help="estimate a causal ordering from samples")
    p.add_argument("--samples", required=True)
    p.add_argument("--margins", choices=[RAW, FRECHET2], default=RAW)
    p.add_argument("--a", type=_scale_factor, default=1.3)
    p.add_argument("--epsilon", type=float, default=0.4)
    p.add_argument("--k", type=_positive_int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_discover)

    p = sub.add_parser("scalings", help="estimate extremal scalings for one pair")
    p.add_argument("--samples", required=True)
    p.add_argument("--margins", choices=[RAW, FRECHET2], default=RAW)
    p.add_argument("--i", type=_positive_int, required=True)
    p.add_argument("--j", type=_positive_int, required=True)
    p.add_argument("--identified", type=_int_list, default=[],
                   help="comma-separated identified nodes (default none)")
    p.add_argument("--a", type=_scale_factor, default=1.3)
    p.add_argument("--k", type=_positive_int, default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_scalings)

    p = sub.add_parser("evaluate", help="SID between a true DAG and an estimate")
    p.add_argument("--true-dag", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--est-dag")
    group.add_argument("--ordering", help="ordering JSON written by discover")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("benchmark", help="simulation study over replicated models")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--p", type=_probability, required=True)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--reps", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--k-grid", type=_int_list, default=None,
                   help="comma-separated threshold counts (default floor(n^0.4))")
    p.add_argument("--epsilons", type=_float_list, default=[0.1, 0.4])
    p.add_argument("--a", type=_scale_factor, default=1.3)
    p.add_argument("--a-grid", type=_float_list, default=None,
                   help="run the scale-factor sweep mode over these values")
    p.add_argument("--plot", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_benchmark)

    p = sub.add_parser("bootstrap", help="bootstrap the SID of the discovery pipeline")
    p.add_argument("--samples", required=True)
    p.add_argument("--margins", choices=[RAW, FRECHET2], default=RAW)
    p.add_argument("--true-dag", required=True)
    p.add_argument("--replicates", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--a", type=_scale_factor, default=1.3)
    p.add_argument("--epsilon", type=float, default=0.4)
    p.add_argument("--k", type=_positive_int, default=None)
    p.add_argument("--plot", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_bootstrap)

    p = sub.add_parser("decluster", help="retain one peak per window of a panel")
    p.add_argument("--data", required=True)
    p.add_argument("--window", type=_positive_int, required=True)
    p.add_argument("--segments", default=None,
                   help="segment column index, or a file of segment start rows")
    p.add_argument("--timestamp-col", type=int, default=None)
    p.add_argument("--header", action="store_true", help="skip the first line")
    p.add_argument("--na", choices=["drop", "error"], default="error")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_decluster)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliUsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except Exception as exc:  # noqa: BLE001 - single boundary for exit codes
        print(f"error: {exc}", file=sys.stderr)
        return RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
