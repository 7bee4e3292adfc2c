"""Command-line interface for sensor selection experiments.

Subcommands
-----------
generate   draw a synthetic ensemble matrix and write it to CSV
select     run a selector on a matrix and write the chosen rows as JSON
metrics    report coherence and frame quality numbers for a matrix
recover    run the planted-signal recovery protocol on selected rows
benchmark  sweep (trial, selector, budget) cells from a JSON config

All row and column indices in inputs and outputs are 0-based.  Exit
codes: 0 on success, 1 on runtime failures (bad files, infeasible
problems, solver errors), 2 on usage errors.  The INSENSE_OUTDIR
environment variable supplies the default output directory.
"""

import argparse
import csv
import dataclasses
import json
import os
import sys
import time

import numpy as np

from .baselines import select_exhaustive_mu_avg, select_fp_greedy, select_random
from .datagen import (
    KINDS,
    EnsembleSpec,
    block_layout,
    generate,
    load_matrix,
    manifest,
    save_matrix,
)
from .exceptions import InsenseError
from .metrics import extract_submatrix, metric_report, validate_budget, validate_subset
from .optimizer import InsenseConfig, run_insense
from .recovery import BpConfig, evaluate_recovery
from .seeding import derive_seed

OUTDIR_ENV = "INSENSE_OUTDIR"
METHODS = ("insense", "random", "fp-greedy", "exhaustive-mu-avg")
_DEFAULT_LIMIT = 1_000_000
_SUMMARY_COLUMNS = (
    "mu_avg",
    "mu_max",
    "frame_potential",
    "condition_number",
    "gaussian_ratio",
    "time_s",
)
# insense selector options a benchmark config may set; seeds are always derived
_INSENSE_OPTIONS = {f.name for f in dataclasses.fields(InsenseConfig)} - {"seed"}


class _UsageError(Exception):
    """Flag combinations that argparse alone cannot express."""


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _index_list(text):
    try:
        indices = sorted(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if len(set(indices)) != len(indices):
        raise argparse.ArgumentTypeError("duplicate indices in subset")
    if indices[0] < 0:
        raise argparse.ArgumentTypeError("negative index in subset")
    return indices


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _dump(payload, path=None):
    """Pretty-print a JSON payload to stdout, optionally also to a file."""
    text = json.dumps(payload, indent=2, sort_keys=True, default=_json_default)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def _outdir(args):
    path = args.outdir or os.environ.get(OUTDIR_ENV) or "."
    os.makedirs(path, exist_ok=True)
    return path


def _add_source_flags(parser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--matrix", metavar="FILE", help="CSV file, one row per sensor")
    source.add_argument("--ensemble", choices=KINDS, help="draw a synthetic matrix instead")
    parser.add_argument("--d", type=_positive_int, help="rows (ensemble only)")
    parser.add_argument("--n", type=_positive_int, help="columns (ensemble only)")
    parser.add_argument(
        "--gaussian-rows",
        type=_positive_int,
        default=10,
        help="Gaussian block height of uniform-gaussian (default 10)",
    )
    parser.add_argument(
        "--signed", action="store_true", help="draw bernoulli01 entries from {-1,+1}"
    )


def _add_subset_flags(parser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "--subset",
        type=_index_list,
        metavar="I,J,...",
        help="rows to keep, 0-based; sorted before use",
    )
    group.add_argument(
        "--selection", metavar="FILE", help="JSON file from 'select'; its 'indices' are used"
    )


def _resolve_spec(args):
    if args.d is None or args.n is None:
        raise _UsageError("--ensemble requires --d and --n")
    try:
        return EnsembleSpec(
            args.ensemble,
            d=args.d,
            n=args.n,
            seed=args.seed,
            gaussian_rows=args.gaussian_rows,
            signed=args.signed,
        )
    except ValueError as exc:
        raise _UsageError(str(exc))


def _load_phi(args):
    """Return (matrix, source-description) from --matrix or --ensemble flags."""
    if args.matrix is not None:
        return load_matrix(args.matrix), {"file": args.matrix}
    spec = _resolve_spec(args)
    return generate(spec), {"ensemble": dataclasses.asdict(spec)}


def _resolve_subset(args, d):
    if args.selection is not None:
        with open(args.selection, encoding="utf-8") as fh:
            payload = json.load(fh)
        indices = payload.get("indices")
        if not isinstance(indices, list) or not indices:
            raise InsenseError(f"no 'indices' list in {args.selection}")
        try:
            subset = sorted(int(i) for i in indices)
        except (TypeError, ValueError):
            raise InsenseError(f"non-integer entries in 'indices' of {args.selection}")
    elif args.subset is not None:
        subset = args.subset
    else:
        return None
    validate_subset(subset, d)
    return subset


def cmd_generate(args):
    spec = _resolve_spec(args)
    phi = generate(spec)
    info = manifest(spec)
    default_name = f"{spec.kind}_{spec.d}x{spec.n}_seed{spec.seed}.csv"
    out = args.out or os.path.join(_outdir(args), default_name)
    save_matrix(out, phi, header=json.dumps(info, sort_keys=True))
    _dump({"file": out, "manifest": info})
    return 0


def cmd_select(args):
    phi, source = _load_phi(args)
    validate_budget(args.m, phi.shape[0])
    options = {}
    result = None
    start = time.perf_counter()
    if args.method == "insense":
        options = {"restarts": args.restarts, "max_iters": args.max_iters, "init": args.init}
        result = run_insense(phi, args.m, InsenseConfig(seed=args.seed, **options))
        subset = result.subset
    elif args.method == "random":
        subset = select_random(phi, args.m, seed=args.seed)
    elif args.method == "fp-greedy":
        subset = select_fp_greedy(phi, args.m)
    else:
        options = {"exhaustive_limit": args.exhaustive_limit}
        subset = select_exhaustive_mu_avg(phi, args.m, limit=args.exhaustive_limit)
    elapsed = time.perf_counter() - start
    payload = {
        "matrix": source,
        "method": args.method,
        "m": args.m,
        "seed": args.seed,
        "options": options,
        "indices": [int(i) for i in subset],
        "weights": None if result is None else [float(w) for w in result.final_weights],
        "objective_trace": None if result is None else [float(v) for v in result.objective_trace],
        "final_objective": None if result is None else float(result.final_objective),
        "iterations": None if result is None else int(result.iterations),
        "converged": None if result is None else bool(result.converged),
        "subset_iteration": None if result is None else int(result.subset_iteration),
        "subset_mu_avg": None if result is None or result.subset_mu_avg is None
        else float(result.subset_mu_avg),
        "time_s": elapsed,
    }
    out = args.out or os.path.join(_outdir(args), "selection.json")
    _dump(payload, out)
    return 0


def cmd_metrics(args):
    phi, source = _load_phi(args)
    subset = _resolve_subset(args, phi.shape[0])
    sub = phi if subset is None else extract_submatrix(phi, subset)
    report = metric_report(sub)
    payload = {
        "matrix": source,
        "subset": subset,
        "rows": int(sub.shape[0]),
        "cols": int(sub.shape[1]),
        "mu_avg": report.mu_avg,
        "mu_max": report.mu_max,
        "frame_potential": report.frame_potential,
        "condition_number": report.condition_number,
    }
    _dump(payload, args.out)
    return 0


def cmd_recover(args):
    phi, source = _load_phi(args)
    subset = _resolve_subset(args, phi.shape[0])
    if subset is None:
        subset = list(range(phi.shape[0]))
    cfg = BpConfig(seed=args.seed, sample_cap=args.sample_cap)
    report = evaluate_recovery(phi, np.asarray(subset), args.k, cfg)
    payload = {
        "matrix": source,
        "subset": subset,
        "k": args.k,
        "seed": args.seed,
        "sample_cap": args.sample_cap,
        **report.to_dict(),
    }
    _dump(payload, args.out)
    return 0


def _check_selector_options(method, options):
    if method == "insense":
        unknown = set(options) - _INSENSE_OPTIONS
    elif method == "exhaustive-mu-avg":
        unknown = set(options) - {"exhaustive_limit"}
    else:
        unknown = set(options)
    if unknown:
        raise InsenseError(f"unknown options for {method}: {sorted(unknown)}")


def _resolve_benchmark_config(raw, base_dir, args):
    """Validate a benchmark config and fill in defaults.

    Paths inside the config resolve relative to the config file.  The
    returned dict is what gets embedded in every output file, so the
    same resolved config always reproduces the same numbers (wall-clock
    columns aside).
    """
    if not isinstance(raw, dict):
        raise InsenseError("config root must be a JSON object")
    known = {
        "matrix",
        "seed",
        "trials",
        "budgets",
        "sparsities",
        "selectors",
        "sample_cap",
        "formats",
        "output_dir",
    }
    extra = set(raw) - known
    if extra:
        raise InsenseError(f"unknown config keys: {sorted(extra)}")

    matrix = raw.get("matrix")
    if not isinstance(matrix, dict) or ("file" in matrix) == ("kind" in matrix):
        raise InsenseError("config 'matrix' must hold either 'file' or 'kind'")
    if "file" in matrix:
        path = matrix["file"]
        if not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        matrix = {"file": path}
    else:
        matrix = {
            "kind": matrix["kind"],
            "d": int(matrix.get("d", 0)),
            "n": int(matrix.get("n", 0)),
            "gaussian_rows": int(matrix.get("gaussian_rows", 10)),
            "signed": bool(matrix.get("signed", False)),
        }
        if matrix["kind"] not in KINDS:
            raise InsenseError(f"unknown ensemble kind {matrix['kind']!r}")

    selectors = raw.get("selectors")
    if not isinstance(selectors, list) or not selectors:
        raise InsenseError("config must list at least one selector")
    resolved = []
    labels = set()
    for entry in selectors:
        if not isinstance(entry, dict) or "method" not in entry:
            raise InsenseError("each selector entry needs a 'method'")
        method = entry["method"]
        if method not in METHODS:
            raise InsenseError(f"unknown selector method {method!r}")
        options = {k: v for k, v in entry.items() if k not in ("method", "name")}
        if "seed" in options:
            raise InsenseError("per-selector seeds are derived from the top-level seed")
        _check_selector_options(method, options)
        label = entry.get("name", method)
        if label in labels:
            raise InsenseError(f"duplicate selector name {label!r}")
        labels.add(label)
        resolved.append({"name": label, "method": method, "options": options})

    budgets = raw.get("budgets")
    if not isinstance(budgets, list) or not budgets:
        raise InsenseError("config must list at least one budget")
    budgets = [int(m) for m in budgets]
    sparsities = [int(k) for k in raw.get("sparsities", [])]
    if any(m < 1 for m in budgets) or any(k < 1 for k in sparsities):
        raise InsenseError("budgets and sparsities must be positive")
    trials = int(raw.get("trials", 1))
    if trials < 1:
        raise InsenseError("trials must be at least 1")
    formats = raw.get("formats", ["csv", "json"])
    if not formats or any(f not in ("csv", "json") for f in formats):
        raise InsenseError("formats must be a non-empty subset of ['csv', 'json']")

    output_dir = raw.get("output_dir")
    if output_dir is None:
        output_dir = args.outdir or os.environ.get(OUTDIR_ENV) or "."
    elif not os.path.isabs(output_dir):
        output_dir = os.path.join(base_dir, output_dir)
    return {
        "matrix": matrix,
        "seed": int(raw.get("seed", 0)),
        "trials": trials,
        "budgets": budgets,
        "sparsities": sparsities,
        "selectors": resolved,
        "sample_cap": int(raw.get("sample_cap", 10000)),
        "formats": sorted(set(formats)),
        "output_dir": output_dir,
    }


def _dispatch_selector(phi, m, selector, seed):
    method, options = selector["method"], selector["options"]
    if method == "insense":
        return run_insense(phi, m, InsenseConfig(seed=seed, **options)).subset
    if method == "random":
        return select_random(phi, m, seed=seed)
    if method == "fp-greedy":
        return select_fp_greedy(phi, m)
    return select_exhaustive_mu_avg(phi, m, limit=options.get("exhaustive_limit", _DEFAULT_LIMIT))


def _benchmark_cell(cfg, phi, layout, trial, s_idx, selector, m_idx, m):
    """Run one (trial, selector, budget) cell; failures land in the error column."""
    row = {
        "trial": trial,
        "selector": selector["name"],
        "m": m,
        "mu_avg": None,
        "mu_max": None,
        "frame_potential": None,
        "condition_number": None,
        "gaussian_ratio": None,
        "time_s": None,
        "subset": None,
        "error": None,
    }
    for k in cfg["sparsities"]:
        row[f"bp_acc_k{k}"] = None
    # stream tags: 0 = matrix draw, 1 = selector, 2 = recovery sampling
    sel_seed = derive_seed(cfg["seed"], 1, trial, s_idx, m_idx)
    try:
        start = time.perf_counter()
        subset = _dispatch_selector(phi, m, selector, sel_seed)
        row["time_s"] = time.perf_counter() - start
    except (InsenseError, ValueError) as exc:
        row["error"] = f"select: {exc}"
        return row
    row["subset"] = [int(i) for i in subset]
    report = metric_report(extract_submatrix(phi, subset))
    row["mu_avg"], row["mu_max"] = report.mu_avg, report.mu_max
    row["frame_potential"] = report.frame_potential
    row["condition_number"] = report.condition_number
    if layout is not None and "gaussian" in layout:
        lo, hi = layout["gaussian"]
        inside = sum(1 for i in row["subset"] if lo <= i < hi)
        row["gaussian_ratio"] = 100.0 * inside / len(row["subset"])
    for k_idx, k in enumerate(cfg["sparsities"]):
        # same supports for every selector at a given (trial, m, k)
        rec_cfg = BpConfig(
            seed=derive_seed(cfg["seed"], 2, trial, m_idx, k_idx),
            sample_cap=cfg["sample_cap"],
        )
        try:
            rec = evaluate_recovery(phi, subset, k, rec_cfg)
        except (InsenseError, ValueError) as exc:
            row["error"] = f"recover k={k}: {exc}"
            continue
        row[f"bp_acc_k{k}"] = rec.accuracy_percent
    return row


def _run_benchmark(cfg):
    matrix = cfg["matrix"]
    file_phi = load_matrix(matrix["file"]) if "file" in matrix else None
    rows = []
    for trial in range(cfg["trials"]):
        if file_phi is not None:
            phi, layout = file_phi, None
        else:
            spec = EnsembleSpec(
                matrix["kind"],
                d=matrix["d"],
                n=matrix["n"],
                seed=derive_seed(cfg["seed"], 0, trial),
                gaussian_rows=matrix["gaussian_rows"],
                signed=matrix["signed"],
            )
            phi, layout = generate(spec), block_layout(spec)
        for s_idx, selector in enumerate(cfg["selectors"]):
            for m_idx, m in enumerate(cfg["budgets"]):
                rows.append(_benchmark_cell(cfg, phi, layout, trial, s_idx, selector, m_idx, m))
    return rows


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, list):
        return ";".join(str(v) for v in value)
    return value


def _mean_std(values):
    present = [v for v in values if v is not None]
    if not present:
        return {"mean": None, "std": None, "count": 0}
    arr = np.asarray(present, dtype=float)
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return {"mean": float(arr.mean()), "std": std, "count": int(arr.size)}


def _summarize(cfg, rows):
    cells = []
    for selector in cfg["selectors"]:
        for m in cfg["budgets"]:
            group = [r for r in rows if r["selector"] == selector["name"] and r["m"] == m]
            cell = {
                "selector": selector["name"],
                "m": m,
                "trials": len(group),
                "failures": sum(1 for r in group if r["error"] is not None),
            }
            for column in _SUMMARY_COLUMNS:
                cell[column] = _mean_std([r[column] for r in group])
            cell["bp_accuracy"] = {
                str(k): _mean_std([r[f"bp_acc_k{k}"] for r in group]) for k in cfg["sparsities"]
            }
            cells.append(cell)
    return cells


def _write_benchmark_outputs(cfg, rows):
    os.makedirs(cfg["output_dir"], exist_ok=True)
    columns = ["trial", "selector", "m"] + list(_SUMMARY_COLUMNS[:-1])
    columns += [f"bp_acc_k{k}" for k in cfg["sparsities"]]
    columns += ["time_s", "subset", "error"]
    paths = {"csv": None, "json": None}
    if "csv" in cfg["formats"]:
        path = os.path.join(cfg["output_dir"], "results.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write("# " + json.dumps(cfg, sort_keys=True) + "\n")
            writer = csv.writer(fh)
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_csv_cell(row[c]) for c in columns])
        paths["csv"] = path
    if "json" in cfg["formats"]:
        path = os.path.join(cfg["output_dir"], "summary.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(
                {"config": cfg, "cells": _summarize(cfg, rows)},
                fh,
                indent=2,
                sort_keys=True,
                default=_json_default,
            )
            fh.write("\n")
        paths["json"] = path
    return paths


def cmd_benchmark(args):
    with open(args.config, encoding="utf-8") as fh:
        raw = json.load(fh)
    cfg = _resolve_benchmark_config(raw, os.path.dirname(os.path.abspath(args.config)), args)
    rows = _run_benchmark(cfg)
    paths = _write_benchmark_outputs(cfg, rows)
    _dump({"cells": len(rows), "csv": paths["csv"], "json": paths["json"]})
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="insense",
        description=(
            "Sensor selection by smoothed average-coherence minimization, "
            "with baseline selectors and a sparse-recovery benchmark."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("generate", help="draw a synthetic matrix and write it to CSV")
    p.add_argument("--ensemble", choices=KINDS, required=True)
    p.add_argument("--d", type=_positive_int, required=True, help="rows")
    p.add_argument("--n", type=_positive_int, required=True, help="columns")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gaussian-rows", type=_positive_int, default=10)
    p.add_argument("--signed", action="store_true")
    p.add_argument("--out", help="output CSV path (default: derived name in the output dir)")
    p.add_argument("--outdir", help=f"output directory (default: ${OUTDIR_ENV} or '.')")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("select", help="run a selector and write the chosen rows as JSON")
    _add_source_flags(p)
    p.add_argument("--m", type=_positive_int, required=True, help="number of rows to keep")
    p.add_argument("--method", choices=METHODS, default="insense")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=_positive_int, default=1)
    p.add_argument("--max-iters", type=_positive_int, default=5000)
    p.add_argument("--init", choices=("uniform", "uniform-plus-jitter"), default="uniform")
    p.add_argument("--exhaustive-limit", type=_positive_int, default=_DEFAULT_LIMIT)
    p.add_argument("--out", help="output JSON path (default: selection.json in the output dir)")
    p.add_argument("--outdir", help=f"output directory (default: ${OUTDIR_ENV} or '.')")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("metrics", help="report quality metrics for a matrix or submatrix")
    _add_source_flags(p)
    _add_subset_flags(p)
    p.add_argument("--seed", type=int, default=0, help="ensemble seed")
    p.add_argument("--out", help="optional JSON output path")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("recover", help="planted-signal recovery rate for selected rows")
    _add_source_flags(p)
    _add_subset_flags(p)
    p.add_argument("--k", type=_positive_int, required=True, help="planted sparsity")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--sample-cap",
        type=_positive_int,
        default=10000,
        help="max supports; larger support counts are sampled (default 10000)",
    )
    p.add_argument("--out", help="optional JSON output path")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("benchmark", help="sweep (trial, selector, budget) cells from a config")
    p.add_argument("--config", required=True, metavar="FILE", help="JSON experiment config")
    p.add_argument("--outdir", help=f"fallback output directory (default: ${OUTDIR_ENV} or '.')")
    p.set_defaults(func=cmd_benchmark)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        parser.error(str(exc))
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return 1
    except (InsenseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
