"""Command-line interface.

Subcommands:
    basis        compute a prolate basis and write it as JSON
    reconstruct  fit one estimator to a CSV of (t, y) samples
    experiment   run a synthetic experiment preset or config file
    sweep        aggregate experiments over an axis of config values

Exit codes: 0 success, 1 runtime/solver failure, 2 usage or validation error.
"""

import argparse
import csv
import statistics
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import jsonio
from .dictionary import (ReconstructionModel, SampleSet, build_pswf_dictionary,
                         build_sinc_dictionary, default_term_count, synthesize)
from .experiments import (ExperimentConfig, ExperimentReport, NoiseConfig,
                          config_from_dict, config_to_dict, preset_config,
                          run_experiment, with_seed)
from .pswf import BandlimitParams, compute_basis, save_basis, shannon_count
from .solvers import (AdaptiveKernel, FixedKernel, MccConfig, RidgeConfig,
                      solve_least_squares, solve_mcc, solve_ridge)

SWEEP_AXES = ("burst_std", "lambda", "n_terms")


def _fmt(value) -> str:
    """Shortest representation that round-trips binary64."""
    return repr(float(value))


def write_report_json(report: ExperimentReport, path) -> None:
    jsonio.dump_path(report.to_dict(), path)


def write_reconstruction_csv(report: ExperimentReport, path) -> None:
    """Per-time-point export: t, x_true, y (blank off the sample grid), and
    one column per estimator, over the union of the evaluation grid and the
    sample times."""
    times = np.union1d(report.reference_times, report.samples.times)
    # every union point originates in one of the two sources, so the true
    # signal value is always available exactly
    truth_map = {float(t): float(v) for t, v in zip(report.samples.times,
                                                    report.clean_values)}
    truth_map.update((float(t), float(v)) for t, v in zip(report.reference_times,
                                                          report.reference_values))
    sample_map = {float(t): float(v) for t, v in zip(report.samples.times,
                                                     report.samples.values)}
    columns = {}
    for res in report.results:
        if res.model is not None:
            columns[res.name] = synthesize(res.model, times)
        else:
            columns[res.name] = None
    names = [res.name for res in report.results]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "x_true", "y"] + names)
        for i, t in enumerate(times):
            key = float(t)
            row = [_fmt(t), _fmt(truth_map[key])]
            row.append(_fmt(sample_map[key]) if key in sample_map else "")
            for name in names:
                col = columns[name]
                row.append("" if col is None else _fmt(col[i]))
            writer.writerow(row)


def _print_report_table(report: ExperimentReport) -> None:
    print(f"{'estimator':<10} {'error':>14} {'rmse':>12} {'iterations':>11}")
    for res in report.results:
        if res.failure is not None:
            print(f"{res.name:<10} {'failed':>14} {'-':>12} {'-':>11}  {res.failure}")
            continue
        iters = str(res.mcc_report.iterations) if res.mcc_report is not None else "-"
        print(f"{res.name:<10} {res.error:>14.6e} {res.rmse:>12.6e} {iters:>11}")


def _cmd_basis(args) -> int:
    params = BandlimitParams(half_length=args.half_length,
                             time_bandwidth=args.time_bandwidth,
                             omega0=args.omega0)
    basis = compute_basis(params)
    lam = basis.eigenvalues
    print(f"basis: 2M+1 = {params.size}, time-bandwidth = {params.time_bandwidth:g}, "
          f"omega0 = {params.omega0:g}")
    print(f"shannon count (2M+1)c/pi = {shannon_count(params):.4f}; "
          f"eigenvalue sum = {lam.sum():.12f}")
    print(f"eigenvalues > 0.5: {int(np.sum(lam > 0.5))} of {lam.size}")
    head = ", ".join(f"{x:.6g}" for x in lam[:5])
    print(f"leading eigenvalues: {head}")
    for note in basis.warnings:
        print(f"note: {note}")
    if args.out:
        save_basis(basis, args.out)
        print(f"wrote {args.out}")
    return 0


def _config_from_args(args) -> ExperimentConfig:
    if args.config:
        config = config_from_dict(jsonio.load_path(args.config))
    elif args.preset:
        config = preset_config(args.preset)
    else:
        raise ValueError("provide --preset or --config")
    if args.seed is not None:
        config = with_seed(config, args.seed)
    if getattr(args, "burst_std", None) is not None:
        config = replace(config, noise=replace(config.noise, burst_std=args.burst_std))
    if getattr(args, "ridge_lambda", None) is not None:
        config = replace(config, ridge=RidgeConfig(lam=args.ridge_lambda))
    if getattr(args, "mcc_lambda", None) is not None:
        config = replace(config, mcc=replace(config.mcc, lam=args.mcc_lambda))
    if getattr(args, "n_terms", None) is not None:
        config = replace(config, n_terms=args.n_terms)
    if getattr(args, "estimators", None):
        config = replace(config, estimators=tuple(args.estimators.split(",")))
    return config


def _cmd_experiment(args) -> int:
    config = _config_from_args(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.seeds is not None:
        seeds = [config.seed + i for i in range(args.seeds)]
        per_estimator = {name: [] for name in config.estimators}
        failed = False
        for seed in seeds:
            report = run_experiment(with_seed(config, seed))
            for res in report.results:
                if res.error is None:
                    failed = True
                else:
                    per_estimator[res.name].append(res.error)
        if args.aggregate != "median":
            raise ValueError(f"unsupported aggregate {args.aggregate!r}")
        summary = {
            "seeds": seeds,
            "aggregate": "median",
            "estimators": [
                {"name": name,
                 "median_error": statistics.median(vals) if vals else None,
                 "n_runs": len(vals)}
                for name, vals in per_estimator.items()],
            "config": config_to_dict(config),
        }
        jsonio.dump_path(summary, out_dir / "aggregate.json")
        print(f"{'estimator':<10} {'median error':>16}  (over {len(seeds)} seeds)")
        for entry in summary["estimators"]:
            med = entry["median_error"]
            med_s = "failed" if med is None else f"{med:.6e}"
            print(f"{entry['name']:<10} {med_s:>16}")
        print(f"wrote {out_dir / 'aggregate.json'}")
        return 1 if failed else 0

    report = run_experiment(config)
    write_report_json(report, out_dir / "report.json")
    write_reconstruction_csv(report, out_dir / "reconstruction.csv")
    _print_report_table(report)
    print(f"wrote {out_dir / 'report.json'} and {out_dir / 'reconstruction.csv'}")
    return 1 if any(res.failure is not None for res in report.results) else 0


def _apply_axis(config: ExperimentConfig, axis: str, value: float) -> ExperimentConfig:
    if axis == "burst_std":
        return replace(config, noise=replace(config.noise, burst_std=value))
    if axis == "lambda":
        return replace(config, ridge=RidgeConfig(lam=value),
                       mcc=replace(config.mcc, lam=value))
    if axis == "n_terms":
        return replace(config, n_terms=int(value))
    raise ValueError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")


def _cmd_sweep(args) -> int:
    config = _config_from_args(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    values = [float(v) for v in args.values.split(",")]
    seeds = [config.seed + i for i in range(args.seeds)]

    rows = []
    failed = False
    for value in values:
        errors = {name: [] for name in config.estimators}
        rmses = {name: [] for name in config.estimators}
        for seed in seeds:
            report = run_experiment(with_seed(_apply_axis(config, args.axis, value), seed))
            for res in report.results:
                if res.error is None:
                    failed = True
                else:
                    errors[res.name].append(res.error)
                    rmses[res.name].append(res.rmse)
        for name in config.estimators:
            if errors[name]:
                rows.append((value, name,
                             statistics.median(errors[name]),
                             statistics.median(rmses[name]),
                             len(errors[name])))

    path = out_dir / "sweep.csv"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["axis", "value", "estimator", "median_error",
                         "median_rmse", "n_seeds"])
        for value, name, med_err, med_rmse, n in rows:
            writer.writerow([args.axis, _fmt(value), name, _fmt(med_err),
                             _fmt(med_rmse), n])
    print(f"wrote {path} ({len(rows)} rows)")
    return 1 if failed else 0


def _cmd_reconstruct(args) -> int:
    samples_path = Path(args.samples)
    times, values = [], []
    with open(samples_path, "r", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for row in reader:
            if not row or row[0].strip().lower() in ("t", "time"):
                continue
            times.append(float(row[0]))
            values.append(float(row[1]))
    samples = SampleSet(times=np.asarray(times), values=np.asarray(values))

    window = (samples.times[0], samples.times[-1])
    grid = np.linspace(window[0], window[1], args.grid_size)
    name = args.estimator
    if name in ("Sinc", "RSinc", "ESinc"):
        dictionary = build_sinc_dictionary(samples.times, args.bandwidth)
    else:
        basis = compute_basis(BandlimitParams(half_length=args.half_length,
                                              time_bandwidth=args.time_bandwidth,
                                              omega0=args.omega0))
        n_terms = args.n_terms if args.n_terms is not None else default_term_count(basis)
        shift = 0.5 * (window[0] + window[1])
        dictionary = build_pswf_dictionary(samples.times, basis, n_terms, time_shift=shift)

    mcc_report = None
    if name in ("Sinc", "PSWF"):
        coefficients = solve_least_squares(dictionary, samples.values)
    elif name in ("RSinc", "RPSWF"):
        coefficients = solve_ridge(dictionary, samples.values, RidgeConfig(lam=args.ridge_lambda))
    elif name in ("ESinc", "EPSWF"):
        policy = (FixedKernel(args.kernel_sigma) if args.kernel_sigma is not None
                  else AdaptiveKernel(args.sigma_min))
        mcc_report = solve_mcc(dictionary, samples.values,
                               MccConfig(lam=args.mcc_lambda, kernel_policy=policy))
        coefficients = mcc_report.coefficients
    else:
        raise ValueError(f"unknown estimator {name!r}")

    model = ReconstructionModel(coefficients=coefficients, kind=dictionary.kind)
    estimate = synthesize(model, grid)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "reconstruction.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", name])
        for t, v in zip(grid, estimate):
            writer.writerow([_fmt(t), _fmt(v)])
    doc = {
        "estimator": name,
        "n_samples": len(samples),
        "coefficients": [float(x) for x in coefficients],
        "mcc": None if mcc_report is None else mcc_report.to_dict(),
    }
    jsonio.dump_path(doc, out_dir / "model.json")
    print(f"wrote {csv_path} and {out_dir / 'model.json'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prolate-recon",
        description="Bandlimited signal reconstruction with prolate bases and "
                    "robust correntropy estimators.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_basis = sub.add_parser("basis", help="compute and export a prolate basis")
    p_basis.add_argument("--half-length", type=int, required=True)
    p_basis.add_argument("--time-bandwidth", type=float, required=True)
    p_basis.add_argument("--omega0", type=float, default=np.pi)
    p_basis.add_argument("--out", type=str, default=None)

    def add_experiment_args(p):
        p.add_argument("--preset", choices=("paper-uniform", "paper-nonuniform"))
        p.add_argument("--config", type=str, help="JSON config file (flags override)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out-dir", type=str, default=".")
        p.add_argument("--burst-std", type=float, default=None)
        p.add_argument("--ridge-lambda", type=float, default=None)
        p.add_argument("--mcc-lambda", type=float, default=None)
        p.add_argument("--n-terms", type=int, default=None)
        p.add_argument("--estimators", type=str, default=None,
                       help="comma-separated subset of estimator names")

    p_exp = sub.add_parser("experiment", help="run a reconstruction experiment")
    add_experiment_args(p_exp)
    p_exp.add_argument("--seeds", type=int, default=None,
                       help="run this many consecutive seeds and aggregate")
    p_exp.add_argument("--aggregate", type=str, default="median")

    p_sweep = sub.add_parser("sweep", help="sweep a config axis over seeds")
    add_experiment_args(p_sweep)
    p_sweep.add_argument("--axis", choices=SWEEP_AXES, required=True)
    p_sweep.add_argument("--values", type=str, required=True,
                         help="comma-separated axis values")
    p_sweep.add_argument("--seeds", type=int, default=25)

    p_rec = sub.add_parser("reconstruct", help="fit one estimator to sample CSV")
    p_rec.add_argument("--samples", type=str, required=True, help="CSV of t,y rows")
    p_rec.add_argument("--estimator", type=str, required=True)
    p_rec.add_argument("--half-length", type=int, default=20)
    p_rec.add_argument("--time-bandwidth", type=float, default=np.pi / 2)
    p_rec.add_argument("--omega0", type=float, default=np.pi)
    p_rec.add_argument("--n-terms", type=int, default=None)
    p_rec.add_argument("--bandwidth", type=float, default=60.0)
    p_rec.add_argument("--ridge-lambda", type=float, default=1e-3)
    p_rec.add_argument("--mcc-lambda", type=float, default=1e-3)
    p_rec.add_argument("--kernel-sigma", type=float, default=None)
    p_rec.add_argument("--sigma-min", type=float, default=None)
    p_rec.add_argument("--grid-size", type=int, default=2048)
    p_rec.add_argument("--out-dir", type=str, default=".")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"basis": _cmd_basis, "experiment": _cmd_experiment,
                "sweep": _cmd_sweep, "reconstruct": _cmd_reconstruct}
    try:
        return handlers[args.command](args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
