"""Command line surface: train, predict, evaluate, benchmark, simulate, inclusion.

Every command writes its artifacts (delimited output plus rendered
figures unless --no-figures) into --out and drops exactly one
manifest.json there recording the resolved configuration, sha256
fingerprints of the inputs, output paths, and wall-clock timings.
Manifests and figures are descriptive side channels; the CSV and model
artifacts are the reproducible surface and are byte-identical when a
command is re-run with the same inputs, seed, and thread count.

Exit codes: 0 success; 1 benchmark suite that finished with failed
datasets; 2 unusable input (missing files, malformed CSV/JSON/schema,
incompatible model); 3 numeric failure inside the sampler.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np
import pandas as pd

from . import plots
from .benchmark import DATASETS, SuiteConfig, resolve_data_dir, run_suite
from .data import load_csv, make_frame, preprocess, write_csv
from .exceptions import ConfigError, DataError, NumericError, VortessError
from .metrics import EvalReport
from .modelfile import load_model, save_model
from .sampler import (
    SamplerConfig,
    posterior_interval,
    predict_class,
    predict_proba,
    run_gibbs,
    variable_inclusion,
    variable_inclusion_grouped,
)
from .synthetic import (
    ROTATED_AXIS,
    ROTATED_AXIS_ANGLES,
    SINUSOID,
    SINUSOID_AMPLITUDES,
    SyntheticSpec,
    generate_dataset,
)

__all__ = ["main", "build_parser", "simulate_point", "LATTICE_SIDE"]

LATTICE_SIDE = 100

_SAMPLER_FIELDS = (
    "m", "k", "omega", "lambda_c", "sigma_c",
    "burn_in", "draws", "thin", "seed", "threshold", "p0",
)


# ---------------------------------------------------------------- helpers

def _fail(message: str) -> None:
    print("error: %s" % message, file=sys.stderr)


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_json(path, what: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError:
        raise DataError("no such %s file: %s" % (what, path)) from None
    except json.JSONDecodeError as exc:
        raise DataError("%s file %s is not valid JSON: %s" % (what, path, exc)) from None
    if not isinstance(data, dict):
        raise DataError("%s file %s must hold a JSON object" % (what, path))
    return data


def _load_schema(args) -> dict:
    return _load_json(args.schema, "schema") if args.schema else {}


def _resolve_sampler_config(args) -> SamplerConfig:
    """Config file first, explicit flags on top."""
    settings = _load_json(args.config, "config") if getattr(args, "config", None) else {}
    for name in _SAMPLER_FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            settings[name] = value
    return SamplerConfig.from_dict(settings)


def _resolve_threads(args) -> int:
    if getattr(args, "threads", None) is not None:
        value = args.threads
    else:
        raw = os.environ.get("VORTESS_THREADS", "1")
        try:
            value = int(raw)
        except ValueError:
            raise ConfigError("VORTESS_THREADS must be an integer, got %r" % raw) from None
    if value < 1:
        raise ConfigError("thread count must be >= 1")
    return value


def _write_manifest(out: Path, command: str, config_echo, seed,
                    inputs, outputs, timings) -> Path:
    payload = {
        "command": command,
        "config": config_echo,
        "inputs": {str(path): _sha256(Path(path)) for path in inputs},
        "outputs": sorted(str(path) for path in outputs),
        "seed": seed,
        "timings": {phase: round(seconds, 3) for phase, seconds in timings.items()},
        "version": _version(),
    }
    path = out / "manifest.json"
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return path


def _version() -> str:
    from . import __version__
    return __version__


def _histogram_line(values: np.ndarray, label: str) -> str:
    counts = np.bincount(values.ravel())
    total = counts.sum()
    parts = [
        "%d:%.1f%%" % (v, 100.0 * c / total)
        for v, c in enumerate(counts) if c
    ]
    return "%s %s" % (label, "  ".join(parts))


def _require_preprocessor(model):
    if model.preprocessor is None:
        raise DataError(
            "model carries no preprocessing metadata; it cannot score CSV rows"
        )
    return model.preprocessor


def _csv_header(path) -> tuple:
    try:
        return tuple(pd.read_csv(path, nrows=0).columns)
    except FileNotFoundError:
        raise DataError("no such file: %s" % (path,)) from None
    except pd.errors.EmptyDataError:
        raise DataError("%s is empty" % (path,)) from None
    except pd.errors.ParserError as exc:
        raise DataError("malformed CSV %s: %s" % (path, exc)) from None


# ---------------------------------------------------------------- train

def cmd_train(args) -> int:
    started = time.perf_counter()
    out = _out_dir(args)
    config = _resolve_sampler_config(args)
    schema = _load_schema(args)
    table = load_csv(args.data, schema, target=args.target)
    X, y, prep = preprocess(table)
    loaded = time.perf_counter()

    draws = run_gibbs(X, y, config)
    fitted = time.perf_counter()

    model_path = Path(args.model) if args.model else out / "model.vortess"
    model_path.parent.mkdir(parents=True, exist_ok=True)
    save_model(model_path, draws, feature_names=prep.feature_names, preprocessor=prep)

    diag = draws.diagnostics
    print("trained on %d rows, %d encoded covariates" % X.shape)
    for line in diag.summary_lines():
        print(line)
    kept = slice(config.burn_in, None)
    print(_histogram_line(diag.dim_counts[kept], "covariates per tessellation:"))
    print(_histogram_line(diag.centre_counts[kept], "centres per tessellation:"))
    print("model written to %s" % model_path)

    outputs = [model_path]
    if args.figures:
        outputs.append(plots.save_chain_trace(diag, out / "chain_trace.png"))
        order = np.argsort(-variable_inclusion(draws), kind="stable")
        outputs.append(plots.save_inclusion_bars(
            [prep.feature_names[i] for i in order],
            variable_inclusion(draws)[order],
            out / "inclusion.png",
        ))
    inputs = [args.data] + ([args.schema] if args.schema else []) \
        + ([args.config] if args.config else [])
    _write_manifest(
        out, "train", config.to_dict(), config.seed, inputs, outputs,
        {"load": loaded - started, "fit": fitted - loaded,
         "write": time.perf_counter() - fitted},
    )
    return 0


# ---------------------------------------------------------------- predict

def cmd_predict(args) -> int:
    started = time.perf_counter()
    out = _out_dir(args)
    model = load_model(args.model)
    prep = _require_preprocessor(model)
    schema = _load_schema(args)
    # prediction never reads labels, so an unmappable target column is
    # discarded rather than rejected
    drop = tuple(schema.get("drop", ()))
    if prep.target in _csv_header(args.data) and prep.target not in drop:
        schema = dict(schema, drop=drop + (prep.target,))
    table = load_csv(args.data, schema, target=prep.target, require_target=False)
    X, _, rows = prep.transform(table, return_index=True)

    threshold = args.threshold if args.threshold is not None else model.draws.config.threshold
    p_hat = predict_proba(model.draws, X)
    columns = {"row": rows, "p_hat": p_hat,
               "class": predict_class(p_hat, threshold)}
    if args.interval is not None:
        lo, hi = posterior_interval(model.draws, X, alpha=args.interval)
        columns["lo"], columns["hi"] = lo, hi
    frame = pd.DataFrame(columns)
    csv_path = out / "predictions.csv"
    write_csv(frame, csv_path)
    print("wrote %d predictions to %s" % (len(frame), csv_path))

    outputs = [csv_path]
    if args.interval is not None and args.figures:
        outputs.append(plots.save_interval_plot(
            p_hat, columns["lo"], columns["hi"], out / "intervals.png"))
    _write_manifest(
        out, "predict",
        {"threshold": threshold, "interval": args.interval},
        model.draws.config.seed,
        [args.model, args.data] + ([args.schema] if args.schema else []),
        outputs,
        {"total": time.perf_counter() - started},
    )
    return 0


# ---------------------------------------------------------------- evaluate

def cmd_evaluate(args) -> int:
    started = time.perf_counter()
    out = _out_dir(args)
    schema = _load_schema(args)
    inputs = [args.data] + ([args.schema] if args.schema else [])

    if args.scores:
        # closure path: score a predictions file against the labelled data
        inputs.append(args.scores)
        pred = pd.read_csv(args.scores)
        for needed in ("row", "p_hat"):
            if needed not in pred.columns:
                raise DataError("scores file lacks a %r column" % needed)
        target = schema.get("target") or args.target
        if target is None:
            raise DataError("evaluating a scores file needs --target or a schema")
        table = load_csv(args.data, schema, target=target)
        labels = table.labels()
        rows = pred["row"].to_numpy(np.int64)
        if rows.min() < 0 or rows.max() >= len(labels):
            raise DataError("scores file references rows outside the data file")
        y_true = labels[rows]
        scores = pred["p_hat"].to_numpy(np.float64)
        threshold = args.threshold if args.threshold is not None else 0.5
        seed = None
    else:
        if not args.model:
            raise DataError("evaluate needs --model or --scores")
        inputs.insert(0, args.model)
        model = load_model(args.model)
        prep = _require_preprocessor(model)
        table = load_csv(args.data, schema, target=schema.get("target", prep.target))
        X, y_true, _ = prep.transform(table, return_index=True)
        if y_true is None:
            raise DataError("evaluate needs labelled data (no target column found)")
        scores = np.atleast_1d(predict_proba(model.draws, X))
        threshold = args.threshold if args.threshold is not None else model.draws.config.threshold
        seed = model.draws.config.seed

    report = EvalReport.from_scores(y_true, scores, threshold)
    for line in report.lines():
        print(line)
    report_path = out / "report.csv"
    write_csv(pd.DataFrame([report.as_dict()]), report_path)
    points = np.asarray(report.roc_points)
    roc_path = out / "roc_points.csv"
    write_csv(pd.DataFrame({"fpr": points[:, 0], "tpr": points[:, 1]}), roc_path)

    outputs = [report_path, roc_path]
    if args.figures:
        outputs.append(plots.save_roc_curve(report.roc_points, report.auc,
                                            out / "roc_curve.png"))
    _write_manifest(
        out, "evaluate", {"threshold": threshold}, seed, inputs, outputs,
        {"total": time.perf_counter() - started},
    )
    return 0


# ---------------------------------------------------------------- benchmark

def cmd_benchmark(args) -> int:
    started = time.perf_counter()
    out = _out_dir(args)
    config = _resolve_sampler_config(args)
    if args.datasets:
        names = tuple(part.strip() for part in args.datasets.split(",") if part.strip())
    else:
        names = tuple(sorted(DATASETS))
    grid = SuiteConfig.__dataclass_fields__["cv_grid"].default
    if args.cv_grid:
        parsed = json.loads(args.cv_grid)
        if not isinstance(parsed, dict):
            raise ConfigError("--cv-grid must be a JSON object of lists")
        grid = tuple(sorted((key, tuple(values)) for key, values in parsed.items()))
    suite = SuiteConfig(
        datasets=names,
        splits=args.splits,
        fraction=args.fraction,
        seed=args.seed if args.seed is not None else 0,
        sampler=config,
        cv=args.cv,
        cv_grid=grid,
        cv_folds=args.cv_folds,
        threads=_resolve_threads(args),
    )
    data_dir = resolve_data_dir(args.data_dir)
    result = run_suite(suite, data_dir=data_dir)
    finished = time.perf_counter()

    outputs = []
    splits_path = out / "splits.csv"
    write_csv(pd.DataFrame([row.as_dict() for row in result.rows]
                           or {"dataset": []}), splits_path)
    outputs.append(splits_path)
    summary_path = out / "summary.csv"
    write_csv(pd.DataFrame(result.summary or {"dataset": []}), summary_path)
    outputs.append(summary_path)
    for entry in result.summary:
        print("%-16s accuracy %.1f%% (sd %.1f, reference %.1f)   "
              "AUC %.3f (sd %.3f, reference %.3f)"
              % (entry["dataset"], entry["mean_accuracy"], entry["sd_accuracy"],
                 entry["reference_accuracy"], entry["mean_auc"],
                 entry["sd_auc"], entry["reference_auc"]))
    for name, message in sorted(result.failures.items()):
        _fail("dataset %s failed: %s" % (name, message))

    if args.figures and result.summary:
        outputs.append(plots.save_benchmark_summary(result.summary,
                                                    out / "benchmark.png"))
    inputs = [
        data_dir / DATASETS[name].filename
        for name in sorted(set(names))
        if (data_dir / DATASETS[name].filename).is_file()
    ]
    _write_manifest(
        out, "benchmark",
        {"sampler": config.to_dict(), "datasets": sorted(set(names)),
         "splits": suite.splits, "fraction": suite.fraction,
         "cv": suite.cv, "cv_grid": [list((k,) + tuple(v)) for k, v in suite.cv_grid],
         "cv_folds": suite.cv_folds, "threads": suite.threads},
        suite.seed, inputs, outputs,
        {"suite": finished - started, "write": time.perf_counter() - finished},
    )
    return 1 if result.failures else 0


# ---------------------------------------------------------------- simulate

def _derived_seed(*path) -> int:
    return int(np.random.SeedSequence(list(path)).generate_state(1, dtype=np.uint64)[0])


def simulate_point(kind: str, parameter: float, n: int, config: SamplerConfig,
                   seed: int, point: int, lattice: np.ndarray | None = None):
    """Train/score one synthetic sweep point with derived seeds.

    Returns (accuracy fraction, lattice probabilities or None, train
    coordinates, train labels). The lattice rides along the test block
    so both are scored from the cached posterior pass.
    """
    X_train, y_train = generate_dataset(
        SyntheticSpec(kind, parameter, n, _derived_seed(seed, point, 0)))
    X_test, y_test = generate_dataset(
        SyntheticSpec(kind, parameter, n, _derived_seed(seed, point, 1)))
    mean, std = X_train.mean(axis=0), X_train.std(axis=0)
    std = np.where(std > 0, std, 1.0)
    blocks = [(X_test - mean) / std]
    if lattice is not None:
        blocks.append((lattice - mean) / std)
    fit_config = replace(config, seed=_derived_seed(seed, point, 2))
    draws = run_gibbs((X_train - mean) / std, y_train, fit_config,
                      X_test=np.vstack(blocks))
    p_hat = np.atleast_1d(predict_proba(draws))
    classes = predict_class(p_hat[:n], fit_config.threshold)
    acc = float(np.mean(classes == y_test))
    probs = p_hat[n:] if lattice is not None else None
    return acc, probs, X_train, y_train


def cmd_simulate(args) -> int:
    started = time.perf_counter()
    out = _out_dir(args)
    config = _resolve_sampler_config(args)
    seed = args.seed if args.seed is not None else config.seed
    if args.parameters:
        params = [float(part) for part in args.parameters.split(",")]
        if not params:
            raise ConfigError("--parameters needs at least one value")
    else:
        params = list(ROTATED_AXIS_ANGLES if args.kind == ROTATED_AXIS
                      else SINUSOID_AMPLITUDES)
    lattice_param = (args.lattice_at if args.lattice_at is not None
                     else params[len(params) // 2])

    axis = np.linspace(0.0, 1.0, LATTICE_SIDE)
    gx, gy = np.meshgrid(axis, axis)
    lattice = np.column_stack([gx.ravel(), gy.ravel()])

    accuracies = []
    lattice_probs = None
    lattice_train = None
    for index, parameter in enumerate(params):
        wants_lattice = parameter == lattice_param
        acc, probs, X_train, y_train = simulate_point(
            args.kind, parameter, args.n, config, seed, index,
            lattice if wants_lattice else None,
        )
        accuracies.append(acc)
        print("%s parameter %.6g: accuracy %.4f" % (args.kind, parameter, acc))
        if wants_lattice and lattice_probs is None:
            lattice_probs, lattice_train = probs, (X_train, y_train)
    if lattice_probs is None:
        # --lattice-at fell outside the sweep: one extra lattice-only run
        _, lattice_probs, *lattice_train = simulate_point(
            args.kind, lattice_param, args.n, config, seed, len(params), lattice)
        lattice_train = tuple(lattice_train)

    sweep_path = out / "sweep.csv"
    write_csv(pd.DataFrame({"parameter": params, "accuracy": accuracies}),
              sweep_path)
    lattice_path = out / "lattice.csv"
    write_csv(pd.DataFrame({"x1": lattice[:, 0], "x2": lattice[:, 1],
                            "probability": lattice_probs}), lattice_path)
    outputs = [sweep_path, lattice_path]

    if args.dump_data:
        X_train, y_train = lattice_train
        train_path = out / "train_data.csv"
        write_csv(make_frame(X_train, y_train, ("x1", "x2")), train_path)
        outputs.append(train_path)
    if args.figures:
        xlabel = ("rotation angle (radians)" if args.kind == ROTATED_AXIS
                  else "sine amplitude")
        outputs.append(plots.save_sweep_curve(params, accuracies, xlabel,
                                              out / "sweep.png"))
        outputs.append(plots.save_probability_lattice(
            axis, axis, np.asarray(lattice_probs).reshape(LATTICE_SIDE, LATTICE_SIDE),
            out / "lattice.png",
            points=lattice_train[0], labels=lattice_train[1]))
    _write_manifest(
        out, "simulate",
        {"kind": args.kind, "parameters": params, "n": args.n,
         "lattice_at": lattice_param, "sampler": config.to_dict()},
        seed, [args.config] if args.config else [], outputs,
        {"total": time.perf_counter() - started},
    )
    return 0


# ---------------------------------------------------------------- inclusion

def cmd_inclusion(args) -> int:
    started = time.perf_counter()
    out = _out_dir(args)
    model = load_model(args.model)
    draws = model.draws
    names = model.feature_names or tuple(
        "x%d" % (i + 1) for i in range(draws.n_features))

    if args.aggregate:
        prep = _require_preprocessor(model)
        groups: dict = {}
        for index, source in enumerate(prep.source_columns):
            groups.setdefault(source, []).append(index)
        table = variable_inclusion_grouped(draws, groups)
    else:
        table = dict(zip(names, variable_inclusion(draws)))
    ranked = sorted(table.items(), key=lambda item: (-item[1], item[0]))

    csv_path = out / "inclusion.csv"
    write_csv(pd.DataFrame(ranked, columns=["name", "inclusion_pct"]), csv_path)
    for name, pct in ranked:
        print("%-24s %6.2f%%" % (name, pct))

    outputs = [csv_path]
    if args.figures:
        outputs.append(plots.save_inclusion_bars(
            [name for name, _ in ranked], [pct for _, pct in ranked],
            out / "inclusion.png"))
    _write_manifest(
        out, "inclusion", {"aggregate": bool(args.aggregate)},
        draws.config.seed, [args.model], outputs,
        {"total": time.perf_counter() - started},
    )
    return 0


# ---------------------------------------------------------------- parser

def _add_sampler_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file of sampler settings; flags win")
    parser.add_argument("--m", type=int, help="number of tessellations")
    parser.add_argument("--k", type=float, help="output shrinkage factor")
    parser.add_argument("--omega", type=float, help="covariate-count rate")
    parser.add_argument("--lambda-c", dest="lambda_c", type=float,
                        help="centre-count rate")
    parser.add_argument("--sigma-c", dest="sigma_c", type=float,
                        help="centre placement bandwidth (sd units)")
    parser.add_argument("--burn-in", dest="burn_in", type=int)
    parser.add_argument("--draws", type=int, help="retained posterior draws")
    parser.add_argument("--thin", type=int)
    parser.add_argument("--threshold", type=float,
                        help="classification cut on the posterior mean probability")
    parser.add_argument("--p0", type=float, help="prior base rate (sets the offset)")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--no-figures", dest="figures", action="store_false",
                        help="skip PNG rendering")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vortess",
        description="Sum-of-tessellations Bayesian binary classifier",
    )
    parser.add_argument("--version", action="version",
                        version="%(prog)s " + _version())
    commands = parser.add_subparsers(dest="command", required=True)

    train = commands.add_parser("train", help="fit a model on a labelled CSV")
    train.add_argument("--data", required=True, help="training CSV")
    train.add_argument("--schema", help="JSON schema hints for the CSV")
    train.add_argument("--target", help="target column (overrides schema)")
    train.add_argument("--model", help="model output path (default OUT/model.vortess)")
    _add_sampler_flags(train)
    _add_common_flags(train)
    train.set_defaults(func=cmd_train)

    predict = commands.add_parser("predict", help="score rows with a saved model")
    predict.add_argument("--model", required=True)
    predict.add_argument("--data", required=True)
    predict.add_argument("--schema", help="JSON schema hints for the CSV")
    predict.add_argument("--threshold", type=float,
                         help="override the model's classification cut")
    predict.add_argument("--interval", type=float, metavar="ALPHA",
                         help="add equal-tailed (1-ALPHA) probability bounds")
    _add_common_flags(predict)
    predict.set_defaults(func=cmd_predict)

    evaluate = commands.add_parser("evaluate",
                                   help="accuracy/AUC/ROC on labelled data")
    evaluate.add_argument("--model", help="saved model to score with")
    evaluate.add_argument("--scores", help="predictions CSV to grade instead")
    evaluate.add_argument("--data", required=True, help="labelled CSV")
    evaluate.add_argument("--schema", help="JSON schema hints for the CSV")
    evaluate.add_argument("--target", help="target column for --scores mode")
    evaluate.add_argument("--threshold", type=float)
    _add_common_flags(evaluate)
    evaluate.set_defaults(func=cmd_evaluate)

    benchmark = commands.add_parser("benchmark",
                                    help="repeated-split suite over the registry")
    benchmark.add_argument("--datasets",
                           help="comma list (default: all registered)")
    benchmark.add_argument("--data-dir", dest="data_dir",
                           help="dataset directory (default $VORTESS_DATA_DIR or ./data)")
    benchmark.add_argument("--splits", type=int, default=20)
    benchmark.add_argument("--fraction", type=float, default=0.8,
                           help="training fraction per split")
    benchmark.add_argument("--cv", action="store_true",
                           help="5-fold grid search before each split's final fit")
    benchmark.add_argument("--cv-grid", dest="cv_grid",
                           help="JSON object of parameter lists")
    benchmark.add_argument("--cv-folds", dest="cv_folds", type=int, default=5)
    benchmark.add_argument("--threads", type=int,
                           help="parallel workers (default $VORTESS_THREADS or 1)")
    _add_sampler_flags(benchmark)
    _add_common_flags(benchmark)
    benchmark.set_defaults(func=cmd_benchmark)

    simulate = commands.add_parser("simulate",
                                   help="accuracy sweep on a synthetic family")
    simulate.add_argument("--kind", required=True,
                          choices=(ROTATED_AXIS, SINUSOID))
    simulate.add_argument("--parameters",
                          help="comma list of sweep values (default: full grid)")
    simulate.add_argument("--n", type=int, default=1000,
                          help="rows per training and test set")
    simulate.add_argument("--lattice-at", dest="lattice_at", type=float,
                          help="parameter for the probability lattice "
                               "(default: middle sweep point)")
    simulate.add_argument("--dump-data", dest="dump_data", action="store_true",
                          help="also write the lattice point's training CSV")
    _add_sampler_flags(simulate)
    _add_common_flags(simulate)
    simulate.set_defaults(func=cmd_simulate)

    inclusion = commands.add_parser("inclusion",
                                    help="covariate inclusion percentages")
    inclusion.add_argument("--model", required=True)
    inclusion.add_argument("--aggregate", action="store_true",
                           help="merge one-hot indicators into their source column")
    _add_common_flags(inclusion)
    inclusion.set_defaults(func=cmd_inclusion)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericError as exc:
        _fail(str(exc))
        return 3
    except (VortessError, OSError, json.JSONDecodeError) as exc:
        _fail(str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
