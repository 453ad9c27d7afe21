"""Command-line front end.

Subcommands: validate-data, run, report, plot, plus dump-split for
auditing any single train/test split as JSON. Exit codes: 0 success,
1 configuration error, 2 data/results error, 3 model or runtime error.
The master seed resolves as: --seed flag, then the config file, then
the ACTIVESPLIT_SEED environment variable, then 0.
"""

import argparse
import json
import os
import sys

from . import __version__
from .data import dataset_stats, parse_dataset
from .errors import ConfigError, HarnessError, ParseError, ValidationError
from .harness import (
    ExperimentConfig,
    read_aggregates,
    run_experiment,
    write_aggregates,
    write_records_csv,
)
from .report import render_report
from .splits import bootstrap_split, kfold_splits, quantile_bootstrap_split
from .svgplot import write_plots

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3


def _fail(code, message):
    print(f"error: {message}", file=sys.stderr)
    return code


def build_parser():
    parser = argparse.ArgumentParser(
        prog="activesplit",
        description="activity-quantile bootstrap model validation harness")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-data", help="check dataset files and print stats")
    p.add_argument("paths", nargs="+", help="dataset CSV files")

    p = sub.add_parser("run", help="run the experiment grid from a config")
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--iterations", type=int, help="override iteration count")
    p.add_argument("--seed", type=int, help="override master seed")
    p.add_argument("--parallelism", type=int, help="override worker count")
    p.add_argument("--datasets", help="comma-separated dataset subset (file stems)")
    p.add_argument("--force", action="store_true",
                   help="overwrite an existing completed run")

    p = sub.add_parser("report", help="print tables from a results directory")
    p.add_argument("results_dir")

    p = sub.add_parser("plot", help="render SVG charts from a results directory")
    p.add_argument("results_dir")
    p.add_argument("--out", help="plot output directory (default: <results>/plots)")

    p = sub.add_parser("dump-split", help="print one train/test split as JSON")
    p.add_argument("--dataset", required=True, help="dataset CSV file")
    p.add_argument("--kind", required=True,
                   choices=["kfold", "bootstrap", "quantile_bootstrap"])
    p.add_argument("--k", type=int, default=5, help="fold count (kfold)")
    p.add_argument("--fold", type=int, default=0, help="fold index to dump (kfold)")
    p.add_argument("--q", type=float, default=0.5,
                   help="training fraction (quantile_bootstrap)")
    p.add_argument("--seed", type=int, default=0)
    return parser


def cmd_validate_data(args):
    header = (f"{'name':<16}{'n':>6}{'act_min':>9}{'act_med':>9}{'act_max':>9}"
              f"{'density':>9}{'const_cols':>11}")
    print(header)
    for path in args.paths:
        try:
            stats = dataset_stats(parse_dataset(path))
        except (OSError, ParseError, ValidationError) as exc:
            return _fail(EXIT_DATA, str(exc))
        print(f"{stats['name']:<16}{stats['n']:>6}"
              f"{stats['activity_min']:>9.3f}{stats['activity_median']:>9.3f}"
              f"{stats['activity_max']:>9.3f}{stats['bit_density_mean']:>9.3f}"
              f"{stats['constant_columns']:>11}")
    return EXIT_OK


def _resolve_seed(args, raw_config):
    if args.seed is not None:
        return args.seed
    if "master_seed" in raw_config:
        return int(raw_config["master_seed"])
    env = os.environ.get("ACTIVESPLIT_SEED")
    if env is not None:
        return int(env)
    return 0


def cmd_run(args):
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        return _fail(EXIT_CONFIG, f"cannot read config: {exc}")
    except json.JSONDecodeError as exc:
        return _fail(EXIT_CONFIG, f"config is not valid JSON: {exc}")

    try:
        config = ExperimentConfig.from_json(raw)
        config.master_seed = _resolve_seed(args, raw)
        if args.iterations is not None:
            config.iterations = args.iterations
        if args.parallelism is not None:
            config.parallelism = args.parallelism
        if args.datasets:
            wanted = {s.strip() for s in args.datasets.split(",")}
            kept = [p for p in config.datasets
                    if os.path.splitext(os.path.basename(p))[0] in wanted]
            if not kept:
                raise ConfigError(f"no config dataset matches subset {sorted(wanted)}")
            config.datasets = kept
        config.__post_init__()  # re-validate after overrides
    except (ConfigError, ValueError) as exc:
        return _fail(EXIT_CONFIG, str(exc))

    aggregates_path = os.path.join(args.out, "aggregates.json")
    if os.path.exists(aggregates_path) and not args.force:
        return _fail(EXIT_CONFIG,
                     f"{aggregates_path} exists; pass --force to overwrite")
    for path in config.datasets:
        if not os.path.exists(path):
            return _fail(EXIT_DATA, f"dataset file not found: {path}")

    try:
        result = run_experiment(config)
    except (ParseError, ValidationError) as exc:
        return _fail(EXIT_DATA, str(exc))
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, str(exc))
    except HarnessError as exc:
        return _fail(EXIT_RUNTIME, str(exc))

    os.makedirs(args.out, exist_ok=True)
    records_path = os.path.join(args.out, "records.csv")
    write_records_csv(result.records, records_path)
    write_aggregates(result.aggregates, aggregates_path)
    print(f"wrote {records_path}")
    print(f"wrote {aggregates_path}")
    return EXIT_OK


def _load_aggregates(results_dir):
    path = os.path.join(results_dir, "aggregates.json")
    try:
        return read_aggregates(path)
    except OSError as exc:
        raise RuntimeError(f"cannot read results: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise RuntimeError(f"corrupt aggregates file {path}: {exc}") from exc


def cmd_report(args):
    try:
        aggregates = _load_aggregates(args.results_dir)
        print(render_report(aggregates))
    except (RuntimeError, KeyError) as exc:
        return _fail(EXIT_DATA, str(exc))
    return EXIT_OK


def cmd_plot(args):
    outdir = args.out or os.path.join(args.results_dir, "plots")
    try:
        aggregates = _load_aggregates(args.results_dir)
        paths = write_plots(aggregates, outdir)
    except (RuntimeError, KeyError) as exc:
        return _fail(EXIT_DATA, str(exc))
    for p in paths:
        print(p)
    return EXIT_OK


def cmd_dump_split(args):
    try:
        dataset = parse_dataset(args.dataset)
    except (OSError, ParseError, ValidationError) as exc:
        return _fail(EXIT_DATA, str(exc))
    try:
        if args.kind == "kfold":
            split = kfold_splits(dataset.n, args.k, args.seed)[args.fold]
        elif args.kind == "bootstrap":
            split = bootstrap_split(dataset.n, args.seed)
        else:
            split = quantile_bootstrap_split(dataset, args.q, args.seed)
    except (ValueError, IndexError) as exc:
        return _fail(EXIT_CONFIG, str(exc))
    print(json.dumps(split.to_json()))
    return EXIT_OK


COMMANDS = {
    "validate-data": cmd_validate_data,
    "run": cmd_run,
    "report": cmd_report,
    "plot": cmd_plot,
    "dump-split": cmd_dump_split,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
