"""Experiment orchestration: the (dataset, split, model, loss) grid.

Within one iteration every model is fitted on the same training sample
and scored on the same test set, so per-iteration losses are paired and
probability-of-optimality can be estimated by win counting. Sub-seeds
are derived from (master seed, dataset name, plan label, iteration,
role), which makes the result table a pure function of the
configuration regardless of worker scheduling.
"""

import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import __version__, kernels
from .data import Dataset, parse_dataset
from .errors import AggregationError, ConfigError, HarnessError
from .losses import evaluate_all, loss_names
from .models import ModelSpec, default_model_specs, spec_from_json, spec_to_json
from .rng import SEED_MASK, derive_seed
from .splits import SplitPlan, draw_splits

DEFAULT_GAMMAS = (0.9, 0.95, 0.99)
DEFAULT_ITERATIONS = 400


class LossRecord(NamedTuple):
    dataset: str
    model: str
    split: str
    loss: str
    iteration: int
    value: float


@dataclass
class ExperimentConfig:
    datasets: list
    models: list = field(default_factory=default_model_specs)
    split_plans: list = field(default_factory=lambda: [SplitPlan.bootstrap()])
    gammas: tuple = DEFAULT_GAMMAS
    iterations: int = DEFAULT_ITERATIONS
    master_seed: int = 0
    parallelism: int = 1

    def __post_init__(self):
        if not self.datasets:
            raise ConfigError("config needs at least one dataset")
        if not self.models:
            raise ConfigError("config needs at least one model")
        if not self.split_plans:
            raise ConfigError("config needs at least one split plan")
        keys = [spec.key for spec in self.models]
        if len(set(keys)) != len(keys):
            raise ConfigError(f"duplicate model kinds in config: {keys}")
        if not self.gammas:
            raise ConfigError("config needs at least one gamma")
        for g in self.gammas:
            if not 0.0 < g < 1.0:
                raise ConfigError(f"gamma must be in (0, 1), got {g}")
        if self.iterations < 2:
            raise ConfigError("iterations must be >= 2 (jackknife needs 2 points)")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")
        if not 0 <= self.master_seed <= SEED_MASK:
            raise ConfigError("master_seed must be a 64-bit unsigned integer")

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentConfig":
        if not isinstance(obj, dict):
            raise ConfigError("config must be a JSON object")
        known = {"datasets", "models", "splits", "gammas", "iterations",
                 "master_seed", "parallelism"}
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            models = [spec_from_json(m) for m in obj.get("models", [])] \
                or default_model_specs()
            plans = [SplitPlan.from_json(s) for s in obj.get("splits", [])] \
                or [SplitPlan.bootstrap()]
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return cls(
            datasets=list(obj.get("datasets", [])),
            models=models,
            split_plans=plans,
            gammas=tuple(obj.get("gammas", DEFAULT_GAMMAS)),
            iterations=int(obj.get("iterations", DEFAULT_ITERATIONS)),
            master_seed=int(obj.get("master_seed", 0)),
            parallelism=int(obj.get("parallelism", 1)),
        )

    def to_json(self) -> dict:
        return {
            "datasets": [str(p) for p in self.datasets],
            "models": [spec_to_json(m) for m in self.models],
            "splits": [p.to_json() for p in self.split_plans],
            "gammas": list(self.gammas),
            "iterations": self.iterations,
            "master_seed": self.master_seed,
            "parallelism": self.parallelism,
        }


def run_cell(dataset: Dataset, model_specs, plan: SplitPlan, gammas,
             iterations: int, master_seed: int) -> list:
    """All per-iteration loss records for one (dataset, plan) cell.

    For KFold plans the iteration axis is the fold index and the k folds
    come from one seeded shuffle; the bootstrap kinds draw `iterations`
    independent splits.
    """
    cell_seed = derive_seed(master_seed, dataset.name, plan.label())
    try:
        splits = draw_splits(plan, dataset, iterations, cell_seed)
    except ValueError as exc:
        raise HarnessError(
            f"plan {plan.label()} invalid on dataset {dataset.name}: {exc}"
        ) from exc
    names = loss_names(gammas)
    records = []
    for a, split in enumerate(splits):
        x_train = dataset.bits[split.train]
        y_train = dataset.activities[split.train]
        x_test = dataset.bits[split.test]
        y_test = dataset.activities[split.test]
        for spec in model_specs:
            try:
                model = spec.build(seed=derive_seed(cell_seed, "model", a, spec.key))
                model.fit(x_train, y_train)
                predictions = model.predict(x_test)
                losses = evaluate_all(predictions, y_test, gammas)
            except Exception as exc:
                raise HarnessError(
                    f"model {spec.key!r} failed on dataset {dataset.name!r}, "
                    f"plan {plan.label()}, iteration {a}: {exc}"
                ) from exc
            for name in names:
                records.append(LossRecord(
                    dataset.name, spec.key, plan.label(), name, a, losses[name]))
    return records


def jackknife_se(values) -> float:
    """Delete-one jackknife standard error of the mean.

    For the mean statistic this equals s/sqrt(A) with s the ddof-1
    sample standard deviation; the jackknife form is implemented and the
    closed form is used as a test oracle.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 2:
        raise ValueError("jackknife needs at least 2 values")
    a = arr.size
    loo_means = (arr.sum() - arr) / (a - 1)
    center = loo_means.mean()
    return float(np.sqrt((a - 1) / a * np.sum((loo_means - center) ** 2)))


def probability_optimal(paired_losses) -> np.ndarray:
    """Per-model probability of attaining the lowest paired loss.

    paired_losses is (iterations, models); exact ties share the win
    equally. The result sums to 1.
    """
    arr = np.asarray(paired_losses, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"need a nonempty 2-d loss matrix, got shape {arr.shape}")
    wins = arr == arr.min(axis=1, keepdims=True)
    return (wins / wins.sum(axis=1, keepdims=True)).mean(axis=0)


def overall_scores(prob_by_cell: dict, dataset_names, plan_labels, losses,
                   model_keys) -> dict:
    """Sum probability-of-optimality over datasets per (plan, loss).

    prob_by_cell maps (dataset, plan, loss) -> {model: probability}.
    Scores per (plan, loss) sum to the dataset count.
    """
    missing = [
        (d, p, l)
        for p in plan_labels
        for l in losses
        for d in dataset_names
        if (d, p, l) not in prob_by_cell
    ]
    if missing:
        raise AggregationError(f"missing cells: {missing}")
    out = {}
    for p in plan_labels:
        for l in losses:
            scores = {m: 0.0 for m in model_keys}
            for d in dataset_names:
                for m in model_keys:
                    scores[m] += prob_by_cell[(d, p, l)][m]
            out[(p, l)] = scores
    return out


def aggregate(records, dataset_names, plan_labels, model_keys, losses) -> dict:
    """Reduce per-iteration records to means, SEs, optimality and scores."""
    by_cell = {}
    for r in records:
        by_cell.setdefault((r.dataset, r.split, r.loss), {}) \
            .setdefault(r.model, {})[r.iteration] = r.value

    cells = []
    prob_by_cell = {}
    for d in dataset_names:
        for p in plan_labels:
            for l in losses:
                per_model = by_cell.get((d, p, l))
                if per_model is None or set(per_model) != set(model_keys):
                    raise AggregationError(
                        f"cell ({d}, {p}, {l}) is missing model records")
                n_iter = len(per_model[model_keys[0]])
                matrix = np.empty((n_iter, len(model_keys)))
                stats = {}
                for col, m in enumerate(model_keys):
                    vals = per_model[m]
                    if sorted(vals) != list(range(n_iter)):
                        raise AggregationError(
                            f"cell ({d}, {p}, {l}) model {m} has uneven iterations")
                    series = np.array([vals[a] for a in range(n_iter)])
                    matrix[:, col] = series
                    stats[m] = {
                        "mean": float(series.mean()),
                        "se": jackknife_se(series),
                    }
                probs = probability_optimal(matrix)
                prob_map = {m: float(probs[col]) for col, m in enumerate(model_keys)}
                prob_by_cell[(d, p, l)] = prob_map
                cells.append({
                    "dataset": d,
                    "split": p,
                    "loss": l,
                    "iterations": n_iter,
                    "models": stats,
                    "probability_optimal": prob_map,
                })

    scores = overall_scores(prob_by_cell, dataset_names, plan_labels, losses,
                            model_keys)
    return {
        "cells": cells,
        "overall_scores": [
            {"split": p, "loss": l, "scores": scores[(p, l)]}
            for p in plan_labels
            for l in losses
        ],
    }


def _cell_task(args):
    dataset, model_specs, plan, gammas, iterations, master_seed = args
    return run_cell(dataset, model_specs, plan, gammas, iterations, master_seed)


@dataclass
class ResultTable:
    records: list
    aggregates: dict


def run_experiment(config: ExperimentConfig, log=None) -> ResultTable:
    """Execute the full grid and aggregate; deterministic per config."""
    datasets = []
    for path in config.datasets:
        datasets.append(parse_dataset(path))
    names = [d.name for d in datasets]
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate dataset names: {names}")
    for plan in config.split_plans:
        for d in datasets:
            try:
                plan.validate_for(d.n)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc

    tasks = [
        (d, config.models, plan, config.gammas, config.iterations,
         config.master_seed)
        for d in datasets
        for plan in config.split_plans
    ]
    started = time.time()
    if config.parallelism > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            per_task = list(pool.map(_cell_task, tasks))
    else:
        per_task = []
        for t in tasks:
            per_task.append(_cell_task(t))
            if log:
                print(f"  cell {t[0].name}/{t[2].label()} done", file=log)
    records = [r for chunk in per_task for r in chunk]

    model_keys = [m.key for m in config.models]
    plan_labels = [p.label() for p in config.split_plans]
    losses = loss_names(config.gammas)
    aggregates = aggregate(records, names, plan_labels, model_keys, losses)
    aggregates["metadata"] = {
        "config": config.to_json(),
        "datasets": [
            {"name": d.name, "target_id": d.target_id, "n": d.n,
             "path": str(p)}
            for d, p in zip(datasets, config.datasets)
        ],
        "loss_names": losses,
        "model_keys": model_keys,
        "split_labels": plan_labels,
        "kernel_backend": kernels.BACKEND,
        "float_precision": "float64 throughout, including network weights",
        "versions": {
            "activesplit": __version__,
            "numpy": np.__version__,
            "python": sys.version.split()[0],
        },
        "rng": "PCG64 with SHA-256 derived sub-seeds",
        "created_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "wall_seconds": round(time.time() - started, 3),
    }
    return ResultTable(records, aggregates)


RECORDS_HEADER = "dataset,model,split,loss,iteration,value"


def write_records_csv(records, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(RECORDS_HEADER + "\n")
        for r in records:
            fh.write(f"{r.dataset},{r.model},{r.split},{r.loss},"
                     f"{r.iteration},{r.value!r}\n")


def read_records_csv(path) -> list:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != RECORDS_HEADER:
            raise ValueError(f"unexpected records header {header!r}")
        for line in fh:
            ds, model, split, loss, iteration, value = line.rstrip("\n").split(",")
            records.append(LossRecord(ds, model, split, loss,
                                      int(iteration), float(value)))
    return records


def write_aggregates(aggregates: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(aggregates, fh, indent=2)
        fh.write("\n")


def read_aggregates(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
