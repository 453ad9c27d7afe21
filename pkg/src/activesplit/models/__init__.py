"""Declarative model specs and the fit/predict regressors behind them.

Spec JSON uses one key per model kind: "ridge", "svr", "rf", "mlp",
e.g. {"ridge": {"alpha": 0.1}}. Hyperparameter defaults follow the
reported comparison setup; none are tuned.
"""

from dataclasses import dataclass, fields

from .forest import ForestRegressor
from .mlp import MlpRegressor
from .ridge import RidgeRegressor
from .svr import LinearSvr


@dataclass(frozen=True)
class RidgeSpec:
    key = "ridge"
    alpha: float = 0.1

    def build(self, seed: int | None = None) -> RidgeRegressor:
        return RidgeRegressor(alpha=self.alpha)


@dataclass(frozen=True)
class SvrSpec:
    key = "svr"
    c: float = 1.0
    epsilon: float = 0.1
    tol: float = 1e-4
    max_iter: int = 10000

    def build(self, seed: int | None = None) -> LinearSvr:
        return LinearSvr(c=self.c, epsilon=self.epsilon,
                         tol=self.tol, max_iter=self.max_iter)


@dataclass(frozen=True)
class ForestSpec:
    key = "rf"
    n_trees: int = 100
    max_depth: int = 10
    min_samples_split: int = 2
    seed: int = 0

    def build(self, seed: int | None = None) -> ForestRegressor:
        return ForestRegressor(
            n_trees=self.n_trees,
            max_depth=self.max_depth,
            min_samples_split=self.min_samples_split,
            seed=self.seed if seed is None else seed,
        )


@dataclass(frozen=True)
class MlpSpec:
    key = "mlp"
    hidden_sizes: tuple = (128, 16)
    activation: str = "relu"
    standardize: bool = True
    learning_rate: float = 1e-3
    epochs: int = 100
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.activation != "relu":
            raise ValueError(f"only relu activation is supported, got {self.activation!r}")
        object.__setattr__(self, "hidden_sizes", tuple(self.hidden_sizes))

    def build(self, seed: int | None = None) -> MlpRegressor:
        return MlpRegressor(
            hidden_sizes=self.hidden_sizes,
            learning_rate=self.learning_rate,
            epochs=self.epochs,
            batch_size=self.batch_size,
            seed=self.seed if seed is None else seed,
            standardize=self.standardize,
        )


SPEC_CLASSES = {cls.key: cls for cls in (RidgeSpec, SvrSpec, ForestSpec, MlpSpec)}
ModelSpec = RidgeSpec | SvrSpec | ForestSpec | MlpSpec


def spec_to_json(spec: ModelSpec) -> dict:
    params = {}
    for f in fields(spec):
        value = getattr(spec, f.name)
        params[f.name] = list(value) if isinstance(value, tuple) else value
    return {spec.key: params}


def spec_from_json(obj: dict) -> ModelSpec:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError(f"model spec must be a single-key object, got {obj!r}")
    key, params = next(iter(obj.items()))
    if key not in SPEC_CLASSES:
        raise ValueError(f"unknown model kind {key!r}; expected one of "
                         f"{sorted(SPEC_CLASSES)}")
    cls = SPEC_CLASSES[key]
    known = {f.name for f in fields(cls)}
    params = dict(params or {})
    unknown = set(params) - known
    if unknown:
        raise ValueError(f"unknown {key} parameters: {sorted(unknown)}")
    return cls(**params)


def default_model_specs() -> list:
    return [RidgeSpec(), SvrSpec(), ForestSpec(), MlpSpec()]
