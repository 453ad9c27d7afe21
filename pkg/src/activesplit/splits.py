"""Train/test index generators: K-fold, bootstrap and quantile bootstrap.

All three are pure functions of their arguments including the seed.
Train sets are index multisets (bootstrap draws repeat), test sets are
ordered index sets; the two are always disjoint as sets.
"""

from dataclasses import dataclass

import numpy as np

from .data import Dataset, floor_scaled
from .rng import derive_seed, make_rng

KIND_KFOLD = "kfold"
KIND_BOOTSTRAP = "bootstrap"
KIND_QUANTILE = "quantile_bootstrap"

MIN_QUANTILE_SIDE = 5
MAX_OOB_ATTEMPTS = 100


@dataclass(frozen=True)
class TrainTestSplit:
    """Sorted train index multiset and sorted test index set."""

    train: np.ndarray
    test: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "train", np.asarray(self.train, dtype=np.int64))
        object.__setattr__(self, "test", np.asarray(self.test, dtype=np.int64))
        if self.train.size == 0 or self.test.size == 0:
            raise ValueError("train and test must both be nonempty")
        if np.intersect1d(self.train, self.test).size:
            raise ValueError("train and test overlap")

    def to_json(self) -> dict:
        return {"train": self.train.tolist(), "test": self.test.tolist()}


@dataclass(frozen=True)
class SplitPlan:
    """Declarative partitioning scheme.

    kind is one of "kfold" (k folds), "bootstrap" (out-of-bag) or
    "quantile_bootstrap" (train bootstrapped from the low-activity
    ⌊N*q⌋ slice, test = fixed high-activity remainder).
    """

    kind: str
    k: int = 0
    q: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind == KIND_KFOLD:
            if self.k < 2:
                raise ValueError(f"kfold needs k >= 2, got {self.k}")
        elif self.kind == KIND_QUANTILE:
            if not 0.0 < self.q < 1.0:
                raise ValueError(f"quantile_bootstrap needs q in (0,1), got {self.q}")
        elif self.kind != KIND_BOOTSTRAP:
            raise ValueError(f"unknown split kind {self.kind!r}")

    @classmethod
    def kfold(cls, k: int, seed: int = 0) -> "SplitPlan":
        return cls(KIND_KFOLD, k=k, seed=seed)

    @classmethod
    def bootstrap(cls, seed: int = 0) -> "SplitPlan":
        return cls(KIND_BOOTSTRAP, seed=seed)

    @classmethod
    def quantile_bootstrap(cls, q: float, seed: int = 0) -> "SplitPlan":
        return cls(KIND_QUANTILE, q=q, seed=seed)

    def label(self) -> str:
        if self.kind == KIND_KFOLD:
            return f"kfold{self.k}"
        if self.kind == KIND_BOOTSTRAP:
            return "bootstrap"
        return f"qboot{self.q:g}"

    def validate_for(self, n: int) -> None:
        """Check the plan is nondegenerate on a dataset of size n."""
        if self.kind == KIND_KFOLD and not 2 <= self.k <= n:
            raise ValueError(f"kfold k={self.k} out of range for n={n}")
        if self.kind == KIND_QUANTILE:
            n_q = floor_scaled(n, self.q)
            if n_q < MIN_QUANTILE_SIDE or n - n_q < MIN_QUANTILE_SIDE:
                raise ValueError(
                    f"quantile_bootstrap q={self.q} on n={n} leaves "
                    f"train={n_q}, test={n - n_q}; both sides need "
                    f">= {MIN_QUANTILE_SIDE}"
                )

    def to_json(self) -> dict:
        if self.kind == KIND_KFOLD:
            return {"kfold": {"k": self.k}}
        if self.kind == KIND_BOOTSTRAP:
            return {"bootstrap": {}}
        return {"quantile_bootstrap": {"q": self.q}}

    @classmethod
    def from_json(cls, obj: dict) -> "SplitPlan":
        if not isinstance(obj, dict) or len(obj) != 1:
            raise ValueError(f"split plan must be a single-key object, got {obj!r}")
        key, params = next(iter(obj.items()))
        params = dict(params or {})
        seed = int(params.pop("seed", 0))
        if key == "kfold":
            return cls.kfold(int(params.pop("k")), seed=seed)
        if key == "bootstrap":
            plan = cls.bootstrap(seed=seed)
        elif key == "quantile_bootstrap":
            plan = cls.quantile_bootstrap(float(params.pop("q")), seed=seed)
        else:
            raise ValueError(f"unknown split kind {key!r}")
        if params:
            raise ValueError(f"unknown {key} parameters: {sorted(params)}")
        return plan


def kfold_splits(n: int, k: int, seed: int) -> list[TrainTestSplit]:
    """Partition [0, n) into k folds of near-equal size (diff <= 1)."""
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    perm = make_rng(seed).permutation(n)
    base, extra = divmod(n, k)
    splits = []
    start = 0
    for fold in range(k):
        size = base + (1 if fold < extra else 0)
        test = np.sort(perm[start : start + size])
        mask = np.ones(n, dtype=bool)
        mask[test] = False
        splits.append(TrainTestSplit(np.flatnonzero(mask), test))
        start += size
    return splits


def bootstrap_split(n: int, seed: int) -> TrainTestSplit:
    """Uniform with-replacement sample of size n; test = out-of-bag indices.

    The out-of-bag set is empty with probability ~n^-n; in that case the
    draw is retried with an incremented sub-seed, up to 100 attempts.
    """
    if n < 10:
        raise ValueError(f"bootstrap needs n >= 10, got {n}")
    for attempt in range(MAX_OOB_ATTEMPTS):
        rng = make_rng(derive_seed(seed, "bootstrap", attempt))
        train = np.sort(rng.integers(0, n, size=n, dtype=np.int64))
        mask = np.ones(n, dtype=bool)
        mask[train] = False
        test = np.flatnonzero(mask)
        if test.size:
            return TrainTestSplit(train, test)
    raise RuntimeError(
        f"no out-of-bag indices after {MAX_OOB_ATTEMPTS} bootstrap attempts (n={n})"
    )


def quantile_train_size(n: int, q: float) -> int:
    """Number of training elements N_q = ⌊N*q⌋ for the quantile bootstrap."""
    return floor_scaled(n, q)


def quantile_bootstrap_split(dataset: Dataset, q: float, seed: int) -> TrainTestSplit:
    """Bootstrap the ⌊N*q⌋ least-active molecules; test the fixed remainder.

    Because the dataset is activity-sorted, every test activity is >=
    every train activity, and the test set is identical across seeds.
    """
    n = dataset.n
    plan = SplitPlan.quantile_bootstrap(q)
    plan.validate_for(n)
    n_q = quantile_train_size(n, q)
    rng = make_rng(derive_seed(seed, "quantile_bootstrap"))
    train = np.sort(rng.integers(0, n_q, size=n_q, dtype=np.int64))
    test = np.arange(n_q, n, dtype=np.int64)
    return TrainTestSplit(train, test)


def draw_splits(plan: SplitPlan, dataset: Dataset, iterations: int, seed: int):
    """Materialize the split sequence a harness cell iterates over.

    KFold yields its k folds (the "iteration" axis is the fold index);
    the bootstrap kinds yield `iterations` independent draws with
    per-iteration derived seeds.
    """
    plan.validate_for(dataset.n)
    if plan.kind == KIND_KFOLD:
        return kfold_splits(dataset.n, plan.k, derive_seed(seed, "folds"))
    out = []
    for a in range(iterations):
        sub = derive_seed(seed, "iteration", a)
        if plan.kind == KIND_BOOTSTRAP:
            out.append(bootstrap_split(dataset.n, sub))
        else:
            out.append(quantile_bootstrap_split(dataset, plan.q, sub))
    return out
