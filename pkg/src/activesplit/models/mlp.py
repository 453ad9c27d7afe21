"""Small dense relu network trained with mini-batch Adam.

Architecture 128 -> 128(relu) -> 16(relu) -> 1(linear) on z-scored
inputs, squared-error objective, Glorot-uniform init. The optimization
budget (epochs=100, batch_size=32, lr=1e-3) is fixed by configuration
and recorded in the fit metadata. All arithmetic is float64.
"""

import numpy as np

from ..errors import TrainingError
from ..rng import derive_seed, make_rng
from .base import check_fit_inputs, check_predict_inputs

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


def init_params(sizes, rng):
    """Glorot-uniform weights, zero biases, for consecutive layer sizes."""
    params = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        w = rng.uniform(-limit, limit, size=(fan_in, fan_out))
        params.append((w, np.zeros(fan_out)))
    return params


def forward(params, X):
    """Network output for standardized inputs; last layer is linear."""
    h = X
    for w, b in params[:-1]:
        h = np.maximum(h @ w + b, 0.0)
    w, b = params[-1]
    return (h @ w + b)[:, 0]


def loss_value(params, X, y):
    """Mean squared error of the network on one batch."""
    err = forward(params, X) - y
    return float(np.mean(err * err))


def loss_grads(params, X, y):
    """Backpropagated gradients of :func:`loss_value` w.r.t. every parameter."""
    batch = X.shape[0]
    acts = [X]
    pre = []
    h = X
    for w, b in params[:-1]:
        z = h @ w + b
        pre.append(z)
        h = np.maximum(z, 0.0)
        acts.append(h)
    w, b = params[-1]
    out = (h @ w + b)[:, 0]

    grads = [None] * len(params)
    delta = (2.0 / batch) * (out - y)[:, None]
    grads[-1] = (acts[-1].T @ delta, delta.sum(axis=0))
    back = delta @ w.T
    for layer in range(len(params) - 2, -1, -1):
        back = back * (pre[layer] > 0.0)
        grads[layer] = (acts[layer].T @ back, back.sum(axis=0))
        if layer:
            back = back @ params[layer][0].T
    return grads


class MlpRegressor:
    def __init__(self, hidden_sizes=(128, 16), learning_rate: float = 1e-3,
                 epochs: int = 100, batch_size: int = 32, seed: int = 0,
                 standardize: bool = True):
        if not hidden_sizes or any(h < 1 for h in hidden_sizes):
            raise ValueError(f"bad hidden sizes {hidden_sizes!r}")
        if not learning_rate > 0:
            raise ValueError("learning_rate must be > 0")
        if epochs < 1 or batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")
        self.hidden_sizes = tuple(int(h) for h in hidden_sizes)
        self.learning_rate = float(learning_rate)
        self.epochs = int(epochs)
        self.batch_size = int(batch_size)
        self.seed = int(seed)
        self.standardize = bool(standardize)
        self.params_ = None
        self.meta = {}

    def fit(self, X, y):
        X, y = check_fit_inputs(X, y)
        Xf = X.astype(np.float64)
        if self.standardize:
            self.x_mean_ = Xf.mean(axis=0)
            scale = Xf.std(axis=0)
            scale[scale == 0.0] = 1.0  # constant columns pass through unscaled
            self.x_scale_ = scale
        else:
            self.x_mean_ = np.zeros(Xf.shape[1])
            self.x_scale_ = np.ones(Xf.shape[1])
        Xs = (Xf - self.x_mean_) / self.x_scale_

        rng = make_rng(derive_seed(self.seed, "mlp"))
        sizes = (Xf.shape[1],) + self.hidden_sizes + (1,)
        params = init_params(sizes, rng)
        m_state = [(np.zeros_like(w), np.zeros_like(b)) for w, b in params]
        v_state = [(np.zeros_like(w), np.zeros_like(b)) for w, b in params]
        step = 0
        n = Xs.shape[0]

        for epoch in range(self.epochs):
            order = rng.permutation(n)
            for lo in range(0, n, self.batch_size):
                batch = order[lo : lo + self.batch_size]
                grads = loss_grads(params, Xs[batch], y[batch])
                step += 1
                corr1 = 1.0 - ADAM_BETA1**step
                corr2 = 1.0 - ADAM_BETA2**step
                for layer, (gw, gb) in enumerate(grads):
                    w, b = params[layer]
                    mw, mb = m_state[layer]
                    vw, vb = v_state[layer]
                    mw *= ADAM_BETA1
                    mw += (1.0 - ADAM_BETA1) * gw
                    mb *= ADAM_BETA1
                    mb += (1.0 - ADAM_BETA1) * gb
                    vw *= ADAM_BETA2
                    vw += (1.0 - ADAM_BETA2) * gw * gw
                    vb *= ADAM_BETA2
                    vb += (1.0 - ADAM_BETA2) * gb * gb
                    w -= self.learning_rate * (mw / corr1) / (
                        np.sqrt(vw / corr2) + ADAM_EPS)
                    b -= self.learning_rate * (mb / corr1) / (
                        np.sqrt(vb / corr2) + ADAM_EPS)
            if not all(np.all(np.isfinite(w)) and np.all(np.isfinite(b))
                       for w, b in params):
                raise TrainingError(f"non-finite network weights at epoch {epoch}")

        self.params_ = params
        self.meta = {
            "converged": True,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "weight_dtype": "float64",
            "steps": step,
        }
        return self

    def predict(self, X):
        if self.params_ is None:
            raise RuntimeError("model is not fitted")
        X = check_predict_inputs(X)
        Xs = (X.astype(np.float64) - self.x_mean_) / self.x_scale_
        return forward(self.params_, Xs)
