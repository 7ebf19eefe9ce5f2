"""Train small dense ReLU networks on the continuous XOR regression targets.

The objective pins the four corners of the unit square: f(0,0) = f(1,1) = 0
and f(1,0) = f(0,1) = 1; everything in between is left to the model. Training
is full-batch Adam on the mean squared corner error, in float64 numpy, fully
determined by the seed. A run only counts when every corner lands within 0.1
of its target; seeds whose run collapses (dead ReLUs) are retried with seeds
derived deterministically from the requested one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CORNERS = np.array([[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
TARGETS = np.array([[0.0], [0.0], [1.0], [1.0]])
CORNER_BAR = 0.1


class TrainingFailure(RuntimeError):
    """No retry produced a network meeting the corner bar; carries the seeds tried."""

    def __init__(self, spec, seeds):
        super().__init__(
            f"failed to meet the corner bar (<{CORNER_BAR}) after "
            f"{len(seeds)} attempts; seeds tried: {seeds}"
        )
        self.seeds = seeds


@dataclass(frozen=True)
class FixtureSpec:
    """Architecture and optimization settings for one trained fixture."""

    seed: int
    widths: tuple[int, ...] = (2, 8, 8, 1)
    epochs: int = 4000
    learning_rate: float = 0.02
    retries: int = 10

    def __post_init__(self):
        if self.widths[0] != 2 or self.widths[-1] != 1:
            raise ValueError(f"widths must run 2 -> ... -> 1, got {self.widths}")


def _init(rng: np.random.Generator, widths):
    params = []
    for fan_in, fan_out in zip(widths, widths[1:]):
        W = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_out, fan_in))
        params.append([W, np.zeros(fan_out)])
    return params


def forward(params, X: np.ndarray) -> np.ndarray:
    a = X
    last = len(params) - 1
    for i, (W, b) in enumerate(params):
        a = a @ W.T + b
        if i != last:
            a = np.maximum(a, 0.0)
    return a


def _grads(params, X, y):
    acts = [X]
    pre = []
    a = X
    last = len(params) - 1
    for i, (W, b) in enumerate(params):
        z = a @ W.T + b
        pre.append(z)
        a = np.maximum(z, 0.0) if i != last else z
        acts.append(a)
    n = X.shape[0]
    delta = 2.0 * (acts[-1] - y) / n
    grads = [None] * len(params)
    for i in range(last, -1, -1):
        if i != last:
            delta = delta * (pre[i] > 0.0)
        grads[i] = (delta.T @ acts[i], delta.sum(axis=0))
        if i > 0:
            delta = delta @ params[i][0]
    return grads


def _train_once(seed: int, spec: FixtureSpec):
    rng = np.random.default_rng(seed)
    params = _init(rng, spec.widths)
    m = [(np.zeros_like(W), np.zeros_like(b)) for W, b in params]
    v = [(np.zeros_like(W), np.zeros_like(b)) for W, b in params]
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    lr = spec.learning_rate
    for step in range(1, spec.epochs + 1):
        grads = _grads(params, CORNERS, TARGETS)
        for i, (gW, gb) in enumerate(grads):
            mW = beta1 * m[i][0] + (1 - beta1) * gW
            mb = beta1 * m[i][1] + (1 - beta1) * gb
            vW = beta2 * v[i][0] + (1 - beta2) * gW * gW
            vb = beta2 * v[i][1] + (1 - beta2) * gb * gb
            m[i] = (mW, mb)
            v[i] = (vW, vb)
            cm = 1 - beta1**step
            cv = 1 - beta2**step
            params[i][0] = params[i][0] - lr * (mW / cm) / (np.sqrt(vW / cv) + eps)
            params[i][1] = params[i][1] - lr * (mb / cm) / (np.sqrt(vb / cv) + eps)
    return params


def corner_errors(f) -> np.ndarray:
    """|f(corner) - target| for the four corners; f maps (N,2) -> (N,1)."""
    return np.abs(f(CORNERS) - TARGETS).ravel()


def train_xor(spec: FixtureSpec):
    """Train until the corner bar holds; returns (params, seed_used).

    Raises TrainingFailure with the list of seeds tried when the retry cap is
    exhausted.
    """
    tried = []
    for attempt in range(spec.retries + 1):
        seed = spec.seed + 1_000_003 * attempt
        tried.append(seed)
        params = _train_once(seed, spec)
        if corner_errors(lambda X: forward(params, X)).max() < CORNER_BAR:
            return params, seed
    raise TrainingFailure(spec, tried)
