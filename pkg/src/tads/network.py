"""ReLU networks as step sequences: JSON ingestion and concrete semantics.

A network is an ordered list of steps, each either a full affine map or a
partial ReLU clamping a single component. Full ReLU layers in input files are
expanded to the per-component sequence relu(k,1); ...; relu(k,k), which gives
the step evaluator exactly one branch decision per step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

import numpy as np

from .affine import AffineFunction, DimensionError

__all__ = [
    "AffineStep",
    "PartialReluStep",
    "Step",
    "Network",
    "ParseError",
    "parse_network",
    "network_from_dict",
    "net_eval",
    "net_eval_batch",
    "ConcreteConfig",
    "sos_step",
    "sos_run",
    "LABEL_AFFINE",
    "LABEL_KEEP",
    "LABEL_ZERO",
]

# rule labels recorded by the step evaluator
LABEL_AFFINE = "true"  # an affine step fired
LABEL_KEEP = "1"  # ReLU with component already nonnegative
LABEL_ZERO = "0"  # ReLU clamped a negative component


@dataclass(frozen=True)
class AffineStep:
    fn: AffineFunction

    @property
    def in_dim(self) -> int:
        return self.fn.in_dim

    @property
    def out_dim(self) -> int:
        return self.fn.out_dim


@dataclass(frozen=True)
class PartialReluStep:
    """Clamp component `index` (1-based) of a k-vector at zero."""

    dim: int
    index: int

    def __post_init__(self):
        if not 1 <= self.index <= self.dim:
            raise ValueError(
                f"partial ReLU index must satisfy 1 <= i <= {self.dim}, got {self.index}"
            )

    @property
    def in_dim(self) -> int:
        return self.dim

    @property
    def out_dim(self) -> int:
        return self.dim


Step = Union[AffineStep, PartialReluStep]


@dataclass(frozen=True)
class Network:
    steps: tuple[Step, ...]
    input_dim: int
    output_dim: int
    name: str = "network"

    def __post_init__(self):
        cur = self.input_dim
        for i, step in enumerate(self.steps):
            if step.in_dim != cur:
                raise DimensionError(
                    f"step {i}: expects input dimension {step.in_dim}, "
                    f"previous step produces {cur}"
                )
            cur = step.out_dim
        if cur != self.output_dim:
            raise DimensionError(
                f"network declares output dimension {self.output_dim}, "
                f"steps produce {cur}"
            )


class ParseError(ValueError):
    """Malformed network JSON; the message names the offending layer."""


def network_from_dict(doc: dict) -> Network:
    if not isinstance(doc, dict):
        raise ParseError("network document must be a JSON object")
    try:
        input_dim = int(doc["input_dim"])
    except KeyError:
        raise ParseError("missing required field 'input_dim'") from None
    if input_dim < 1:
        raise ParseError(f"input_dim must be positive, got {input_dim}")
    name = str(doc.get("name", "network"))
    layers = doc.get("layers", [])
    if not isinstance(layers, list):
        raise ParseError("'layers' must be a list")

    steps: list[Step] = []
    cur = input_dim
    for li, layer in enumerate(layers):
        if not isinstance(layer, dict) or "type" not in layer:
            raise ParseError(f"layer {li}: expected an object with a 'type' field")
        kind = layer["type"]
        if kind == "affine":
            try:
                W = layer["W"]
                b = layer["b"]
            except KeyError as missing:
                raise ParseError(f"layer {li}: affine layer missing {missing}") from None
            if not isinstance(W, list) or not W or any(
                not isinstance(row, list) for row in W
            ):
                raise ParseError(f"layer {li}: W must be a non-empty list of rows")
            if not isinstance(b, list):
                raise ParseError(f"layer {li}: b must be a list")
            widths = {len(row) for row in W}
            if len(widths) != 1:
                raise ParseError(f"layer {li}: ragged W rows, lengths {sorted(widths)}")
            if widths.pop() != cur:
                raise ParseError(
                    f"layer {li}: W has {len(W[0])} columns, expected {cur}"
                )
            if len(b) != len(W):
                raise ParseError(
                    f"layer {li}: b has length {len(b)}, expected {len(W)} rows"
                )
            try:
                fn = AffineFunction(W, b)
            except (ValueError, TypeError) as exc:
                raise ParseError(f"layer {li}: {exc}") from None
            steps.append(AffineStep(fn))
            cur = fn.out_dim
        elif kind == "relu":
            # a full ReLU layer becomes k single-component clamps
            for i in range(1, cur + 1):
                steps.append(PartialReluStep(cur, i))
        else:
            raise ParseError(f"layer {li}: unknown layer type {kind!r}")
    return Network(tuple(steps), input_dim, cur, name)


def parse_network(text: str) -> Network:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return network_from_dict(doc)


def _apply_step(step: Step, x: np.ndarray) -> np.ndarray:
    if isinstance(step, AffineStep):
        return step.fn(x)
    if x[step.index - 1] < 0.0:
        y = x.copy()
        y[step.index - 1] = 0.0
        return y
    return x


def net_eval(net: Network, x) -> np.ndarray:
    """Left-to-right application of every step."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (net.input_dim,):
        raise DimensionError(
            f"network {net.name!r} expects input of length {net.input_dim}, "
            f"got {x.shape}"
        )
    for step in net.steps:
        x = _apply_step(step, x)
    return x


def net_eval_batch(net: Network, X: np.ndarray) -> np.ndarray:
    """Evaluate every row of X (shape (N, input_dim)) in one pass per step."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != net.input_dim:
        raise DimensionError(
            f"batch input must have shape (N, {net.input_dim}), got {X.shape}"
        )
    for step in net.steps:
        if isinstance(step, AffineStep):
            X = step.fn.batch(X)
        else:
            X = X.copy()
            col = step.index - 1
            X[:, col] = np.maximum(X[:, col], 0.0)
    return X


@dataclass(frozen=True)
class ConcreteConfig:
    """A point mid-run: the remaining steps and the current vector."""

    remaining: tuple[Step, ...]
    x: np.ndarray


def sos_step(cfg: ConcreteConfig) -> tuple[str, ConcreteConfig]:
    """Fire the single applicable rule; total on valid configurations.

    Affine heads apply their map (label "true"). A ReLU head keeps the vector
    when its component is >= 0 (label "1") and zeroes it otherwise (label "0");
    the tie at exactly zero takes the keep rule.
    """
    if not cfg.remaining:
        raise ValueError("no step remaining")
    head, rest = cfg.remaining[0], cfg.remaining[1:]
    if isinstance(head, AffineStep):
        return LABEL_AFFINE, ConcreteConfig(rest, head.fn(cfg.x))
    if cfg.x[head.index - 1] >= 0.0:
        return LABEL_KEEP, ConcreteConfig(rest, cfg.x)
    y = cfg.x.copy()
    y[head.index - 1] = 0.0
    return LABEL_ZERO, ConcreteConfig(rest, y)


def sos_run(net: Network, x) -> tuple[np.ndarray, tuple[str, ...]]:
    """Run the step rules to completion; returns the result and the label word."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (net.input_dim,):
        raise DimensionError(
            f"network {net.name!r} expects input of length {net.input_dim}, "
            f"got {x.shape}"
        )
    word = []
    for step in net.steps:
        if isinstance(step, AffineStep):
            word.append(LABEL_AFFINE)
            x = step.fn(x)
        elif x[step.index - 1] >= 0.0:
            word.append(LABEL_KEEP)
        else:
            word.append(LABEL_ZERO)
            x = x.copy()
            x[step.index - 1] = 0.0
    return x, tuple(word)
