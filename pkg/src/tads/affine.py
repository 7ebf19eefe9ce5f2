"""Affine functions x -> Wx + b in canonical (W, b) form, and their algebra.

The pair (W, b) is a canonical representation: two affine functions are equal
as functions iff their matrices and offsets are equal entrywise, which is what
makes tolerance-based equality on the representation meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DimensionError",
    "AffineFunction",
    "identity",
    "constant",
    "defect_matrix",
    "compose",
    "add",
    "scale",
    "negate",
    "equal",
]


class DimensionError(ValueError):
    """Raised when shapes of operands do not line up."""


def _matrix(W) -> np.ndarray:
    a = np.array(W, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionError(f"weight matrix must be 2-D, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("weight matrix contains non-finite entries")
    a.setflags(write=False)
    return a


def _vector(b, length: int | None = None) -> np.ndarray:
    a = np.array(b, dtype=np.float64)
    if a.ndim != 1:
        raise DimensionError(f"offset must be 1-D, got shape {a.shape}")
    if length is not None and a.shape[0] != length:
        raise DimensionError(f"offset has length {a.shape[0]}, expected {length}")
    if not np.isfinite(a).all():
        raise ValueError("offset contains non-finite entries")
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class AffineFunction:
    """The affine map x -> Wx + b with W of shape (out_dim, in_dim)."""

    W: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "W", _matrix(self.W))
        object.__setattr__(self, "b", _vector(self.b, self.W.shape[0]))

    @property
    def in_dim(self) -> int:
        return self.W.shape[1]

    @property
    def out_dim(self) -> int:
        return self.W.shape[0]

    @property
    def type(self) -> tuple[int, int]:
        return (self.in_dim, self.out_dim)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.in_dim,):
            raise DimensionError(
                f"affine map of type {self.type} expects input of length "
                f"{self.in_dim}, got {x.shape}"
            )
        return self.W @ x + self.b

    def batch(self, X: np.ndarray) -> np.ndarray:
        """Evaluate at every row of X (shape (N, in_dim)) -> (N, out_dim)."""
        if X.ndim != 2 or X.shape[1] != self.in_dim:
            raise DimensionError(
                f"batch input must have shape (N, {self.in_dim}), got {X.shape}"
            )
        return X @ self.W.T + self.b

    def __repr__(self):
        return f"AffineFunction(type={self.type})"


def identity(n: int) -> AffineFunction:
    return AffineFunction(np.eye(n), np.zeros(n))


def constant(values, in_dim: int) -> AffineFunction:
    """The constant map of |values| outputs on R^in_dim."""
    b = np.atleast_1d(np.asarray(values, dtype=np.float64))
    return AffineFunction(np.zeros((b.shape[0], in_dim)), b)


def defect_matrix(k: int, i: int) -> AffineFunction:
    """Identity on R^k with diagonal entry (i, i) zeroed; i is 1-based.

    Applying it to x returns x with component i replaced by 0.
    """
    if not 1 <= i <= k:
        raise ValueError(f"component index must satisfy 1 <= i <= {k}, got {i}")
    W = np.eye(k)
    W[i - 1, i - 1] = 0.0
    return AffineFunction(W, np.zeros(k))


def compose(outer: AffineFunction, inner: AffineFunction) -> AffineFunction:
    """outer after inner: (W2 W1, W2 b1 + b2).

    Typing: composing (r, m) with (n, r) yields (n, m).
    """
    if inner.out_dim != outer.in_dim:
        raise DimensionError(
            "compose expects inner.out_dim == outer.in_dim "
            f"((r,m) after (n,r) -> (n,m)); got outer {outer.type}, inner {inner.type}"
        )
    return AffineFunction(outer.W @ inner.W, outer.W @ inner.b + outer.b)


def zero_output(f: AffineFunction, i: int) -> AffineFunction:
    """Compose defect_matrix(out_dim, i) with f: output row i forced to zero.

    Produces bit-identical results to compose(defect_matrix(f.out_dim, i), f)
    without the matrix product.
    """
    if not 1 <= i <= f.out_dim:
        raise ValueError(f"component index must satisfy 1 <= i <= {f.out_dim}, got {i}")
    W = f.W.copy()
    b = f.b.copy()
    W[i - 1, :] = 0.0
    b[i - 1] = 0.0
    return AffineFunction(W, b)


def _require_same_type(f: AffineFunction, g: AffineFunction, what: str):
    if f.type != g.type:
        raise DimensionError(f"{what} requires equal types, got {f.type} and {g.type}")


def add(f: AffineFunction, g: AffineFunction) -> AffineFunction:
    _require_same_type(f, g, "add")
    return AffineFunction(f.W + g.W, f.b + g.b)


def scale(s: float, f: AffineFunction) -> AffineFunction:
    return AffineFunction(s * f.W, s * f.b)


def negate(f: AffineFunction) -> AffineFunction:
    return scale(-1.0, f)


def sub(f: AffineFunction, g: AffineFunction) -> AffineFunction:
    _require_same_type(f, g, "sub")
    return AffineFunction(f.W - g.W, f.b - g.b)


def equal(f: AffineFunction, g: AffineFunction, atol: float = 1e-9) -> bool:
    """Entrywise equality of the canonical representations within atol."""
    _require_same_type(f, g, "equality")
    return bool(
        np.abs(f.W - g.W).max(initial=0.0) <= atol
        and np.abs(f.b - g.b).max(initial=0.0) <= atol
    )


def is_zero(f: AffineFunction, atol: float = 1e-9) -> bool:
    return bool(
        np.abs(f.W).max(initial=0.0) <= atol and np.abs(f.b).max(initial=0.0) <= atol
    )


def is_constant(f: AffineFunction, atol: float = 0.0) -> bool:
    return bool(np.abs(f.W).max(initial=0.0) <= atol)
