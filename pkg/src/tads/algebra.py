"""Pointwise operators lifted over decision structures, and composition.

Lifting distributes a leaf-level operation over two structures by grafting
the second under the leaves of the first, so each result path conjoins one
path of each operand; jointly unsatisfiable paths are pruned. Composition
additionally rewrites the second structure's predicates over the original
inputs by pre-composing them with the reached leaf map.

Equality lifting compares leaf representations (W, b) within atol. On a
lower-dimensional region two distinct representations can agree pointwise;
such regions are reported unequal (representation equality, documented
conservative choice).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from . import affine
from .affine import AffineFunction, DimensionError
from .feasibility import Halfspace, PathCondition, Sense, feasible_witness
from .network import AffineStep, Network, Step
from .structure import Leaf, Tads, _Builder, _extend

__all__ = [
    "tads_zip",
    "tads_add",
    "tads_sub",
    "tads_scale",
    "tads_eq",
    "tads_compose",
    "atomic_tads",
    "identity_tads",
    "constant_tads",
    "fold_network",
    "map_leaves",
]


def _bound_check(result: Tads, t1: Tads, t2: Tads, what: str):
    # size is O(|t1|*|t2|); violating it means the construction is broken
    if result.node_count > t1.node_count * t2.node_count:
        raise RuntimeError(
            f"{what} produced {result.node_count} nodes from "
            f"{t1.node_count} x {t2.node_count}"
        )


def tads_zip(
    op: Callable[[AffineFunction, AffineFunction], AffineFunction],
    t1: Tads,
    t2: Tads,
    prune_infeasible: bool = True,
    out_dim: int | None = None,
) -> Tads:
    """Structural recursion applying `op` to every jointly reachable leaf pair.

    Both operands must share the input space; `out_dim` defaults to t1's and
    must match whatever `op` produces.
    """
    if t1.in_dim != t2.in_dim:
        raise DimensionError(
            f"lifted operator requires equal input spaces, got {t1.type} and {t2.type}"
        )
    b = _Builder(t1.in_dim, t1.out_dim if out_dim is None else out_dim)

    def descend(t, i, pc, wit, at_leaf):
        node = t.nodes[i]
        if isinstance(node, Leaf):
            return at_leaf(node.fn, pc, wit)
        pred = node.pred
        if not pred.w.any():
            return descend(t, node.hi if pred.b >= 0.0 else node.lo, pc, wit, at_leaf)
        if prune_infeasible:
            hi_state = _extend(pc, pred, wit)
            lo_state = _extend(pc, pred.negate(), wit)
            if hi_state is None:
                return descend(t, node.lo, *lo_state, at_leaf)
            if lo_state is None:
                return descend(t, node.hi, *hi_state, at_leaf)
            hi = descend(t, node.hi, *hi_state, at_leaf)
            lo = descend(t, node.lo, *lo_state, at_leaf)
        else:
            hi = descend(t, node.hi, pc, wit, at_leaf)
            lo = descend(t, node.lo, pc, wit, at_leaf)
        return b.inner(pred, hi, lo)

    def into_t2(f1, pc, wit):
        return descend(t2, t2.root, pc, wit, lambda f2, _pc, _w: b.leaf(op(f1, f2)))

    pc0 = PathCondition.true(t1.in_dim)
    wit0 = feasible_witness(pc0) if prune_infeasible else None
    result = b.finish(descend(t1, t1.root, pc0, wit0, into_t2))
    _bound_check(result, t1, t2, "lifted operator")
    return result


def _require_same_type(t1: Tads, t2: Tads, what: str):
    if t1.type != t2.type:
        raise DimensionError(f"{what} requires equal types, got {t1.type} and {t2.type}")


def tads_add(t1: Tads, t2: Tads, prune_infeasible: bool = True) -> Tads:
    _require_same_type(t1, t2, "addition")
    return tads_zip(affine.add, t1, t2, prune_infeasible)


def tads_sub(t1: Tads, t2: Tads, prune_infeasible: bool = True) -> Tads:
    _require_same_type(t1, t2, "subtraction")
    return tads_zip(affine.sub, t1, t2, prune_infeasible)


def tads_scale(s: float, t: Tads) -> Tads:
    """Scale every leaf; single linear traversal, structure unchanged."""
    return map_leaves(t, lambda fn: affine.scale(s, fn))


def tads_eq(t1: Tads, t2: Tads, atol: float = 1e-9, prune_infeasible: bool = True) -> Tads:
    """Lifted equality: type (n, 1) with constant-1 leaves where the leaf
    representations agree within atol and constant-0 leaves elsewhere."""
    _require_same_type(t1, t2, "lifted equality")
    n = t1.in_dim

    def eq_leaf(f1: AffineFunction, f2: AffineFunction) -> AffineFunction:
        return affine.constant([1.0 if affine.equal(f1, f2, atol) else 0.0], n)

    return tads_zip(eq_leaf, t1, t2, prune_infeasible, out_dim=1)


def tads_compose(t1: Tads, t2: Tads, prune_infeasible: bool = True) -> Tads:
    """Run t1, then t2: the result maps x to t2(t1(x)).

    t2's predicates are rewritten over the original inputs: a test w.y + c on
    t2's input y becomes (w.Wf).x + (w.bf + c) where y = Wf x + bf is the leaf
    map of t1 on the current region. Requires t1.out_dim == t2.in_dim
    (typing: (n,r) then (r,m) -> (n,m)).
    """
    if t1.out_dim != t2.in_dim:
        raise DimensionError(
            "composition requires t1.out_dim == t2.in_dim "
            f"((n,r) then (r,m) -> (n,m)); got {t1.type} then {t2.type}"
        )
    b = _Builder(t1.in_dim, t2.out_dim)

    def walk_t2(f1: AffineFunction, i2: int, pc: PathCondition, wit) -> int:
        node = t2.nodes[i2]
        if isinstance(node, Leaf):
            return b.leaf(affine.compose(node.fn, f1))
        w = node.pred.w @ f1.W
        c = float(np.dot(node.pred.w, f1.b)) + node.pred.b
        if not w.any():
            return walk_t2(f1, node.hi if c >= 0.0 else node.lo, pc, wit)
        pred = Halfspace(w, c, Sense.GE)
        if prune_infeasible:
            hi_state = _extend(pc, pred, wit)
            lo_state = _extend(pc, pred.negate(), wit)
            if hi_state is None:
                return walk_t2(f1, node.lo, *lo_state)
            if lo_state is None:
                return walk_t2(f1, node.hi, *hi_state)
            hi = walk_t2(f1, node.hi, *hi_state)
            lo = walk_t2(f1, node.lo, *lo_state)
        else:
            hi = walk_t2(f1, node.hi, pc, wit)
            lo = walk_t2(f1, node.lo, pc, wit)
        return b.inner(pred, hi, lo)

    def walk_t1(i1: int, pc: PathCondition, wit) -> int:
        node = t1.nodes[i1]
        if isinstance(node, Leaf):
            return walk_t2(node.fn, t2.root, pc, wit)
        pred = node.pred
        if not pred.w.any():
            return walk_t1(node.hi if pred.b >= 0.0 else node.lo, pc, wit)
        if prune_infeasible:
            hi_state = _extend(pc, pred, wit)
            lo_state = _extend(pc, pred.negate(), wit)
            if hi_state is None:
                return walk_t1(node.lo, *lo_state)
            if lo_state is None:
                return walk_t1(node.hi, *hi_state)
            hi = walk_t1(node.hi, *hi_state)
            lo = walk_t1(node.lo, *lo_state)
        else:
            hi = walk_t1(node.hi, pc, wit)
            lo = walk_t1(node.lo, pc, wit)
        return b.inner(pred, hi, lo)

    pc0 = PathCondition.true(t1.in_dim)
    wit0 = feasible_witness(pc0) if prune_infeasible else None
    result = b.finish(walk_t1(t1.root, pc0, wit0))
    _bound_check(result, t1, t2, "composition")
    return result


def atomic_tads(step: Step) -> Tads:
    """The one-step structure: an affine step is a single leaf; a ReLU step
    tests e_i.x >= 0 with an identity true leaf and a zeroed-diagonal false
    leaf."""
    if isinstance(step, AffineStep):
        b = _Builder(step.in_dim, step.out_dim)
        return b.finish(b.leaf(step.fn))
    k, i = step.dim, step.index
    b = _Builder(k, k)
    e = np.zeros(k)
    e[i - 1] = 1.0
    hi = b.leaf(affine.identity(k))
    lo = b.leaf(affine.defect_matrix(k, i))
    return b.finish(b.inner(Halfspace(e, 0.0, Sense.GE), hi, lo))


def identity_tads(n: int) -> Tads:
    b = _Builder(n, n)
    return b.finish(b.leaf(affine.identity(n)))


def constant_tads(values, in_dim: int) -> Tads:
    b = _Builder(in_dim, np.atleast_1d(values).shape[0])
    return b.finish(b.leaf(affine.constant(values, in_dim)))


def fold_network(net: Network, prune_infeasible: bool = True) -> Tads:
    """Layer-wise build: fold the network's atomic structures left to right
    with composition. Pointwise equal to the direct symbolic construction."""
    t = identity_tads(net.input_dim)
    for step in net.steps:
        t = tads_compose(t, atomic_tads(step), prune_infeasible)
    return t


def map_leaves(t: Tads, h: Callable[[AffineFunction], AffineFunction]) -> Tads:
    """Replace every leaf f by h(f); the arena shape is preserved 1:1.

    When h is defined pointwise (h(f)(x) = g(f(x)) for some g) the result
    evaluates to g composed with the original structure everywhere.
    """
    nodes = []
    out_dim = None
    for i, node in enumerate(t.nodes):
        if isinstance(node, Leaf):
            fn = h(node.fn)
            if fn.in_dim != t.in_dim:
                raise DimensionError(
                    f"leaf transformer changed the input space at node {i}: "
                    f"{fn.in_dim} != {t.in_dim}"
                )
            if out_dim is None:
                out_dim = fn.out_dim
            elif fn.out_dim != out_dim:
                raise DimensionError(
                    f"leaf transformer produced mixed output dimensions at node {i}"
                )
            nodes.append(Leaf(fn))
        else:
            nodes.append(node)
    return Tads(t.in_dim, out_dim, t.root, tuple(nodes))
