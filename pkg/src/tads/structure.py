"""Decision structures with halfspace tests at inner nodes and affine leaves.

A structure of type (n, m) is a rooted DAG stored in an arena: children always
have smaller ids than their parents, which makes acyclicity a syntactic
property. Inner nodes keep a halfspace over the *network input* space; the
true child is taken when w.x + b >= 0, the false child on the strict
complement. Leaves are affine maps R^n -> R^m.

Construction from a network runs the symbolic step rules: affine steps fold
into the aggregated history map and emit no decision node, ReLU steps branch.
With pruning enabled (the default) branches whose path condition is
unsatisfiable are cut while building, so the result has no vacuous node along
any feasible path. The arena hash-conses equal leaves and equal
(predicate, children) nodes and collapses nodes whose children coincide.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import affine, feasibility
from .affine import AffineFunction, DimensionError
from .feasibility import Halfspace, PathCondition, Sense
from .network import (
    AffineStep,
    LABEL_AFFINE,
    LABEL_KEEP,
    LABEL_ZERO,
    Network,
    Step,
)

__all__ = [
    "Leaf",
    "Inner",
    "Tads",
    "SymbolicConfig",
    "sym_step",
    "initial_config",
    "net_to_tads",
    "tads_eval",
    "tads_eval_batch",
    "count_paths",
    "enumerate_regions",
    "semantic_reduce",
    "vacuity_reduce",
    "serialize_tads",
    "deserialize_tads",
    "TadsFormatError",
]


@dataclass(frozen=True)
class Leaf:
    fn: AffineFunction


@dataclass(frozen=True)
class Inner:
    pred: Halfspace  # sense is always GE; the false child covers w.x + b < 0
    hi: int
    lo: int


Node = Union[Leaf, Inner]


@dataclass(frozen=True, eq=False)
class Tads:
    in_dim: int
    out_dim: int
    root: int
    nodes: tuple[Node, ...]

    @property
    def type(self) -> tuple[int, int]:
        return (self.in_dim, self.out_dim)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def leaf_count(self) -> int:
        return sum(1 for n in self.nodes if isinstance(n, Leaf))


class _Builder:
    """Append-only arena with hash-consing; single-owner during a build."""

    def __init__(self, in_dim: int, out_dim: int):
        self.in_dim = in_dim
        self.out_dim = out_dim
        self.nodes: list[Node] = []
        self._leaves: dict = {}
        self._inners: dict = {}

    def leaf(self, fn: AffineFunction) -> int:
        if fn.type != (self.in_dim, self.out_dim):
            raise DimensionError(
                f"leaf of type {fn.type} in structure of type "
                f"{(self.in_dim, self.out_dim)}"
            )
        key = (fn.W.tobytes(), fn.b.tobytes(), fn.W.shape)
        nid = self._leaves.get(key)
        if nid is None:
            nid = len(self.nodes)
            self.nodes.append(Leaf(fn))
            self._leaves[key] = nid
        return nid

    @staticmethod
    def _pred_key(pred: Halfspace):
        # positive normalizer only: orientation is never flipped
        s = max(float(np.abs(pred.w).max()), abs(pred.b))
        return (tuple(pred.w / s), pred.b / s)

    def inner(self, pred: Halfspace, hi: int, lo: int) -> int:
        if hi == lo:
            return hi
        key = (self._pred_key(pred), hi, lo)
        nid = self._inners.get(key)
        if nid is None:
            nid = len(self.nodes)
            self.nodes.append(Inner(pred, hi, lo))
            self._inners[key] = nid
        return nid

    def finish(self, root: int) -> Tads:
        # compact to the nodes reachable from the root, children first
        new_id: dict[int, int] = {}
        out: list[Node] = []
        stack: list[tuple[int, int]] = [(root, 0)]
        while stack:
            i, phase = stack.pop()
            if i in new_id:
                continue
            node = self.nodes[i]
            if isinstance(node, Leaf):
                new_id[i] = len(out)
                out.append(node)
            elif phase == 1:
                new_id[i] = len(out)
                out.append(Inner(node.pred, new_id[node.hi], new_id[node.lo]))
            else:
                stack.append((i, 1))
                stack.append((node.lo, 0))
                stack.append((node.hi, 0))
        return Tads(self.in_dim, self.out_dim, new_id[root], tuple(out))


# --------------------------------------------------------------------------
# symbolic execution


@dataclass(frozen=True)
class SymbolicConfig:
    """Remaining steps, the aggregated input-to-here affine map, and the
    path condition accumulated so far (all over the original inputs)."""

    remaining: tuple[Step, ...]
    fn: AffineFunction
    pc: PathCondition


def initial_config(net: Network) -> SymbolicConfig:
    return SymbolicConfig(
        net.steps, affine.identity(net.input_dim), PathCondition.true(net.input_dim)
    )


def _relu_pred(fn: AffineFunction, index: int) -> Halfspace:
    return Halfspace(fn.W[index - 1].copy(), float(fn.b[index - 1]), Sense.GE)


def sym_step(cfg: SymbolicConfig, branch: bool | None = None):
    """Successor configurations of one symbolic step.

    An affine head folds into the history map (single successor, label
    "true"). A ReLU head splits: the true branch keeps the map and records
    (fn.x)_i >= 0, the false branch zeroes output row i and records the strict
    complement. `branch` restricts a ReLU split to one side.
    """
    if not cfg.remaining:
        raise ValueError("no step remaining")
    head, rest = cfg.remaining[0], cfg.remaining[1:]
    if isinstance(head, AffineStep):
        return [(LABEL_AFFINE, SymbolicConfig(rest, affine.compose(head.fn, cfg.fn), cfg.pc))]
    pred = _relu_pred(cfg.fn, head.index)
    out = []
    if branch is not False:
        out.append((LABEL_KEEP, SymbolicConfig(rest, cfg.fn, cfg.pc.and_(pred))))
    if branch is not True:
        out.append(
            (
                LABEL_ZERO,
                SymbolicConfig(
                    rest,
                    affine.zero_output(cfg.fn, head.index),
                    cfg.pc.and_(pred.negate()),
                ),
            )
        )
    return out


def _extend(pc: PathCondition, h: Halfspace, witness):
    """(pc & h, witness') when satisfiable, else None. Tries the parent
    witness first (exact substitution) before a full solve."""
    pc2 = pc.and_(h)
    wit = feasibility.extend_witness(witness, h)
    if wit is None:
        wit = feasibility.feasible_witness(pc2)
        if wit is None:
            return None
    return pc2, wit


def net_to_tads(net: Network, prune_infeasible: bool = True) -> Tads:
    """Depth-first symbolic execution of the network into a decision structure.

    Affine steps emit no node. Every ReLU step normally emits an inner node
    testing (fn.x)_i >= 0 over the original inputs; with pruning, a branch
    whose path condition is unsatisfiable is cut and the node vanishes
    (fused vacuity reduction). Degenerate predicates with an all-zero normal
    are resolved to the constant branch immediately.
    """
    b = _Builder(net.input_dim, net.output_dim)
    steps = net.steps

    def go(k: int, fn: AffineFunction, pc: PathCondition, wit) -> int:
        while k < len(steps) and isinstance(steps[k], AffineStep):
            fn = affine.compose(steps[k].fn, fn)
            k += 1
        if k == len(steps):
            return b.leaf(fn)
        step = steps[k]
        pred = _relu_pred(fn, step.index)
        if not pred.w.any():  # constant predicate: exactly one branch is real
            if pred.b >= 0.0:
                return go(k + 1, fn, pc, wit)
            return go(k + 1, affine.zero_output(fn, step.index), pc, wit)
        fn_lo = affine.zero_output(fn, step.index)
        if prune_infeasible:
            hi_state = _extend(pc, pred, wit)
            lo_state = _extend(pc, pred.negate(), wit)
            if hi_state is None:
                return go(k + 1, fn_lo, *lo_state)
            if lo_state is None:
                return go(k + 1, fn, *hi_state)
            hi = go(k + 1, fn, *hi_state)
            lo = go(k + 1, fn_lo, *lo_state)
        else:
            hi = go(k + 1, fn, pc, wit)
            lo = go(k + 1, fn_lo, pc, wit)
        return b.inner(pred, hi, lo)

    pc0 = PathCondition.true(net.input_dim)
    wit0 = feasibility.feasible_witness(pc0) if prune_infeasible else None
    return b.finish(go(0, affine.identity(net.input_dim), pc0, wit0))


# --------------------------------------------------------------------------
# evaluation


def _check_input(t: Tads, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (t.in_dim,):
        raise DimensionError(
            f"structure of type {t.type} expects input of length {t.in_dim}, "
            f"got {x.shape}"
        )
    return x


def tads_eval(t: Tads, x) -> np.ndarray:
    """Follow the true child when w.x + b >= 0, else the false child, then
    evaluate the reached leaf at x."""
    x = _check_input(t, x)
    node = t.nodes[t.root]
    while isinstance(node, Inner):
        node = t.nodes[node.hi if node.pred.evaluate(x) >= 0.0 else node.lo]
    return node.fn(x)


def tads_eval_batch(t: Tads, X: np.ndarray) -> np.ndarray:
    """Evaluate every row of X (shape (N, in_dim)) by mask partitioning."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != t.in_dim:
        raise DimensionError(
            f"batch input must have shape (N, {t.in_dim}), got {X.shape}"
        )
    out = np.empty((X.shape[0], t.out_dim))

    def go(i: int, idx: np.ndarray):
        node = t.nodes[i]
        if isinstance(node, Leaf):
            out[idx] = node.fn.batch(X[idx])
            return
        vals = X[idx] @ node.pred.w + node.pred.b
        mask = vals >= 0.0
        if mask.any():
            go(node.hi, idx[mask])
        if not mask.all():
            go(node.lo, idx[~mask])

    go(t.root, np.arange(X.shape[0]))
    return out


def count_paths(t: Tads) -> int:
    """Root-to-leaf paths of the DAG, feasible or not."""
    counts: list[int] = []
    for node in t.nodes:  # children precede parents
        if isinstance(node, Leaf):
            counts.append(1)
        else:
            counts.append(counts[node.hi] + counts[node.lo])
    return counts[t.root]


def enumerate_regions(
    t: Tads, only_full_dim: bool = False
) -> list[tuple[PathCondition, AffineFunction]]:
    """All root-to-leaf paths with satisfiable path condition, as
    (polyhedron, leaf function) pairs; unfiltered they partition R^n."""
    out: list[tuple[PathCondition, AffineFunction]] = []

    def go(i: int, pc: PathCondition, wit):
        node = t.nodes[i]
        if isinstance(node, Leaf):
            if not only_full_dim or feasibility.is_full_dimensional(pc):
                out.append((pc, node.fn))
            return
        hi_state = _extend(pc, node.pred, wit)
        if hi_state is not None:
            go(node.hi, *hi_state)
        lo_state = _extend(pc, node.pred.negate(), wit)
        if lo_state is not None:
            go(node.lo, *lo_state)

    pc0 = PathCondition.true(t.in_dim)
    go(t.root, pc0, feasibility.feasible_witness(pc0))
    return out


# --------------------------------------------------------------------------
# reductions


def semantic_reduce(t: Tads, atol: float = 1e-9) -> Tads:
    """Bottom-up hash-consing pass: merge leaves equal within atol, merge
    inner nodes with equal (predicate, children), collapse nodes whose
    children coincide. Never increases the node count; the tolerance-based
    leaf merge is heuristic (greedy against the first matching representative).
    """
    b = _Builder(t.in_dim, t.out_dim)
    reps: list[tuple[AffineFunction, int]] = []
    mapping: dict[int, int] = {}
    for i, node in enumerate(t.nodes):
        if isinstance(node, Leaf):
            for fn, nid in reps:
                if affine.equal(fn, node.fn, atol):
                    mapping[i] = nid
                    break
            else:
                nid = b.leaf(node.fn)
                reps.append((node.fn, nid))
                mapping[i] = nid
        else:
            mapping[i] = b.inner(node.pred, mapping[node.hi], mapping[node.lo])
    return b.finish(mapping[t.root])


def vacuity_reduce(t: Tads) -> Tads:
    """Drop every node whose outcome is decided by its path condition.

    Each inner node reached under accumulated condition pc is rerouted to its
    true child when pc implies the predicate and to its false child when pc
    implies the complement; one full pass with complete path conditions
    reaches the fixpoint.
    """
    b = _Builder(t.in_dim, t.out_dim)

    def go(i: int, pc: PathCondition, wit) -> int:
        node = t.nodes[i]
        if isinstance(node, Leaf):
            return b.leaf(node.fn)
        pred = node.pred
        if not pred.w.any():
            return go(node.hi if pred.b >= 0.0 else node.lo, pc, wit)
        hi_state = _extend(pc, pred, wit)
        lo_state = _extend(pc, pred.negate(), wit)
        if lo_state is None:  # pc implies pred
            return go(node.hi, *hi_state)
        if hi_state is None:  # pc implies the complement
            return go(node.lo, *lo_state)
        hi = go(node.hi, *hi_state)
        lo = go(node.lo, *lo_state)
        return b.inner(pred, hi, lo)

    pc0 = PathCondition.true(t.in_dim)
    return b.finish(go(t.root, pc0, feasibility.feasible_witness(pc0)))


# --------------------------------------------------------------------------
# serialization


class TadsFormatError(ValueError):
    """Malformed structure JSON; messages name the offending node id."""


def serialize_tads(t: Tads) -> str:
    nodes = []
    for i, node in enumerate(t.nodes):
        if isinstance(node, Leaf):
            nodes.append(
                {"id": i, "leaf": {"W": node.fn.W.tolist(), "b": node.fn.b.tolist()}}
            )
        else:
            nodes.append(
                {
                    "id": i,
                    "pred": {"w": node.pred.w.tolist(), "b": node.pred.b},
                    "hi": node.hi,
                    "lo": node.lo,
                }
            )
    doc = {"in_dim": t.in_dim, "out_dim": t.out_dim, "root": t.root, "nodes": nodes}
    return json.dumps(doc, indent=2)


def deserialize_tads(text: str) -> Tads:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TadsFormatError(f"invalid JSON: {exc}") from None
    try:
        in_dim = int(doc["in_dim"])
        out_dim = int(doc["out_dim"])
        root = int(doc["root"])
        raw_nodes = doc["nodes"]
    except (KeyError, TypeError) as exc:
        raise TadsFormatError(f"missing or malformed required field: {exc}") from None
    if not isinstance(raw_nodes, list) or not raw_nodes:
        raise TadsFormatError("'nodes' must be a non-empty list")

    by_id: dict[int, dict] = {}
    for entry in raw_nodes:
        if not isinstance(entry, dict) or "id" not in entry:
            raise TadsFormatError("every node needs an 'id' field")
        by_id[int(entry["id"])] = entry
    n = len(raw_nodes)
    if sorted(by_id) != list(range(n)):
        raise TadsFormatError("node ids must be dense and 0-based")
    if not 0 <= root < n:
        raise TadsFormatError(f"root id {root} out of range")

    nodes: list[Node] = []
    for i in range(n):
        entry = by_id[i]
        if "leaf" in entry:
            leaf = entry["leaf"]
            try:
                fn = AffineFunction(leaf["W"], leaf["b"])
            except (KeyError, TypeError, ValueError) as exc:
                raise TadsFormatError(f"node {i}: bad leaf: {exc}") from None
            if fn.type != (in_dim, out_dim):
                raise TadsFormatError(
                    f"node {i}: leaf has type {fn.type}, expected {(in_dim, out_dim)}"
                )
            nodes.append(Leaf(fn))
        elif "pred" in entry:
            pred = entry["pred"]
            try:
                h = Halfspace(pred["w"], float(pred["b"]), Sense.GE)
                hi = int(entry["hi"])
                lo = int(entry["lo"])
            except (KeyError, TypeError, ValueError) as exc:
                raise TadsFormatError(f"node {i}: bad inner node: {exc}") from None
            if h.dim != in_dim:
                raise TadsFormatError(
                    f"node {i}: predicate dimension {h.dim}, expected {in_dim}"
                )
            for child in (hi, lo):
                if child < 0 or child >= n:
                    raise TadsFormatError(f"node {i}: dangling child id {child}")
                if child >= i:
                    raise TadsFormatError(
                        f"node {i}: cycle detected (child id {child} not smaller)"
                    )
            nodes.append(Inner(h, hi, lo))
        else:
            raise TadsFormatError(f"node {i}: neither a leaf nor an inner node")
    return Tads(in_dim, out_dim, root, tuple(nodes))
