"""Global analyses on decision structures: equivalence, epsilon-similarity,
threshold classification, class characterization, classifier comparison.

All verdicts come with diagnostics: failing analyses return the offending
regions together with sample points produced by the feasibility engine's
max-slack certificate, so every reported point genuinely lies inside its
region rather than on a boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import affine, feasibility
from .affine import AffineFunction, DimensionError
from .algebra import (
    atomic_tads,
    constant_tads,
    tads_add,
    tads_compose,
    tads_eq,
    tads_scale,
    tads_sub,
)
from .feasibility import Halfspace, PathCondition, Sense
from .network import PartialReluStep
from .structure import (
    Tads,
    _Builder,
    enumerate_regions,
    semantic_reduce,
    tads_eval,
    tads_eval_batch,
)

__all__ = [
    "WitnessRegion",
    "EquivalenceReport",
    "ViolationRegion",
    "SimilarityReport",
    "check_equivalence",
    "check_epsilon_similarity",
    "indicator_tads",
    "make_threshold_classifier",
    "class_characterization",
    "compare_classifiers",
    "region_sample_point",
    "grid_dump",
]


@dataclass(frozen=True)
class WitnessRegion:
    """A region where two structures differ: its polyhedron, the difference
    as an affine function (first operand minus second), and an inner point."""

    region: PathCondition
    difference: AffineFunction
    point: np.ndarray


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    atol: float
    witness_regions: list[WitnessRegion]
    diff_tads: Tads


@dataclass(frozen=True)
class ViolationRegion:
    region: PathCondition
    point: np.ndarray
    excess: float


@dataclass(frozen=True)
class SimilarityReport:
    epsilon: float
    similar: bool
    violation_regions: list[ViolationRegion]
    sim_tads: Tads


def region_sample_point(pc: PathCondition, within: tuple[float, float] | None = None):
    """An interior point of the region, optionally restricted to the box
    [lo, hi]^dim; None when the (restricted) region is empty."""
    if within is None:
        return feasibility.interior_point(pc)
    lo, hi = within
    boxed = pc.extend(feasibility.box_halfspaces(pc.dim, lo, hi))
    return feasibility.interior_point(boxed)


def check_equivalence(t1: Tads, t2: Tads, atol: float = 1e-9) -> EquivalenceReport:
    """Reduce t1 minus t2 and test every feasible leaf against zero.

    Equivalent iff no feasible region carries a nonzero difference. Witness
    regions store the signed difference t1 - t2 (positive where t1 is bigger)
    and a sample point inside the region.
    """
    if t1.type != t2.type:
        raise DimensionError(
            f"equivalence requires equal types, got {t1.type} and {t2.type}"
        )
    diff = semantic_reduce(tads_sub(t1, t2), atol)
    witnesses = []
    for pc, fn in enumerate_regions(diff):
        if not affine.is_zero(fn, atol):
            witnesses.append(WitnessRegion(pc, fn, feasibility.interior_point(pc)))
    return EquivalenceReport(not witnesses, atol, witnesses, diff)


def check_epsilon_similarity(
    t1: Tads, t2: Tads, epsilon: float, atol: float = 1e-9
) -> SimilarityReport:
    """Decide whether |t1(x) - t2(x)| <= epsilon everywhere (scalar outputs).

    Builds the excess structure relu(t1 - t2 - eps) + relu(t2 - t1 - eps),
    which evaluates to max(|t1(x) - t2(x)| - eps, 0). Similar iff that
    structure is the zero function on every full-dimensional region; each
    violating region is reported with an interior point and its excess there.
    Multi-output structures are compared one output coordinate at a time
    (project with map_leaves first).
    """
    if t1.type != t2.type:
        raise DimensionError(
            f"similarity requires equal types, got {t1.type} and {t2.type}"
        )
    if t1.out_dim != 1:
        raise DimensionError(
            f"epsilon-similarity is defined on scalar outputs, got type {t1.type}"
        )
    if epsilon < 0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    n = t1.in_dim
    relu1 = atomic_tads(PartialReluStep(1, 1))
    eps = constant_tads([epsilon], n)
    d = tads_sub(t1, t2)
    pos = tads_compose(tads_sub(d, eps), relu1)
    neg = tads_compose(tads_sub(tads_scale(-1.0, d), eps), relu1)
    sim = semantic_reduce(tads_add(pos, neg), atol)
    violations = []
    for pc, fn in enumerate_regions(sim, only_full_dim=True):
        if not affine.is_zero(fn, atol):
            point = feasibility.interior_point(pc)
            excess = float(tads_eval(sim, point)[0])
            violations.append(ViolationRegion(pc, point, excess))
    return SimilarityReport(epsilon, not violations, violations, sim)


def indicator_tads(theta: float) -> Tads:
    """The step function on R: constant 1 where x >= theta, else constant 0."""
    b = _Builder(1, 1)
    hi = b.leaf(affine.constant([1.0], 1))
    lo = b.leaf(affine.constant([0.0], 1))
    return b.finish(b.inner(Halfspace(np.array([1.0]), -float(theta), Sense.GE), hi, lo))


def make_threshold_classifier(t: Tads, theta: float) -> Tads:
    """Compose a scalar-output structure with the x >= theta indicator; the
    result's feasible leaves are the constants 0 and 1."""
    if t.out_dim != 1:
        raise DimensionError(
            f"threshold classifier requires scalar output, got type {t.type}"
        )
    return tads_compose(t, indicator_tads(theta))


def class_characterization(
    c: Tads, class_value: float, atol: float = 1e-9
) -> list[PathCondition]:
    """The polyhedra of all feasible regions classified as class_value; their
    union is exactly the preimage of that value."""
    if c.out_dim != 1:
        raise DimensionError(
            f"class characterization requires scalar output, got type {c.type}"
        )
    out = []
    for pc, fn in enumerate_regions(c):
        if not affine.is_constant(fn, atol):
            raise ValueError(
                "input is not a classifier: region leaf is not constant "
                f"(W max-abs {np.abs(fn.W).max():.3g})"
            )
        if abs(float(fn.b[0]) - class_value) <= atol:
            out.append(pc)
    return out


def compare_classifiers(
    c1: Tads, c2: Tads, atol: float = 1e-9
) -> tuple[Tads, Tads]:
    """(agreement, signed difference) of two classifiers of the same type.

    Agreement has constant-1 leaves where the classifiers coincide and 0
    elsewhere; the signed difference c1 - c2 of 0/1 classifiers has leaves in
    {-1, 0, 1} and tells which side wins where they disagree.
    """
    if c1.type != c2.type:
        raise DimensionError(
            f"classifier comparison requires equal types, got {c1.type} and {c2.type}"
        )
    agreement = semantic_reduce(tads_eq(c1, c2, atol), atol)
    signed_diff = semantic_reduce(tads_sub(c1, c2), atol)
    return agreement, signed_diff


def grid_axes(bounds, steps: int) -> list[np.ndarray]:
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps}")
    bounds = np.asarray(bounds, dtype=np.float64)
    if bounds.shape == (2,):
        bounds = np.array([bounds, bounds])
    if bounds.shape != (2, 2):
        raise ValueError("bounds must be (lo, hi) or ((lo0, hi0), (lo1, hi1))")
    return [
        np.linspace(lo, hi, steps) if steps > 1 else np.array([lo])
        for lo, hi in bounds
    ]


def grid_slice_rows(t: Tads, x0: float, xs1: np.ndarray) -> list[str]:
    """The CSV rows of one x0-slice; the unit of work for parallel dumps."""
    X = np.column_stack([np.full(len(xs1), x0), xs1])
    values = tads_eval_batch(t, X)[:, 0]
    return [f"{float(x0)!r},{float(x1)!r},{float(v)!r}" for x1, v in zip(xs1, values)]


def grid_dump(t: Tads, bounds=((0.0, 1.0), (0.0, 1.0)), steps: int = 101):
    """CSV rows 'x0,x1,value' over a uniform grid, lexicographic in grid
    indices; requires a 2-input scalar-output structure."""
    if t.in_dim != 2 or t.out_dim != 1:
        raise DimensionError(f"grid dump requires type (2, 1), got {t.type}")
    axes = grid_axes(bounds, steps)
    yield "x0,x1,value"
    for x0 in axes[0]:
        yield from grid_slice_rows(t, float(x0), axes[1])
