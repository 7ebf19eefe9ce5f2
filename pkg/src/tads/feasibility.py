"""Exact satisfiability of conjunctions of strict/non-strict linear inequalities.

Every stored coefficient is a double, and every finite double is a rational,
so constraints are converted to exact integer rows before deciding anything.
Decisions are exact: no epsilon, no tolerance. Strict inequalities (the false
branch of a ReLU split is genuinely strict) are tracked as first-class.

Engine choice: Fourier-Motzkin elimination for ambient dimension <= 4 (simple
and exact at desk scale, with witness extraction by back-substitution), and an
exact-rational simplex otherwise. The simplex maximizes the minimum slack t of
the strict constraints subject to the non-strict ones and t <= 1; the system
is satisfiable iff the LP is feasible and (there are no strict constraints or
the optimum is > 0). Fourier-Motzkin falls back to the simplex if its row
count explodes mid-elimination, so both paths stay exact.

Results are cached under a canonical key (gcd-normalized integer rows, sorted
and deduplicated) because callers re-query heavily overlapping constraint
prefixes during construction and vacuity reduction.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd, lcm

import numpy as np

__all__ = [
    "Sense",
    "Halfspace",
    "PathCondition",
    "is_feasible",
    "feasible_witness",
    "extend_witness",
    "implies",
    "is_full_dimensional",
    "interior_point",
    "box_halfspaces",
    "clear_cache",
]


class Sense(Enum):
    """GE keeps w.x + b >= 0; LT keeps the strict complement w.x + b < 0."""

    GE = ">="
    LT = "<"


@dataclass(frozen=True, eq=False)
class Halfspace:
    """A signed linear predicate w.x + b (>= 0 | < 0) over the input space."""

    w: np.ndarray
    b: float
    sense: Sense = Sense.GE

    def __post_init__(self):
        w = np.array(self.w, dtype=np.float64)
        if w.ndim != 1:
            raise ValueError(f"halfspace normal must be 1-D, got shape {w.shape}")
        if not (np.isfinite(w).all() and np.isfinite(self.b)):
            raise ValueError("halfspace contains non-finite entries")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "b", float(self.b))

    @property
    def dim(self) -> int:
        return self.w.shape[0]

    def negate(self) -> "Halfspace":
        flipped = Sense.LT if self.sense is Sense.GE else Sense.GE
        return Halfspace(self.w, self.b, flipped)

    def evaluate(self, x) -> float:
        """Value of w.x + b; the single evaluation routine used everywhere."""
        return float(np.dot(self.w, x) + self.b)

    def holds(self, x) -> bool:
        v = self.evaluate(x)
        return v >= 0.0 if self.sense is Sense.GE else v < 0.0

    def holds_exact(self, point: tuple[Fraction, ...]) -> bool:
        v = Fraction(0)
        for wk, pk in zip(self.w, point):
            if wk:
                v += Fraction(float(wk)) * pk
        v += Fraction(self.b)
        return v >= 0 if self.sense is Sense.GE else v < 0

    def __repr__(self):
        return f"Halfspace({self.w.tolist()}, {self.b}, {self.sense.value})"


@dataclass(frozen=True, eq=False)
class PathCondition:
    """An ordered conjunction of signed halfspaces; empty means all of R^dim."""

    dim: int
    constraints: tuple[Halfspace, ...] = ()

    def __post_init__(self):
        for h in self.constraints:
            if h.dim != self.dim:
                raise ValueError(
                    f"constraint dimension {h.dim} does not match ambient {self.dim}"
                )

    @classmethod
    def true(cls, dim: int) -> "PathCondition":
        return cls(dim, ())

    def and_(self, h: Halfspace) -> "PathCondition":
        return PathCondition(self.dim, self.constraints + (h,))

    def extend(self, hs) -> "PathCondition":
        return PathCondition(self.dim, self.constraints + tuple(hs))

    def __len__(self):
        return len(self.constraints)

    def satisfied_by(self, x) -> bool:
        return all(h.holds(x) for h in self.constraints)


def box_halfspaces(dim: int, lo: float, hi: float) -> list[Halfspace]:
    """Non-strict halfspaces pinning every coordinate to [lo, hi]."""
    out = []
    for k in range(dim):
        e = np.zeros(dim)
        e[k] = 1.0
        out.append(Halfspace(e, -lo, Sense.GE))
        out.append(Halfspace(-e, hi, Sense.GE))
    return out


# --------------------------------------------------------------------------
# rationalization


# A row is (coeffs: tuple[int], const: int, strict: bool) read as
# coeffs.x + const >= 0, or > 0 when strict.
_Row = tuple[tuple[int, ...], int, bool]


def _to_row(h: Halfspace, force_strict: bool) -> _Row:
    if h.sense is Sense.GE:
        fw = [Fraction(float(v)) for v in h.w]
        fb = Fraction(h.b)
        strict = False
    else:
        # w.x + b < 0  <=>  -w.x - b > 0
        fw = [-Fraction(float(v)) for v in h.w]
        fb = -Fraction(h.b)
        strict = True
    if force_strict:
        strict = True
    den = lcm(fb.denominator, *(f.denominator for f in fw)) if fw else fb.denominator
    ints = [int(f * den) for f in fw]
    const = int(fb * den)
    g = gcd(const, *(abs(i) for i in ints))
    if g > 1:
        ints = [i // g for i in ints]
        const //= g
    return (tuple(ints), const, strict)


class _Contradiction(Exception):
    pass


def _clean(rows) -> list[_Row]:
    """Drop satisfied constant rows, dedupe, keep the tightest of parallel
    identical-direction rows. Raises _Contradiction on a violated constant."""
    best: dict[tuple[int, ...], tuple[int, bool]] = {}
    for coeffs, const, strict in rows:
        if not any(coeffs):
            if const > 0 or (const == 0 and not strict):
                continue
            raise _Contradiction
        g = gcd(abs(const), *(abs(c) for c in coeffs))
        if g > 1:
            coeffs = tuple(c // g for c in coeffs)
            const //= g
        cur = best.get(coeffs)
        # smaller const is tighter; at equal const, strict is tighter
        if cur is None or const < cur[0] or (const == cur[0] and strict and not cur[1]):
            best[coeffs] = (const, strict)
    return [(c, b, s) for c, (b, s) in best.items()]


# --------------------------------------------------------------------------
# Fourier-Motzkin with witness extraction

_FM_DIM_LIMIT = 4
_FM_ROW_CAP = 4000


class _FMOverflow(Exception):
    pass


def _fm_witness(rows: list[_Row], n: int):
    """Decide by variable elimination; on success reconstruct an exact witness
    by back-substitution, picking midpoints so strict bounds stay strict."""
    try:
        cur = _clean(rows)
    except _Contradiction:
        return None
    stages: list[tuple[int, list[_Row]]] = []
    live = list(range(n))
    while live:
        # cheapest variable first: fewest pairwise combinations
        def cost(j):
            pos = sum(1 for c, _, _ in cur if c[j] > 0)
            neg = sum(1 for c, _, _ in cur if c[j] < 0)
            return pos * neg

        j = min(live, key=cost)
        stages.append((j, cur))
        pos, neg, rest = [], [], []
        for row in cur:
            cj = row[0][j]
            if cj > 0:
                pos.append(row)
            elif cj < 0:
                neg.append(row)
            else:
                rest.append(row)
        new = list(rest)
        for pc_, pb, ps in pos:
            for qc, qb, qs in neg:
                a, c = pc_[j], -qc[j]
                coeffs = tuple(a * qc[k] + c * pc_[k] for k in range(n))
                new.append((coeffs, a * qb + c * pb, ps or qs))
        try:
            cur = _clean(new)
        except _Contradiction:
            return None
        if len(cur) > _FM_ROW_CAP:
            raise _FMOverflow
        live.remove(j)

    vals: list[Fraction | None] = [None] * n
    for j, rows_j in reversed(stages):
        lo = hi = None
        lo_strict = hi_strict = False
        for coeffs, const, strict in rows_j:
            cj = coeffs[j]
            if cj == 0:
                continue
            rest_val = Fraction(const)
            for k, ck in enumerate(coeffs):
                if ck and k != j:
                    rest_val += ck * vals[k]
            bound = Fraction(-rest_val, cj)
            if cj > 0:
                if lo is None or bound > lo:
                    lo, lo_strict = bound, strict
                elif bound == lo:
                    lo_strict = lo_strict or strict
            else:
                if hi is None or bound < hi:
                    hi, hi_strict = bound, strict
                elif bound == hi:
                    hi_strict = hi_strict or strict
        if lo is None and hi is None:
            vals[j] = Fraction(0)
        elif lo is None:
            vals[j] = hi - 1
        elif hi is None:
            vals[j] = lo + 1
        elif lo < hi:
            vals[j] = (lo + hi) / 2
        else:
            # elimination guarantees lo == hi is consistent and non-strict
            vals[j] = lo
    return tuple(vals)


# --------------------------------------------------------------------------
# exact simplex (two-phase, Bland's rule)


def _lp_max(A, b, c):
    """max c.y s.t. A y <= b, y >= 0 over Fractions.

    Returns (value, y) or None when infeasible. The callers' LPs are bounded
    by construction (the objective is a slack capped at 1).
    """
    m, n = len(A), len(c)
    neg = [i for i in range(m) if b[i] < 0]
    art_of = {i: n + m + k for k, i in enumerate(neg)}
    total = n + m + len(neg)
    rows = []
    basis = []
    for i in range(m):
        row = [Fraction(0)] * (total + 1)
        sign = -1 if b[i] < 0 else 1
        for j in range(n):
            if A[i][j]:
                row[j] = sign * A[i][j]
        row[n + i] = Fraction(sign)
        row[total] = sign * b[i]
        if i in art_of:
            row[art_of[i]] = Fraction(1)
            basis.append(art_of[i])
        else:
            basis.append(n + i)
        rows.append(row)

    def run(obj, limit):
        # keep obj reduced w.r.t. the basis; Bland's rule for termination;
        # only columns below `limit` may enter (phase 2 locks out artificials)
        for i, bi in enumerate(basis):
            if obj[bi]:
                coef = obj[bi]
                obj[:] = [o - coef * r for o, r in zip(obj, rows[i])]
        while True:
            enter = next((j for j in range(limit) if obj[j] > 0), None)
            if enter is None:
                return
            leave, best = None, None
            for i in range(len(rows)):
                a = rows[i][enter]
                if a > 0:
                    ratio = rows[i][total] / a
                    if best is None or ratio < best or (
                        ratio == best and basis[i] < basis[leave]
                    ):
                        leave, best = i, ratio
            if leave is None:
                raise RuntimeError("unbounded linear program")
            piv = rows[leave][enter]
            rows[leave] = [v / piv for v in rows[leave]]
            for i in range(len(rows)):
                if i != leave and rows[i][enter]:
                    coef = rows[i][enter]
                    rows[i] = [v - coef * p for v, p in zip(rows[i], rows[leave])]
            if obj[enter]:
                coef = obj[enter]
                obj[:] = [o - coef * p for o, p in zip(obj, rows[leave])]
            basis[leave] = enter

    if neg:
        obj1 = [Fraction(0)] * (total + 1)
        for i in neg:
            obj1[art_of[i]] = Fraction(-1)
        run(obj1, total)
        if obj1[total] != 0:  # -(phase-1 optimum) != 0 => some artificial stuck > 0
            return None
        keep = []
        for i in range(len(rows)):
            if basis[i] >= n + m:  # degenerate artificial still basic at zero
                piv = next((j for j in range(n + m) if rows[i][j]), None)
                if piv is None:
                    continue  # 0 = 0 row: drop it
                p = rows[i][piv]
                rows[i] = [v / p for v in rows[i]]
                for k in range(len(rows)):
                    if k != i and rows[k][piv]:
                        coef = rows[k][piv]
                        rows[k] = [v - coef * r for v, r in zip(rows[k], rows[i])]
                basis[i] = piv
            keep.append(i)
        rows = [rows[i] for i in keep]
        basis = [basis[i] for i in keep]

    obj = [Fraction(0)] * (total + 1)
    for j in range(n):
        obj[j] = c[j]
    run(obj, n + m)
    y = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        if bi < n:
            y[bi] = rows[i][total]
    return -obj[total], y


def _simplex_witness(rows: list[_Row], n: int):
    """Max-min-slack LP over the strict rows; see module docstring."""
    try:
        rows = _clean(rows)
    except _Contradiction:
        return None
    has_strict = any(s for _, _, s in rows)
    nv = 2 * n + 2  # x = u - v, t = p - q
    A, bb = [], []
    for coeffs, const, strict in rows:
        row = [Fraction(-ck) for ck in coeffs] + [Fraction(ck) for ck in coeffs]
        row.append(Fraction(1 if strict else 0))
        row.append(Fraction(-1 if strict else 0))
        A.append(row)
        bb.append(Fraction(const))
    A.append([Fraction(0)] * (2 * n) + [Fraction(1), Fraction(-1)])
    bb.append(Fraction(1))
    c = [Fraction(0)] * (2 * n) + [Fraction(1), Fraction(-1)]
    res = _lp_max(A, bb, c)
    if res is None:
        return None
    value, y = res
    if has_strict and value <= 0:
        return None
    return tuple(y[k] - y[n + k] for k in range(n))


# --------------------------------------------------------------------------
# cached solving and the public decision surface

_cache: dict = {}
_cache_lock = threading.Lock()


def clear_cache():
    with _cache_lock:
        _cache.clear()


def _solve(pc: PathCondition, force_strict: bool):
    if len(pc) == 0:
        return tuple(Fraction(0) for _ in range(pc.dim))
    rows = [_to_row(h, force_strict) for h in pc.constraints]
    key = (pc.dim, tuple(sorted(set(rows))))
    with _cache_lock:
        if key in _cache:
            return _cache[key]
    if pc.dim <= _FM_DIM_LIMIT:
        try:
            wit = _fm_witness(rows, pc.dim)
        except _FMOverflow:
            wit = _simplex_witness(rows, pc.dim)
    else:
        wit = _simplex_witness(rows, pc.dim)
    with _cache_lock:
        _cache[key] = wit
    return wit


def feasible_witness(pc: PathCondition):
    """An exact rational point satisfying pc, or None when pc is empty."""
    return _solve(pc, force_strict=False)


def is_feasible(pc: PathCondition) -> bool:
    """True iff some point of R^dim satisfies every constraint of pc."""
    return _solve(pc, force_strict=False) is not None


def extend_witness(witness, h: Halfspace):
    """Check one extra constraint at a known witness, exactly.

    Returns the witness unchanged when it already satisfies h (so the caller
    can skip a full solve), else None (inconclusive: h may still be jointly
    satisfiable elsewhere).
    """
    if witness is None:
        return None
    return witness if h.holds_exact(witness) else None


def implies(pc: PathCondition, h: Halfspace) -> bool:
    """True iff every point of pc satisfies h, i.e. pc and not-h is empty."""
    return not is_feasible(pc.and_(h.negate()))


def is_full_dimensional(pc: PathCondition) -> bool:
    """True iff pc has nonempty interior: all constraints hold strictly at once."""
    return _solve(pc, force_strict=True) is not None


def interior_point(pc: PathCondition):
    """A float point inside pc: strictly interior when the region is
    full-dimensional, otherwise the max-strict-slack witness. None if empty."""
    wit = _solve(pc, force_strict=True)
    if wit is None:
        wit = _solve(pc, force_strict=False)
    if wit is None:
        return None
    return np.array([float(v) for v in wit])
