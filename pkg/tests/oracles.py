"""Independent brute-force oracle for 2-D linear-inequality satisfiability.

Decides systems of rows (w0, w1, b, strict) read as w.x + b >= 0 (> 0 when
strict) by dense-grid probing plus exact vertex enumeration, all in rational
arithmetic:

  * a coarse grid of rational points accepts obviously satisfiable systems;
  * otherwise intersect within a huge box: collect every pairwise
    intersection of constraint boundary lines (plus the box edges) that
    satisfies the non-strict relaxation. The relaxed polyhedron is nonempty
    iff that vertex set is nonempty, and the centroid of the whole set lies
    in its relative interior, where every strict constraint of a satisfiable
    system must hold. So: satisfiable iff the centroid satisfies the system.

This never touches the package's elimination/simplex code.
"""

from __future__ import annotations

from fractions import Fraction

BOX = 4096  # far beyond any vertex coordinate of the small random systems


def _satisfies(rows, x: Fraction, y: Fraction) -> bool:
    for w0, w1, b, strict in rows:
        v = w0 * x + w1 * y + b
        if v < 0 or (strict and v == 0):
            return False
    return True


def _satisfies_relaxed(rows, x: Fraction, y: Fraction) -> bool:
    return all(w0 * x + w1 * y + b >= 0 for w0, w1, b, _ in rows) and (
        -BOX <= x <= BOX and -BOX <= y <= BOX
    )


def _intersect(l1, l2):
    # lines a x + b y + c = 0
    a1, b1, c1 = l1
    a2, b2, c2 = l2
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    x = Fraction(b1 * c2 - b2 * c1, det)
    y = Fraction(a2 * c1 - a1 * c2, det)
    return x, y


def oracle_feasible(rows) -> bool:
    """rows: iterable of (w0, w1, b, strict) with integer-valued entries."""
    rows = [
        (Fraction(w0), Fraction(w1), Fraction(b), bool(s)) for w0, w1, b, s in rows
    ]
    if not rows:
        return True
    # dense grid pre-pass (quarter steps over [-8, 8])
    steps = [Fraction(k, 4) for k in range(-32, 33)]
    for x in steps:
        for y in steps:
            if _satisfies(rows, x, y):
                return True
    # exact vertex enumeration inside the box
    lines = [(w0, w1, b) for w0, w1, b, _ in rows]
    lines += [
        (Fraction(1), Fraction(0), Fraction(BOX)),
        (Fraction(1), Fraction(0), Fraction(-BOX)),
        (Fraction(0), Fraction(1), Fraction(BOX)),
        (Fraction(0), Fraction(1), Fraction(-BOX)),
    ]
    vertices = set()
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            pt = _intersect(lines[i], lines[j])
            if pt is not None and _satisfies_relaxed(rows, *pt):
                vertices.add(pt)
    if not vertices:
        return False
    cx = sum(v[0] for v in vertices) / len(vertices)
    cy = sum(v[1] for v in vertices) / len(vertices)
    return _satisfies(rows, cx, cy)


def random_system(rng, max_rows: int = 6):
    """Random integer-coefficient rows with nonzero normals."""
    k = int(rng.integers(1, max_rows + 1))
    rows = []
    while len(rows) < k:
        w0, w1 = int(rng.integers(-3, 4)), int(rng.integers(-3, 4))
        if w0 == 0 and w1 == 0:
            continue
        rows.append((w0, w1, int(rng.integers(-3, 4)), bool(rng.integers(0, 2))))
    return rows
