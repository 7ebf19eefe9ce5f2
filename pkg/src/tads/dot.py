"""Deterministic Graphviz export of decision structures.

Nodes are emitted in ascending id order so snapshots are byte-stable. Inner
nodes show their inequality with 4 significant digits, solid edges lead to
the true child and dashed edges to the false child; leaves are boxed with
their affine function.
"""

from __future__ import annotations

from .feasibility import Halfspace, Sense
from .structure import Inner, Leaf, Tads

__all__ = ["format_terms", "format_halfspace", "to_dot"]


def format_terms(coeffs, const: float, digits: int = 4) -> str:
    parts = [f"{c:.{digits}g}·x{i}" for i, c in enumerate(coeffs)]
    parts.append(f"{const:.{digits}g}")
    return " + ".join(parts)


def format_halfspace(h: Halfspace, digits: int = 4) -> str:
    rel = ">= 0" if h.sense is Sense.GE else "< 0"
    return f"{format_terms(h.w, h.b, digits)} {rel}"


def to_dot(t: Tads, name: str = "tads") -> str:
    lines = [f"digraph {name} {{", f"  // root: n{t.root}"]
    for i, node in enumerate(t.nodes):
        if isinstance(node, Leaf):
            rows = "\\n".join(
                format_terms(node.fn.W[r], node.fn.b[r]) for r in range(node.fn.out_dim)
            )
            lines.append(f'  n{i} [shape=box, label="{rows}"];')
        else:
            lines.append(f'  n{i} [shape=ellipse, label="{format_halfspace(node.pred)}"];')
            lines.append(f"  n{i} -> n{node.hi} [style=solid];")
            lines.append(f"  n{i} -> n{node.lo} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
