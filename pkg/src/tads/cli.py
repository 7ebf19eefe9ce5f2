"""Command-line surface for every pipeline stage.

Exit codes: 0 on success (and when a checked property holds), 1 when an
equivalence/similarity check is violated (a report is still produced), 2 on
usage, IO, or format errors. Inputs holding a "layers" key are network JSON
and are converted on the fly where a decision structure is needed; inputs
holding "nodes" are structure JSON.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import analysis, dot
from .affine import DimensionError
from .analysis import (
    check_epsilon_similarity,
    check_equivalence,
    class_characterization,
    compare_classifiers,
    make_threshold_classifier,
)
from .algebra import tads_add, tads_compose, tads_scale, tads_sub
from .network import ParseError, net_eval, network_from_dict
from .structure import (
    Tads,
    TadsFormatError,
    deserialize_tads,
    enumerate_regions,
    net_to_tads,
    semantic_reduce,
    serialize_tads,
    tads_eval,
    tads_eval_batch,
    vacuity_reduce,
)

_ERRORS = (ParseError, TadsFormatError, DimensionError, ValueError, OSError)


def _read_doc(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: expected a JSON object")
    return doc


def _load_any(path: str):
    """Returns ('network', Network) or ('tads', Tads), sniffed by keys."""
    doc = _read_doc(path)
    if "layers" in doc:
        try:
            return "network", network_from_dict(doc)
        except ParseError as exc:
            raise ParseError(f"{path}: {exc}") from None
    if "nodes" in doc:
        try:
            return "tads", deserialize_tads(json.dumps(doc))
        except TadsFormatError as exc:
            raise TadsFormatError(f"{path}: {exc}") from None
    raise ParseError(f"{path}: neither a network ('layers') nor a structure ('nodes')")


def _load_tads(path: str, prune: bool = True) -> Tads:
    kind, obj = _load_any(path)
    if kind == "network":
        return net_to_tads(obj, prune_infeasible=prune)
    return obj


def _write(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(path).write_text(text)


def _parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")], dtype=np.float64)
    except ValueError:
        raise ValueError(f"--input must be comma-separated decimals, got {text!r}")


def _fmt(values: np.ndarray) -> str:
    return ",".join(f"{float(v):.12g}" for v in values)


def _region_text(pc) -> list[str]:
    return [dot.format_halfspace(h) for h in pc.constraints]


# ---------------------------------------------------------------- commands


def _cmd_convert(args) -> int:
    kind, obj = _load_any(args.input)
    t = net_to_tads(obj, prune_infeasible=not args.no_prune) if kind == "network" else obj
    _write(args.output, serialize_tads(t))
    return 0


def _cmd_eval(args) -> int:
    x = _parse_vector(args.input_point)
    kind, obj = _load_any(args.input)
    y = net_eval(obj, x) if kind == "network" else tads_eval(obj, x)
    print(_fmt(y))
    return 0


def _cmd_reduce(args) -> int:
    t = _load_tads(args.input)
    t = semantic_reduce(vacuity_reduce(t), atol=args.atol)
    _write(args.output, serialize_tads(t))
    return 0


def _cmd_regions(args) -> int:
    t = _load_tads(args.input)
    print(len(enumerate_regions(t, only_full_dim=args.full_dim)))
    return 0


def _cmd_add(args) -> int:
    result = tads_add(_load_tads(args.left), _load_tads(args.right))
    _write(args.output, serialize_tads(result))
    return 0


def _cmd_sub(args) -> int:
    result = tads_sub(_load_tads(args.left), _load_tads(args.right))
    _write(args.output, serialize_tads(result))
    return 0


def _cmd_scale(args) -> int:
    result = tads_scale(args.factor, _load_tads(args.input))
    _write(args.output, serialize_tads(result))
    return 0


def _cmd_compose(args) -> int:
    result = tads_compose(_load_tads(args.first), _load_tads(args.second))
    _write(args.output, serialize_tads(result))
    return 0


def _cmd_equiv(args) -> int:
    report = check_equivalence(_load_tads(args.left), _load_tads(args.right), args.atol)
    if report.equivalent:
        print(f"equivalent (atol {args.atol:g})")
    else:
        print(f"not equivalent (atol {args.atol:g}): "
              f"{len(report.witness_regions)} witness regions")
        for w in report.witness_regions:
            print(f"  at {_fmt(w.point)}: difference {_fmt(w.difference(w.point))}")
    if args.output:
        doc = {
            "equivalent": report.equivalent,
            "atol": args.atol,
            "witnesses": [
                {
                    "point": [float(v) for v in w.point],
                    "difference_W": w.difference.W.tolist(),
                    "difference_b": w.difference.b.tolist(),
                    "region": _region_text(w.region),
                }
                for w in report.witness_regions
            ],
        }
        Path(args.output).write_text(json.dumps(doc, indent=2))
    return 0 if report.equivalent else 1


def _cmd_epsilon(args) -> int:
    report = check_epsilon_similarity(
        _load_tads(args.left), _load_tads(args.right), args.epsilon
    )
    if report.similar:
        print(f"similar within epsilon {args.epsilon:g}")
    else:
        print(f"not similar within epsilon {args.epsilon:g}: "
              f"{len(report.violation_regions)} violation regions")
        for v in report.violation_regions:
            print(f"  at {_fmt(v.point)}: excess {v.excess:.6g}")
    if args.output:
        doc = {
            "epsilon": args.epsilon,
            "similar": report.similar,
            "violations": [
                {
                    "point": [float(x) for x in v.point],
                    "excess": v.excess,
                    "region": _region_text(v.region),
                }
                for v in report.violation_regions
            ],
        }
        Path(args.output).write_text(json.dumps(doc, indent=2))
    return 0 if report.similar else 1


def _cmd_classify(args) -> int:
    result = make_threshold_classifier(_load_tads(args.input), args.threshold)
    _write(args.output, serialize_tads(result))
    return 0


def _cmd_characterize(args) -> int:
    regions = class_characterization(_load_tads(args.input), args.value)
    print(f"{len(regions)} regions for class {args.value:g}")
    for pc in regions:
        print("  " + (" and ".join(_region_text(pc)) if len(pc) else "all inputs"))
    if args.output:
        doc = {
            "class_value": args.value,
            "regions": [_region_text(pc) for pc in regions],
        }
        Path(args.output).write_text(json.dumps(doc, indent=2))
    return 0


def _cmd_compare_classifiers(args) -> int:
    agreement, signed = compare_classifiers(
        _load_tads(args.left), _load_tads(args.right)
    )
    disagree = [
        pc
        for pc, fn in enumerate_regions(agreement)
        if abs(float(fn.b[0])) <= 0.5  # constant-0 leaves mark disagreement
    ]
    print(f"{len(disagree)} disagreement regions")
    if args.agreement_out:
        Path(args.agreement_out).write_text(serialize_tads(agreement))
    if args.diff_out:
        Path(args.diff_out).write_text(serialize_tads(signed))
    return 0


def _cmd_export_dot(args) -> int:
    _write(args.output, dot.to_dot(_load_tads(args.input)))
    return 0


def _cmd_grid(args) -> int:
    t = _load_tads(args.input)
    parts = [float(v) for v in args.bounds.split(",")]
    if len(parts) == 2:
        bounds = (parts[0], parts[1])
    elif len(parts) == 4:
        bounds = ((parts[0], parts[1]), (parts[2], parts[3]))
    else:
        raise ValueError("--bounds takes 'lo,hi' or 'lo0,hi0,lo1,hi1'")
    if args.jobs > 1:
        lines = _parallel_grid(t, bounds, args.steps, args.jobs)
    else:
        lines = list(analysis.grid_dump(t, bounds, args.steps))
    _write(args.output, "\n".join(lines) + "\n")
    return 0


def _parallel_grid(t: Tads, bounds, steps: int, jobs: int) -> list[str]:
    # byte-identical to the serial dump: the same x0-slices, fanned out
    # across threads over the frozen arena
    if t.in_dim != 2 or t.out_dim != 1:
        raise DimensionError(f"grid dump requires type (2, 1), got {t.type}")
    axes = analysis.grid_axes(bounds, steps)
    lines = ["x0,x1,value"]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        for chunk in pool.map(
            lambda x0: analysis.grid_slice_rows(t, float(x0), axes[1]), axes[0]
        ):
            lines.extend(chunk)
    return lines


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tads",
        description="Transform ReLU networks into decision structures and "
        "run exact global analyses on them.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("convert", _cmd_convert, "network JSON -> structure JSON")
    sp.add_argument("input")
    sp.add_argument("-o", "--output", default=None)
    sp.add_argument("--no-prune", action="store_true",
                    help="keep branches with unsatisfiable path conditions")

    sp = add("eval", _cmd_eval, "evaluate a network or structure at a point")
    sp.add_argument("input")
    sp.add_argument("--input", dest="input_point", required=True,
                    metavar="X0,X1,...", help="comma-separated decimals")

    sp = add("reduce", _cmd_reduce, "vacuity + hash-consing reduction")
    sp.add_argument("input")
    sp.add_argument("-o", "--output", default=None)
    sp.add_argument("--atol", type=float, default=1e-9)

    sp = add("regions", _cmd_regions, "count feasible regions")
    sp.add_argument("input")
    sp.add_argument("--full-dim", action="store_true",
                    help="count only regions with nonempty interior")

    for name, func in (("add", _cmd_add), ("sub", _cmd_sub)):
        sp = add(name, func, f"pointwise {name} of two structures")
        sp.add_argument("left")
        sp.add_argument("right")
        sp.add_argument("-o", "--output", default=None)

    sp = add("scale", _cmd_scale, "scale every leaf by a factor")
    sp.add_argument("input")
    sp.add_argument("--factor", type=float, required=True)
    sp.add_argument("-o", "--output", default=None)

    sp = add("compose", _cmd_compose, "apply FIRST, then SECOND")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("-o", "--output", default=None)

    sp = add("equiv", _cmd_equiv, "semantic equivalence (exit 1 when violated)")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("--atol", type=float, default=1e-9)
    sp.add_argument("-o", "--output", default=None, help="write a JSON report")

    sp = add("epsilon", _cmd_epsilon, "epsilon-similarity (exit 1 when violated)")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("-o", "--output", default=None, help="write a JSON report")

    sp = add("classify", _cmd_classify, "threshold classifier from a scalar output")
    sp.add_argument("input")
    sp.add_argument("--threshold", type=float, required=True)
    sp.add_argument("-o", "--output", default=None)

    sp = add("characterize", _cmd_characterize, "regions of one class value")
    sp.add_argument("input")
    sp.add_argument("--value", type=float, required=True)
    sp.add_argument("-o", "--output", default=None, help="write regions as JSON")

    sp = add("compare-classifiers", _cmd_compare_classifiers,
             "agreement and signed difference of two classifiers")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("--agreement-out", default=None)
    sp.add_argument("--diff-out", default=None)

    sp = add("export-dot", _cmd_export_dot, "Graphviz view of a structure")
    sp.add_argument("input")
    sp.add_argument("-o", "--output", default=None)

    sp = add("grid", _cmd_grid, "CSV x0,x1,value over a uniform grid")
    sp.add_argument("input")
    sp.add_argument("--bounds", default="0,1",
                    help="'lo,hi' for both axes or 'lo0,hi0,lo1,hi1'")
    sp.add_argument("--steps", type=int, default=101)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("-o", "--output", default=None)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
