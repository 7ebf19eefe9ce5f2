"""Batch entry points: emit the hand-built baseline or train fixtures.

`train` reads its settings from flags or a small JSON config file with the
fields {"seed", "widths", "epochs", "learning_rate"}. Exits nonzero with the
list of seeds tried when training never meets the corner bar.
"""

from __future__ import annotations

import argparse
import json
import sys

from .emit import baseline_network, mlp_layers, network_json
from .train import FixtureSpec, TrainingFailure, corner_errors, forward, train_xor


def _cmd_baseline(args) -> int:
    text = baseline_network()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_train(args) -> int:
    settings = {}
    if args.config:
        with open(args.config) as fh:
            settings = json.load(fh)
    if args.seed is not None:
        settings["seed"] = args.seed
    if args.epochs is not None:
        settings["epochs"] = args.epochs
    if "seed" not in settings:
        print("error: a seed is required (--seed or config)", file=sys.stderr)
        return 2
    if "widths" in settings:
        settings["widths"] = tuple(settings["widths"])
    try:
        spec = FixtureSpec(**settings)
    except (TypeError, ValueError) as exc:
        print(f"error: bad settings: {exc}", file=sys.stderr)
        return 2
    try:
        params, seed_used = train_xor(spec)
    except TrainingFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    errs = corner_errors(lambda X: forward(params, X))
    name = args.name or f"xor_trained_seed{spec.seed}"
    text = network_json(name, 2, mlp_layers(params))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(
        f"trained {name}: seed {seed_used}, max corner error {errs.max():.4f}",
        file=sys.stderr,
    )
    return 0


def main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="xor-fixtures",
                                description="Generate XOR regression fixtures.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("baseline", help="emit the hand-built |x - y| network")
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=_cmd_baseline)

    sp = sub.add_parser("train", help="train one fixture network")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--epochs", type=int, default=None)
    sp.add_argument("--config", default=None, help="JSON settings file")
    sp.add_argument("--name", default=None)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=_cmd_train)

    args = p.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
