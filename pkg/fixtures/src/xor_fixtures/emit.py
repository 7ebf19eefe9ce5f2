"""Network JSON export.

The format is the one the analysis tooling ingests: doubles only, `W` stored
row-major (out_dim rows of in_dim columns), full ReLU layers written as
{"type": "relu"} with no parameters. Serialization is deterministic so that
identical parameters produce byte-identical files.
"""

from __future__ import annotations

import json


def network_json(name: str, input_dim: int, layers: list[dict]) -> str:
    doc = {"name": name, "input_dim": input_dim, "layers": layers}
    return json.dumps(doc, indent=2) + "\n"


def mlp_layers(params) -> list[dict]:
    """Alternate affine and relu layers; the last affine has no activation."""
    layers: list[dict] = []
    last = len(params) - 1
    for i, (W, b) in enumerate(params):
        layers.append(
            {"type": "affine", "W": [list(map(float, row)) for row in W],
             "b": [float(v) for v in b]}
        )
        if i != last:
            layers.append({"type": "relu"})
    return layers


def baseline_network() -> str:
    """The two-region solution |x - y| written as a network."""
    layers = [
        {"type": "affine", "W": [[1.0, -1.0], [-1.0, 1.0]], "b": [0.0, 0.0]},
        {"type": "relu"},
        {"type": "affine", "W": [[1.0, 1.0]], "b": [0.0]},
    ]
    return network_json("xor_baseline", 2, layers)


def emit_baseline(path: str) -> None:
    with open(path, "w") as fh:
        fh.write(baseline_network())
