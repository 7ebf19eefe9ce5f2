"""Hand-built and trained XOR regression networks in the shared JSON format."""

from .train import FixtureSpec, TrainingFailure, train_xor, corner_errors
from .emit import baseline_network, network_json, emit_baseline

__version__ = "0.1.0"
