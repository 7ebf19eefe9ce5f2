import json

import numpy as np
import pytest

import tads
from tads.network import (
    AffineStep,
    ConcreteConfig,
    ParseError,
    PartialReluStep,
    net_eval,
    net_eval_batch,
    parse_network,
    sos_run,
    sos_step,
)

from conftest import random_network


class TestParse:
    def test_xor_baseline_expansion(self, n_star):
        kinds = [type(s) for s in n_star.steps]
        assert kinds == [AffineStep, PartialReluStep, PartialReluStep, AffineStep]
        assert (n_star.steps[1].dim, n_star.steps[1].index) == (2, 1)
        assert (n_star.steps[2].dim, n_star.steps[2].index) == (2, 2)
        assert n_star.input_dim == 2 and n_star.output_dim == 1

    def test_empty_layer_list_is_identity(self):
        net = parse_network(json.dumps({"input_dim": 3, "layers": []}))
        assert net.steps == () and net.output_dim == 3
        x = np.array([1.0, -2.0, 0.5])
        assert np.array_equal(net_eval(net, x), x)

    def test_ragged_rows_name_the_layer(self):
        doc = {"input_dim": 2, "layers": [
            {"type": "affine", "W": [[1.0, 2.0], [1.0, 2.0, 3.0]], "b": [0.0, 0.0]}]}
        with pytest.raises(ParseError, match="layer 0: ragged"):
            parse_network(json.dumps(doc))

    def test_dimension_chain_break(self):
        doc = {"input_dim": 2, "layers": [
            {"type": "affine", "W": [[1.0, 2.0]], "b": [0.0]},
            {"type": "affine", "W": [[1.0, 2.0]], "b": [0.0]}]}
        with pytest.raises(ParseError, match="layer 1"):
            parse_network(json.dumps(doc))

    def test_bad_bias_length(self):
        doc = {"input_dim": 1, "layers": [
            {"type": "affine", "W": [[1.0]], "b": [0.0, 1.0]}]}
        with pytest.raises(ParseError, match="layer 0: b has length 2"):
            parse_network(json.dumps(doc))

    def test_unknown_layer_type(self):
        doc = {"input_dim": 1, "layers": [{"type": "sigmoid"}]}
        with pytest.raises(ParseError, match="unknown layer type"):
            parse_network(json.dumps(doc))

    def test_invalid_json(self):
        with pytest.raises(ParseError, match="invalid JSON"):
            parse_network("{not json")

    @pytest.mark.parametrize(
        "layer",
        [
            {"type": "affine", "W": [[1.0, 2.0]], "b": 3},
            {"type": "affine", "W": 7, "b": [1.0]},
            {"type": "affine", "W": [["a", "b"]], "b": [1.0]},
            "relu",
        ],
    )
    def test_malformed_layer_payloads(self, layer):
        doc = {"input_dim": 2, "layers": [layer]}
        with pytest.raises(ParseError, match="layer 0"):
            parse_network(json.dumps(doc))


class TestEval:
    def test_paper_point(self, n_star):
        assert net_eval(n_star, [1.0, 0.0]) == pytest.approx([1.0], abs=0)

    def test_absolute_difference(self, n_star):
        assert net_eval(n_star, [0.3, 0.8]) == pytest.approx([0.5])

    def test_origin(self, n_star):
        assert net_eval(n_star, [0.0, 0.0]) == pytest.approx([0.0], abs=0)

    def test_dimension_check(self, n_star):
        with pytest.raises(tads.DimensionError):
            net_eval(n_star, [1.0])


class TestStepSemantics:
    def test_relu_clamp_rule(self, n_star):
        cfg = ConcreteConfig(n_star.steps[2:], np.array([1.0, -1.0]))
        label, nxt = sos_step(cfg)
        assert label == "0"
        assert np.array_equal(nxt.x, [1.0, 0.0])
        assert len(nxt.remaining) == 1

    def test_relu_keep_rule(self, n_star):
        cfg = ConcreteConfig(n_star.steps[1:], np.array([1.0, -1.0]))
        label, nxt = sos_step(cfg)
        assert label == "1"
        assert np.array_equal(nxt.x, [1.0, -1.0])

    def test_affine_rule(self, n_star):
        cfg = ConcreteConfig(n_star.steps, np.array([1.0, 0.0]))
        label, nxt = sos_step(cfg)
        assert label == "true"
        assert np.array_equal(nxt.x, [1.0, -1.0])

    def test_keep_fires_on_exact_zero(self):
        cfg = ConcreteConfig((PartialReluStep(1, 1),), np.array([0.0]))
        label, _ = sos_step(cfg)
        assert label == "1"

    def test_run_label_word(self, n_star):
        y, word = sos_run(n_star, [1.0, 0.0])
        assert word == ("true", "1", "0", "true")
        assert np.array_equal(y, [1.0])

    def test_run_matches_iterated_steps(self, n_star):
        rng = np.random.default_rng(3)
        for x in rng.uniform(-1, 2, (25, 2)):
            cfg = ConcreteConfig(n_star.steps, x.copy())
            word = []
            while cfg.remaining:
                label, cfg = sos_step(cfg)
                word.append(label)
            y, w = sos_run(n_star, x)
            assert np.array_equal(cfg.x, y) and tuple(word) == w

    def test_empty_config_rejected(self):
        with pytest.raises(ValueError):
            sos_step(ConcreteConfig((), np.array([1.0])))


class TestAgreementProperties:
    def test_step_semantics_agree_with_eval(self):
        # 1,000 random networks (dims <= 5, depth <= 4 affine layers),
        # 100 points each: identical results, bit for bit
        for k in range(1000):
            rng = np.random.default_rng(k)
            depth = int(rng.integers(1, 5))
            dims = [int(d) for d in rng.integers(1, 6, depth)]
            n_in = int(rng.integers(1, 6))
            net = random_network(rng, n_in, dims)
            points = rng.uniform(-1.0, 1.0, (100, n_in))
            for x in points:
                y_eval = net_eval(net, x)
                y_sos, _word = sos_run(net, x)
                assert np.array_equal(y_eval, y_sos)

    def test_label_word_unique_per_input(self, n_star):
        rng = np.random.default_rng(11)
        for x in rng.uniform(-1, 2, (50, 2)):
            _, w1 = sos_run(n_star, x)
            _, w2 = sos_run(n_star, x)
            assert w1 == w2

    def test_relu_expansion_soundness(self):
        # a full ReLU evaluated as one max(0,.) equals the expanded sequence
        rng = np.random.default_rng(9)
        for _ in range(200):
            k = int(rng.integers(1, 7))
            x = rng.normal(size=k)
            expanded = x.copy()
            for i in range(1, k + 1):
                step = PartialReluStep(k, i)
                cfg = ConcreteConfig((step,), expanded)
                _, nxt = sos_step(cfg)
                expanded = nxt.x
            assert np.array_equal(expanded, np.maximum(x, 0.0))

    def test_batch_eval_matches_pointwise(self, trained_a):
        rng = np.random.default_rng(21)
        X = rng.random((200, 2))
        batch = net_eval_batch(trained_a, X)
        single = np.array([net_eval(trained_a, x) for x in X])
        assert np.abs(batch - single).max() <= 1e-12
