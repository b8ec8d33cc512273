"""Structural tests: evaluation, composition, stacking, measurement, IO."""
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from silunets import network as nw
from silunets.errors import (
    DomainError,
    OverflowGuardError,
    ParseError,
    WiringError,
)
from silunets.scalar import leading_coeff_square, silu


def hand_square_net(beta=0.1, k=2, a=0.0):
    """Three-neuron squaring net assembled directly from its closed form."""
    kk = leading_coeff_square(a)
    w = np.array([[beta**k], [-(beta**k)], [0.0]])
    b = np.array([a, a, a])
    g = (beta ** (-2 * k) / kk) * np.array([[1.0, 1.0, -2.0]])
    gb = np.array([-2.0 * silu(a) * beta ** (-2 * k) / kk])
    return nw.FeedForwardNet(
        1,
        (nw.DenseLayer(w, b, nw.SILU), nw.DenseLayer(g, gb, nw.IDENTITY)),
    )


def random_net(rng, input_dim, widths, out_dim):
    layers = []
    prev = input_dim
    for w in widths:
        layers.append(
            nw.DenseLayer(rng.normal(size=(w, prev)), rng.normal(size=w), nw.SILU)
        )
        prev = w
    layers.append(
        nw.DenseLayer(rng.normal(size=(out_dim, prev)), rng.normal(size=out_dim),
                      nw.IDENTITY)
    )
    return nw.FeedForwardNet(input_dim, tuple(layers))


class TestLayersAndEval:
    def test_forward_pass_matches_manual_loop(self):
        rng = np.random.default_rng(42)
        net = random_net(rng, 3, [5, 4], 2)
        x = rng.normal(size=(20, 3))
        got = nw.evaluate(net, x)
        ref = x.copy()
        for layer in net.layers:
            z = ref @ layer.weights.T + layer.bias
            ref = nw.silu_array(z) if layer.activation == nw.SILU else z
        np.testing.assert_allclose(got, ref, rtol=0, atol=1e-14)

    def test_single_sample_shape(self):
        net = hand_square_net()
        out = nw.evaluate(net, np.array([0.5]))
        assert out.shape == (1,)
        batch = nw.evaluate(net, np.array([[0.5]]))
        assert batch.shape == (1, 1)
        np.testing.assert_array_equal(out, batch[0])

    def test_hand_square_tracks_square(self):
        net = hand_square_net(beta=0.1, k=2)
        x = np.linspace(-1, 1, 101).reshape(-1, 1)
        err = np.max(np.abs(nw.evaluate(net, x)[:, 0] - x[:, 0] ** 2))
        # leading residual is x^4 * beta^(2k) / 12 at shift 0
        assert err == pytest.approx(1e-4 / 12, rel=1e-3)

    def test_dimension_mismatch_rejected(self):
        net = hand_square_net()
        with pytest.raises(DomainError):
            nw.evaluate(net, np.zeros((4, 2)))

    def test_layer_validation(self):
        with pytest.raises(DomainError):
            nw.DenseLayer(np.array([[np.inf]]), [0.0], nw.SILU)
        with pytest.raises(DomainError):
            nw.DenseLayer(np.eye(2), [0.0], nw.SILU)
        with pytest.raises(DomainError):
            nw.DenseLayer(np.eye(2), [0.0, 1.0], "relu")
        with pytest.raises(DomainError):
            nw.FeedForwardNet(
                1,
                (
                    nw.DenseLayer(np.ones((2, 1)), np.zeros(2), nw.SILU),
                    nw.DenseLayer(np.ones((1, 3)), np.zeros(1), nw.IDENTITY),
                ),
            )

    def test_layers_are_immutable(self):
        net = hand_square_net()
        with pytest.raises((AttributeError, ValueError)):
            net.layers[0].weights[0, 0] = 5.0
        with pytest.raises(AttributeError):
            net.layers[0].activation = nw.IDENTITY

    def test_overflow_guard_names_layer(self):
        net = nw.FeedForwardNet(
            1,
            (
                nw.DenseLayer(np.array([[1e200]]), [0.0], nw.SILU),
                nw.DenseLayer(np.array([[1e200]]), [0.0], nw.IDENTITY),
            ),
        )
        with pytest.raises(OverflowGuardError) as exc:
            nw.evaluate(net, np.array([[1e150]]))
        assert exc.value.layer_index == 0
        assert "layer 0" in str(exc.value)

    def test_silu_array_matches_scalar(self):
        z = np.linspace(-30, 30, 301)
        ref = np.array([silu(v) for v in z])
        np.testing.assert_allclose(nw.silu_array(z), ref, rtol=0, atol=1e-15)


class TestCompose:
    def test_affine_inner_is_exact(self):
        net = hand_square_net()
        comp = nw.compose(net, nw.affine_net([[2.0]], [0.3]))
        x = np.linspace(-1, 1, 41).reshape(-1, 1)
        np.testing.assert_allclose(
            nw.evaluate(comp, x), nw.evaluate(net, 2 * x + 0.3),
            rtol=1e-12, atol=1e-12,
        )

    def test_carry_pair_faithful_on_random_inputs(self):
        rng = np.random.default_rng(42)
        inner = random_net(rng, 2, [6, 5], 1)
        outer = random_net(rng, 3, [4], 1)
        # outer reads (inner output, raw x1, raw x0)
        comp = nw.compose(outer, inner, wiring=[0, 2, 1])
        pts = rng.uniform(-2, 2, size=(1000, 2))
        inner_out = nw.evaluate(inner, pts)[:, 0]
        want = nw.evaluate(
            outer, np.column_stack([inner_out, pts[:, 1], pts[:, 0]])
        )
        got = nw.evaluate(comp, pts)
        scale = 1 + np.max(np.abs(want))
        assert np.max(np.abs(got - want)) <= 1e-13 * scale

    def test_default_wiring_consumes_inner_outputs(self):
        rng = np.random.default_rng(7)
        inner = random_net(rng, 1, [3], 2)
        outer = random_net(rng, 2, [3], 1)
        comp = nw.compose(outer, inner)
        pts = rng.uniform(-1, 1, size=(50, 1))
        want = nw.evaluate(outer, nw.evaluate(inner, pts))
        np.testing.assert_allclose(nw.evaluate(comp, pts), want, atol=1e-12)

    def test_depths_add_as_hidden_layers(self):
        rng = np.random.default_rng(3)
        inner = random_net(rng, 1, [3, 3], 1)  # 2 hidden
        outer = random_net(rng, 1, [4], 1)     # 1 hidden
        comp = nw.compose(outer, inner)
        silu_count = sum(1 for l in comp.layers if l.activation == nw.SILU)
        assert silu_count == 3

    def test_bad_wiring_rejected(self):
        net = hand_square_net()
        with pytest.raises(WiringError):
            nw.compose(net, net, wiring=[0, 1])
        with pytest.raises(WiringError):
            nw.compose(net, net, wiring=[2])
        with pytest.raises(WiringError):
            nw.compose(net, net, wiring=[-1])

    def test_composing_preserves_carried_input_exactly(self):
        # a carried channel must come back essentially bit-exact
        rng = np.random.default_rng(11)
        inner = random_net(rng, 1, [8], 1)
        passthrough = nw.affine_net([[0.0, 1.0]], [0.0])  # selects raw input
        comp = nw.compose(passthrough, inner, wiring=[0, 1])
        x = rng.uniform(-5, 5, size=(200, 1))
        got = nw.evaluate(comp, x)[:, 0]
        assert np.max(np.abs(got - x[:, 0])) <= 1e-13 * 5


class TestStackAndCombine:
    def test_stack_outputs_concatenate(self):
        rng = np.random.default_rng(42)
        a = random_net(rng, 2, [4], 1)
        b = random_net(rng, 2, [3, 3], 2)
        c = nw.affine_net([[1.0, -1.0]], [0.25])
        stacked = nw.stack_parallel([a, b, c])
        assert stacked.output_dim == 4
        pts = rng.uniform(-1, 1, size=(200, 2))
        want = np.column_stack(
            [nw.evaluate(a, pts), nw.evaluate(b, pts), nw.evaluate(c, pts)]
        )
        got = nw.evaluate(stacked, pts)
        scale = 1 + np.max(np.abs(want))
        assert np.max(np.abs(got - want)) <= 1e-13 * scale

    def test_stack_depth_is_max_depth(self):
        rng = np.random.default_rng(5)
        a = random_net(rng, 1, [2], 1)
        b = random_net(rng, 1, [2, 2, 2], 1)
        stacked = nw.stack_parallel([a, b])
        assert sum(1 for l in stacked.layers if l.activation == nw.SILU) == 3

    def test_stack_rejects_mixed_input_dims(self):
        rng = np.random.default_rng(5)
        with pytest.raises(WiringError):
            nw.stack_parallel([random_net(rng, 1, [2], 1),
                               random_net(rng, 2, [2], 1)])

    def test_affine_combination(self):
        rng = np.random.default_rng(42)
        a = random_net(rng, 1, [4], 1)
        b = random_net(rng, 1, [3, 2], 1)
        combo = nw.affine_combination([a, b], [2.0, -0.5], constant=1.25)
        pts = rng.uniform(-1, 1, size=(100, 1))
        want = (
            2.0 * nw.evaluate(a, pts)[:, 0]
            - 0.5 * nw.evaluate(b, pts)[:, 0]
            + 1.25
        )
        got = nw.evaluate(combo, pts)[:, 0]
        np.testing.assert_allclose(got, want, rtol=0, atol=1e-12)

    def test_affine_combination_guards(self):
        rng = np.random.default_rng(1)
        a = random_net(rng, 1, [2], 1)
        with pytest.raises(WiringError):
            nw.affine_combination([a], [1.0, 2.0])
        with pytest.raises(WiringError):
            nw.affine_combination([random_net(rng, 1, [2], 2)], [1.0])


class TestSummary:
    def test_square_net_counts(self):
        sm = nw.summary(hand_square_net())
        assert sm.depth == 2
        assert sm.max_width == 3
        assert sm.param_count == 10
        assert sm.nonzero_param_count == 5

    def test_nonzero_counts_sparse_and_dense_agree(self):
        rng = np.random.default_rng(9)
        w = rng.normal(size=(6, 4))
        w[rng.random(size=w.shape) < 0.5] = 0.0
        import scipy.sparse as sp

        dense = nw.FeedForwardNet(
            4, (nw.DenseLayer(w, np.zeros(6), nw.IDENTITY),)
        )
        sparse = nw.FeedForwardNet(
            4, (nw.DenseLayer(sp.csr_matrix(w), np.zeros(6), nw.IDENTITY),)
        )
        assert nw.summary(dense).nonzero_param_count == \
            nw.summary(sparse).nonzero_param_count
        assert nw.summary(dense).param_count == nw.summary(sparse).param_count
        assert nw.summary(dense).max_abs_weight == \
            nw.summary(sparse).max_abs_weight


class TestSupError:
    def test_exact_affine_has_zero_error(self):
        net = nw.affine_net([[3.0]], [-1.0])
        rep = nw.sup_error(net, lambda p: 3 * p[:, 0] - 1, (-2.0, 2.0))
        assert rep.sup_error == 0.0

    def test_refinement_sharpens_peak(self):
        # sin is badly sampled on a coarse grid; refinement must improve it
        net = nw.constant_net(0.0)
        target = lambda p: np.sin(50 * p[:, 0])
        coarse = nw.sup_error(net, target, (0.0, 1.0), grid_per_dim=37,
                              refine_levels=0)
        refined = nw.sup_error(net, target, (0.0, 1.0), grid_per_dim=37,
                               refine_levels=3)
        assert refined.sup_error >= coarse.sup_error
        assert refined.sup_error == pytest.approx(1.0, abs=1e-4)

    def test_bands_mask_and_refinement_respects_them(self):
        net = nw.constant_net(0.0)
        # spike inside the band must be invisible
        target = lambda p: np.where(np.abs(p[:, 0] - 0.5) < 0.05, 100.0, 0.01)
        rep = nw.sup_error(net, target, (0.0, 1.0),
                           excluded_bands=[(0.4, 0.6)])
        assert rep.sup_error == pytest.approx(0.01)

    def test_band_axis_form_in_2d(self):
        net = nw.affine_net([[1.0, 1.0]], [0.0])
        target = lambda p: p[:, 0] + p[:, 1]
        rep = nw.sup_error(net, target, [(-1, 1), (-1, 1)],
                           excluded_bands=[(1, -0.5, 0.5)])
        assert rep.sup_error == 0.0

    def test_full_cover_raises(self):
        net = nw.constant_net(0.0)
        with pytest.raises(DomainError):
            nw.sup_error(net, lambda p: p[:, 0], (0.0, 1.0),
                         excluded_bands=[(-1.0, 2.0)])

    def test_bad_domains_rejected(self):
        net = nw.constant_net(0.0)
        with pytest.raises(DomainError):
            nw.sup_error(net, lambda p: p[:, 0], (1.0, 1.0))
        with pytest.raises(DomainError):
            nw.sup_error(net, lambda p: p[:, 0], [(0, 1), (0, 1)])

    def test_deterministic_repeat(self):
        rng = np.random.default_rng(42)
        net = random_net(rng, 1, [5], 1)
        target = lambda p: np.tanh(p[:, 0])
        r1 = nw.sup_error(net, target, (-1.0, 1.0))
        r2 = nw.sup_error(net, target, (-1.0, 1.0))
        assert r1 == r2

    def test_csv_fields_are_strings(self):
        net = nw.constant_net(0.0)
        rep = nw.sup_error(net, lambda p: p[:, 0] * 0, (0.0, 1.0))
        row = rep.csv_fields()
        assert set(row) == {
            "sup_error", "argmax", "grid_per_dim", "refine_levels",
            "domain", "excluded_bands", "n_evaluated",
        }
        assert all(isinstance(v, str) for v in row.values())


class TestSerialization:
    def test_round_trip_is_bitwise(self):
        rng = np.random.default_rng(42)
        net = random_net(rng, 2, [7, 3], 2)
        text = nw.serialize(net)
        back = nw.deserialize(text)
        assert back.input_dim == net.input_dim
        for a, b in zip(net.layers, back.layers):
            np.testing.assert_array_equal(a.dense_weights(), b.dense_weights())
            np.testing.assert_array_equal(a.bias, b.bias)
            assert a.activation == b.activation
        assert nw.serialize(back) == text

    def test_schema_shape(self):
        doc = json.loads(nw.serialize(hand_square_net()))
        assert doc["version"] == nw.SCHEMA_VERSION
        assert doc["input_dim"] == 1
        first = doc["layers"][0]
        assert first["rows"] == 3 and first["cols"] == 1
        assert len(first["weights"]) == 3
        assert first["activation"] == "silu"

    def test_parse_errors_carry_position(self):
        with pytest.raises(ParseError) as exc:
            nw.deserialize('{"version": "silunets-net/1", ')
        assert "byte offset" in str(exc.value)

    @pytest.mark.parametrize(
        "mutation",
        [
            lambda d: d.update(version="other/9"),
            lambda d: d.update(input_dim=0),
            lambda d: d.update(layers=[]),
            lambda d: d["layers"][0].update(activation="relu"),
            lambda d: d["layers"][0].update(weights=[1.0]),
            lambda d: d["layers"][0].update(bias=["x", "y", "z"]),
            lambda d: d["layers"][0].update(rows="3"),
        ],
    )
    def test_malformed_documents_rejected(self, mutation):
        doc = json.loads(nw.serialize(hand_square_net()))
        mutation(doc)
        with pytest.raises(ParseError):
            nw.deserialize(json.dumps(doc))

    def test_inconsistent_chain_rejected(self):
        doc = json.loads(nw.serialize(hand_square_net()))
        doc["input_dim"] = 2
        with pytest.raises(ParseError):
            nw.deserialize(json.dumps(doc))

    def test_non_finite_rejected(self):
        doc = json.loads(nw.serialize(hand_square_net()))
        doc["layers"][0]["weights"][0] = 1e999  # becomes inf on parse
        with pytest.raises(ParseError):
            nw.deserialize(json.dumps(doc).replace("Infinity", "1e999"))


class TestCarryIdentityProperty:
    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
    def test_pair_readout_recovers_value(self, v):
        # the algebraic identity behind every carried channel
        recovered = silu(v) - silu(-v)
        assert recovered == pytest.approx(v, rel=1e-14, abs=1e-300)

    @settings(max_examples=50, deadline=None)
    @given(
        st.integers(min_value=1, max_value=3),
        st.integers(min_value=1, max_value=3),
    )
    def test_compose_random_shapes(self, inner_hidden, outer_hidden):
        rng = np.random.default_rng(inner_hidden * 7 + outer_hidden)
        inner = random_net(rng, 2, [3] * inner_hidden, 1)
        outer = random_net(rng, 2, [3] * outer_hidden, 1)
        comp = nw.compose(outer, inner, wiring=[0, 1])
        pts = rng.uniform(-1, 1, size=(64, 2))
        want = nw.evaluate(
            outer,
            np.column_stack([nw.evaluate(inner, pts)[:, 0], pts[:, 0]]),
        )
        got = nw.evaluate(comp, pts)
        scale = 1 + np.max(np.abs(want))
        assert np.max(np.abs(got - want)) <= 1e-12 * scale
