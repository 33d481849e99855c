import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pathgauge.core.exceptions import (
    InvalidNormSpec,
    NonPositiveScale,
    NotHiddenNeuron,
    UnknownNeuron,
)
from pathgauge.models.network_models import Parameters
from pathgauge.models.norm_models import NormSpec
from pathgauge.services import forward_services, norm_services, path_services, rescale_services
from pathgauge.utils import generators


def test_normalize_diamond(d1):
    arch, params = d1
    outcome = rescale_services.normalize(arch, params, 1.0)
    assert outcome.scales == pytest.approx({"h1": 2.5, "h2": 3.0})
    assert outcome.zero_neurons == []

    normalized = outcome.params
    assert normalized.weight("u", "h1") == pytest.approx(0.8)
    assert normalized.bias("h1") == pytest.approx(0.2)
    assert normalized.weight("h1", "o") == pytest.approx(2.5)
    assert normalized.weight("u", "h2") == pytest.approx(-1.0)
    assert normalized.weight("h2", "o") == pytest.approx(3.0)
    assert rescale_services.is_normalized(arch, normalized, 1.0)
    assert not rescale_services.is_normalized(arch, params, 1.0)


def test_normalize_is_idempotent(d1):
    arch, params = d1
    once = rescale_services.normalize(arch, params, 2.0).params
    twice = rescale_services.normalize(arch, once, 2.0)
    assert twice.scales == pytest.approx({"h1": 1.0, "h2": 1.0}, rel=1e-12)
    for edge, weight in once.weights.items():
        assert twice.params.weights[edge] == pytest.approx(weight, rel=1e-12)


def test_zero_neuron_silences_outgoing_weights():
    arch, params = generators.zero_path_norm_network()
    params = params.replace(weights={("x", "h2"): 0.0}, biases={"h2": 0.0})
    outcome = rescale_services.normalize(arch, params, 1.0)
    assert outcome.zero_neurons == ["h2"]
    assert outcome.params.weight("h2", "y") == 0.0
    assert rescale_services.is_normalized(arch, outcome.params, 1.0)


def test_zero_parameters_are_normalized(d1):
    arch, _ = d1
    assert rescale_services.is_normalized(arch, Parameters.zeros(arch), 1.0)


def test_apply_rescaling(d1):
    arch, params = d1
    rescaled = rescale_services.apply_rescaling(arch, params, "h1", 2.0)
    assert rescaled.weight("u", "h1") == 4.0
    assert rescaled.bias("h1") == 1.0
    assert rescaled.weight("h1", "o") == 0.5
    assert rescale_services.apply_rescaling(arch, params, "h1", 1.0) is params

    for x in (-2.0, 0.3, 1.0, 5.0):
        assert forward_services.realize(arch, rescaled, [x]) == pytest.approx(
            forward_services.realize(arch, params, [x])
        )


def test_apply_rescaling_errors(d1):
    arch, params = d1
    with pytest.raises(UnknownNeuron):
        rescale_services.apply_rescaling(arch, params, "nope", 2.0)
    with pytest.raises(NotHiddenNeuron):
        rescale_services.apply_rescaling(arch, params, "o", 2.0)
    with pytest.raises(NotHiddenNeuron):
        rescale_services.apply_rescaling(arch, params, "u", 2.0)
    for lam in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(NonPositiveScale):
            rescale_services.apply_rescaling(arch, params, "h1", lam)


def test_invalid_exponent(d1):
    arch, params = d1
    with pytest.raises(InvalidNormSpec):
        rescale_services.normalize(arch, params, 0.0)
    with pytest.raises(InvalidNormSpec):
        rescale_services.is_normalized(arch, params, -2.0)


@pytest.mark.parametrize("q", [1.0, 2.0, math.inf])
def test_normalization_preserves_function_and_lifting(random_nets, q):
    rng = np.random.default_rng(11)
    for arch, params in random_nets[:200]:
        normalized = rescale_services.normalize(arch, params, q).params
        assert rescale_services.is_normalized(arch, normalized, q)

        X = rng.uniform(-3.0, 3.0, size=(100, arch.d_in))
        np.testing.assert_allclose(
            forward_services.batch_realize(arch, normalized, X),
            forward_services.batch_realize(arch, params, X),
            rtol=1e-9,
            atol=1e-9,
        )
        np.testing.assert_allclose(
            path_services.path_lifting(arch, normalized).values,
            path_services.path_lifting(arch, params).values,
            rtol=1e-12,
        )


@pytest.mark.parametrize("q", [1.0, 2.0, math.inf])
def test_normalization_is_idempotent_on_random_networks(random_nets, q):
    for arch, params in random_nets[:200]:
        once = rescale_services.normalize(arch, params, q).params
        twice = rescale_services.normalize(arch, once, q).params
        edges = sorted(once.weights)
        np.testing.assert_allclose(
            [twice.weights[edge] for edge in edges], [once.weights[edge] for edge in edges], rtol=1e-12
        )
        ids = sorted(once.biases)
        np.testing.assert_allclose(
            [twice.biases[v] for v in ids], [once.biases[v] for v in ids], rtol=1e-12
        )


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), lam=st.floats(0.01, 100.0))
def test_path_norm_is_rescaling_invariant(seed, lam):
    arch, params = generators.random_network(np.random.default_rng(seed))
    if not arch.hidden:
        return
    v = arch.hidden[seed % len(arch.hidden)]
    rescaled = rescale_services.apply_rescaling(arch, params, v, lam)
    for q in (1.0, 2.0):
        spec = NormSpec(q, 2.0)
        assert norm_services.path_norm_fast(arch, rescaled, spec).value == pytest.approx(
            norm_services.path_norm_fast(arch, params, spec).value, rel=1e-9, abs=1e-12
        )
