import math

import numpy as np
import pytest

from pathgauge.core.exceptions import InvalidNormSpec
from pathgauge.models.network_models import Activation, Architecture, Neuron, Parameters
from pathgauge.models.norm_models import NormSpec
from pathgauge.models.path_models import Path
from pathgauge.services import forward_services, norm_services, path_services, rescale_services
from pathgauge.utils import generators

GRID = [(q, r) for q in (1.0, 2.0, 4.0) for r in (1.0, 2.0, math.inf)]


def close(a, b, rel=1e-9):
    return math.isclose(a, b, rel_tol=rel, abs_tol=rel)


def huge_chain():
    arch = Architecture.build(
        [
            Neuron("x", Activation.INPUT),
            Neuron("h1", Activation.RELU),
            Neuron("h2", Activation.RELU),
            Neuron("y", Activation.IDENTITY),
        ],
        [("x", "h1"), ("h1", "h2"), ("h2", "y")],
    )
    params = Parameters(
        weights={("x", "h1"): 1e200, ("h1", "h2"): 1e200, ("h2", "y"): 1e200},
        biases={"h1": 0.0, "h2": 0.0, "y": 0.0},
    )
    return arch, params


def test_norm_spec_rejects_bad_exponents():
    with pytest.raises(InvalidNormSpec):
        NormSpec(q=0)
    with pytest.raises(InvalidNormSpec):
        NormSpec(q=1, r=-1)
    with pytest.raises(InvalidNormSpec):
        norm_services.path_norm_fast(*generators.diamond_network(), NormSpec(q=math.inf))


def test_diamond_path_norms(d1):
    arch, params = d1
    assert norm_services.path_norm_fast(arch, params, NormSpec(1.0)).value == pytest.approx(5.5)
    assert norm_services.path_norm_fast(arch, params, NormSpec(2.0)).value == pytest.approx(
        math.sqrt(13.25)
    )


def test_max_pool_counterexample(m1):
    arch, params = m1
    assert norm_services.path_norm_fast(arch, params, NormSpec(1.0, 1.0)).value == 2.0
    assert norm_services.naive_forward_norm(arch, params, NormSpec(1.0, 1.0)).value == 1.0
    assert norm_services.naive_forward_norm(arch, params, NormSpec(2.0, 1.0)).value == 1.0
    assert norm_services.path_norm_fast(arch, params, NormSpec(1.0, math.inf)).value == 2.0
    assert norm_services.lipschitz_bound(arch, params, math.inf).value == 2.0


@pytest.mark.parametrize("q, r", GRID)
def test_fixtures_fast_equals_exact(d1, m1, q, r):
    for arch, params in (d1, m1):
        spec = NormSpec(q, r)
        fast = norm_services.path_norm_fast(arch, params, spec).value
        assert close(fast, norm_services.path_norm_exact(arch, params, spec))


def test_fast_equals_exact_on_random_networks(random_nets):
    for arch, params in random_nets[:500]:
        for q, r in GRID:
            spec = NormSpec(q, r)
            fast = norm_services.path_norm_fast(arch, params, spec).value
            exact = norm_services.path_norm_exact(arch, params, spec)
            assert close(fast, exact), (q, r, fast, exact)


def test_subnetwork_norms(d1):
    arch, params = d1
    norms = norm_services.subnetwork_norms(arch, params, 1.0)
    assert norms == pytest.approx({"u": 1.0, "h1": 2.5, "h2": 3.0, "o": 5.5})
    assert norm_services.subnetwork_norms(arch, params, math.inf)["o"] == 3.0


def test_overflow_reports_log10():
    arch, params = huge_chain()
    result = norm_services.path_norm_fast(arch, params, NormSpec(1.0))
    assert result.overflow
    assert math.isinf(result.value)
    assert result.log10_value == pytest.approx(600.0, rel=1e-12)


def test_log_domain_mode(d1):
    arch, params = d1
    result = norm_services.path_norm_fast(arch, params, NormSpec(1.0), log_domain=True)
    assert result.value == pytest.approx(5.5, rel=1e-12)
    assert result.log10_value == pytest.approx(math.log10(5.5), rel=1e-12)


def test_pathwise_products(d1):
    arch, params = d1
    assert norm_services.pathwise_product(arch, params, Path(("u", "h1", "o")), 1.0) == 5.0
    assert norm_services.pathwise_product(arch, params, Path(("u", "h2", "o")), 1.0) == 6.0
    assert norm_services.pathwise_product(arch, params, Path(("h1", "o")), 1.0) == 1.0


def test_diamond_operator_product(d1):
    arch, params = d1
    spec = NormSpec(1.0, math.inf)
    assert norm_services.dag_operator_product(arch, params, spec) == pytest.approx(6.0)

    normalized = rescale_services.normalize(arch, params, 1.0).params
    assert norm_services.dag_operator_product(arch, normalized, spec) == pytest.approx(5.5)
    assert norm_services.path_norm_fast(arch, normalized, spec).value == pytest.approx(5.5)


def test_operator_product_dominates_path_norm(random_nets):
    for arch, params in random_nets[:300]:
        for q, r in GRID:
            spec = NormSpec(q, r)
            product = norm_services.dag_operator_product(arch, params, spec)
            path_norm = norm_services.path_norm_exact(arch, params, spec)
            assert path_norm <= product * (1 + 1e-9) + 1e-12


def test_operator_product_matches_brute_force(random_nets):
    for arch, params in random_nets[:200]:
        if path_services.count_paths(arch) > 10_000:
            continue
        for q, r in GRID:
            spec = NormSpec(q, r)
            assert close(
                norm_services.dag_operator_product(arch, params, spec),
                norm_services.brute_force_operator_product(arch, params, spec),
            )


def test_operator_product_equals_path_norm_after_normalization(random_nets):
    for arch, params in random_nets[:200]:
        for q in (1.0, 2.0):
            normalized = rescale_services.normalize(arch, params, q).params
            for r in (1.0, 2.0, math.inf):
                spec = NormSpec(q, r)
                product = norm_services.dag_operator_product(arch, normalized, spec)
                exact = norm_services.path_norm_exact(arch, normalized, spec)
                assert close(product, exact)


def test_product_can_dwarf_path_norm():
    arch, params = generators.zero_path_norm_network(scale=10.0)
    assert norm_services.path_norm_fast(arch, params, NormSpec(1.0)).value == 0.0
    assert norm_services.dag_operator_product(arch, params, NormSpec(1.0)) == 100.0


def test_layered_product_matches_dag_product(rng):
    matrices = [rng.normal(size=(4, 3)), rng.normal(size=(5, 4)), rng.normal(size=(2, 5))]
    arch, params = generators.layered_network(matrices)
    for q in (1.0, 2.0):
        assert close(
            norm_services.dag_operator_product(arch, params, NormSpec(q, math.inf)),
            norm_services.layered_operator_product(matrices, q),
        )


def test_lipschitz_sampling(random_nets):
    rng = np.random.default_rng(5)
    for arch, params in random_nets[:100]:
        X = rng.uniform(-3.0, 3.0, size=(1000, arch.d_in))
        X_prime = X + rng.normal(scale=0.5, size=X.shape)
        gaps = forward_services.batch_realize(arch, params, X) - forward_services.batch_realize(
            arch, params, X_prime
        )
        distance = np.max(np.abs(X - X_prime), axis=1)
        for r in (1.0, 2.0, math.inf):
            bound = norm_services.lipschitz_bound(arch, params, r).value
            spread = np.linalg.norm(gaps, ord=r, axis=1)
            assert np.all(spread <= bound * distance * (1 + 1e-9) + 1e-12)


def test_lq_norm_edges():
    assert norm_services.lq_norm([], 2.0) == 0.0
    assert norm_services.lq_norm([3.0, -4.0], 2.0) == 5.0
    assert norm_services.lq_norm([3.0, -4.0], math.inf) == 4.0
