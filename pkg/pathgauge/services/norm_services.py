"""Path-norms and related Lipschitz quantities.

The production route is path_norm_fast: ||Phi(theta)||_{q,r} is read off a
single forward pass of |theta|^q on the all-ones input, once every
k-max-pooling neuron has been turned into an identity neuron. Everything
named *_exact or brute_force_* goes through explicit path enumeration and
only serves as an oracle.
"""

import logging
import math
from typing import Dict, Iterable, Optional, Sequence

import numpy as np

from pathgauge.models.network_models import Architecture, Parameters
from pathgauge.models.norm_models import NormResult, NormSpec
from pathgauge.models.path_models import Path
from pathgauge.services import path_services
from pathgauge.services.forward_services import evaluate_neurons
from pathgauge.services.graph_services import topological_order
from pathgauge.services.transform_services import pool_to_identity

logger = logging.getLogger(__name__)

LN10 = math.log(10.0)


def lq_norm(values: Iterable[float], q: float) -> float:
    """(sum |x|^q)^(1/q), max |x| for q = inf, 0 for an empty vector."""
    if not isinstance(values, np.ndarray):
        values = list(values)
    values = np.abs(np.asarray(values, dtype=float))
    if values.size == 0:
        return 0.0
    if math.isinf(q):
        return float(values.max())
    return float(np.linalg.norm(values, ord=q))


def _abs_power(params: Parameters, q: float) -> Parameters:
    return params.map_values(lambda value: float(np.power(np.abs(np.float64(value)), q)))


def _outer_norm(per_output: Sequence[float], r: float) -> float:
    return lq_norm(np.asarray(per_output, dtype=float), r)


def _forward_norm(arch: Architecture, params: Parameters, spec: NormSpec) -> NormResult:
    q = spec.q
    with np.errstate(over="ignore", invalid="ignore"):
        powered = _abs_power(params, q)
        values = evaluate_neurons(arch, powered, np.ones((1, arch.d_in)))
        overflow = not all(np.isfinite(column[0]) for column in values.values())
        per_output = [float(np.power(values[v][0], 1.0 / q)) for v in arch.outputs]
        value = _outer_norm(per_output, spec.r) if not overflow else math.inf
    if overflow or not math.isfinite(value):
        logger.info("path-norm overflows 64-bit floats, falling back to log-domain value")
        # the log-domain recursion sums every path, which is only the
        # path-norm once pooling neurons are gone
        log10_value = None if arch.pool_neurons else _log_domain_norm(arch, params, spec)
        return NormResult(value=math.inf, overflow=True, log10_value=log10_value)
    return NormResult(value=value)


def path_norm_fast(
    arch: Architecture, params: Parameters, spec: NormSpec, log_domain: bool = False
) -> NormResult:
    """||Phi(theta)||_{q,r} = || |R^{G~}_{|theta|^q}(1)|^{1/q} ||_r, G~ having
    its k-max-pooling neurons replaced by identity neurons."""
    spec.require_finite_q()
    rewritten = pool_to_identity(arch)
    if log_domain:
        log10_value = _log_domain_norm(rewritten, params, spec)
        value = _exp10(log10_value)
        return NormResult(value=value, overflow=math.isinf(value), log10_value=log10_value)
    return _forward_norm(rewritten, params, spec)


def naive_forward_norm(arch: Architecture, params: Parameters, spec: NormSpec) -> NormResult:
    """The same forward formula evaluated without the pool rewrite.

    Only meaningful as a diagnostic: with k-max-pooling neurons it generally
    underestimates the path-norm.
    """
    spec.require_finite_q()
    return _forward_norm(arch, params, spec)


def _exp10(log10_value: float) -> float:
    try:
        return math.pow(10.0, log10_value)
    except OverflowError:
        return math.inf


def _log_subnetwork(arch: Architecture, params: Parameters, q: float) -> Dict[str, float]:
    """Natural log of ||Phi^{->v}||_q^q for every neuron, accumulated with
    log-sum-exp over non-negative terms."""
    log_sums: Dict[str, float] = {}
    inputs = set(arch.inputs)
    for v in topological_order(arch):
        if v in inputs:
            log_sums[v] = 0.0
            continue
        terms = []
        bias = params.bias(v)
        if bias != 0.0:
            terms.append(q * math.log(abs(bias)))
        for u in arch.antecedents(v):
            weight = params.weight(u, v)
            if weight != 0.0 and log_sums[u] > -math.inf:
                terms.append(q * math.log(abs(weight)) + log_sums[u])
        log_sums[v] = float(np.logaddexp.reduce(terms)) if terms else -math.inf
    return log_sums


def _log_domain_norm(arch: Architecture, params: Parameters, spec: NormSpec) -> float:
    """log10 of ||Phi(theta)||_{q,r} on a pool-free architecture."""
    log_sums = _log_subnetwork(arch, params, spec.q)
    per_output = np.array([log_sums[v] / spec.q for v in arch.outputs])
    if per_output.size == 0:
        return -math.inf
    if math.isinf(spec.r):
        log_value = float(per_output.max())
    else:
        log_value = float(np.logaddexp.reduce(spec.r * per_output)) / spec.r
    return log_value / LN10


def path_norm_exact(
    arch: Architecture, params: Parameters, spec: NormSpec, cap: Optional[int] = None
) -> float:
    """||(||Phi^{->v}(theta)||_q)_{v in N_out}||_r by explicit enumeration."""
    spec.require_finite_q()
    sub_liftings = path_services.path_lifting(arch, params, cap).by_output()
    per_output = [lq_norm(sub_liftings.get(v, np.zeros(0)), spec.q) for v in arch.outputs]
    return _outer_norm(per_output, spec.r)


def subnetwork_norms(arch: Architecture, params: Parameters, q: float) -> Dict[str, float]:
    """||Phi^{->v}(theta)||_q for every neuron v (q = inf allowed)."""
    if not math.isinf(q):
        with np.errstate(over="ignore", invalid="ignore"):
            values = evaluate_neurons(
                pool_to_identity(arch), _abs_power(params, q), np.ones((1, arch.d_in))
            )
            return {v: float(np.power(values[v][0], 1.0 / q)) for v in arch.ids}

    norms: Dict[str, float] = {}
    inputs = set(arch.inputs)
    for v in topological_order(arch):
        if v in inputs:
            norms[v] = 1.0
            continue
        candidates = [abs(params.bias(v))]
        candidates.extend(abs(params.weight(u, v)) * norms[u] for u in arch.antecedents(v))
        norms[v] = max(candidates)
    return norms


def _incoming_power(arch: Architecture, params: Parameters, v: str, q: float) -> float:
    """||theta^{->v}||_q^q."""
    return float(np.sum(np.abs(params.incoming(arch, v)) ** q))


def _gamma_power(arch: Architecture, params: Parameters, v: str, q: float, inputs) -> float:
    gamma = 1.0 if v in inputs else params.bias(v)
    return abs(gamma) ** q


def pathwise_product(arch: Architecture, params: Parameters, path: Path, q: float) -> float:
    """pi_{p,q}(theta) = (sum_l |gamma_{p_l}|^q prod_{k>l} ||theta^{->p_k}||_q^q)^{1/q}."""
    NormSpec(q).require_finite_q()
    inputs = set(arch.inputs)
    accumulated = 0.0
    for position, v in enumerate(path.neurons):
        if position > 0:
            accumulated *= _incoming_power(arch, params, v, q)
        accumulated += _gamma_power(arch, params, v, q, inputs)
    return accumulated ** (1.0 / q)


def dag_operator_product(arch: Architecture, params: Parameters, spec: NormSpec) -> float:
    """Pi_{q,r}(theta): outer r-norm over outputs of the best pathwise product
    ending there, by the recursion best(v) = |gamma_v|^q + ||theta^{->v}||_q^q max_u best(u)."""
    spec.require_finite_q()
    q = spec.q
    inputs = set(arch.inputs)
    best: Dict[str, float] = {}
    for v in topological_order(arch):
        own = _gamma_power(arch, params, v, q, inputs)
        antecedents = arch.antecedents(v)
        if not antecedents:
            best[v] = own
            continue
        best[v] = own + _incoming_power(arch, params, v, q) * max(best[u] for u in antecedents)
    return _outer_norm([best[v] ** (1.0 / q) for v in arch.outputs], spec.r)


def brute_force_operator_product(
    arch: Architecture, params: Parameters, spec: NormSpec, cap: Optional[int] = None
) -> float:
    """Pi_{q,r}(theta) with the max over paths taken by enumeration."""
    spec.require_finite_q()
    best: Dict[str, float] = {}
    for path in path_services.enumerate_paths(arch, cap):
        value = pathwise_product(arch, params, path, spec.q)
        best[path.end] = max(best.get(path.end, 0.0), value)
    return _outer_norm([best.get(v, 0.0) for v in arch.outputs], spec.r)


def lipschitz_bound(arch: Architecture, params: Parameters, r: float) -> NormResult:
    """||Phi(theta)||_{1,r}: ||R(x) - R(x')||_r <= bound * ||x - x'||_inf."""
    return path_norm_fast(arch, params, NormSpec(q=1.0, r=r))


def layered_operator_product(matrices: Sequence[np.ndarray], q: float) -> float:
    """prod_l ||M_l||_{q,inf}, the largest row q-norm of each layer matrix."""
    product = 1.0
    for matrix in matrices:
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        product *= max(lq_norm(row, q) for row in matrix)
    return product
