"""Rescaling symmetries and q-normalization of parameters."""

import logging
import math
from typing import Dict, List

import numpy as np

from pathgauge.core.exceptions import InvalidNormSpec, NonPositiveScale, NotHiddenNeuron
from pathgauge.models.network_models import Architecture, Parameters
from pathgauge.models.norm_models import NormalizationOutcome
from pathgauge.services.graph_services import topological_order
from pathgauge.services.norm_services import lq_norm, subnetwork_norms

logger = logging.getLogger(__name__)


def _require_q(q: float) -> float:
    q = float(q)
    if math.isnan(q) or q <= 0:
        raise InvalidNormSpec(f"q must be in (0, inf], got {q}")
    return q


def _incoming_with_bias(arch: Architecture, params: Parameters, v: str) -> np.ndarray:
    """(theta^{->v}; b_v)."""
    return np.append(params.incoming(arch, v), params.bias(v))


def apply_rescaling(arch: Architecture, params: Parameters, v: str, lam: float) -> Parameters:
    """Multiplies the incoming weights and bias of v by lam and divides its
    outgoing weights by lam. Realized function and path-lifting are unchanged."""
    arch.neuron(v)
    if v not in arch.hidden:
        raise NotHiddenNeuron(f"neuron {v!r} is not hidden")
    if not (lam > 0) or math.isinf(lam):
        raise NonPositiveScale(f"rescaling factor must be a positive real, got {lam}")
    if lam == 1:
        return params
    return params.replace(
        weights={
            **{(u, v): params.weight(u, v) * lam for u in arch.antecedents(v)},
            **{(v, w): params.weight(v, w) / lam for w in arch.successors(v)},
        },
        biases={v: params.bias(v) * lam},
    )


def normalize(arch: Architecture, params: Parameters, q: float) -> NormalizationOutcome:
    """q-normalization: every hidden neuron, in topological order, gets
    lambda_v = ||(theta^{->v}; b_v)||_q divided out of its incoming weights
    and bias and pushed onto its outgoing weights.

    lambda_v = 0 (exactly) zeroes the outgoing weights instead.
    """
    q = _require_q(q)
    weights = dict(params.weights)
    biases = dict(params.biases)
    scales: Dict[str, float] = {}
    zero_neurons: List[str] = []
    hidden = set(arch.hidden)

    for v in topological_order(arch):
        if v not in hidden:
            continue
        antecedents = arch.antecedents(v)
        successors = arch.successors(v)
        lam = lq_norm([weights[(u, v)] for u in antecedents] + [biases.get(v, 0.0)], q)
        scales[v] = lam
        if lam == 0.0:
            zero_neurons.append(v)
            for w in successors:
                weights[(v, w)] = 0.0
            continue
        for u in antecedents:
            weights[(u, v)] = weights[(u, v)] / lam
        if v in biases:
            biases[v] = biases[v] / lam
        for w in successors:
            weights[(v, w)] = weights[(v, w)] * lam

    if zero_neurons:
        logger.debug("normalization zeroed the outputs of %s", ", ".join(zero_neurons))
    return NormalizationOutcome(
        params=Parameters(weights=weights, biases=biases),
        scales=scales,
        zero_neurons=zero_neurons,
    )


def is_normalized(
    arch: Architecture, params: Parameters, q: float, tol: float = 1e-9
) -> bool:
    """Checks, for every hidden neuron, that ||Phi^{->v}||_q equals
    ||(theta^{->v}; b_v)||_q, that this value is 0 or 1, and that a neuron
    at 0 has zero outgoing weights."""
    q = _require_q(q)
    norms = subnetwork_norms(arch, params, q)
    for v in arch.hidden:
        own = lq_norm(_incoming_with_bias(arch, params, v), q)
        if not math.isclose(norms[v], own, rel_tol=tol, abs_tol=tol):
            logger.debug("%s: sub-lifting norm %r differs from %r", v, norms[v], own)
            return False
        if abs(own) <= tol:
            if np.any(params.outgoing(arch, v) != 0.0):
                return False
        elif not math.isclose(own, 1.0, rel_tol=tol, abs_tol=tol):
            return False
    return True
