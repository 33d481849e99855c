import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Optional

import numpy as np

from pathgauge.core.exceptions import DimensionMismatch
from pathgauge.models.network_models import Activation, Architecture, Parameters
from pathgauge.models.path_models import EvaluationTrace
from pathgauge.services.graph_services import topological_order
from pathgauge.utils import settings

logger = logging.getLogger(__name__)


def _as_batch(arch: Architecture, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        return X.reshape(0, arch.d_in)
    if X.ndim != 2 or X.shape[1] != arch.d_in:
        raise DimensionMismatch(
            f"expected rows of {arch.d_in} coordinates, got shape {X.shape}"
        )
    return X


def pool_candidates(arch: Architecture, params: Parameters, v: str, values) -> np.ndarray:
    """Weighted pre-activations (b_v + u * theta_{u->v}) of a pooling neuron,
    one column per antecedent in ascending id order."""
    bias = params.bias(v)
    return np.stack(
        [bias + values[u] * params.weight(u, v) for u in arch.antecedents(v)], axis=1
    )


def evaluate_neurons(arch: Architecture, params: Parameters, X: np.ndarray) -> Dict[str, np.ndarray]:
    """Values v(theta, x) of every neuron for every row of X."""
    values: Dict[str, np.ndarray] = {}
    for position, v in enumerate(arch.inputs):
        values[v] = X[:, position]
    for v in topological_order(arch):
        if v in values:
            continue
        neuron = arch.by_id[v]
        if neuron.is_pool:
            candidates = pool_candidates(arch, params, v, values)
            values[v] = np.sort(candidates, axis=1)[:, -neuron.k]
            continue
        total = np.zeros(X.shape[0])
        for u in arch.antecedents(v):
            total = total + values[u] * params.weight(u, v)
        pre_activation = params.bias(v) + total
        if neuron.activation == Activation.RELU:
            values[v] = np.where(pre_activation >= 0, pre_activation, 0.0)
        else:
            values[v] = pre_activation
    return values


def _realize_rows(arch: Architecture, params: Parameters, X: np.ndarray) -> np.ndarray:
    if not arch.outputs:
        return np.empty((X.shape[0], 0))
    values = evaluate_neurons(arch, params, X)
    return np.stack([values[v] for v in arch.outputs], axis=1)


def _worker_count(n_rows: int, threads: Optional[int]) -> int:
    cap = settings.THREADS if threads is None else threads
    if cap <= 0:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_rows // max(settings.MIN_ROWS_PER_WORKER, 1)))


def batch_realize(
    arch: Architecture, params: Parameters, X, threads: Optional[int] = None
) -> np.ndarray:
    """Evaluates R_theta on every row of X; row i of the result is R_theta(X_i).

    Rows are split over a thread pool when there are enough of them; every
    operation is row-wise so the result does not depend on the split.
    """
    X = _as_batch(arch, X)
    workers = _worker_count(X.shape[0], threads)
    if workers == 1:
        return _realize_rows(arch, params, X)
    logger.debug("evaluating %d rows on %d workers", X.shape[0], workers)
    chunks = np.array_split(X, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda chunk: _realize_rows(arch, params, chunk), chunks))
    return np.concatenate(parts, axis=0)


def realize(arch: Architecture, params: Parameters, x) -> np.ndarray:
    """R_theta(x), ordered by output neuron id."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != arch.d_in:
        raise DimensionMismatch(f"expected {arch.d_in} input coordinates, got shape {x.shape}")
    return _realize_rows(arch, params, x.reshape(1, -1))[0]


def trace(arch: Architecture, params: Parameters, x) -> EvaluationTrace:
    """Neuron values together with the edge and neuron activations used by path_activations.

    A pooling neuron activates the edge from the smallest-id antecedent whose
    weighted pre-activation equals the pooled value.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != arch.d_in:
        raise DimensionMismatch(f"expected {arch.d_in} input coordinates, got shape {x.shape}")
    values = evaluate_neurons(arch, params, x.reshape(1, -1))

    edge_activations = {}
    neuron_activations = {}
    for v in arch.ids:
        neuron = arch.by_id[v]
        antecedents = arch.antecedents(v)
        value = values[v][0]
        if neuron.activation == Activation.RELU:
            active = int(value > 0)
            neuron_activations[v] = active
            for u in antecedents:
                edge_activations[(u, v)] = active
        elif neuron.is_pool:
            neuron_activations[v] = 1
            candidates = pool_candidates(arch, params, v, values)[0]
            winner = next(
                (u for u, candidate in zip(antecedents, candidates) if candidate == value),
                None,
            )
            for u in antecedents:
                edge_activations[(u, v)] = int(u == winner)
        else:
            neuron_activations[v] = 1
            for u in antecedents:
                edge_activations[(u, v)] = 1

    return EvaluationTrace(
        values={v: float(values[v][0]) for v in arch.ids},
        edge_activations=edge_activations,
        neuron_activations=neuron_activations,
    )
