"""Structural queries on network architectures: validation, topological
order, depth, pooling statistics and output-rooted subgraphs."""

import logging
import math
from collections import Counter
from typing import Dict, List, Mapping, NamedTuple, Optional, Tuple

import networkx as nx

from pathgauge.core.exceptions import CyclicGraph, UnknownNeuron, ValidationError
from pathgauge.models.network_models import (
    Activation,
    Architecture,
    Neuron,
    Parameters,
    ValidationReport,
    Violation,
)

logger = logging.getLogger(__name__)


class PoolStats(NamedTuple):
    P: int
    K: int
    M: int


def validate(arch: Architecture, params: Optional[Parameters] = None) -> ValidationReport:
    """Lists every violated architecture (and parameter) invariant.

    Violations are returned as data; this function never raises.
    """
    violations: List[Violation] = []

    def flag(rule: str, subject, message: str):
        violations.append(Violation(rule=rule, subject=str(subject), message=message))

    for neuron_id, count in sorted(Counter(n.id for n in arch.neurons).items()):
        if count > 1:
            flag("duplicate-neuron", neuron_id, f"declared {count} times")

    for neuron in arch.neurons:
        if neuron.is_pool and (neuron.k is None or neuron.k < 1):
            flag("kpool-k", neuron.id, "k must be a positive integer")

    known = set(arch.ids)
    for edge, count in sorted(Counter(arch.edges).items()):
        u, v = edge
        for endpoint in (u, v):
            if endpoint not in known:
                flag("unknown-neuron", f"{u}->{v}", f"endpoint {endpoint!r} is not a neuron")
        if count > 1:
            flag("parallel-edge", f"{u}->{v}", f"edge declared {count} times")

    if not nx.is_directed_acyclic_graph(arch.graph):
        cycle = nx.find_cycle(arch.graph)
        flag("acyclic", cycle[0][0], "cycle " + " -> ".join(u for u, _ in cycle))

    for v in arch.ids:
        neuron = arch.by_id[v]
        antecedents = arch.antecedents(v)
        successors = arch.successors(v)
        if neuron.activation == Activation.INPUT and antecedents:
            flag("input-antecedents", v, "input neurons cannot have antecedents")
        if neuron.activation != Activation.INPUT and not antecedents:
            flag("undeclared-input", v, "neuron without antecedents must be declared as input")
        if not antecedents and not successors:
            flag("io-disjoint", v, "neuron is both an input and an output")
        elif not successors and neuron.activation != Activation.IDENTITY:
            flag("output-identity", v, f"output neuron declared {neuron.activation.value}")
        if neuron.is_pool and neuron.k is not None and neuron.k > len(antecedents):
            flag(
                "kernel-size",
                v,
                f"k <= kernel size violated: k={neuron.k}, kernel size {len(antecedents)}",
            )

    if params is not None:
        _validate_parameters(arch, params, flag)

    report = ValidationReport(violations=tuple(violations))
    if not report.ok:
        logger.debug("validation of %s found %d violations", arch.name, len(violations))
    return report


def _validate_parameters(arch: Architecture, params: Parameters, flag):
    expected_weights = set(arch.edges)
    expected_biases = {v for v in arch.ids if arch.by_id[v].activation != Activation.INPUT}
    for u, v in sorted(set(params.weights) - expected_weights):
        flag("parameter-keys", f"{u}->{v}", "weight for an edge that does not exist")
    for u, v in sorted(expected_weights - set(params.weights)):
        flag("parameter-keys", f"{u}->{v}", "missing weight")
    for v in sorted(set(params.biases) - expected_biases):
        flag("parameter-keys", v, "bias for an input or unknown neuron")
    for v in sorted(expected_biases - set(params.biases)):
        flag("parameter-keys", v, "missing bias")
    for (u, v), weight in sorted(params.weights.items()):
        if not math.isfinite(weight):
            flag("finite", f"{u}->{v}", f"weight {weight} is not finite")
    for v, bias in sorted(params.biases.items()):
        if not math.isfinite(bias):
            flag("finite", v, f"bias {bias} is not finite")


def require_valid(arch: Architecture, params: Optional[Parameters] = None) -> None:
    report = validate(arch, params)
    if not report.ok:
        raise ValidationError(report)


def topological_order(arch: Architecture) -> List[str]:
    """Topological order with ties broken by ascending neuron id."""
    if not nx.is_directed_acyclic_graph(arch.graph):
        raise CyclicGraph()
    return list(nx.lexicographical_topological_sort(arch.graph))


def depth(arch: Architecture) -> int:
    """Maximal number of edges on a path from an input to an output."""
    if not nx.is_directed_acyclic_graph(arch.graph):
        raise CyclicGraph()
    return nx.dag_longest_path_length(arch.graph)


def levels(arch: Architecture) -> Dict[str, int]:
    """Longest-path distance from the inputs to every neuron."""
    level: Dict[str, int] = {}
    for v in topological_order(arch):
        antecedents = arch.antecedents(v)
        level[v] = max((level[u] + 1 for u in antecedents), default=0)
    return level


def pool_stats(arch: Architecture) -> PoolStats:
    pools = arch.pool_neurons
    if not pools:
        return PoolStats(P=0, K=1, M=0)
    level = levels(arch)
    return PoolStats(
        P=len({arch.by_id[v].k for v in pools}),
        K=max(len(arch.antecedents(v)) for v in pools),
        M=len({level[v] for v in pools}),
    )


def sharpened_applicable(arch: Architecture) -> bool:
    """Whether the sharpened constant may be used: at most one pooling type,
    and no edge jumping over a level that holds k-max-pooling neurons."""
    stats = pool_stats(arch)
    if stats.P > 1:
        return False
    level = levels(arch)
    pool_levels = {level[v] for v in arch.pool_neurons}
    for u, w in arch.edges:
        if any(level[u] < pool_level < level[w] for pool_level in pool_levels):
            logger.debug("edge %s->%s skips over a pooling layer", u, w)
            return False
    return True


def subgraph_to(arch: Architecture, v: str) -> Architecture:
    """G^{->v}: drops every neuron with no directed path to v."""
    if v not in arch:
        raise UnknownNeuron(f"Neuron {v!r} does not exist in this architecture")
    keep = nx.ancestors(arch.graph, v) | {v}
    return Architecture.build(
        [arch.by_id[u] for u in keep],
        [(a, b) for a, b in arch.edges if a in keep and b in keep],
        name=f"{arch.name or 'network'}->{v}",
    )


def relabel(
    arch: Architecture, params: Parameters, mapping: Mapping[str, str]
) -> Tuple[Architecture, Parameters]:
    """Renames neurons; ids absent from mapping keep their name."""

    def rename(neuron_id: str) -> str:
        return mapping.get(neuron_id, neuron_id)

    new_arch = Architecture.build(
        [Neuron(rename(n.id), n.activation, n.k) for n in arch.neurons],
        [(rename(u), rename(v)) for u, v in arch.edges],
        name=arch.name,
    )
    new_params = Parameters(
        weights={(rename(u), rename(v)): w for (u, v), w in params.weights.items()},
        biases={rename(v): b for v, b in params.biases.items()},
    )
    return new_arch, new_params
