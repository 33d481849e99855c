"""Rewrites of a network that keep its realized function and its path-norms:
pooling to identity, bias absorption into a constant input, merging of
identity neurons, plus the canonical pooling encodings."""

import logging
from typing import Dict, Iterable, List, Sequence, Tuple

from pathgauge.core.exceptions import BiasedIdentityNeuron, EmptyKernel, PoolBiasNonZero
from pathgauge.models.network_models import (
    Activation,
    Architecture,
    BiasInputMap,
    Neuron,
    NeuronFragment,
    Parameters,
)
from pathgauge.services.graph_services import topological_order

logger = logging.getLogger(__name__)

BIAS_NEURON = "v_bias"


def pool_to_identity(arch: Architecture) -> Architecture:
    """Same DAG with every k-max-pooling neuron turned into an identity neuron."""
    if not arch.pool_neurons:
        return arch
    return arch.with_activations(
        {v: Neuron(v, Activation.IDENTITY) for v in arch.pool_neurons}
    )


def nonzero_pool_biases(arch: Architecture, params: Parameters) -> List[str]:
    return [v for v in arch.pool_neurons if params.bias(v) != 0.0]


def _bias_neuron_id(arch: Architecture) -> str:
    # the constant input must sort after every existing input id
    if BIAS_NEURON not in arch and all(BIAS_NEURON > u for u in arch.inputs):
        return BIAS_NEURON
    return max(arch.ids) + "~" + BIAS_NEURON


def absorb_biases(
    arch: Architecture, params: Parameters, force: bool = False
) -> Tuple[Architecture, Parameters, BiasInputMap]:
    """Moves every non-pooling bias onto an edge from a new constant input.

    A network without biases comes back unchanged unless force is set, in
    which case the constant input is wired (with zero weights) to every
    non-pooling neuron.
    """
    offending = nonzero_pool_biases(arch, params)
    if offending:
        raise PoolBiasNonZero(f"k-max-pooling neurons with nonzero bias: {', '.join(offending)}")

    candidates = [
        v for v in arch.ids if v not in arch.inputs and not arch.by_id[v].is_pool
    ]
    targets = candidates if force else [v for v in candidates if params.bias(v) != 0.0]
    if not targets:
        return arch, params, BiasInputMap(bias_neuron=None, position=None, d_in=arch.d_in)

    bias_id = _bias_neuron_id(arch)
    new_arch = Architecture.build(
        list(arch.neurons) + [Neuron(bias_id, Activation.INPUT)],
        list(arch.edges) + [(bias_id, v) for v in targets],
        name=arch.name,
    )
    new_params = params.replace(
        weights={(bias_id, v): params.bias(v) for v in targets},
        biases={v: 0.0 for v in targets},
    )
    logger.debug("absorbed %d biases into %s", len(targets), bias_id)
    return (
        new_arch,
        new_params,
        BiasInputMap(
            bias_neuron=bias_id,
            position=new_arch.inputs.index(bias_id),
            d_in=new_arch.d_in,
        ),
    )


def eliminate_identity_neurons(
    arch: Architecture, params: Parameters
) -> Tuple[Architecture, Parameters]:
    """Removes hidden identity neurons, wiring u -> w with weight
    theta_{u->v} theta_{v->w} (added to an existing u -> w weight).

    Identity neurons feeding a k-max-pooling neuron are kept: merging them
    would split one pooled input into several.
    """
    graph = arch.graph.copy()
    weights: Dict[Tuple[str, str], float] = dict(params.weights)
    boundary = set(arch.inputs) | set(arch.outputs)
    kept: List[str] = []

    for v in reversed(topological_order(arch)):
        if v in boundary or arch.by_id[v].activation != Activation.IDENTITY:
            continue
        successors = sorted(graph.successors(v))
        if any(arch.by_id[w].is_pool for w in successors):
            kept.append(v)
            continue
        if params.bias(v) != 0.0:
            raise BiasedIdentityNeuron(
                f"identity neuron {v!r} has bias {params.bias(v)}; absorb biases first"
            )
        antecedents = sorted(graph.predecessors(v))
        for u in antecedents:
            for w in successors:
                merged = weights[(u, v)] * weights[(v, w)]
                if (u, w) in weights:
                    logger.debug("merging %s->%s->%s into existing edge %s->%s", u, v, w, u, w)
                weights[(u, w)] = weights.get((u, w), 0.0) + merged
                graph.add_edge(u, w)
        for u in antecedents:
            weights.pop((u, v))
        for w in successors:
            weights.pop((v, w))
        graph.remove_node(v)

    if kept:
        logger.info("kept identity neurons feeding pooling neurons: %s", ", ".join(sorted(kept)))

    remaining = set(graph.nodes)
    new_arch = Architecture.build(
        [neuron for neuron in arch.neurons if neuron.id in remaining],
        list(graph.edges),
        name=arch.name,
    )
    new_params = Parameters(
        weights={edge: weights[edge] for edge in new_arch.edges},
        biases={v: b for v, b in params.biases.items() if v in remaining},
    )
    return new_arch, new_params


def make_max_pool(ant_ids: Sequence[str], k: int = 1, neuron_id: str = "pool") -> NeuronFragment:
    """k-max-pooling with unit weights and zero bias (classical max-pooling for k=1)."""
    if not ant_ids:
        raise EmptyKernel()
    return NeuronFragment(
        neuron=Neuron(neuron_id, Activation.KPOOL, k),
        weights={(u, neuron_id): 1.0 for u in ant_ids},
        bias=0.0,
    )


def make_avg_pool(ant_ids: Sequence[str], neuron_id: str = "avg") -> NeuronFragment:
    """Average-pooling: identity neuron with weights 1/|ant| and zero bias."""
    if not ant_ids:
        raise EmptyKernel()
    return NeuronFragment(
        neuron=Neuron(neuron_id, Activation.IDENTITY),
        weights={(u, neuron_id): 1.0 / len(ant_ids) for u in ant_ids},
        bias=0.0,
    )


def make_top_k_block(ant_ids: Sequence[str], k_max: int, prefix: str = "top") -> List[NeuronFragment]:
    """Sorted top-k_max of the antecedents: one k-pool neuron per k."""
    return [make_max_pool(ant_ids, k, f"{prefix}{k}") for k in range(1, k_max + 1)]


def attach_fragments(
    arch: Architecture, params: Parameters, fragments: Iterable[NeuronFragment]
) -> Tuple[Architecture, Parameters]:
    fragments = list(fragments)
    new_arch = Architecture.build(
        list(arch.neurons) + [fragment.neuron for fragment in fragments],
        list(arch.edges) + [edge for fragment in fragments for edge in fragment.edges],
        name=arch.name,
    )
    new_params = params.replace(
        weights={edge: w for fragment in fragments for edge, w in fragment.weights.items()},
        biases={fragment.neuron.id: fragment.bias for fragment in fragments},
    )
    return new_arch, new_params


def release_bias_input(
    arch: Architecture, params: Parameters, bias_map: BiasInputMap
) -> Tuple[Architecture, Parameters]:
    """Inverse of absorb_biases: weights leaving the constant input become biases again."""
    if not bias_map.requires_constant:
        return arch, params
    constant = bias_map.bias_neuron
    biases = dict(params.biases)
    for v in arch.successors(constant):
        biases[v] = biases.get(v, 0.0) + params.weight(constant, v)
    kept_edges = [(u, v) for u, v in arch.edges if u != constant]
    new_arch = Architecture.build(
        [neuron for neuron in arch.neurons if neuron.id != constant], kept_edges, name=arch.name
    )
    new_params = Parameters(
        weights={edge: params.weights[edge] for edge in kept_edges}, biases=biases
    )
    return new_arch, new_params
