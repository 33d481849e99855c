"""Small reference networks and random DAG networks for the oracle suites."""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from pathgauge.models.network_models import Activation, Architecture, Neuron, Parameters

Network = Tuple[Architecture, Parameters]


def diamond_network() -> Network:
    """u -> {h1, h2} -> o with relu hidden neurons."""
    arch = Architecture.build(
        [
            Neuron("u", Activation.INPUT),
            Neuron("h1", Activation.RELU),
            Neuron("h2", Activation.RELU),
            Neuron("o", Activation.IDENTITY),
        ],
        [("u", "h1"), ("u", "h2"), ("h1", "o"), ("h2", "o")],
        name="d1",
    )
    params = Parameters(
        weights={("u", "h1"): 2.0, ("u", "h2"): -3.0, ("h1", "o"): 1.0, ("h2", "o"): 1.0},
        biases={"h1": 0.5, "h2": 0.0, "o": 0.0},
    )
    return arch, params


def max_pool_network() -> Network:
    """u1, u2 -> max-pool v -> o, unit weights and zero biases.

    The naive forward formula reports 1 for its L1 path-norm, which is 2.
    """
    arch = Architecture.build(
        [
            Neuron("u1", Activation.INPUT),
            Neuron("u2", Activation.INPUT),
            Neuron("v", Activation.KPOOL, 1),
            Neuron("o", Activation.IDENTITY),
        ],
        [("u1", "v"), ("u2", "v"), ("v", "o")],
        name="m1",
    )
    params = Parameters(
        weights={("u1", "v"): 1.0, ("u2", "v"): 1.0, ("v", "o"): 1.0},
        biases={"v": 0.0, "o": 0.0},
    )
    return arch, params


def zero_path_norm_network(scale: float = 10.0) -> Network:
    """Two branches that each carry a zero weight: the path-norm is 0 while
    the operator-norm product is scale**2."""
    arch = Architecture.build(
        [
            Neuron("x", Activation.INPUT),
            Neuron("h1", Activation.RELU),
            Neuron("h2", Activation.RELU),
            Neuron("y", Activation.IDENTITY),
        ],
        [("x", "h1"), ("x", "h2"), ("h1", "y"), ("h2", "y")],
        name="zero-path-norm",
    )
    params = Parameters(
        weights={("x", "h1"): scale, ("x", "h2"): 0.0, ("h1", "y"): 0.0, ("h2", "y"): scale},
        biases={"h1": 0.0, "h2": 0.0, "y": 0.0},
    )
    return arch, params


def layered_network(
    matrices: Sequence[np.ndarray], biases: Optional[Sequence[np.ndarray]] = None
) -> Network:
    """Layered fully-connected ReLU network; matrices[l] has shape
    (width of layer l+1, width of layer l) and the last layer is linear."""
    matrices = [np.atleast_2d(np.asarray(matrix, dtype=float)) for matrix in matrices]
    widths = [matrices[0].shape[1]] + [matrix.shape[0] for matrix in matrices]

    def neuron_id(layer: int, position: int) -> str:
        return f"L{layer:02d}_{position:04d}"

    neurons: List[Neuron] = []
    for layer, width in enumerate(widths):
        if layer == 0:
            activation = Activation.INPUT
        elif layer == len(widths) - 1:
            activation = Activation.IDENTITY
        else:
            activation = Activation.RELU
        neurons.extend(Neuron(neuron_id(layer, j), activation) for j in range(width))

    weights: Dict[Tuple[str, str], float] = {}
    bias_values: Dict[str, float] = {}
    for layer, matrix in enumerate(matrices):
        for i in range(matrix.shape[0]):
            target = neuron_id(layer + 1, i)
            bias_values[target] = float(biases[layer][i]) if biases is not None else 0.0
            for j in range(matrix.shape[1]):
                weights[(neuron_id(layer, j), target)] = float(matrix[i, j])

    arch = Architecture.build(neurons, weights.keys(), name="layered")
    return arch, Parameters(weights=weights, biases=bias_values)


def random_network(
    rng: np.random.Generator,
    max_neurons: int = 12,
    max_inputs: int = 3,
    pool_ks: Sequence[int] = (1, 2),
    max_fan_in: int = 3,
    null_pool_biases: bool = False,
    zero_weight_rate: float = 0.1,
) -> Network:
    """A random valid network mixing relu, identity and k-max-pooling neurons.

    Neurons are created in a random topological order; every non-input
    neuron draws its antecedents among earlier ones, inputs left without a
    successor are wired to a random later neuron, and neurons without
    successors become identity outputs.
    """
    n_inputs = int(rng.integers(1, max_inputs + 1))
    n_total = int(rng.integers(n_inputs + 1, max(max_neurons, n_inputs + 1) + 1))
    # random ids decouple the topological order from the id order
    labels = [f"n{value:02d}" for value in rng.permutation(n_total)]
    inputs, others = labels[:n_inputs], labels[n_inputs:]

    antecedents: Dict[str, List[str]] = {}
    for position, v in enumerate(others):
        earlier = labels[: n_inputs + position]
        size = int(rng.integers(1, min(len(earlier), max_fan_in) + 1))
        antecedents[v] = [str(u) for u in rng.choice(earlier, size=size, replace=False)]
    for u in inputs:
        if not any(u in chosen for chosen in antecedents.values()):
            antecedents[str(rng.choice(others))].append(u)

    edges = [(u, v) for v, chosen in antecedents.items() for u in chosen]
    has_successor = {u for u, _ in edges}

    neurons = [Neuron(u, Activation.INPUT) for u in inputs]
    for v in others:
        if v not in has_successor:
            neurons.append(Neuron(v, Activation.IDENTITY))
            continue
        draw = rng.random()
        if draw < 0.3:
            k = min(int(rng.choice(pool_ks)), len(antecedents[v]))
            neurons.append(Neuron(v, Activation.KPOOL, k))
        elif draw < 0.5:
            neurons.append(Neuron(v, Activation.IDENTITY))
        else:
            neurons.append(Neuron(v, Activation.RELU))

    arch = Architecture.build(neurons, edges, name="random")

    def draw_value() -> float:
        return 0.0 if rng.random() < zero_weight_rate else float(rng.uniform(-2.0, 2.0))

    weights = {edge: draw_value() for edge in arch.edges}
    biases = {}
    for neuron in arch.neurons:
        if neuron.activation == Activation.INPUT:
            continue
        biases[neuron.id] = 0.0 if neuron.is_pool and null_pool_biases else draw_value()
    return arch, Parameters(weights=weights, biases=biases)


def random_networks(seed: int, count: int, **options) -> List[Network]:
    rng = np.random.default_rng(seed)
    return [random_network(rng, **options) for _ in range(count)]
