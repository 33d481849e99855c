"""Network data model

An Architecture is the flat neuron DAG of a ReLU network: neurons carry an
activation (input, relu, identity or k-max-pooling) and edges are ordered
pairs of neuron ids. Parameters bind one weight per edge and one bias per
non-input neuron. Both are immutable; structural queries are cached on first
use.
"""

import enum
import functools
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Tuple

import networkx as nx
import numpy as np

from pathgauge.core.exceptions import UnknownNeuron

Edge = Tuple[str, str]


class Activation(str, enum.Enum):
    INPUT = "input"
    RELU = "relu"
    IDENTITY = "identity"
    KPOOL = "kpool"


@dataclass(frozen=True)
class Neuron:
    id: str
    activation: Activation
    k: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "activation", Activation(self.activation))

    @property
    def is_pool(self) -> bool:
        return self.activation == Activation.KPOOL

    def describe(self) -> str:
        if self.is_pool:
            return f"{self.k}-pool"
        return self.activation.value


@dataclass(frozen=True)
class Architecture:
    neurons: Tuple[Neuron, ...]
    edges: Tuple[Edge, ...]
    name: Optional[str] = None

    @classmethod
    def build(
        cls,
        neurons: Iterable[Neuron],
        edges: Iterable[Edge],
        name: Optional[str] = None,
    ) -> "Architecture":
        """Creates an architecture with neurons and edges in canonical id order.

        Duplicate neurons or edges are kept so that validate() can report them.
        """
        return cls(
            neurons=tuple(sorted(neurons, key=lambda neuron: neuron.id)),
            edges=tuple(sorted((str(u), str(v)) for u, v in edges)),
            name=name,
        )

    @functools.cached_property
    def by_id(self) -> Dict[str, Neuron]:
        return {neuron.id: neuron for neuron in self.neurons}

    @functools.cached_property
    def ids(self) -> Tuple[str, ...]:
        return tuple(sorted(self.by_id))

    @functools.cached_property
    def graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.ids)
        graph.add_edges_from(self.edges)
        return graph

    @functools.cached_property
    def _antecedents(self) -> Dict[str, Tuple[str, ...]]:
        return {v: tuple(sorted(self.graph.predecessors(v))) for v in self.graph}

    @functools.cached_property
    def _successors(self) -> Dict[str, Tuple[str, ...]]:
        return {v: tuple(sorted(self.graph.successors(v))) for v in self.graph}

    def __contains__(self, neuron_id: str) -> bool:
        return neuron_id in self.by_id

    def neuron(self, neuron_id: str) -> Neuron:
        try:
            return self.by_id[neuron_id]
        except KeyError:
            raise UnknownNeuron(f"Neuron {neuron_id!r} does not exist in this architecture")

    def activation(self, neuron_id: str) -> Activation:
        return self.neuron(neuron_id).activation

    def antecedents(self, neuron_id: str) -> Tuple[str, ...]:
        self.neuron(neuron_id)
        return self._antecedents.get(neuron_id, ())

    def successors(self, neuron_id: str) -> Tuple[str, ...]:
        self.neuron(neuron_id)
        return self._successors.get(neuron_id, ())

    @functools.cached_property
    def inputs(self) -> Tuple[str, ...]:
        return tuple(v for v in self.ids if not self._antecedents.get(v))

    @functools.cached_property
    def outputs(self) -> Tuple[str, ...]:
        return tuple(v for v in self.ids if not self._successors.get(v))

    @functools.cached_property
    def hidden(self) -> Tuple[str, ...]:
        boundary = set(self.inputs) | set(self.outputs)
        return tuple(v for v in self.ids if v not in boundary)

    @functools.cached_property
    def pool_neurons(self) -> Tuple[str, ...]:
        return tuple(v for v in self.ids if self.by_id[v].is_pool)

    @property
    def d_in(self) -> int:
        return len(self.inputs)

    @property
    def d_out(self) -> int:
        return len(self.outputs)

    def with_activations(self, updates: Mapping[str, Neuron]) -> "Architecture":
        """Returns a copy where the neurons named in updates are replaced."""
        return Architecture.build(
            [updates.get(neuron.id, neuron) for neuron in self.neurons],
            self.edges,
            self.name,
        )


def _frozen_float_map(values: Mapping) -> Mapping:
    return MappingProxyType({key: float(value) for key, value in values.items()})


@dataclass(frozen=True)
class Parameters:
    weights: Mapping[Edge, float]
    biases: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(
            self,
            "weights",
            _frozen_float_map({(str(u), str(v)): w for (u, v), w in self.weights.items()}),
        )
        object.__setattr__(self, "biases", _frozen_float_map(self.biases))

    @classmethod
    def zeros(cls, arch: Architecture) -> "Parameters":
        return cls(
            weights={edge: 0.0 for edge in arch.edges},
            biases={v: 0.0 for v in arch.ids if v not in arch.inputs},
        )

    def weight(self, u: str, v: str) -> float:
        return self.weights[(u, v)]

    def bias(self, v: str) -> float:
        return self.biases.get(v, 0.0)

    def incoming(self, arch: Architecture, v: str) -> np.ndarray:
        """theta^{->v}, aligned with arch.antecedents(v)."""
        return np.array([self.weights[(u, v)] for u in arch.antecedents(v)], dtype=float)

    def outgoing(self, arch: Architecture, v: str) -> np.ndarray:
        """theta^{v->}, aligned with arch.successors(v)."""
        return np.array([self.weights[(v, w)] for w in arch.successors(v)], dtype=float)

    def replace(
        self,
        weights: Optional[Mapping[Edge, float]] = None,
        biases: Optional[Mapping[str, float]] = None,
    ) -> "Parameters":
        """Returns new parameters with the given entries overwritten."""
        new_weights = dict(self.weights)
        new_weights.update(weights or {})
        new_biases = dict(self.biases)
        new_biases.update(biases or {})
        return Parameters(weights=new_weights, biases=new_biases)

    def map_values(self, fn: Callable[[float], float]) -> "Parameters":
        return Parameters(
            weights={edge: fn(w) for edge, w in self.weights.items()},
            biases={v: fn(b) for v, b in self.biases.items()},
        )

    def is_finite(self) -> bool:
        return all(math.isfinite(value) for value in self.weights.values()) and all(
            math.isfinite(value) for value in self.biases.values()
        )


@dataclass(frozen=True)
class Violation:
    rule: str
    subject: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self) -> List[str]:
        return [violation.rule for violation in self.violations]


@dataclass(frozen=True)
class BiasInputMap:
    """Where the constant input of an absorbed-bias network sits."""

    bias_neuron: Optional[str]
    position: Optional[int]
    d_in: int

    @property
    def requires_constant(self) -> bool:
        return self.bias_neuron is not None

    def augment(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if not self.requires_constant:
            return x
        return np.insert(x, self.position, 1.0, axis=-1)


@dataclass(frozen=True)
class NeuronFragment:
    """A neuron with its incoming edges and bias, ready to merge into a network."""

    neuron: Neuron
    weights: Mapping[Edge, float] = field(default_factory=dict)
    bias: float = 0.0

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(sorted(self.weights))
