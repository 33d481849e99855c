from dataclasses import dataclass
from typing import Dict, List, Mapping, Tuple

import numpy as np

from pathgauge.models.network_models import Edge

BIAS_COLUMN = "v_bias"


@dataclass(frozen=True, order=True)
class Path:
    neurons: Tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.neurons) - 1

    @property
    def start(self) -> str:
        return self.neurons[0]

    @property
    def end(self) -> str:
        return self.neurons[-1]

    @property
    def edges(self) -> List[Edge]:
        return list(zip(self.neurons[:-1], self.neurons[1:]))

    def sort_key(self):
        return (self.end, self.length, self.neurons)

    def __str__(self) -> str:
        return "->".join(self.neurons)


@dataclass(frozen=True, eq=False)
class PathLifting:
    index: Tuple[Path, ...]
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.index)

    def by_output(self) -> Dict[str, np.ndarray]:
        """Sub-liftings Phi^{->v} for every output neuron v, in index order."""
        grouped: Dict[str, List[float]] = {}
        for path, value in zip(self.index, self.values):
            grouped.setdefault(path.end, []).append(value)
        return {v: np.array(values, dtype=float) for v, values in grouped.items()}

    def as_dict(self) -> Dict[str, float]:
        return {str(path): float(value) for path, value in zip(self.index, self.values)}


@dataclass(frozen=True, eq=False)
class PathActivationMatrix:
    index: Tuple[Path, ...]
    columns: Tuple[str, ...]
    matrix: np.ndarray

    def row(self, path: Path) -> np.ndarray:
        return self.matrix[self.index.index(path)]


@dataclass(frozen=True)
class EvaluationTrace:
    values: Mapping[str, float]
    edge_activations: Mapping[Edge, int]
    neuron_activations: Mapping[str, int]
