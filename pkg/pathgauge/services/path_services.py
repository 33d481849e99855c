"""Brute-force path machinery: the set of paths ending at output neurons,
the path-lifting Phi(theta), the path-activation matrix A(theta, x), and the
forward pass rebuilt from both. Path counts grow exponentially with depth;
everything here is an oracle for small networks and is guarded by a cap."""

import logging
from typing import Dict, List, Optional

import numpy as np

from pathgauge.core.exceptions import PathBudgetExceeded
from pathgauge.models.network_models import Architecture, Parameters
from pathgauge.models.path_models import (
    BIAS_COLUMN,
    Path,
    PathActivationMatrix,
    PathLifting,
)
from pathgauge.services import forward_services
from pathgauge.services.graph_services import topological_order
from pathgauge.utils import settings

logger = logging.getLogger(__name__)


def _resolve_cap(cap: Optional[int]) -> int:
    return settings.PATH_CAP if cap is None else cap


def count_paths(arch: Architecture) -> int:
    """|P| from the recurrence paths(v) = 1 + sum over antecedents, summed over outputs."""
    ending_at: Dict[str, int] = {}
    for v in topological_order(arch):
        ending_at[v] = 1 + sum(ending_at[u] for u in arch.antecedents(v))
    return sum(ending_at[v] for v in arch.outputs)


def enumerate_paths(arch: Architecture, cap: Optional[int] = None) -> List[Path]:
    """All paths ending at an output neuron, length-0 paths included, in
    canonical order (end id, length, neuron sequence)."""
    cap = _resolve_cap(cap)
    total = count_paths(arch)
    if total > cap:
        raise PathBudgetExceeded(f"network has {total} paths, cap is {cap}")

    paths: List[Path] = []
    # walk backwards from each output so that only paths ending there are built
    for output in arch.outputs:
        stack = [(output,)]
        while stack:
            suffix = stack.pop()
            paths.append(Path(suffix))
            for u in arch.antecedents(suffix[0]):
                stack.append((u,) + suffix)
    paths.sort(key=Path.sort_key)
    logger.debug("enumerated %d paths", len(paths))
    return paths


def lifting_value(arch: Architecture, params: Parameters, path: Path) -> float:
    value = 1.0 if path.start in arch.inputs else params.bias(path.start)
    for u, v in path.edges:
        value *= params.weight(u, v)
    return value


def path_lifting(
    arch: Architecture, params: Parameters, cap: Optional[int] = None
) -> PathLifting:
    index = tuple(enumerate_paths(arch, cap))
    values = np.array([lifting_value(arch, params, path) for path in index], dtype=float)
    return PathLifting(index=index, values=values)


def path_activations(
    arch: Architecture, params: Parameters, x, cap: Optional[int] = None
) -> PathActivationMatrix:
    """A(theta, x): one row per path, columns N_in (ascending id) then v_bias."""
    index = tuple(enumerate_paths(arch, cap))
    evaluation = forward_services.trace(arch, params, x)
    columns = arch.inputs + (BIAS_COLUMN,)
    column_of = {u: position for position, u in enumerate(columns)}

    matrix = np.zeros((len(index), len(columns)), dtype=np.int8)
    for row, path in enumerate(index):
        active = evaluation.neuron_activations[path.start]
        for edge in path.edges:
            active *= evaluation.edge_activations[edge]
        start_column = path.start if path.start in column_of else BIAS_COLUMN
        matrix[row, column_of[start_column]] = active
    return PathActivationMatrix(index=index, columns=columns, matrix=matrix)


def forward_via_lifting(
    arch: Architecture, params: Parameters, x, cap: Optional[int] = None
) -> np.ndarray:
    """Outputs as <Phi^{->v}(theta), A^{->v}(theta, x) (x; 1)> for every output v."""
    lifting = path_lifting(arch, params, cap)
    activations = path_activations(arch, params, x, cap)
    extended = np.append(np.asarray(x, dtype=float), 1.0)
    contributions = lifting.values * (activations.matrix @ extended)

    output_position = {v: position for position, v in enumerate(arch.outputs)}
    outputs = np.zeros(arch.d_out)
    for path, contribution in zip(lifting.index, contributions):
        outputs[output_position[path.end]] += contribution
    return outputs
