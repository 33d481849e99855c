"""Cross-checks of the fast routes against the enumeration oracles."""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from pathgauge.models.network_models import Architecture, Parameters
from pathgauge.models.norm_models import NormSpec
from pathgauge.services import forward_services, norm_services, path_services

logger = logging.getLogger(__name__)

NORM_GRID: Tuple[Tuple[float, float], ...] = tuple(
    (q, r) for q in (1.0, 2.0, 4.0) for r in (1.0, 2.0, math.inf)
)


def relative_discrepancy(a, b) -> float:
    """max |a - b| / max(|a|, |b|, 1) over matching entries."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if a.size == 0:
        return 0.0
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), 1.0)
    return float(np.max(np.abs(a - b) / scale))


@dataclass
class OracleResult:
    name: str
    norm_discrepancy: float = 0.0
    forward_discrepancy: float = 0.0
    details: Dict[str, float] = field(default_factory=dict)

    @property
    def worst(self) -> float:
        return max(self.norm_discrepancy, self.forward_discrepancy)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "norm_discrepancy": self.norm_discrepancy,
            "forward_discrepancy": self.forward_discrepancy,
        }


def compare_network(
    arch: Architecture,
    params: Parameters,
    X: np.ndarray,
    grid: Iterable[Tuple[float, float]] = NORM_GRID,
    cap: Optional[int] = None,
) -> OracleResult:
    """Fast path-norms against enumeration, and realize against the
    path-lifting reconstruction on every row of X."""
    result = OracleResult(name=arch.name or "network")
    for q, r in grid:
        spec = NormSpec(q, r)
        fast = norm_services.path_norm_fast(arch, params, spec).value
        exact = norm_services.path_norm_exact(arch, params, spec, cap)
        gap = relative_discrepancy(fast, exact)
        result.details[f"q={q:g},r={r:g}"] = gap
        result.norm_discrepancy = max(result.norm_discrepancy, gap)

    for x in np.atleast_2d(X):
        direct = forward_services.realize(arch, params, x)
        lifted = path_services.forward_via_lifting(arch, params, x, cap)
        result.forward_discrepancy = max(
            result.forward_discrepancy, relative_discrepancy(direct, lifted)
        )
    logger.debug(
        "%s: norms %.3g, forward %.3g", result.name, result.norm_discrepancy, result.forward_discrepancy
    )
    return result


def random_inputs(rng: np.random.Generator, d_in: int, count: int = 10) -> np.ndarray:
    return rng.uniform(-3.0, 3.0, size=(count, d_in))
