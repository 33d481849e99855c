import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from pathgauge.core.exceptions import InvalidNormSpec
from pathgauge.models.network_models import Parameters


@dataclass(frozen=True)
class NormSpec:
    """Exponents of the mixed path-norm ||Phi||_{q,r}."""

    q: float
    r: float = math.inf

    def __post_init__(self):
        q, r = float(self.q), float(self.r)
        if math.isnan(q) or q <= 0:
            raise InvalidNormSpec(f"q must be positive, got {self.q}")
        if math.isnan(r) or r <= 0:
            raise InvalidNormSpec(f"r must be positive, got {self.r}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)

    def require_finite_q(self) -> "NormSpec":
        if math.isinf(self.q):
            raise InvalidNormSpec("path-norms are defined for finite q only")
        return self


@dataclass(frozen=True)
class NormResult:
    """A path-norm value; log10_value is set when the plain value overflows
    or when the log-domain evaluation was requested."""

    value: float
    overflow: bool = False
    log10_value: Optional[float] = None

    def __float__(self) -> float:
        return self.value

    @property
    def finite(self) -> bool:
        return not self.overflow and math.isfinite(self.value)

    def as_log10(self) -> float:
        if self.log10_value is not None:
            return self.log10_value
        return math.log10(self.value) if self.value > 0 else -math.inf


@dataclass(frozen=True)
class NormalizationOutcome:
    params: Parameters
    scales: Dict[str, float] = field(default_factory=dict)
    zero_neurons: List[str] = field(default_factory=list)
