import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from pathgauge.models.network_models import Architecture


@dataclass(frozen=True)
class ArchMeta:
    """Architecture summary entering the bound constant C.

    with_bias accounts for the constant input added by bias absorption:
    d_in is replaced by d_in + 1 inside C.
    """

    D: int
    P: int
    K: int
    M: int
    d_in: int
    d_out: int
    with_bias: bool = True

    def __post_init__(self):
        for name in ("D", "P", "M", "d_in", "d_out"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.K < 1:
            raise ValueError("K must be at least 1")

    @property
    def effective_d_in(self) -> int:
        return self.d_in + 1 if self.with_bias else self.d_in

    @classmethod
    def from_architecture(cls, arch: Architecture, with_bias: bool = True) -> "ArchMeta":
        from pathgauge.services import graph_services

        stats = graph_services.pool_stats(arch)
        return cls(
            D=graph_services.depth(arch),
            P=stats.P,
            K=stats.K,
            M=stats.M,
            d_in=arch.d_in,
            d_out=arch.d_out,
            with_bias=with_bias,
        )

    @classmethod
    def parse(cls, text: str, with_bias: bool = True) -> "ArchMeta":
        """Reads the comma-separated form D,P,K,M,d_in,d_out."""
        fields = [int(part) for part in text.split(",")]
        if len(fields) != 6:
            raise ValueError("expected six comma-separated integers D,P,K,M,d_in,d_out")
        return cls(*fields, with_bias=with_bias)


@dataclass(frozen=True)
class MarginBound:
    """term1 + term2; with log10 set, term2 and total are log10 values."""

    gamma: float
    term1: float
    term2: float
    log10: bool = False

    @property
    def total(self) -> float:
        if not self.log10:
            return self.term1 + self.term2
        log_term1 = math.log10(self.term1) if self.term1 > 0 else -math.inf
        return float(np.logaddexp(log_term1 * math.log(10), self.term2 * math.log(10)) / math.log(10))

    def as_dict(self) -> dict:
        if not self.log10:
            return {"gamma": self.gamma, "term1": self.term1, "term2": self.term2, "total": self.total}
        return {
            "gamma": self.gamma,
            "term1": self.term1,
            "log10_term2": self.term2,
            "log10_total": self.total,
        }


@dataclass(frozen=True)
class BoundReport:
    sigma: float
    C: float
    L: float
    path_norm_l1: float
    bound: float
    n: int
    C_sharpened: Optional[float] = None
    path_norm_is_log10: bool = False
    margin_bound: Optional[MarginBound] = None

    def as_dict(self) -> dict:
        report = {
            "sigma": self.sigma,
            "sigma_kind": "empirical",
            "n": self.n,
            "C": self.C,
            "C_sharpened": self.C_sharpened,
            "C_sharpened_status": "heuristic" if self.C_sharpened is not None else "not-applicable",
            "L": self.L,
        }
        if self.path_norm_is_log10:
            report["log10_pathnorm_l1"] = self.path_norm_l1
            report["log10_bound"] = self.bound
        else:
            report["pathnorm_l1"] = self.path_norm_l1
            report["bound"] = self.bound
        report["overflow"] = self.path_norm_is_log10
        if self.margin_bound is not None:
            report["margin_bound"] = self.margin_bound.as_dict()
        return report


@dataclass(frozen=True)
class GammaSuggestion:
    """Margin scale read off the training margins at quantile level."""

    level: float
    top1_error: float
    gamma: float

    @property
    def usable(self) -> bool:
        return self.gamma > 0


@dataclass(frozen=True)
class ResNetPreset:
    name: str
    blocks: int
    convs_per_block: int
    meta: ArchMeta
    B: float
    n: int
