from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from pathgauge.schemas.network_schemas import NetworkDocument


class ViolationOut(BaseModel):
    rule: str
    subject: str
    message: str


class ValidationOut(BaseModel):
    ok: bool
    violations: List[ViolationOut] = []
    n_neurons: int
    n_edges: int
    depth: Optional[int] = None


class PathNormRequest(BaseModel):
    network: NetworkDocument
    q: float = 1.0
    # null stands for r = infinity
    r: Optional[float] = None
    mode: str = Field("fast", pattern="^(fast|exact|naive|log-domain)$")


class NormOut(BaseModel):
    q: float
    r: Optional[float] = None
    mode: str
    value: Optional[float] = None
    overflow: bool = False
    log10_value: Optional[float] = None


class LipschitzRequest(BaseModel):
    network: NetworkDocument
    r: Optional[float] = None


class LipschitzOut(BaseModel):
    r: Optional[float] = None
    lipschitz: Optional[float] = None
    overflow: bool = False


class NormalizeRequest(BaseModel):
    network: NetworkDocument
    q: float = 1.0


class NormalizeOut(BaseModel):
    network: NetworkDocument
    scales: Dict[str, float]
    zero_neurons: List[str]


class BoundConstantsRequest(BaseModel):
    D: int
    P: int = 0
    K: int = 1
    M: int = 0
    d_in: int
    d_out: int
    with_bias: bool = True
    B: Optional[float] = None
    n: Optional[int] = None


class BoundConstantsOut(BaseModel):
    C: float
    C_sharpened: Optional[float] = None
    C_sharpened_status: str
    scaled_C: Optional[float] = None
    scaled_C_sharpened: Optional[float] = None


class ResNetRowOut(BaseModel):
    name: str
    D: int
    C: float
    C_sharpened: float
    scaled_C: float
    scaled_C_sharpened: float
