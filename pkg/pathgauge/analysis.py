"""Analysis

Path-norm analysis of networks posted as JSON documents (same shape as the
YAML network files).

Import it like this app.include_router(analysis, tags=["Analysis"])
After that, the following endpoints will become available:

 * /networks/validate
 * /networks/pathnorm
 * /networks/lipschitz
 * /networks/normalize
 * /bounds/constants
 * /bounds/resnets

"""

import math
from typing import List, Optional, Tuple

from fastapi import APIRouter

from pathgauge.core.exceptions import (
    BadRequestException,
    PathGaugeException,
    UnprocessableException,
    ValidationError,
)
from pathgauge.models.bound_models import ArchMeta
from pathgauge.models.network_models import Architecture, Parameters
from pathgauge.models.norm_models import NormResult, NormSpec
from pathgauge.schemas import report_schemas
from pathgauge.schemas.network_schemas import NetworkDocument
from pathgauge.services import bound_services, graph_services, norm_services, rescale_services

app = APIRouter(tags=["Analysis"])


def _as_r(r: Optional[float]) -> float:
    return math.inf if r is None else r


def _finite(value: float) -> Optional[float]:
    return value if math.isfinite(value) else None


def _network(document: NetworkDocument) -> Tuple[Architecture, Parameters]:
    arch, params = document.to_network()
    try:
        graph_services.require_valid(arch, params)
    except ValidationError as error:
        raise UnprocessableException(error.message)
    return arch, params


@app.post("/networks/validate", response_model=report_schemas.ValidationOut)
def validate_network(network: NetworkDocument):
    """intro-->This endpoint checks a network against the architecture invariants. To use it make a post request to the /networks/validate endpoint with the network document as body.

        reqBody-->neurons: list of {id, activation, k}
        reqBody-->edges: list of {from, to, weight}
        reqBody-->biases: map from neuron id to bias

    returnDesc--> On sucessful request, it returns
        returnBody--> ok together with every violated rule
    """
    arch, params = network.to_network()
    report = graph_services.validate(arch, params)
    return report_schemas.ValidationOut(
        ok=report.ok,
        violations=[
            report_schemas.ViolationOut(rule=v.rule, subject=v.subject, message=v.message)
            for v in report.violations
        ],
        n_neurons=len(arch.neurons),
        n_edges=len(arch.edges),
        depth=graph_services.depth(arch) if report.ok else None,
    )


@app.post("/networks/pathnorm", response_model=report_schemas.NormOut)
def compute_path_norm(request: report_schemas.PathNormRequest):
    """intro-->This endpoint returns the mixed path-norm ||Phi||_{q,r} of a network.

        reqBody-->network: the network document
        reqBody-->q: inner exponent (finite, positive)
        reqBody-->r: outer exponent, null for infinity
        reqBody-->mode: fast, exact, naive or log-domain

    returnDesc--> On sucessful request, it returns
        returnBody--> the value, with its log10 when it overflows
    """
    arch, params = _network(request.network)
    try:
        spec = NormSpec(request.q, _as_r(request.r))
        if request.mode == "exact":
            result = NormResult(value=norm_services.path_norm_exact(arch, params, spec))
        elif request.mode == "naive":
            result = norm_services.naive_forward_norm(arch, params, spec)
        else:
            result = norm_services.path_norm_fast(
                arch, params, spec, log_domain=request.mode == "log-domain"
            )
    except PathGaugeException as error:
        raise BadRequestException(error.message)
    return report_schemas.NormOut(
        q=spec.q,
        r=request.r,
        mode=request.mode,
        value=_finite(result.value),
        overflow=result.overflow,
        log10_value=result.log10_value,
    )


@app.post("/networks/lipschitz", response_model=report_schemas.LipschitzOut)
def compute_lipschitz(request: report_schemas.LipschitzRequest):
    """intro-->This endpoint returns ||Phi||_{1,r}, a Lipschitz constant of the network from the L-infinity input norm to the Lr output norm."""
    arch, params = _network(request.network)
    try:
        result = norm_services.lipschitz_bound(arch, params, _as_r(request.r))
    except PathGaugeException as error:
        raise BadRequestException(error.message)
    return report_schemas.LipschitzOut(
        r=request.r, lipschitz=_finite(result.value), overflow=result.overflow
    )


@app.post("/networks/normalize", response_model=report_schemas.NormalizeOut)
def normalize_network(request: report_schemas.NormalizeRequest):
    """intro-->This endpoint rescales the parameters of a network so that they are q-normalized. The realized function and the path-lifting do not change.

    returnDesc--> On sucessful request, it returns
        returnBody--> the rescaled network and the factor applied to every hidden neuron
    """
    arch, params = _network(request.network)
    try:
        outcome = rescale_services.normalize(arch, params, request.q)
    except PathGaugeException as error:
        raise BadRequestException(error.message)
    return report_schemas.NormalizeOut(
        network=NetworkDocument.from_network(arch, outcome.params),
        scales=outcome.scales,
        zero_neurons=outcome.zero_neurons,
    )


@app.post("/bounds/constants", response_model=report_schemas.BoundConstantsOut)
def bound_constants(request: report_schemas.BoundConstantsRequest):
    """intro-->This endpoint computes the constant C of the generalization bound and its sharpened counterpart from architecture metadata only. With B and n it also returns 4BC/sqrt(n)."""
    try:
        meta = ArchMeta(
            D=request.D,
            P=request.P,
            K=request.K,
            M=request.M,
            d_in=request.d_in,
            d_out=request.d_out,
            with_bias=request.with_bias,
        )
        C = bound_services.bound_constant_C(meta)
    except ValueError as error:
        raise BadRequestException(str(error))
    C_sharpened = bound_services.bound_constant_C_sharpened(meta)
    scaled = scaled_sharpened = None
    if request.B is not None and request.n:
        scaled = bound_services.scaled_constant(C, request.B, request.n)
        if C_sharpened is not None:
            scaled_sharpened = bound_services.scaled_constant(C_sharpened, request.B, request.n)
    return report_schemas.BoundConstantsOut(
        C=C,
        C_sharpened=C_sharpened,
        C_sharpened_status="heuristic" if C_sharpened is not None else "not-applicable",
        scaled_C=scaled,
        scaled_C_sharpened=scaled_sharpened,
    )


@app.get("/bounds/resnets", response_model=List[report_schemas.ResNetRowOut])
def resnet_constants():
    """intro-->This endpoint returns C, C_sharpened and their scaled values 4BC/sqrt(n) for the ImageNet ResNets 18 to 152."""
    return bound_services.resnet_table()
