"""Closed-form pieces of the path-norm generalization bound.

Natural logarithms throughout. Labels are 1-based class indices.
"""

import functools
import logging
import math
from importlib import resources
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
import yaml

from pathgauge.core.exceptions import (
    DimensionMismatch,
    EmptyDataset,
    NonPositiveGamma,
    OutOfRangeLabel,
    PoolBiasNonZero,
)
from pathgauge.models.bound_models import (
    ArchMeta,
    BoundReport,
    GammaSuggestion,
    MarginBound,
    ResNetPreset,
)
from pathgauge.models.network_models import Architecture, Parameters
from pathgauge.models.norm_models import NormResult
from pathgauge.services.transform_services import nonzero_pool_biases

logger = logging.getLogger(__name__)

SIGMA_VARIANTS = ("sup_norm", "coordinate_with_bias")
CROSS_ENTROPY_LIPSCHITZ = math.sqrt(2.0)


def sigma_estimate(X, variant: str = "sup_norm") -> float:
    """Empirical sigma, never below sqrt(n).

    sup_norm: sqrt(max(n, sum_i ||X_i||_inf^2)).
    coordinate_with_bias: sqrt(max(n, max_u sum_i X_{i,u}^2)), u ranging over
    the coordinates plus a constant-1 coordinate.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = X.shape[0] if X.size else 0
    if n == 0:
        raise EmptyDataset()
    if variant == "sup_norm":
        total = float(np.sum(np.max(np.abs(X), axis=1) ** 2))
    elif variant == "coordinate_with_bias":
        total = max(float(np.max(np.sum(X ** 2, axis=0))), float(n))
    else:
        raise ValueError(f"unknown sigma variant {variant!r}, expected one of {SIGMA_VARIANTS}")
    return math.sqrt(max(float(n), total))


def bound_constant_C(meta: ArchMeta) -> float:
    """C = (D log((3+2P)K) + log((3+2P)/(1+P) d_in d_out))^{1/2}."""
    growth = 3 + 2 * meta.P
    return math.sqrt(
        meta.D * math.log(growth * meta.K)
        + math.log(growth / (1 + meta.P) * meta.effective_d_in * meta.d_out)
    )


def bound_constant_C_sharpened(meta: ArchMeta, applicable: bool = True) -> Optional[float]:
    """(D log 3 + M log K + log(d_in d_out))^{1/2}, stated without proof in the
    literature; None when the architecture does not fit its assumptions."""
    if not applicable or meta.P > 1:
        return None
    return math.sqrt(
        meta.D * math.log(3)
        + meta.M * math.log(meta.K)
        + math.log(meta.effective_d_in * meta.d_out)
    )


def depth_term(meta: ArchMeta, sharpened: bool = False) -> float:
    """Depth-dependent part of C (or of C_sharpened), without the dimension term."""
    if sharpened:
        return math.sqrt(meta.D * math.log(3) + meta.M * math.log(meta.K))
    return math.sqrt(meta.D * math.log((3 + 2 * meta.P) * meta.K))


def generalization_bound(
    sigma: float, n: int, L: float, C: float, path_norm_l1: float, log10: bool = False
) -> float:
    """(4 sigma / n) L C ||Phi||_1; with log10 set, path_norm_l1 is a log10
    value and so is the result."""
    if n < 1:
        raise EmptyDataset()
    factor = 4.0 * sigma / n * L * C
    if not log10:
        return factor * path_norm_l1
    if factor <= 0:
        return -math.inf
    return math.log10(factor) + path_norm_l1


def scaled_constant(C: float, B: float, n: int) -> float:
    """4 B C / sqrt(n): the bound's scale factor once sigma/n is replaced by B/sqrt(n)."""
    return 4.0 * B * C / math.sqrt(n)


def max_informative_path_norm(
    sigma: float, n: int, L: float, C: float, target: float = 1.0
) -> float:
    """Largest L1 path-norm for which the bound does not exceed target."""
    factor = 4.0 * sigma / n * L * C
    return math.inf if factor == 0 else target / factor


def _label_index(label: int, d_out: int) -> int:
    if isinstance(label, bool) or int(label) != label or not 1 <= label <= d_out:
        raise OutOfRangeLabel(f"label {label} is outside 1..{d_out}")
    return int(label) - 1


def _require_gamma(gamma: float) -> float:
    if not gamma > 0:
        raise NonPositiveGamma(f"gamma must be strictly positive, got {gamma}")
    return float(gamma)


def margin(output, label: int) -> float:
    """y_c - max_{c' != c} y_c'."""
    output = np.asarray(output, dtype=float)
    if output.ndim != 1 or output.shape[0] < 2:
        raise DimensionMismatch("margins need at least two output classes")
    c = _label_index(label, output.shape[0])
    others = np.delete(output, c)
    return float(output[c] - others.max())


def margins(outputs, labels: Sequence[int]) -> np.ndarray:
    outputs = np.atleast_2d(np.asarray(outputs, dtype=float))
    if len(labels) != outputs.shape[0]:
        raise DimensionMismatch(f"{outputs.shape[0]} outputs but {len(labels)} labels")
    return np.array([margin(row, label) for row, label in zip(outputs, labels)], dtype=float)


def _margin_loss_value(m: float, gamma: float) -> float:
    if m > gamma:
        return 0.0
    if m < 0:
        return 1.0
    return 1.0 - m / gamma


def margin_loss(output, label: int, gamma: float) -> float:
    gamma = _require_gamma(gamma)
    return _margin_loss_value(margin(output, label), gamma)


def margin_bound(
    outputs,
    labels: Sequence[int],
    gamma: float,
    sigma: float,
    n: int,
    C: float,
    path_norm_l1: float,
    log10: bool = False,
) -> MarginBound:
    """term1: fraction of samples with margin <= gamma;
    term2: (8 sigma / n) C ||Phi||_1 / gamma. With log10 set, path_norm_l1
    is a log10 value and so are term2 and the total."""
    gamma = _require_gamma(gamma)
    if n < 1:
        raise EmptyDataset()
    values = margins(outputs, labels)
    term1 = float(np.count_nonzero(values <= gamma)) / n
    factor = 8.0 * sigma / n * C / gamma
    if not log10:
        return MarginBound(gamma=gamma, term1=term1, term2=factor * path_norm_l1)
    log_factor = math.log10(factor) if factor > 0 else -math.inf
    return MarginBound(gamma=gamma, term1=term1, term2=log_factor + path_norm_l1, log10=True)


def bound_path_norm(path_norm: NormResult) -> Tuple[float, bool]:
    """The L1 path-norm as it enters a bound: the plain value, or its log10
    when the plain value overflows."""
    if path_norm.finite:
        return path_norm.value, False
    return path_norm.as_log10(), True


def cross_entropy(logits, label: int) -> float:
    """-log softmax(logits)_c, evaluated relative to the correct logit."""
    logits = np.asarray(logits, dtype=float)
    c = _label_index(label, logits.shape[0])
    shifted = np.delete(logits, c) - logits[c]
    if shifted.size == 0:
        return 0.0
    top = float(shifted.max())
    if top <= 0:
        return float(np.log1p(np.sum(np.exp(shifted))))
    return top + float(np.log(np.exp(-top) + np.sum(np.exp(shifted - top))))


def loss_lipschitz_constant(loss: Union[str, Callable], gamma: Optional[float] = None) -> float:
    """sqrt(2) for the cross-entropy, 2/gamma for the gamma-margin loss."""
    if loss in ("xent", "cross_entropy", cross_entropy):
        return CROSS_ENTROPY_LIPSCHITZ
    if loss in ("margin", "margin_loss", margin_loss):
        return 2.0 / _require_gamma(gamma)
    raise ValueError(f"no known Lipschitz constant for loss {loss!r}")


def loss_constant_from_flag(text: str) -> float:
    """Reads xent, margin:GAMMA or const:L."""
    name, _, argument = text.partition(":")
    if name == "xent" and not argument:
        return loss_lipschitz_constant("xent")
    if name == "margin" and argument:
        return loss_lipschitz_constant("margin", float(argument))
    if name == "const" and argument:
        value = float(argument)
        if value < 0:
            raise ValueError("a loss Lipschitz constant cannot be negative")
        return value
    raise ValueError(f"unknown loss {text!r}, expected xent, margin:GAMMA or const:L")


def top1_error(outputs, labels: Sequence[int]) -> float:
    """Fraction of samples whose first arg-max is not the label."""
    outputs = np.atleast_2d(np.asarray(outputs, dtype=float))
    if outputs.shape[0] == 0:
        raise EmptyDataset()
    for label in labels:
        _label_index(label, outputs.shape[1])
    predicted = np.argmax(outputs, axis=1) + 1
    return float(np.mean(predicted != np.asarray(labels)))


def margin_quantile(values, level: float) -> float:
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise EmptyDataset()
    if not 0 <= level <= 1:
        raise ValueError(f"quantile level must lie in [0, 1], got {level}")
    return float(np.quantile(values, level))


def suggest_gamma(outputs, labels: Sequence[int]) -> GammaSuggestion:
    """gamma at the (e/3 + 2/3)-quantile of the training margins, e being the
    top-1 training error."""
    error = top1_error(outputs, labels)
    level = error / 3.0 + 2.0 / 3.0
    gamma = margin_quantile(margins(outputs, labels), level)
    if gamma <= 0:
        logger.warning("margin quantile %.3f is %g, no usable gamma", level, gamma)
    return GammaSuggestion(level=level, top1_error=error, gamma=gamma)


def check_pool_biases(arch: Architecture, params: Parameters) -> None:
    """The bound only holds when every k-max-pooling neuron has a null bias."""
    offending = nonzero_pool_biases(arch, params)
    if offending:
        raise PoolBiasNonZero(f"k-max-pooling neurons with nonzero bias: {', '.join(offending)}")


@functools.lru_cache(maxsize=None)
def _resnet_document() -> dict:
    text = resources.files("pathgauge.data").joinpath("resnets.yaml").read_text()
    return yaml.safe_load(text)


def resnet_names() -> List[str]:
    return [entry["name"] for entry in _resnet_document()["networks"]]


def resnet_meta(name: Union[str, int], with_bias: bool = True) -> ResNetPreset:
    """Preset for an ImageNet ResNet, by name ("resnet18") or depth tag (18)."""
    document = _resnet_document()
    wanted = f"resnet{name}" if str(name).isdigit() else str(name).lower()
    for entry in document["networks"]:
        if entry["name"] != wanted:
            continue
        constants = document["constants"]
        meta = ArchMeta(
            D=2 + entry["blocks"] * entry["convs_per_block"],
            P=constants["P"],
            K=constants["K"],
            M=constants["M"],
            d_in=constants["d_in"],
            d_out=constants["d_out"],
            with_bias=with_bias,
        )
        return ResNetPreset(
            name=entry["name"],
            blocks=entry["blocks"],
            convs_per_block=entry["convs_per_block"],
            meta=meta,
            B=float(constants["B"]),
            n=int(constants["n"]),
        )
    raise KeyError(f"unknown ResNet {name!r}, known: {', '.join(resnet_names())}")


def resnet_table(with_bias: bool = True) -> List[dict]:
    """4BC/sqrt(n) and its sharpened counterpart for every preset."""
    rows = []
    for name in resnet_names():
        preset = resnet_meta(name, with_bias)
        C = bound_constant_C(preset.meta)
        C_sharpened = bound_constant_C_sharpened(preset.meta)
        rows.append(
            {
                "name": preset.name,
                "D": preset.meta.D,
                "C": C,
                "C_sharpened": C_sharpened,
                "scaled_C": scaled_constant(C, preset.B, preset.n),
                "scaled_C_sharpened": scaled_constant(C_sharpened, preset.B, preset.n),
            }
        )
    return rows


def build_report(
    sigma: float,
    n: int,
    meta: ArchMeta,
    L: float,
    path_norm: NormResult,
    sharpened_applicable: bool = True,
    margin_result: Optional[MarginBound] = None,
) -> BoundReport:
    C = bound_constant_C(meta)
    path_norm_l1, in_log10 = bound_path_norm(path_norm)
    return BoundReport(
        sigma=sigma,
        C=C,
        L=L,
        path_norm_l1=path_norm_l1,
        bound=generalization_bound(sigma, n, L, C, path_norm_l1, log10=in_log10),
        n=n,
        C_sharpened=bound_constant_C_sharpened(meta, sharpened_applicable),
        path_norm_is_log10=in_log10,
        margin_bound=margin_result,
    )
