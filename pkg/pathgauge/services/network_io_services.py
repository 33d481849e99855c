"""Reading and writing network files and CSV datasets.

A network file is a YAML document:

    name: d1            # optional
    neurons:
      - {id: u, activation: input}
      - {id: h1, activation: relu}
      - {id: p, activation: kpool, k: 2}
    edges:
      - {from: u, to: h1, weight: 2.0}
    biases: {h1: 0.5}   # missing entries are 0
"""

import hashlib
import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path as FilePath
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import pydantic
import yaml

from pathgauge.core import messages
from pathgauge.core.exceptions import DimensionMismatch, OutOfRangeLabel, ParseError
from pathgauge.models.network_models import Architecture, Parameters
from pathgauge.schemas.network_schemas import NetworkDocument
from pathgauge.services.graph_services import require_valid

logger = logging.getLogger(__name__)

LABEL_COLUMN = "label"
FIXTURES_PACKAGE = "pathgauge.data"


@dataclass(frozen=True, eq=False)
class Dataset:
    X: np.ndarray
    labels: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return self.X.shape[0]


def _node_line(node, location: Sequence) -> Optional[int]:
    """1-based line of the YAML node reached by following location."""
    for key in location:
        if isinstance(node, yaml.MappingNode):
            matches = [value for name, value in node.value if name.value == str(key)]
            if not matches:
                break
            node = matches[0]
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            node = node.value[key]
        else:
            break
    return node.start_mark.line + 1 if node is not None else None


def _field_name(location: Sequence) -> str:
    return "".join(f"[{key}]" if isinstance(key, int) else f".{key}" for key in location).lstrip(".")


def parse_network(text: str, validate: bool = True) -> Tuple[Architecture, Parameters]:
    """Builds (arch, params) from the YAML text of a network file.

    Raises ParseError for malformed documents, located by line and field, and
    ValidationError when the network breaks an architecture invariant.
    """
    try:
        raw = yaml.safe_load(text)
        root = yaml.compose(text)
    except yaml.YAMLError as error:
        mark = getattr(error, "problem_mark", None)
        raise ParseError(
            getattr(error, "problem", None) or str(error),
            line=mark.line + 1 if mark is not None else None,
        )
    if not isinstance(raw, dict):
        raise ParseError("expected a mapping with neurons, edges and biases", line=1)

    try:
        document = NetworkDocument.model_validate(raw)
    except pydantic.ValidationError as error:
        first = error.errors()[0]
        location = list(first["loc"])
        raise ParseError(first["msg"], line=_node_line(root, location), field=_field_name(location))

    seen = set()
    for position, edge in enumerate(document.edges):
        key = (edge.source, edge.to)
        if key in seen:
            location = ["edges", position]
            raise ParseError(
                messages.PARALLEL_EDGE,
                line=_node_line(root, location),
                field=f"{_field_name(location)} {edge.source}->{edge.to}",
            )
        seen.add(key)

    arch, params = document.to_network()
    if validate:
        require_valid(arch, params)
    return arch, params


def load_network(path, validate: bool = True) -> Tuple[Architecture, Parameters]:
    path = FilePath(path)
    arch, params = parse_network(path.read_text(encoding="utf-8"), validate=validate)
    if arch.name is None:
        arch = Architecture.build(arch.neurons, arch.edges, name=path.stem)
    logger.debug("loaded %s: %d neurons, %d edges", path, len(arch.neurons), len(arch.edges))
    return arch, params


def dump_network(arch: Architecture, params: Parameters) -> str:
    document = NetworkDocument.from_network(arch, params)
    return yaml.safe_dump(document.as_yaml_dict(), sort_keys=False, default_flow_style=None)


def save_network(arch: Architecture, params: Parameters, path) -> None:
    FilePath(path).write_text(dump_network(arch, params), encoding="utf-8")


def load_dataset(path, d_in: Optional[int] = None, d_out: Optional[int] = None) -> Dataset:
    """CSV with a header row, one sample per row, an optional final label column."""
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as error:
        raise ParseError(f"cannot read dataset {path}: {error}")

    labels = None
    if len(frame.columns) and frame.columns[-1] == LABEL_COLUMN:
        column = frame.pop(LABEL_COLUMN)
        if not pd.api.types.is_numeric_dtype(column) or (column % 1 != 0).any():
            raise ParseError("labels must be integers", field=LABEL_COLUMN)
        labels = column.to_numpy(dtype=int)
        if d_out is not None and len(labels) and (labels.min() < 1 or labels.max() > d_out):
            raise OutOfRangeLabel(f"labels must lie in 1..{d_out}")

    non_numeric = [name for name in frame.columns if not pd.api.types.is_numeric_dtype(frame[name])]
    if non_numeric:
        raise ParseError("non-numeric column", field=str(non_numeric[0]))
    if d_in is not None and frame.shape[1] != d_in:
        raise DimensionMismatch(f"dataset has {frame.shape[1]} feature columns, network expects {d_in}")
    return Dataset(X=frame.to_numpy(dtype=float), labels=labels)


def file_digest(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def bundled_fixtures() -> list:
    """The small reference networks shipped with the package, sorted by name."""
    folder = resources.files(FIXTURES_PACKAGE).joinpath("fixtures")
    return sorted(
        (entry for entry in folder.iterdir() if entry.name.endswith(".yaml")),
        key=lambda entry: entry.name,
    )


def load_fixture(name: str, validate: bool = True) -> Tuple[Architecture, Parameters]:
    entry = resources.files(FIXTURES_PACKAGE).joinpath("fixtures").joinpath(f"{name}.yaml")
    arch, params = parse_network(entry.read_text(encoding="utf-8"), validate=validate)
    if arch.name is None:
        arch = Architecture.build(arch.neurons, arch.edges, name=name)
    return arch, params
