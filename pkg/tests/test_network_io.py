import numpy as np
import pytest

from pathgauge.core.exceptions import (
    DimensionMismatch,
    OutOfRangeLabel,
    ParseError,
    ValidationError,
)
from pathgauge.models.network_models import Activation
from pathgauge.services import network_io_services
from pathgauge.utils import generators

PARALLEL = """\
neurons:
  - {id: u, activation: input}
  - {id: o, activation: identity}
edges:
  - {from: u, to: o, weight: 1.0}
  - {from: u, to: o, weight: 2.0}
"""

BAD_ACTIVATION = """\
neurons:
  - {id: u, activation: input}
  - {id: o, activation: sigmoid}
edges:
  - {from: u, to: o, weight: 1.0}
"""

KPOOL_TOO_WIDE = """\
neurons:
  - {id: u, activation: input}
  - {id: p, activation: kpool, k: 2}
  - {id: o, activation: identity}
edges:
  - {from: u, to: p, weight: 1.0}
  - {from: p, to: o, weight: 1.0}
"""


def test_load_diamond_fixture():
    arch, params = network_io_services.load_fixture("d1")
    assert len(arch.neurons) == 4
    assert len(arch.edges) == 4
    assert arch.name == "d1"
    expected_arch, expected_params = generators.diamond_network()
    assert arch.edges == expected_arch.edges
    assert dict(params.weights) == dict(expected_params.weights)
    assert dict(params.biases) == dict(expected_params.biases)


def test_every_bundled_fixture_loads():
    fixtures = network_io_services.bundled_fixtures()
    assert len(fixtures) == 20
    for entry in fixtures:
        arch, _ = network_io_services.parse_network(entry.read_text(encoding="utf-8"))
        assert arch.name == entry.name[: -len(".yaml")]


def test_parallel_edge_is_a_parse_error():
    with pytest.raises(ParseError) as error:
        network_io_services.parse_network(PARALLEL)
    assert error.value.line == 6
    assert "parallel edge" in error.value.message
    assert "u->o" in error.value.field


def test_schema_errors_are_located():
    with pytest.raises(ParseError) as error:
        network_io_services.parse_network(BAD_ACTIVATION)
    assert error.value.line == 3
    assert error.value.field == "neurons[1].activation"


def test_malformed_yaml():
    with pytest.raises(ParseError) as error:
        network_io_services.parse_network("neurons: [\n  {id: u")
    assert error.value.line is not None
    with pytest.raises(ParseError):
        network_io_services.parse_network("- just\n- a list\n")


def test_invalid_architecture():
    with pytest.raises(ValidationError) as error:
        network_io_services.parse_network(KPOOL_TOO_WIDE)
    assert "kernel-size" in error.value.report.rules()

    arch, _ = network_io_services.parse_network(KPOOL_TOO_WIDE, validate=False)
    assert arch.activation("p") == Activation.KPOOL


def test_missing_biases_default_to_zero():
    text = "neurons:\n  - {id: 1, activation: input}\n  - {id: 2, activation: identity}\n" \
        "edges:\n  - {from: 1, to: 2, weight: 3.0}\n"
    arch, params = network_io_services.parse_network(text)
    assert arch.ids == ("1", "2")
    assert params.bias("2") == 0.0
    assert "2" in params.biases


def test_save_and_load(tmp_path, m1):
    arch, params = m1
    path = tmp_path / "m1.yaml"
    network_io_services.save_network(arch, params, path)
    loaded_arch, loaded_params = network_io_services.load_network(path)
    assert loaded_arch.neurons == arch.neurons
    assert loaded_arch.edges == arch.edges
    assert dict(loaded_params.weights) == dict(params.weights)
    assert dict(loaded_params.biases) == dict(params.biases)


def test_name_defaults_to_file_stem(network_file):
    path = network_file(KPOOL_TOO_WIDE.replace("k: 2", "k: 1"), "tiny.yaml")
    arch, _ = network_io_services.load_network(path)
    assert arch.name == "tiny"


def test_load_dataset(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("x1,x2,label\n1.0,2.0,1\n3.0,4.0,2\n")
    dataset = network_io_services.load_dataset(path, d_in=2, d_out=2)
    assert dataset.n == 2
    np.testing.assert_array_equal(dataset.X, [[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_array_equal(dataset.labels, [1, 2])

    with pytest.raises(OutOfRangeLabel):
        network_io_services.load_dataset(path, d_out=1)
    with pytest.raises(DimensionMismatch):
        network_io_services.load_dataset(path, d_in=3)


def test_dataset_without_labels(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("a,b,c\n1,2,3\n")
    dataset = network_io_services.load_dataset(path)
    assert dataset.labels is None
    assert dataset.X.shape == (1, 3)


@pytest.mark.parametrize(
    "text, field",
    [
        ("a,b\n1,x\n", "b"),
        ("a,label\n1,1.5\n", "label"),
    ],
)
def test_bad_datasets(tmp_path, text, field):
    path = tmp_path / "data.csv"
    path.write_text(text)
    with pytest.raises(ParseError) as error:
        network_io_services.load_dataset(path)
    assert error.value.field == field


def test_empty_dataset_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(ParseError):
        network_io_services.load_dataset(path)


def test_file_digest(tmp_path):
    path = tmp_path / "abc.txt"
    path.write_bytes(b"abc")
    assert network_io_services.file_digest(path) == (
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
    )
