import math
from importlib import resources

import pytest
import yaml

from pathgauge.scripts.main import main
from pathgauge.services import network_io_services
from pathgauge.utils.generators import layered_network


def fixture_text(name: str) -> str:
    return (
        resources.files("pathgauge.data")
        .joinpath("fixtures")
        .joinpath(f"{name}.yaml")
        .read_text(encoding="utf-8")
    )


@pytest.fixture()
def fixture_file(network_file):
    def write(name: str):
        return str(network_file(fixture_text(name), f"{name}.yaml"))

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (yaml.safe_load(out) if out else None)


def two_digits(value: float) -> float:
    return float(f"{value:.2g}")


def test_no_command_prints_usage(capsys):
    assert main([]) == 2
    assert "Available Commands" in capsys.readouterr().err


def test_unknown_command(capsys):
    assert main(["frobnicate"]) == 2
    assert "not a valid command" in capsys.readouterr().err


def test_missing_argument_is_usage_error(capsys):
    assert main(["pathnorm"]) == 2
    assert main(["pathnorm", "x.yaml", "--q", "-1"]) == 2


def test_pathnorm_max_pool(capsys, fixture_file):
    path = fixture_file("m1")
    code, report = run(capsys, "pathnorm", path, "--q", "1", "--r", "1")
    assert code == 0
    assert report["results"]["value"] == 2.0
    assert report["results"]["mode"] == "fast"
    assert report["inputs"]["network"].startswith("sha256:")

    code, report = run(capsys, "pathnorm", path, "--q", "1", "--r", "1", "--naive")
    assert code == 0
    assert report["results"]["value"] == 1.0

    code, report = run(capsys, "pathnorm", path, "--exact")
    assert report["results"]["value"] == pytest.approx(2.0)
    assert math.isinf(report["results"]["r"])


def test_pathnorm_log_domain(capsys, fixture_file):
    code, report = run(capsys, "pathnorm", fixture_file("d1"), "--log-domain")
    assert code == 0
    assert report["results"]["value"] == pytest.approx(5.5)
    assert report["results"]["log10_value"] == pytest.approx(math.log10(5.5))


def test_pathnorm_modes_are_exclusive(capsys, fixture_file):
    assert main(["pathnorm", fixture_file("d1"), "--exact", "--naive"]) == 2


def test_missing_file(capsys, tmp_path):
    code, report = run(capsys, "pathnorm", str(tmp_path / "missing.yaml"))
    assert code == 1
    assert report["results"]["error"]["type"] == "FileNotFoundError"


def test_report_is_deterministic(capsys, fixture_file):
    path = fixture_file("layered")
    _, first = run(capsys, "pathnorm", path, "--q", "2")
    _, second = run(capsys, "pathnorm", path, "--q", "2")
    assert first.pop("wall_time") >= 0
    second.pop("wall_time")
    assert first == second
    assert first["command"] == ["pathnorm", path, "--q", "2"]


def test_validate(capsys, fixture_file, network_file):
    code, report = run(capsys, "validate", fixture_file("d1"))
    assert code == 0
    assert report["results"]["ok"]
    assert report["results"]["depth"] == 2
    assert report["results"]["paths"] == 5

    bad = network_file(fixture_text("m1").replace("k: 1", "k: 3"), "bad.yaml")
    code, report = run(capsys, "validate", str(bad))
    assert code == 1
    assert [v["rule"] for v in report["results"]["violations"]] == ["kernel-size"]


def test_parse_error_exit_code(capsys, network_file):
    path = network_file("neurons: [\n", "broken.yaml")
    code, report = run(capsys, "validate", str(path))
    assert code == 1
    assert report["results"]["error"]["type"] == "ParseError"


def test_lipschitz_and_opnorm(capsys, fixture_file):
    code, report = run(capsys, "lipschitz", fixture_file("m1"))
    assert code == 0
    assert report["results"]["lipschitz"] == 2.0

    code, report = run(capsys, "opnorm", fixture_file("d1"))
    assert code == 0
    assert report["results"]["operator_product"] == pytest.approx(6.0)
    assert report["results"]["pathnorm"] == pytest.approx(5.5)


def test_normalize(capsys, fixture_file, tmp_path):
    out = tmp_path / "normalized.yaml"
    code, report = run(capsys, "normalize", fixture_file("d1"), "--out", str(out))
    assert code == 0
    assert report["results"]["normalized"]
    assert report["results"]["scales"] == pytest.approx({"h1": 2.5, "h2": 3.0})
    _, params = network_io_services.load_network(out)
    assert params.weight("h1", "o") == pytest.approx(2.5)


def test_transform(capsys, fixture_file, tmp_path):
    out = tmp_path / "absorbed.yaml"
    code, report = run(capsys, "transform", fixture_file("d1"), "--op", "absorb-biases", "--out", str(out))
    assert code == 0
    assert report["results"]["d_in"] == 2
    assert report["results"]["bias_neuron"] == "v_bias"

    out = tmp_path / "merged.yaml"
    code, report = run(
        capsys, "transform", fixture_file("residual"), "--op", "drop-identity", "--out", str(out)
    )
    assert code == 0
    assert report["results"]["depth"] <= report["results"]["depth_before"]
    arch, _ = network_io_services.load_network(out)
    assert "b" not in arch

    code, report = run(
        capsys, "transform", fixture_file("identity_chain"), "--op", "drop-identity", "--out", str(out)
    )
    assert code == 1
    assert report["results"]["error"]["type"] == "BiasedIdentityNeuron"

    code, report = run(
        capsys, "transform", fixture_file("pool_bias"), "--op", "absorb-biases", "--out", str(out)
    )
    assert code == 1
    assert report["results"]["error"]["type"] == "PoolBiasNonZero"


def test_oracle_diff_on_fixtures(capsys):
    code, report = run(capsys, "oracle-diff")
    assert code == 0
    assert report["results"]["networks"] == 20
    assert report["results"]["passed"]


def test_oracle_diff_on_random_networks(capsys):
    code, report = run(capsys, "oracle-diff", "--random", "25", "--seed", "3")
    assert code == 0
    assert report["results"]["networks"] == 25


def test_bound_from_meta(capsys):
    code, report = run(
        capsys,
        "bound",
        "--meta", "18,1,9,1,150528,1000",
        "--B", "2.640000104904175",
        "--n", "1268355",
    )
    assert code == 0
    assert two_digits(report["results"]["scaled_C"]) == 0.088
    assert two_digits(report["results"]["scaled_C_sharpened"]) == 0.060
    assert report["results"]["C_sharpened_status"] == "heuristic"
    assert report["results"]["L"] == pytest.approx(math.sqrt(2))


def test_bound_from_resnet_preset(capsys):
    code, report = run(capsys, "bound", "--resnet", "152")
    assert code == 0
    assert report["results"]["resnet"] == "resnet152"
    assert two_digits(report["results"]["scaled_C"]) == 0.23
    assert two_digits(report["results"]["scaled_C_sharpened"]) == 0.13


def test_bound_needs_a_source(capsys):
    assert main(["bound"]) == 2
    capsys.readouterr()
    assert main(["bound", "--meta", "1,2"]) == 2


def test_bound_with_network_and_data(capsys, fixture_file, tmp_path):
    data = tmp_path / "train.csv"
    data.write_text("a,b\n1,2\n3,-1\n")
    code, report = run(capsys, "bound", fixture_file("m1"), "--data", str(data), "--loss", "const:1")
    assert code == 0
    results = report["results"]
    assert results["sigma"] == pytest.approx(math.sqrt(13))
    assert results["pathnorm_l1"] == 2.0
    assert results["bound"] == pytest.approx(4 * math.sqrt(13) / 2 * 1.0 * results["C"] * 2.0)
    assert report["inputs"]["data"].startswith("sha256:")


def test_bound_rejects_pool_bias(capsys, fixture_file):
    code, report = run(capsys, "bound", fixture_file("pool_bias"))
    assert code == 1
    assert report["results"]["error"]["type"] == "PoolBiasNonZero"


def test_bound_drop_identity(capsys, fixture_file):
    _, plain = run(capsys, "bound", fixture_file("residual"))
    _, merged = run(capsys, "bound", fixture_file("residual"), "--drop-identity")
    assert merged["results"]["meta"]["D"] <= plain["results"]["meta"]["D"]


def test_margin_bound(capsys, fixture_file, tmp_path):
    data = tmp_path / "train.csv"
    data.write_text("x1,x2,label\n1,0,1\n0,1,2\n2,1,1\n")
    path = fixture_file("two_outputs")

    code, report = run(capsys, "margin-bound", path, "--gamma", "0.5", "--data", str(data))
    assert code == 0
    assert report["results"]["top1_error"] == 0.0
    assert report["results"]["margin_bound"]["term1"] == pytest.approx(2 / 3)

    code, report = run(capsys, "margin-bound", path, "--gamma", "auto", "--data", str(data))
    assert code == 0
    assert report["results"]["suggested_gamma"] == pytest.approx(5 / 6)
    assert report["results"]["margin_bound"]["gamma"] == pytest.approx(5 / 6)


def test_margin_bound_needs_labels(capsys, fixture_file, tmp_path):
    data = tmp_path / "train.csv"
    data.write_text("x1,x2\n1,0\n")
    code, report = run(capsys, "margin-bound", fixture_file("two_outputs"), "--gamma", "1", "--data", str(data))
    assert code == 1
    assert report["results"]["error"]["type"] == "ParseError"


@pytest.fixture()
def overflowing_file(tmp_path):
    """Chain whose L1 path-norm is 1e600 (+1e400 with a second output)."""

    def write(two_outputs: bool = False):
        last = [[1e200], [1.0]] if two_outputs else [[1e200]]
        arch, params = layered_network([[[1e200]], [[1e200]], last])
        path = tmp_path / "overflowing.yaml"
        network_io_services.save_network(arch, params, path)
        return str(path)

    return write


def test_bound_reports_log10_on_overflow(capsys, overflowing_file):
    code, report = run(
        capsys, "bound", overflowing_file(), "--meta", "3,0,1,0,1,1", "--B", "1", "--n", "100"
    )
    assert code == 0
    results = report["results"]
    assert results["overflow"] is True
    assert results["log10_pathnorm_l1"] == pytest.approx(600.0)
    assert "bound" not in results and "pathnorm_l1" not in results
    expected = math.log10(results["scaled_C"] * math.sqrt(2)) + 600.0
    assert results["log10_bound"] == pytest.approx(expected)


def test_bound_with_data_reports_log10_on_overflow(capsys, overflowing_file, tmp_path):
    data = tmp_path / "train.csv"
    data.write_text("x\n-1\n0\n")
    code, report = run(capsys, "bound", overflowing_file(), "--data", str(data), "--loss", "const:1")
    assert code == 0
    results = report["results"]
    assert results["overflow"] is True
    assert results["log10_pathnorm_l1"] == pytest.approx(600.0)
    expected = math.log10(4 * math.sqrt(2) / 2 * results["C"]) + 600.0
    assert results["log10_bound"] == pytest.approx(expected)


def test_margin_bound_reports_log10_on_overflow(capsys, overflowing_file, tmp_path):
    data = tmp_path / "train.csv"
    data.write_text("x,label\n-1,1\n0,2\n")
    code, report = run(
        capsys, "margin-bound", overflowing_file(two_outputs=True), "--gamma", "1", "--data", str(data)
    )
    assert code == 0
    results = report["results"]
    assert results["overflow"] is True
    assert results["log10_pathnorm_l1"] == pytest.approx(600.0)
    margin = results["margin_bound"]
    assert margin["term1"] == 1.0
    assert "term2" not in margin
    expected = math.log10(8 * math.sqrt(2) / 2 * results["C"]) + 600.0
    assert margin["log10_term2"] == pytest.approx(expected)
    assert margin["log10_total"] == pytest.approx(expected)


def test_bound_without_overflow_flags_false(capsys, fixture_file):
    code, report = run(capsys, "bound", fixture_file("m1"), "--B", "1", "--n", "4")
    assert code == 0
    assert report["results"]["overflow"] is False
    assert report["results"]["pathnorm_l1"] == 2.0
