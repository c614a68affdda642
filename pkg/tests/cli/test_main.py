# coding=utf-8

import json

import pytest

from tpst.__main__ import build_parser, main


def _read(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def test_validate_prints_hash(write_config, capsys):
    assert main(["validate", "--config", write_config()]) == 0
    assert "config_hash=" in capsys.readouterr().out


def test_bad_config_exits_with_two(write_config, capsys):
    path = write_config({"lattice": {"colour": "red"}})
    assert main(["validate", "--config", path]) == 2
    error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert error["code"] == "CONFIG_ERROR"
    assert "lattice.colour" in error["message"]


def test_missing_config_exits_with_two(tmp_path):
    assert main(["validate", "--config", str(tmp_path / "none.yaml")]) == 2


def test_oracle_writes_outputs_once(write_config, tmp_path, capsys):
    path = write_config({"oracle": {"cluster": "two_spin"}})
    assert main(["oracle", "--config", path]) == 0
    report = _read(tmp_path / "out" / "oracle" / "oracle.json")
    assert report["max_mismatch"] < 1e-8
    assert report["cluster"] == "two_spin"
    record = _read(tmp_path / "out" / "oracle" / "run.json")
    assert record["command"] == "oracle"
    assert record["files"] == ["oracle.json"]
    capsys.readouterr()
    assert main(["oracle", "--config", path]) == 3
    assert json.loads(capsys.readouterr().err.strip().splitlines()[-1])["code"] == "OUTPUT_EXISTS"
    assert main(["oracle", "--config", path, "--force"]) == 0


def test_sweep_rates(write_config, tmp_path):
    assert main(["sweep", "--target", "rates", "--config", write_config()]) == 0
    summary = _read(tmp_path / "out" / "sweep-rates" / "rates_summary.json")
    assert summary["label"] == "scaling estimate"
    assert summary["thermal_exponent"] == pytest.approx(2.0, abs=0.1)
    assert (tmp_path / "out" / "sweep-rates" / "rates.csv").exists()


def test_sweep_golden_as_json(write_config, tmp_path):
    path = write_config({"noise": {"golden_rule": {"points": 3}}})
    assert main(["sweep", "--target", "golden", "--format", "json", "--config", path]) == 0
    table = _read(tmp_path / "out" / "sweep-golden" / "golden_rule.json")
    assert table["columns"] == ["p", "T", "gamma"]
    assert len(table["rows"]) == 3
    assert _read(tmp_path / "out" / "sweep-golden" / "golden_rule_summary.json")["exponent"] == pytest.approx(
        13.0, abs=0.5)


def test_out_flag_overrides_directory(write_config, tmp_path):
    target = tmp_path / "custom"
    assert main(["sweep", "--target", "rates", "--config", write_config(), "--out", str(target)]) == 0
    assert (target / "sweep-rates" / "run.json").exists()


def test_dot_transfer(write_config, tmp_path):
    path = write_config({"transfer": {"dot": {"samples": 11}}})
    assert main(["transfer", "--config", path]) == 0
    payload = _read(tmp_path / "out" / "transfer" / "transfer.json")
    assert payload["regime"] == "dot"
    assert payload["gate"]["fidelity"] >= 0.99
    assert (tmp_path / "out" / "transfer" / "transfer_trace.csv").exists()


@pytest.mark.slow
def test_droplet_transfer_on_cylinder_edge(write_config, tmp_path):
    path = write_config({"transfer": {"regime": "droplet", "droplet": {"sigma": 5.0}}})
    assert main(["transfer", "--format", "json", "--config", path]) == 0
    payload = _read(tmp_path / "out" / "transfer" / "transfer.json")
    assert payload["channel"] == "lattice"
    assert payload["ly"] % 2 == 1
    velocity = payload["topology"]["edge_velocity"]
    assert abs(payload["topology"]["chern"]) == 1
    assert payload["route"]["direction"] == (1 if velocity > 0 else -1)
    assert payload["plan"]["delay"] == pytest.approx(payload["route"]["arc_length"] / abs(velocity))
    assert payload["expected_arrival"] == pytest.approx(25.0 + payload["plan"]["delay"])
    assert 0 <= payload["upstream_leakage"] < 1
    assert (tmp_path / "out" / "transfer" / "transfer_trace.json").exists()


@pytest.mark.slow
def test_droplet_transfer_on_ring(write_config, tmp_path):
    droplet = {"channel": "ring", "sigma": 5.0, "time_step": 0.5, "ring": {"length": 200, "site_b": 40}}
    path = write_config({"transfer": {"regime": "droplet", "droplet": droplet}})
    assert main(["transfer", "--config", path]) == 0
    payload = _read(tmp_path / "out" / "transfer" / "transfer.json")
    assert payload["channel"] == "ring"
    assert "route" not in payload
    assert payload["plan"]["delay"] == pytest.approx(40.0)
    assert payload["plan"]["lamb_a"] == pytest.approx(0.0, abs=1e-12)


def test_bands(write_config, tmp_path):
    assert main(["bands", "--config", write_config()]) == 0
    summary = _read(tmp_path / "out" / "bands" / "bands_summary.json")
    assert summary["bulk_gap"] == pytest.approx(0.46, abs=0.01)


def test_chern(write_config, tmp_path):
    assert main(["chern", "--config", write_config()]) == 0
    payload = _read(tmp_path / "out" / "chern" / "topology.json")
    assert abs(payload["chern"]) == 1
    assert payload["bloch_bulk_gap"] > 0.4


def test_bands_on_torus_is_a_precondition_failure(write_config):
    path = write_config({"lattice": {"kind": "torus", "ly": 3, "lx": 3}})
    assert main(["bands", "--config", path]) == 3


def test_parser_rejects_unknown_target():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["sweep", "--target", "weather"])
