# -*- coding: utf-8 -*-
# test_cli.py - Subcomandos, códigos de saída e relatórios JSON

import json
from pathlib import Path

import pytest

from eorlicz.cli import (
    EXIT_INCONCLUSIVE, EXIT_INPUT_ERROR, EXIT_OK, EXIT_REFUTED, json_ready, main,
)
from eorlicz.measure import Interval, nodes


@pytest.fixture
def write_json(tmp_path):
    def write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)
    return write


def read_report(path):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def test_json_ready_marks_infinity():
    assert json_ready({"a": float("inf"), "b": (1.0, 2)}) == {"a": "+inf", "b": [1.0, 2]}


# --- classify ---

def test_classify_certified_square(write_json, tmp_path):
    spec = write_json("spec.json", {"phi": "u^2", "classes": ["E-N"]})
    report = str(tmp_path / "report.json")
    assert main(["classify", "--spec", spec, "--report", report]) == EXIT_OK
    payload = read_report(report)
    assert payload["classes"]["E-N"]["status"] == "certified"
    assert payload["diagnostics"][0]["U_phi"] == "+inf"
    assert payload["requested_classes"] == ["E-N"]


def test_classify_refuted(write_json, tmp_path):
    spec = write_json("spec.json", {"phi": "u^0.5", "classes": ["E-Young"]})
    assert main(["classify", "--spec", spec, "--report", str(tmp_path / "r.json")]) == EXIT_REFUTED


def test_classify_inconclusive(write_json, tmp_path):
    spec = write_json("spec.json", {"phi": "piecewise(u<0.001, ln(u-1), u^2)", "classes": ["E-Young"]})
    assert main(["classify", "--spec", spec, "--report", str(tmp_path / "r.json")]) == EXIT_INCONCLUSIVE


def test_classify_with_map_and_samples(write_json, tmp_path):
    spec = write_json("spec.json", {"phi": "exp(t+u)-1", "E": ["u", "u"], "t_samples": [0.5, 2.0],
                                    "classes": ["E-Young"]})
    report = str(tmp_path / "r.json")
    assert main(["classify", "--spec", spec, "--report", report]) == EXIT_OK
    assert read_report(report)["t_samples"] == [0.5, 2.0]


def test_classify_prints_to_stdout(write_json, capsys):
    spec = write_json("spec.json", {"phi": "u^2"})
    assert main(["classify", "--spec", spec]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["consistent"] is True


def test_reruns_are_byte_identical(write_json, tmp_path):
    spec = write_json("spec.json", {"phi": "piecewise(u<1, u-abs(t), u+abs(t)-2)", "E": ["u", "u"],
                                    "t_samples": [-1.0, 0.5, 2.0]})
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    main(["classify", "--spec", spec, "--report", str(first)])
    main(["classify", "--spec", spec, "--report", str(second)])
    assert first.read_bytes() == second.read_bytes()


def test_workers_do_not_change_the_result(write_json, tmp_path):
    spec = write_json("spec.json", {"phi": "u^2+u", "t_samples": [0.5, 1.0, 2.0]})
    main(["classify", "--spec", spec, "--report", str(tmp_path / "a.json")])
    main(["classify", "--spec", spec, "--report", str(tmp_path / "b.json"), "--workers", "3"])
    a, b = read_report(tmp_path / "a.json"), read_report(tmp_path / "b.json")
    a.pop("config"), b.pop("config")
    assert a == b


@pytest.mark.parametrize("payload", [
    {"phi": "u^2", "colour": "blue"},
    {"phi": "u +"},
    {"phi": "u^2", "classes": ["E-Banach"]},
    {"phi": "u^p"},
    {"phi": "u^2", "sampling": {"ladder_ratio": 0.5}},
])
def test_invalid_specs_are_input_errors(write_json, tmp_path, payload):
    spec = write_json("spec.json", payload)
    assert main(["classify", "--spec", spec, "--report", str(tmp_path / "r.json")]) == EXIT_INPUT_ERROR
    assert not (tmp_path / "r.json").exists()


def test_malformed_json_and_missing_file(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{phi: ", encoding="utf-8")
    assert main(["classify", "--spec", str(broken)]) == EXIT_INPUT_ERROR
    assert main(["classify", "--spec", str(tmp_path / "missing.json")]) == EXIT_INPUT_ERROR


def test_log_file_option(write_json, tmp_path):
    spec = write_json("spec.json", {"phi": "u^2"})
    log = tmp_path / "run.log"
    main(["classify", "--spec", spec, "--report", str(tmp_path / "r.json"), "--log-file", str(log)])
    assert "Relatório gravado" in log.read_text(encoding="utf-8")


# --- norm / sobolev ---

ATOM = {"type": "discrete", "atoms": [[0.0, 1.0]]}


def test_norm_of_a_single_atom(write_json, tmp_path):
    spec = write_json("spec.json", {"phi": "u^2", "omega": ATOM})
    data = tmp_path / "f.csv"
    data.write_text("t,value\n0,3\n", encoding="utf-8")
    report = str(tmp_path / "r.json")
    assert main(["norm", "--spec", spec, "--data", str(data), "--report", report]) == EXIT_OK
    assert read_report(report)["value"] == pytest.approx(3.0, rel=1e-9)


def test_norm_outside_the_space(write_json, tmp_path):
    spec = write_json("spec.json", {"phi": "piecewise(u>0, inf, 0)", "omega": ATOM})
    data = tmp_path / "f.csv"
    data.write_text("0,1\n", encoding="utf-8")
    report = str(tmp_path / "r.json")
    assert main(["norm", "--spec", spec, "--data", str(data), "--report", report]) == EXIT_REFUTED
    assert read_report(report)["value"] == "+inf"


def test_norm_rejects_decreasing_function(write_json, tmp_path):
    spec = write_json("spec.json", {"phi": "piecewise(u<1, -log(u+abs(t)^(1/p)+1), inf)",
                                    "E": ["u^p", "u"], "p": 2, "omega": ATOM})
    data = tmp_path / "f.csv"
    data.write_text("0,0.5\n", encoding="utf-8")
    assert main(["norm", "--spec", spec, "--data", str(data)]) == EXIT_INPUT_ERROR


def test_norm_requires_omega_and_aligned_data(write_json, tmp_path):
    data = tmp_path / "f.csv"
    data.write_text("0,1\n1,2\n", encoding="utf-8")
    no_omega = write_json("a.json", {"phi": "u^2"})
    assert main(["norm", "--spec", no_omega, "--data", str(data)]) == EXIT_INPUT_ERROR
    misaligned = write_json("b.json", {"phi": "u^2", "omega": ATOM})
    assert main(["norm", "--spec", misaligned, "--data", str(data)]) == EXIT_INPUT_ERROR


def test_sobolev_of_identity(write_json, tmp_path):
    omega = {"type": "interval", "a": 0.0, "b": 1.0, "nodes": 201}
    spec = write_json("spec.json", {"phi": "u^2", "omega": omega})
    data = tmp_path / "f.csv"
    rows = [f"{t!r},{t!r}" for t, _ in nodes(Interval(0.0, 1.0, 201))]
    data.write_text("t,value\n" + "\n".join(rows) + "\n", encoding="utf-8")
    report = str(tmp_path / "r.json")
    assert main(["sobolev", "--spec", spec, "--data", str(data), "--order", "1", "--report", report]) == EXIT_OK
    payload = read_report(report)
    assert payload["value"] == pytest.approx(1.0 + 3 ** -0.5, rel=1e-4)
    assert len(payload["terms"]) == 2


def test_sobolev_needs_an_interval(write_json, tmp_path):
    spec = write_json("spec.json", {"phi": "u^2", "omega": ATOM})
    data = tmp_path / "f.csv"
    data.write_text("0,1\n", encoding="utf-8")
    assert main(["sobolev", "--spec", spec, "--data", str(data), "--order", "1"]) == EXIT_INPUT_ERROR


# --- catalog ---

def test_catalog_single_fixture(tmp_path):
    report = str(tmp_path / "r.json")
    assert main(["catalog", "--fixture", "ex4.1", "--report", report]) == EXIT_OK
    assert read_report(report)["status"] == "confirmed"


def test_catalog_unknown_fixture():
    assert main(["catalog", "--fixture", "ex9.9"]) == EXIT_INPUT_ERROR


# --- exemplos em specs/ ---

SPECS = Path(__file__).resolve().parent.parent / "specs"


def test_shipped_examples(tmp_path):
    assert main(["classify", "--spec", str(SPECS / "young-exponencial.json"),
                 "--report", str(tmp_path / "a.json")]) == EXIT_OK
    report = str(tmp_path / "b.json")
    assert main(["norm", "--spec", str(SPECS / "norma-quadrado.json"),
                 "--data", str(SPECS / "norma-quadrado.csv"), "--report", report]) == EXIT_OK
    assert read_report(report)["value"] == pytest.approx(3.0, rel=1e-9)
    assert main(["norm", "--spec", str(SPECS / "norma-exponencial.json"),
                 "--data", str(SPECS / "norma-exponencial.csv"), "--report", str(tmp_path / "c.json")]) == EXIT_OK
    assert main(["sobolev", "--spec", str(SPECS / "sobolev-identidade.json"),
                 "--data", str(SPECS / "sobolev-identidade.csv"), "--order", "1",
                 "--report", str(tmp_path / "d.json")]) == EXIT_OK
