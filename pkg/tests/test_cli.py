import json
import math
from importlib import resources

import pytest

from zfpf.cli import parse_complex, parse_region, run
from zfpf.errors import InputError

FIXTURES = resources.files("zfpf") / "fixtures"
SINGLE_Z = str(FIXTURES / "single_z.json")
CHAIN = str(FIXTURES / "chain4.json")
P4 = str(FIXTURES / "hardcore_p4.json")


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if code == 0 and out else None), err


def test_estimate_single_z(capsys):
    code, rep, _ = invoke(capsys, "estimate", "--input", SINGLE_Z, "--beta", "0.01,0", "--epsilon", "1e-4")
    assert code == 0
    assert rep["value"][0] == pytest.approx(2 * math.cosh(0.01), rel=1e-4) and rep["value"][1] == 0
    assert rep["value"][0] == pytest.approx(2.0001000, abs=1e-7)
    assert set(rep) == {"command", "value", "log_value", "order_m", "truncation_bound", "beta0",
                        "elapsed_ms", "warnings"}


def test_oracle_single_z(capsys):
    code, rep, _ = invoke(capsys, "oracle", "--input", SINGLE_Z, "--beta", "0.01")
    assert code == 0 and rep["value"][0] == pytest.approx(2 * math.cosh(0.01), rel=1e-9)
    assert rep["order_m"] is None


@pytest.mark.parametrize("fixture,extra", [
    (SINGLE_Z, ["--beta", "0.05,0.01"]),
    (CHAIN, ["--beta", "0.02"]),
    (P4, ["--beta", "0.1", "--region", "disc:0.2", "--M", "1.833", "--delta", "0.5"]),
])
def test_estimate_agrees_with_oracle_on_fixtures(capsys, fixture, extra):
    command = "csp-estimate" if fixture == P4 else "estimate"
    eps = 1e-3
    code, est, _ = invoke(capsys, command, "--input", fixture, "--epsilon", str(eps), *extra)
    assert code == 0
    beta = extra[extra.index("--beta") + 1]
    _, exact, _ = invoke(capsys, "oracle", "--input", fixture, "--beta", beta)
    ratio = complex(*est["value"]) / complex(*exact["value"])
    assert abs(ratio - 1) <= eps


def test_golden_determinism(capsys, tmp_path):
    reports = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        assert run(["estimate", "--input", CHAIN, "--beta", "0.02,0.005", "--out", str(out)]) == 0
        rep = json.loads(out.read_text())
        rep.pop("elapsed_ms")
        reports.append(json.dumps(rep))
    assert reports[0] == reports[1]
    samples = [invoke(capsys, "sample", "--input", CHAIN, "--beta", "0.02", "--seed", "5")[1] for _ in range(2)]
    assert samples[0] == samples[1] and samples[0]["seed"] == 5 and len(samples[0]["sigma"]) == 4


def test_coeffs(capsys):
    code, rep, _ = invoke(capsys, "coeffs", "--input", SINGLE_Z, "--order", "4")
    assert code == 0 and rep["order"] == 4
    assert [c[0] for c in rep["coefficients"]] == pytest.approx([0, 0, 0.5, 0, -1 / 12], abs=1e-12)


def test_malformed_json_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "q": 2,\n  "n_sites": }\n')
    code, _, err = invoke(capsys, "estimate", "--input", str(bad))
    assert code == 2 and f"{bad}:3:" in err


def test_exit_codes(capsys, tmp_path, monkeypatch):
    assert invoke(capsys, "estimate", "--input", CHAIN, "--beta", "1")[0] == 3
    assert invoke(capsys, "csp-estimate", "--input", P4, "--beta", "0.1")[0] == 3
    assert invoke(capsys, "estimate", "--input", CHAIN, "--epsilon", "2")[0] == 2
    assert invoke(capsys, "estimate", "--input", str(tmp_path / "missing.json"))[0] == 2
    assert invoke(capsys, "sample", "--input", CHAIN, "--beta", "0.01,0.01")[0] == 2
    monkeypatch.setenv("ZFPF_MATRIX_CAP", "4")
    assert invoke(capsys, "oracle", "--input", CHAIN, "--beta", "0.01")[0] == 4
    bad_model = tmp_path / "neg.json"
    bad_model.write_text(json.dumps({"n_sites": 1, "q": 2, "k": 1, "d": 1,
                                     "terms": [{"support": [0], "matrix": [[0, 0], [1, 0], [0, 0], [0, 0]]}]}))
    assert invoke(capsys, "estimate", "--input", str(bad_model))[0] == 2


def test_measurement_file(capsys, tmp_path):
    meas = tmp_path / "o.json"
    meas.write_text(json.dumps({"sites": [[[1, 0], [0, 0], [0, 0], [0, 0]]]}))
    code, est, _ = invoke(capsys, "estimate", "--input", SINGLE_Z, "--measurement", str(meas), "--beta", "0.01")
    assert code == 0 and est["value"][0] == pytest.approx(math.exp(-0.01), rel=1e-3)


def test_parsers():
    assert parse_complex("0.5,-1") == complex(0.5, -1) and parse_complex("2") == 2
    with pytest.raises(InputError):
        parse_complex("a,b")
    assert parse_region("auto") is None
    assert parse_region("disc:0.3").radius == 0.3
    assert parse_region("strip:0.5,0.1,0.5").kind == "strip"
    with pytest.raises(InputError):
        parse_region("ellipse:1")
