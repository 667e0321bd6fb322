import json
import os

import numpy as np
import pytest

import expsplit

DATA = os.environ.get("EXPSPLIT_TEST_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "data"))


def test_corpus_names():
    names = expsplit.corpus_names()
    assert "example2_r2" in names
    assert "example11_r3" in names
    assert expsplit.schema_version == 1


def test_analyze_example2():
    report = expsplit.analyze("example2_r2", window=12)
    verdicts = {v["concept"]: v["verdict"] for v in report["verdicts"]}
    assert verdicts["UES"] == "CertifiedByFit"
    assert verdicts["SES"] == "TrendBlocked"
    assert verdicts["UED"] == "Infeasible"
    assert report["projection_bound"]["trend"] == "superexponential"


def test_exit_codes():
    code, output, diagnostic = expsplit.run("analyze", "no_such_target")
    assert code == 2
    assert output == ""
    assert diagnostic
    code, _, _ = expsplit.run("analyze", os.path.join(DATA, "malformed.json"))
    assert code == 2
    code, output, _ = expsplit.run("list", format="csv")
    assert code == 0
    assert output.startswith("name,")
    with pytest.raises(expsplit.CommandFailed):
        expsplit.analyze("no_such_target")


def test_evolution_arrays():
    a = expsplit.evolution("example2_r2", 3, 1)
    assert a.shape == (2, 2)
    assert a.dtype == np.float64
    p = expsplit.projection("example2_r2", 2)
    np.testing.assert_allclose(p, [[1.0, 15.0], [0.0, 0.0]])
    np.testing.assert_allclose(p @ p, p)
    # log2 ||A_m^n|| stays finite where float64 would overflow.
    assert expsplit.log2_norm("example2_r2", 40, 0) > 1024


def test_verify_certificate_dict():
    cert = {"concept": "ES", "log2_N": 0, "log2_c": 4 / 3, "log2_a": -1 / 3, "log2_b": 2 / 3}
    results = expsplit.verify("example3_r2", cert, window=20)
    assert results[0]["verification"]["ok"] is True
    bad = dict(cert, log2_a=1.0)
    with pytest.raises(expsplit.ConfigError):
        expsplit.verify("example3_r2", bad)


def test_identities_without_strong_invariance():
    result = expsplit.identities("example11_r3", window=6)
    assert result["cocycle"]["ok"] is True
    assert "error" in result["skew_evolution"]


def test_cli_matches_module_output():
    code, output, _ = expsplit.run("show", "example3_r2")
    assert code == 0
    assert json.loads(output)["name"] == "example3_r2"
