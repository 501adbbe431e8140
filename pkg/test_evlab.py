import json

import pytest

from evlab import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_dtc_property(capsys):
    out = run_json(capsys, "dtc", "--property", "triangle-free", "--n", "4")
    assert out == {"D": 6, "N": 6, "evasive": True}


def test_dtc_table_with_certificate(capsys):
    # selector on three variables: x0 picks x1 or x2
    out = run_json(capsys, "dtc", "--vars", "3", "--table", "e4", "--certificate")
    assert (out["D"], out["evasive"]) == (2, False)
    assert out["adversary"]["value"] == 2


def test_output_is_compact_sorted_json(capsys):
    code, out, _ = run(capsys, "dtc", "--vars", "4", "--function", "parity")
    assert code == 0
    assert out == '{"D":4,"N":4,"evasive":true}\n'


def test_evasive_with_validation(capsys):
    out = run_json(capsys, "evasive", "--property", "connectivity", "--n", "4", "--validate")
    assert out == {"N": 6, "evasive": True, "validated": True}


def test_group_and_orbitals(capsys):
    out = run_json(capsys, "group", '{"kind":"gamma_qd","q":7,"d":2}', "--order", "--oliver")
    assert out["order"] == 14
    assert (out["oliver"]["p"], out["oliver"]["q"]) == (7, 2)

    orbitals = run_json(capsys, "orbitals", '{"kind":"gamma_qd","q":7,"d":2}')
    assert orbitals["count"] == 3 and orbitals["m_star"] == 7

    code, text, _ = run(capsys, "orbitals", '{"kind":"gamma_qd","q":7,"d":6}', "--format", "tsv")
    assert code == 0
    assert text.splitlines() == ["i\tj\tsize\ttag", "0\t1\t21\tintra"]


def test_group_spec_from_file(capsys, tmp_path):
    spec = tmp_path / "group.json"
    spec.write_text(json.dumps({"kind": "gamma0", "p": 5, "delta": {"kind": "trivial", "k": 2}}))
    assert run_json(capsys, "group", f"@{spec}", "--order")["order"] == 100


def test_complex_commands(capsys, tmp_path):
    faces = tmp_path / "boundary.faces"
    faces.write_text("[0, 1]\n[1, 2]\n[0, 2]\n")
    assert run_json(capsys, "chi", "--faces", str(faces), "--dim") == {"chi": 0, "dim": 1}
    assert run_json(capsys, "collapse", "--faces", str(faces))["collapsible"] is False

    fixed = run_json(capsys, "fixed-complex", "--faces", str(faces),
                     "--group", '{"kind":"gamma_qd","q":3,"d":1}')
    assert fixed["orbit_count"] == 1 and fixed["chi"] == 0

    disk = tmp_path / "disk.faces"
    disk.write_text("[0, 1, 2]\n")
    out = run_json(capsys, "collapse", "--faces", str(disk))
    assert out["collapsible"] and len(out["pairs"]) == 3


def test_hom_free_chi(capsys):
    assert run_json(capsys, "chi", "--hom-free", "K3", "--r", "4") == {"chi": 4}


def test_paley_weil_clique(capsys):
    out = run_json(capsys, "paley", "--q", "17", "--d", "8")
    assert (out["degree"], out["clique_number"]) == (8, 3)
    check = run_json(capsys, "paley", "--q", "17", "--d", "8", "--h", "3")
    assert check["consistent"]
    orbitals = run_json(capsys, "paley", "--q", "13", "--d", "4", "--orbitals")
    assert all(x["isomorphic"] for x in orbitals["orbitals"])

    weil = run_json(capsys, "weil", "--q", "13", "--l", "2", "--a", "0,1")
    assert weil["within"]

    assert run_json(capsys, "clique", "--graph", "petersen") == {"clique_number": 2}
    assert run_json(capsys, "clique", "--q", "17", "--d", "8", "--h", "4") == {"h": 4, "clique": None}


def test_primes(capsys):
    assert run_json(capsys, "primes", "is-prime", "--n", "97") == {"n": 97, "prime": True}
    assert run_json(capsys, "primes", "next-prime", "--n", "14")["next"] == 17
    assert run_json(capsys, "primes", "factor", "--n", "360")["factors"] == {"2": 3, "3": 2, "5": 1}
    assert run_json(capsys, "primes", "dirichlet", "--m", "10", "--a", "3")["prime"] == 3
    assert 257 in run_json(capsys, "primes", "near-fermat", "--limit", "300")
    assert run_json(capsys, "primes", "vinogradov", "--k", "4") == {"k": 4, "primes": [2, 2], "delta": None}


def test_partition_plan_and_check(capsys, tmp_path):
    cert = run_json(capsys, "partition", "near_eva", "--n", "31")
    assert cert["components"]["r"] == 7

    path = tmp_path / "cert.json"
    path.write_text(json.dumps(cert))
    assert run_json(capsys, "partition", "--check", f"@{path}")["valid"]

    erh = run_json(capsys, "partition", "erh", "--n", "1000000")
    assert erh["components"]["p"] == 37


def test_verify_writes_reports(capsys, tmp_path):
    out = tmp_path / "paley.xlsx"
    code, text, _ = run(capsys, "verify", "paley_orbitals", "--out", str(out), "--timings")
    assert code == 0
    reports = json.loads(text)
    assert reports[0]["verdict"] == "pass"
    assert "runtime_ms" in reports[0]
    assert out.exists()


def test_enumerate_properties(capsys):
    out = run_json(capsys, "enumerate-properties", "--n", "3", "--dtc")
    assert out["count"] == 5
    assert all(row["D"] == 3 for row in out["properties"] if not row["trivial"])


def test_bad_input_exits_2(capsys):
    code, out, err = run(capsys, "dtc", "--property", "planar", "--n", "4")
    assert code == 2
    assert out == ""
    assert "BadShape" in err

    code, _, err = run(capsys, "group", "{not json")
    assert code == 2

    code, _, err = run(capsys, "chi", "--faces", "/nonexistent/faces")
    assert code == 2


def test_config_file_is_applied(capsys, tmp_path):
    cfg = tmp_path / "evlab.env"
    cfg.write_text("EVLAB_DTC_BUDGET=2\n")
    code, _, err = run(capsys, "--config", str(cfg), "dtc", "--vars", "6", "--function", "parity")
    assert code == 2
    assert "BudgetExceeded" in err


def test_unknown_subcommand_is_argparse_error(capsys):
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_partition_takes_forbidden_graph(capsys):
    cert = run_json(capsys, "partition", "near_eva", "--n", "31", "--h", "K3")
    assert cert["components"]["r"] == 7
    assert cert == run_json(capsys, "partition", "near_eva", "--n", "31")


def test_verify_ark_vertex_count(capsys, tmp_path):
    cfg = tmp_path / "evlab.env"
    cfg.write_text("EVLAB_DTC_BUDGET=5\n")
    reports = run_json(capsys, "--config", str(cfg), "verify", "ark_exhaustive", "--ark-n", "5")
    assert reports[0]["verdict"] == "budget"
    assert reports[0]["params"]["n"] == 5
