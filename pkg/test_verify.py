import json
from fractions import Fraction

import pytest
from openpyxl import load_workbook

from config import Config
from errors import ShapeMismatch
from hgraph import named
from verify import (
    SUITE, VERDICTS, VerificationReport, build_group, orbital_bound_instances, reports_to_json,
    reports_to_tsv, run_all, run_check, verify_ark_exhaustive, verify_cks_parity,
    verify_decision_tree_oracle, verify_fixed_point_isomorphism, verify_invariant_graph_cliques,
    verify_near_fermat_enumeration, verify_oliver_consistency, verify_orbital_bounds,
    verify_paley_orbitals, verify_planners, verify_weil_counts, write_reports,
)


def test_ark_exhaustive_small():
    report = verify_ark_exhaustive(n=3)
    assert report.verdict == "pass"
    assert report.observed["checked"] == 3
    assert report.expected["D"] == 3


def test_ark_exhaustive_budget():
    report = verify_ark_exhaustive(n=4, budget=2)
    assert report.verdict == "budget"
    assert "stopped" in report.observed


def test_ark_exhaustive_five_vertices_reports_budget():
    report = verify_ark_exhaustive(n=5, budget=5)
    assert report.verdict == "budget"
    assert report.params["n"] == 5
    assert "stopped" in report.observed

    report = run_check("ark_exhaustive", Config(ark_n=5, dtc_budget=5))
    assert report.verdict == "budget"
    assert report.params["n"] == 5


@pytest.mark.slow
def test_ark_exhaustive_four_vertices():
    report = verify_ark_exhaustive(n=4)
    assert report.verdict == "pass", report.observed
    # 24 downsets of the 11 graph classes, minus the two trivial ones
    assert report.observed["checked"] == 22


@pytest.mark.slow
def test_decision_tree_oracle_all_four_variable_functions():
    report = verify_decision_tree_oracle(max_n=4, exhaustive_n=4, random_trials=0)
    assert report.verdict == "pass", report.observed["mismatches"][:5]
    assert report.params["exhaustive_n"] == 4


def test_decision_tree_oracle_small():
    report = verify_decision_tree_oracle(max_n=6, exhaustive_n=3, random_trials=20, random_n=5)
    assert report.verdict == "pass"
    assert report.seed == 0


def test_oliver_consistency():
    report = verify_oliver_consistency(trials=15)
    assert report.verdict == "pass", report.observed["failures"]
    assert report.observed["collapsed"] + report.observed["coned"] == 15
    assert report.observed["groups"] == 10
    assert report.observed["non_contractible_demo"] == {"chi": 0, "verdict": "inapplicable"}


def test_fixed_point_isomorphism_small():
    report = verify_fixed_point_isomorphism(16)
    assert report.verdict == "pass", report.observed
    assert report.observed["orbits"] == 9
    assert (report.observed["inter"], report.observed["intra"]) == (6, 3)
    assert report.observed["faces"] == 41


@pytest.mark.slow
def test_fixed_point_isomorphism_31():
    report = verify_fixed_point_isomorphism(31)
    assert report.verdict == "pass", report.observed
    assert report.observed["orbits"] == 27


def test_fixed_point_isomorphism_inapplicable():
    assert verify_fixed_point_isomorphism(16, kprime=0).verdict == "inapplicable"


def test_build_group():
    assert build_group({"kind": "gamma_qd", "q": 7, "d": 2}).order() == 14
    G = build_group({"kind": "gamma0", "p": 5, "delta": {"kind": "vinogradov", "partition": [2, 3]}})
    assert G.n == 25
    with pytest.raises(ShapeMismatch):
        build_group({"kind": "mathieu"})
    with pytest.raises(ShapeMismatch):
        build_group({"kind": "gamma0", "p": 5, "delta": {"kind": "dihedral"}})


def test_orbital_bounds():
    gamma0 = verify_orbital_bounds({"kind": "gamma0", "p": 5, "delta": {"kind": "trivial", "k": 2}})
    assert gamma0.verdict == "pass"
    assert (gamma0.observed["m_intra"], gamma0.observed["m_inter"]) == (10, 25)

    pqr = verify_orbital_bounds({"kind": "pqr", "p": 3, "k": 2, "r": 7, "q": 3, "partition": [2]})
    assert pqr.verdict == "pass"
    assert pqr.observed["m_star"] == 6
    assert pqr.observed["floor"] == str(Fraction(18, 32))
    assert pqr.observed["classes"] == {"intra": 6, "inter": 9, "r-internal": 21, "cross": 42}


def test_orbital_bound_instances():
    instances = orbital_bound_instances()
    assert len(instances) == 99
    assert all(spec["kind"] == "gamma0" for spec in instances)


def test_invariant_graph_cliques():
    assert verify_invariant_graph_cliques({"kind": "lambda2", "qs": [17]}).verdict == "pass"
    assert verify_invariant_graph_cliques({"kind": "lambda1", "p": 3, "t": 1, "k": 4}).verdict == "pass"
    vacuous = verify_invariant_graph_cliques({"kind": "gamma_qd", "q": 7, "d": 2}, h=1)
    assert vacuous.observed["vacuous"]


def test_number_theory_checks():
    assert verify_cks_parity([("K3", 4), ("K3", 5)]).verdict == "pass"
    weil = verify_weil_counts(max_q=60, tuples=3)
    assert weil.verdict == "pass"
    assert weil.observed["runs"] > 0
    assert verify_paley_orbitals(max_q=30).verdict == "pass"
    assert verify_near_fermat_enumeration(limit=10 ** 4).verdict == "pass"


def test_planners_are_not_theorem_backed():
    report = verify_planners(count=3)
    assert report.verdict == "pass", report.observed
    assert not report.theorem_backed
    assert len(report.observed["ns"]) == 3


def test_run_check():
    report = run_check("orbital_bounds", Config())
    assert report.check_id == "orbital_bounds"
    assert report.verdict == "pass"
    assert report.observed["instances"] == 100
    with pytest.raises(ShapeMismatch):
        run_check("riemann")


def test_run_all_orders_by_check_id():
    reports = run_all(Config(), only=["planners", "paley_orbitals"])
    assert [r.check_id for r in reports] == ["paley_orbitals", "planners"]
    assert all(r.verdict in VERDICTS for r in reports)
    assert set(SUITE) >= {r.check_id for r in reports}


def sample_reports():
    return [
        VerificationReport("paley_orbitals", {"max_q": 30}, {"bad": []}, {"bad": []}, "pass", 12),
        VerificationReport("planners", {"count": 1}, {"problems": []}, {"problems": ["x"]}, "fail",
                           7, seed=3, theorem_backed=False),
    ]


def test_report_serialization():
    reports = sample_reports()
    data = json.loads(reports_to_json(reports))
    assert "runtime_ms" not in data[0]
    assert json.loads(reports_to_json(reports, timings=True))[0]["runtime_ms"] == 12
    assert not any(r.failed_theorem() for r in reports)

    lines = reports_to_tsv(reports).splitlines()
    assert lines[0].split("\t") == ["check_id", "verdict", "theorem_backed", "seed", "params", "observed"]
    assert lines[2].startswith("planners\tfail\tFalse\t3\t")


def test_write_reports(tmp_path):
    reports = sample_reports()
    xlsx = write_reports(reports, str(tmp_path / "reports.xlsx"), timings=True)
    ws = load_workbook(xlsx)["verification"]
    header = [c.value for c in ws[1]]
    assert header[:2] == ["check_id", "verdict"]
    assert "runtime_ms" in header
    assert ws["A1"].font.bold
    assert ws["A3"].value == "planners"

    tsv = write_reports(reports, str(tmp_path / "reports.tsv"))
    with open(tsv) as fh:
        assert fh.readline().startswith("check_id\tverdict")

    out = write_reports(reports, str(tmp_path / "reports.txt"), fmt="json")
    with open(out) as fh:
        assert len(json.load(fh)) == 2
