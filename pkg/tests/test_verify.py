"""The identity-suite runner and the verify-identities CLI contract."""

import json

import pytest
from click.testing import CliRunner

from divap.cli import main
from divap.verify import (
    report_exit_code,
    reports_to_json,
    suite_fe_zeta,
    suite_gauss,
    suite_orthogonality,
    suite_orthogonality_even_printed,
)


def test_suite_reports_pass():
    rep = suite_gauss(31)
    assert rep.passed
    assert rep.cases_run > 0
    assert rep.max_residual < 1e-8
    rep2 = suite_orthogonality(31)
    assert rep2.passed and not rep2.discrepancies


def test_quarantined_suite_records_known_defect():
    rep = suite_orthogonality_even_printed(31)
    assert rep.quarantined
    assert rep.passed  # quarantined discrepancies do not fail the run
    assert rep.discrepancies
    d = rep.discrepancies[0]
    assert d.lemma_id == "orthogonality_even"
    assert d.abs_diff == pytest.approx(0.5, abs=1e-9)
    js = json.loads(reports_to_json([rep]))[0]
    assert {"lemma_id", "p", "arguments", "paper_value", "computed_value", "abs_diff"} <= set(
        js["discrepancies"][0]
    )


def test_exit_code_logic():
    ok = suite_fe_zeta()
    quarantined = suite_orthogonality_even_printed(11)
    assert report_exit_code([ok, quarantined]) == 0
    broken = suite_fe_zeta()
    broken.discrepancies.append(quarantined.discrepancies[0])
    broken.quarantined = False
    assert report_exit_code([ok, broken]) == 1


def test_cli_verify_identities_small(tmp_path):
    runner = CliRunner()
    res = runner.invoke(
        main,
        ["verify-identities", "--pmax", "7", "--out", str(tmp_path)],
    )
    assert res.exit_code == 0, res.output
    assert "PASS" in res.output
    assert "known-open-question discrepancies" in res.output
    reports = json.loads((tmp_path / "verify_identities.json").read_text())
    assert all(r["passed"] for r in reports)
    suites = {r["suite"] for r in reports}
    assert {"weil-scan", "orthogonality", "gauss-sums", "afe", "adjudications"} <= suites
