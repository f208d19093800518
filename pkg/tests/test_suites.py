import json
import os
import shutil

import pytest

from multigraded.cli.suites import (SUITES, UnknownSuite, cone_vanishing_case, depth_case, lattice_case,
                                    rees_case, run_suite, suite_status)

from conftest import CORPUS, GOLDEN


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("nope", CORPUS)


def test_suite_names():
    assert set(SUITES) >= {"lattice", "cone-vanishing", "duality", "threetenors", "veronese-invariance",
                           "asymptotic-depth", "rees"}


def test_status_precedence():
    assert suite_status([{"status": "pass"}, {"status": "skipped"}]) == "pass"
    assert suite_status([{"status": "pass"}, {"status": "inconclusive"}]) == "inconclusive"
    assert suite_status([{"status": "inconclusive"}, {"status": "fail"}]) == "fail"


def test_parallel_results_match_sequential():
    assert run_suite("depth", CORPUS, jobs=2) == run_suite("depth", CORPUS, jobs=1)


def test_lattice_case_reports_coverage():
    result = lattice_case(2)
    assert result["status"] == "pass"
    assert result["details"]["exceptions"] == 0
    assert result["details"]["coveredChecks"] == 9 * 15 ** 2 * 21 ** 2


def test_skipped_case_is_not_a_failure():
    result = cone_vanishing_case(os.path.join(CORPUS, "bi_free.mod"), {})
    assert result["status"] == "skipped"


def test_depth_case_on_non_monomial_module():
    result = depth_case(os.path.join(CORPUS, "segre_binomial.mod"), {})
    assert result["status"] == "pass"


def test_coverage_case_is_appended():
    results = run_suite("cone-vanishing", CORPUS)
    coverage = results[-1]
    assert coverage["case"] == "coverage" and coverage["status"] == "pass"
    assert coverage["details"]["passing"] >= 6


def test_rees_case_detects_a_wrong_golden_value(tmp_path):
    golden = tmp_path / "maximal.json"
    shutil.copy(os.path.join(GOLDEN, "rees", "maximal.json"), golden)
    frozen = json.loads(golden.read_text())
    frozen["table"][1]["depth"] = 2
    golden.write_text(json.dumps(frozen))
    result = rees_case(os.path.join(CORPUS, "rees", "maximal.ideal"), str(golden), {})
    assert result["status"] == "fail"
    assert result["witness"] == {"a": 2, "expected": 2, "got": 3}


def test_rees_case_without_golden_fails(tmp_path):
    result = rees_case(os.path.join(CORPUS, "rees", "maximal.ideal"), str(tmp_path / "none.json"), {})
    assert result["status"] == "fail"
