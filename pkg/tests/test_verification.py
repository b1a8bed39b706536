import pytest

from conftest import FIVE_BLOCKS, PALINDROME, SMALL, TWO_THREE_TWO, structure_for
from src.tools.verification import MAX_SKIP_RATE, SKIP_RATE_SAMPLE, InvarianceVerifier, summary_line


@pytest.mark.parametrize("sizes", [SMALL, TWO_THREE_TWO, PALINDROME])
def test_all_checks_pass_on_small_structures(sizes):
    reports = InvarianceVerifier(structure_for(sizes), seed=1).run_all(trials=20)
    assert [r.name for r in reports] == [
        "combined-minor", "n-invariance", "b-invariance", "restriction", "independence-n", "independence-b",
    ]
    failed = [(r.name, r.failures, r.detail) for r in reports if not r.passed]
    assert not failed


def test_b_invariance_skip_rate_is_reported(two_three_two):
    report = InvarianceVerifier(two_three_two, seed=0).check_b_invariance(100)
    assert report.passed
    assert report.trials == 100
    draws = report.detail["draws"]
    assert draws == 100 + report.skipped
    assert report.detail["skip_rate"] == report.skipped / draws
    assert report.detail["skip_rate"] < MAX_SKIP_RATE


def test_vanishing_draws_are_redrawn_in_short_runs(two_three_two):
    verifier = InvarianceVerifier(two_three_two, seed=1)
    verifier.check_n_invariance(20)
    report = verifier.check_b_invariance(20)
    assert report.skipped >= 1
    assert report.trials == 20
    assert report.detail["draws"] < SKIP_RATE_SAMPLE
    assert report.passed, report.failures


def test_jacobian_ranks_reach_family_size(five_blocks):
    verifier = InvarianceVerifier(five_blocks, seed=2)
    n_report = verifier.jacobian_rank_n()
    assert n_report.passed
    assert n_report.detail == {"rank": 16, "expected": 16}
    b_report = verifier.jacobian_rank_b()
    assert b_report.passed
    assert b_report.detail["expected"] == 5


def test_same_seed_same_reports(palindrome):
    first = InvarianceVerifier(palindrome, seed=9).run_all(trials=5)
    second = InvarianceVerifier(palindrome, seed=9).run_all(trials=5)
    assert [r.model_dump() for r in first] == [r.model_dump() for r in second]


def test_summary_line():
    assert summary_line(structure_for(FIVE_BLOCKS)) == "all invariance checks passed: 9 M, 7 L, 2 A, 3 B"
