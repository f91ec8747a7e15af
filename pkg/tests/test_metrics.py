"""Tests for coverage metrics."""

import pytest

from statecover.exceptions import InvalidBound, SuiteInconsistent
from statecover.generator import generate_ftc_suite, generate_ktc_suite
from statecover.metrics import complete_paths, coverage_report, longest_simple_complete_path
from statecover.models import CoverageDimension, TestCase, TestSuite


def subset(suite, *ids):
    return TestSuite(cases=tuple(suite.get(i) for i in ids))


@pytest.mark.unit
class TestPaths:
    def test_longest_simple_path(self, atm, flat_player):
        assert longest_simple_complete_path(atm) == 6
        assert longest_simple_complete_path(flat_player) == 1

    def test_complete_paths(self, atm):
        assert complete_paths(atm, 6) == [
            ("TR1", "TR2", "TR3", "TR4", "TR5"),
            ("TR1", "TR2", "TR3", "TR4", "TR6", "TR7"),
        ]
        assert len(complete_paths(atm, 5)) == 1
        assert complete_paths(atm, 4) == []

    def test_paths_with_cycles(self, flat_player):
        paths = complete_paths(flat_player, 4)
        assert ("T5",) in paths
        assert ("T1", "T4.Playing", "T5") in paths
        assert ("T1", "T2", "T4.Paused", "T5") in paths
        assert len(paths) == 3

    def test_invalid_bound(self, atm):
        with pytest.raises(InvalidBound):
            complete_paths(atm, 0)


@pytest.mark.unit
class TestCoverageReport:
    def test_single_case(self, atm, atm_suite):
        report = coverage_report(atm, subset(atm_suite, "tc1"))
        assert (len(report.states.covered), report.states.total) == (2, 7)
        assert (len(report.transitions.covered), report.transitions.total) == (1, 7)
        assert report.state_cov == pytest.approx(2 / 7)
        assert report.transition_cov == pytest.approx(1 / 7)
        assert report.path_cov == 0.0
        assert report.states.uncovered == ("St3", "St4", "St5", "St6", "St7")

    def test_full_suite(self, atm, atm_suite):
        report = coverage_report(atm, atm_suite)
        assert report.suite_size == 26
        assert report.path_bound == 6
        assert report.state_cov == 1.0
        assert report.transition_cov == 1.0
        assert report.action_cov == 1.0
        assert (len(report.paths.covered), report.paths.total) == (2, 2)

    def test_enabling_inputs_leave_conditions_half_covered(self, atm, atm_suite):
        report = coverage_report(atm, atm_suite)
        assert report.conditions.total == 3
        assert report.condition_cov == 0.0

    def test_guard_probes_cover_conditions(self, atm):
        report = coverage_report(atm, generate_ftc_suite(atm, guard_probes=True))
        assert report.condition_cov == 1.0

    def test_path_bound(self, atm):
        report = coverage_report(atm, generate_ktc_suite(atm, 1), path_bound=5)
        assert report.paths.covered == ("TR1,TR2,TR3,TR4,TR5",)
        assert report.paths.total == 1

    def test_paths_need_initial_start(self, atm, atm_suite):
        report = coverage_report(atm, subset(atm_suite, "tc13"))
        assert report.path_cov == 0.0

    def test_rejected_case_covers_no_path(self, atm):
        case = next(c for c in generate_ftc_suite(atm).cases if c.states[-1] == "St6")
        assert case.transitions == ("TR1", "TR2", "TR3", "TR4", "TR5")
        assert not case.verdict.accepted
        report = coverage_report(atm, TestSuite(cases=(case,)))
        assert report.paths.covered == ()
        assert report.transition_cov == 5 / 7

    def test_not_applicable_dimension(self, single):
        report = coverage_report(single, generate_ktc_suite(single, 1))
        assert report.conditions.total == 0
        assert report.condition_cov is None
        assert report.state_cov == 1.0

    def test_hierarchical_model(self, hierarchical):
        report = coverage_report(hierarchical, generate_ktc_suite(hierarchical, 1))
        assert report.transition_cov == 1.0
        assert report.states.total == 4

    def test_invalid_bound(self, atm, atm_suite):
        with pytest.raises(InvalidBound):
            coverage_report(atm, atm_suite, path_bound=0)

    def test_inconsistent_suite(self, atm):
        case = TestCase(id="x", I="St1", states=("St1", "St3"), transitions=("TR2",))
        with pytest.raises(SuiteInconsistent):
            coverage_report(atm, TestSuite(cases=(case,)))

    def test_monotone_in_suite(self, atm, atm_suite):
        previous = None
        for n in range(1, len(atm_suite) + 1):
            report = coverage_report(atm, TestSuite(cases=atm_suite.cases[:n]))
            counts = {d: len(c.covered) for d, c in report.dimensions().items()}
            if previous is not None:
                assert all(counts[d] >= previous[d] for d in CoverageDimension)
            previous = counts
