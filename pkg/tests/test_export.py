"""Tests for DOT, JSON and table rendering."""

import json

import pytest

from statecover.exceptions import SuiteFormatError
from statecover.export import export_dot, report_to_json, report_to_table, suite_from_json, suite_to_json
from statecover.metrics import coverage_report
from statecover.models import SuiteProvenance, TestSuite, TransitionGraph
from statecover.tgraph import augment, build_transition_graph


@pytest.mark.unit
class TestExportDot:
    def test_atm_graph(self, atm):
        text = export_dot(augment(build_transition_graph(atm)))
        lines = text.splitlines()
        assert lines[0] == "digraph TG {"
        assert lines[-1] == "}"
        assert sum(1 for line in lines if line.endswith(";") and "->" not in line) == 9
        assert sum(1 for line in lines if "->" in line) == 10
        assert '  "tf" -> "ti";' in lines
        assert lines[1] == '  "ti";'
        assert lines[9] == '  "tf";'

    def test_single_transition(self, single):
        assert export_dot(build_transition_graph(single)) == (
            'digraph TG {\n  "ti";\n  "a";\n  "tf";\n  "ti" -> "a";\n  "a" -> "tf";\n}\n'
        )

    def test_empty_graph(self):
        assert export_dot(TransitionGraph()) == "digraph TG {\n}\n"

    def test_deterministic(self, atm):
        tg = build_transition_graph(atm)
        assert export_dot(tg) == export_dot(build_transition_graph(atm))


@pytest.mark.unit
class TestSuiteJson:
    def test_round_trip(self, atm_suite):
        assert suite_from_json(suite_to_json(atm_suite)) == atm_suite

    def test_document_shape(self, atm_suite):
        document = json.loads(suite_to_json(atm_suite))
        assert document["provenance"] == "enumerated"
        case = document["suite"][6]
        assert case["id"] == "tc7"
        assert case["I"] == "St1"
        assert case["inputs"][1] == {"event": "e2", "bindings": {"n": 0}}
        assert case["expected_verdict"] == "accepted"
        assert "discarded" not in document

    def test_discarded(self, atm_suite):
        document = json.loads(suite_to_json(TestSuite(provenance=SuiteProvenance.MINIMIZED), {"tc1": ["tc2"]}))
        assert document == {"provenance": "minimized", "suite": [], "discarded": {"tc1": ["tc2"]}}

    @pytest.mark.parametrize(
        "text",
        [
            "not json",
            "[]",
            '{"suite": 3}',
            '{"suite": [{"id": "x"}]}',
            '{"suite": [], "provenance": "handmade"}',
            '{"suite": [{"id": "x", "I": "A", "states": ["A", "B"]}]}',
        ],
    )
    def test_bad_documents(self, text):
        with pytest.raises(SuiteFormatError) as info:
            suite_from_json(text)
        assert info.value.exit_code == 1

    def test_duplicate_ids(self, atm_suite):
        document = json.loads(suite_to_json(atm_suite))
        document["suite"].append(document["suite"][0])
        with pytest.raises(SuiteFormatError):
            suite_from_json(json.dumps(document))


@pytest.mark.unit
class TestReportRendering:
    def test_table(self, atm, atm_suite):
        report = coverage_report(atm, TestSuite(cases=(atm_suite.get("tc1"),)))
        lines = report_to_table(report).splitlines()
        assert lines[0] == "model ATM, 1 test cases, path bound 6"
        assert lines[1].split() == ["dimension", "covered", "total", "ratio"]
        rows = {line.split()[0]: line.split()[1:] for line in lines[2:]}
        assert rows["states"] == ["2", "7", "0.2857"]
        assert rows["transitions"] == ["1", "7", "0.1429"]
        assert rows["conditions"] == ["0", "3", "0.0000"]

    def test_table_not_applicable(self, single):
        report = coverage_report(single, suite_from_json(
            '{"suite": [{"id": "tc1", "I": "A", "inputs": [{"event": "go"}], "states": ["A", "B"],'
            ' "transitions": ["a"], "expected_outputs": ["out(a)"]}]}'
        ))
        rows = {line.split()[0]: line.split()[1:] for line in report_to_table(report).splitlines()[2:]}
        assert rows["conditions"] == ["0", "0", "n/a"]

    def test_json(self, atm, atm_suite):
        document = json.loads(report_to_json(coverage_report(atm, atm_suite)))
        assert document["model_name"] == "ATM"
        assert document["states"]["ratio"] == 1.0
        assert document["states"]["total"] == 7
        assert document["conditions"]["uncovered"] == ["TR2", "TR5", "TR6"]
