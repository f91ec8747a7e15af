"""Tests for the command line interface."""

import json

import pytest

from statecover.export import suite_to_json
from statecover.main import build_parser, main
from statecover.models import TestSuite


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("STATECOVER_CAP", "STATECOVER_GTSP_EXACT_LIMIT", "STATECOVER_PATH_BOUND"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def broken_model(tmp_path):
    path = tmp_path / "broken.scd"
    path.write_text(
        "statechart Broken\nevents e\nstate A initial\nstate B final\nstate Lost\ntransition t: A -> B on e\n",
        encoding="utf-8",
    )
    return path


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.mark.unit
def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


@pytest.mark.integration
class TestValidateCommand:
    def test_valid(self, capsys, atm_path):
        code, out, _ = run_cli(capsys, "validate", atm_path)
        assert code == 0
        assert out == "ATM: valid\n"

    def test_violations(self, capsys, broken_model):
        code, out, _ = run_cli(capsys, "validate", broken_model)
        assert code == 2
        assert out.startswith("unreachable(Lost)")

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "validate", tmp_path / "absent.scd")
        assert code == 1
        assert "validate:" in err

    def test_syntax_error(self, capsys, tmp_path):
        path = tmp_path / "bad.scd"
        path.write_text("statechart X\nstate\n", encoding="utf-8")
        code, _, err = run_cli(capsys, "validate", path)
        assert code == 1
        assert "validate:" in err


@pytest.mark.integration
class TestGenerateCommand:
    def test_enumerate(self, capsys, atm_path):
        code, out, _ = run_cli(capsys, "generate", atm_path, "--mode", "enumerate", "--max-len", "7")
        assert code == 0
        document = json.loads(out)
        assert document["provenance"] == "enumerated"
        assert len(document["suite"]) == 26

    def test_ktc_default(self, capsys, atm_path):
        code, out, _ = run_cli(capsys, "generate", atm_path)
        assert code == 0
        assert [c["transitions"] for c in json.loads(out)["suite"]] == [
            ["TR1", "TR2", "TR3", "TR4", "TR5"],
            ["TR1", "TR2", "TR3", "TR4", "TR6", "TR7"],
        ]

    def test_ftc_pairs(self, capsys, atm_path):
        code, out, _ = run_cli(capsys, "generate", atm_path, "--mode", "ftc", "--pairs")
        assert code == 0
        assert len(json.loads(out)["suite"]) == 49

    def test_output_file(self, capsys, atm_path, tmp_path):
        target = tmp_path / "suite.json"
        code, out, _ = run_cli(capsys, "generate", atm_path, "--mode", "ftc", "--out", target)
        assert code == 0
        assert out == ""
        assert len(json.loads(target.read_text(encoding="utf-8"))["suite"]) == 42

    def test_invalid_model_refused(self, capsys, broken_model):
        code, _, err = run_cli(capsys, "generate", broken_model)
        assert code == 2
        assert "unreachable(Lost)" in err

    def test_invalid_k(self, capsys, atm_path):
        code, _, _ = run_cli(capsys, "generate", atm_path, "--k", "0")
        assert code == 2

    def test_cap_from_environment(self, capsys, monkeypatch, atm_path):
        monkeypatch.setenv("STATECOVER_CAP", "10")
        code, out, err = run_cli(capsys, "generate", atm_path, "--mode", "enumerate")
        assert code == 3
        assert out == ""
        assert "generate:" in err

    def test_ktc_respects_cap(self, capsys, monkeypatch, atm_path):
        monkeypatch.setenv("STATECOVER_CAP", "5")
        code, out, _ = run_cli(capsys, "generate", atm_path, "--mode", "ktc", "--k", "2")
        assert code == 3
        assert out == ""

    def test_bad_environment(self, capsys, monkeypatch, atm_path):
        monkeypatch.setenv("STATECOVER_CAP", "lots")
        code, _, _ = run_cli(capsys, "generate", atm_path)
        assert code == 1


@pytest.mark.integration
class TestMinimizeCommand:
    def test_transition_global(self, capsys, atm_path, atm_suite_file):
        code, out, _ = run_cli(
            capsys, "minimize", atm_suite_file, atm_path, "--rule", "transition", "--group", "global"
        )
        assert code == 0
        document = json.loads(out)
        assert document["provenance"] == "minimized"
        assert [c["id"] for c in document["suite"]] == ["tc5", "tc7"]
        assert document["discarded"]["tc1"] == ["tc2", "tc3", "tc4", "tc5", "tc6", "tc7"]
        assert "tc7" not in document["discarded"]

    def test_node_by_start(self, capsys, atm_path, atm_suite_file):
        code, out, _ = run_cli(capsys, "minimize", atm_suite_file, atm_path, "--rule", "node", "--group", "by-start")
        assert code == 0
        assert [c["id"] for c in json.loads(out)["suite"]] == ["tc7", "tc13", "tc18", "tc22", "tc25", "tc26"]

    def test_suite_from_other_model(self, capsys, hierarchical_path, atm_suite_file):
        code, _, _ = run_cli(capsys, "minimize", atm_suite_file, hierarchical_path)
        assert code == 2

    def test_edited_outputs_rejected(self, capsys, atm_path, atm_suite_file):
        document = json.loads(atm_suite_file.read_text(encoding="utf-8"))
        document["suite"][0]["expected_outputs"] = ["bogus"]
        atm_suite_file.write_text(json.dumps(document), encoding="utf-8")
        code, out, err = run_cli(capsys, "minimize", atm_suite_file, atm_path)
        assert code == 2
        assert out == ""
        assert "emitted" in err

    def test_malformed_suite(self, capsys, atm_path, tmp_path):
        path = tmp_path / "suite.json"
        path.write_text("{", encoding="utf-8")
        code, _, _ = run_cli(capsys, "minimize", path, atm_path)
        assert code == 1


@pytest.mark.integration
class TestReportCommand:
    def test_text_table(self, capsys, atm_path, atm_suite, tmp_path):
        path = tmp_path / "one.json"
        path.write_text(suite_to_json(TestSuite(cases=(atm_suite.get("tc1"),))), encoding="utf-8")
        code, out, _ = run_cli(capsys, "report", atm_path, path, "--format", "text")
        assert code == 0
        assert "0.2857" in out
        assert "0.1429" in out

    def test_json(self, capsys, atm_path, atm_suite_file):
        code, out, _ = run_cli(capsys, "report", atm_path, atm_suite_file, "--path-bound", "5")
        assert code == 0
        document = json.loads(out)
        assert document["path_bound"] == 5
        assert document["transitions"]["ratio"] == 1.0

    def test_path_bound_from_environment(self, capsys, monkeypatch, atm_path, atm_suite_file):
        monkeypatch.setenv("STATECOVER_PATH_BOUND", "5")
        code, out, _ = run_cli(capsys, "report", atm_path, atm_suite_file)
        assert code == 0
        assert json.loads(out)["path_bound"] == 5

    def test_empty_suite(self, capsys, atm_path, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text(suite_to_json(TestSuite()), encoding="utf-8")
        code, _, _ = run_cli(capsys, "report", atm_path, path)
        assert code == 2

    def test_invalid_bound(self, capsys, atm_path, atm_suite_file):
        code, _, _ = run_cli(capsys, "report", atm_path, atm_suite_file, "--path-bound", "0")
        assert code == 2


@pytest.mark.integration
def test_pipeline_is_byte_identical(capsys, atm_path, tmp_path):
    artifacts = []
    for run in ("first", "second"):
        suite = tmp_path / f"{run}-suite.json"
        minimized = tmp_path / f"{run}-min.json"
        report = tmp_path / f"{run}-report.json"
        assert run_cli(capsys, "generate", atm_path, "--mode", "enumerate", "--out", suite)[0] == 0
        assert run_cli(capsys, "minimize", suite, atm_path, "--out", minimized)[0] == 0
        assert run_cli(capsys, "report", atm_path, minimized, "--out", report)[0] == 0
        artifacts.append([p.read_bytes() for p in (suite, minimized, report)])
    assert artifacts[0] == artifacts[1]


@pytest.mark.integration
class TestGraphAndFlatten:
    def test_graph(self, capsys, atm_path):
        code, out, _ = run_cli(capsys, "graph", atm_path)
        assert code == 0
        nodes = [line for line in out.splitlines() if line.endswith(";") and "->" not in line]
        assert len(nodes) == 9
        assert '  "tf" -> "ti";' in out.splitlines()

    def test_graph_k2(self, capsys, atm_path):
        code, out, _ = run_cli(capsys, "graph", atm_path, "--k", "2")
        assert code == 0
        nodes = [line for line in out.splitlines() if line.endswith(";") and "->" not in line]
        assert len(nodes) == 8
        assert '  "TR4,TR6" -> "TR6,TR7";' in out.splitlines()

    def test_graph_too_long(self, capsys, atm_path):
        code, _, _ = run_cli(capsys, "graph", atm_path, "--k", "8")
        assert code == 2

    def test_flatten(self, capsys, hierarchical_path):
        code, out, _ = run_cli(capsys, "flatten", hierarchical_path)
        assert code == 0
        assert "transition T4.Playing: Playing -> Off on stop / halt" in out
        assert "state Playing" in out
        assert "state On" not in out
