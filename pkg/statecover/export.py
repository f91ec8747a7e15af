"""Artifact rendering: DOT for graphs, JSON for suites and reports, text tables."""

import json
from typing import Any, Dict, Mapping, Optional, Sequence

import structlog
from pydantic import ValidationError

from .exceptions import SuiteFormatError
from .models import CoverageReport, SuiteProvenance, TestSuite, TransitionGraph

logger = structlog.get_logger(__name__)


def _gvquote(name: str) -> str:
    return '"{}"'.format(name.replace("\\", "\\\\").replace('"', '\\"'))


def export_dot(tg: TransitionGraph) -> str:
    """Render a transition graph as a DOT digraph, nodes then edges, both sorted."""
    nodes = [f"  {_gvquote(v)};" for v in tg.vertices]
    edges = [f"  {_gvquote(s)} -> {_gvquote(t)};" for s, t in tg.edges]
    body = "\n".join(nodes + edges)
    if not body:
        return "digraph TG {\n}\n"
    return "digraph TG {\n" + body + "\n}\n"


def _dump(document: Any) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def suite_document(suite: TestSuite, discarded: Optional[Mapping[str, Sequence[str]]] = None) -> Dict[str, Any]:
    document: Dict[str, Any] = {
        "provenance": suite.provenance.value,
        "suite": [case.model_dump(mode="json", by_alias=True) for case in suite.cases],
    }
    if discarded is not None:
        document["discarded"] = {case_id: list(ids) for case_id, ids in discarded.items()}
    return document


def suite_to_json(suite: TestSuite, discarded: Optional[Mapping[str, Sequence[str]]] = None) -> str:
    """Serialize a suite; ``discarded`` maps removed case ids to the cases covering them."""
    return _dump(suite_document(suite, discarded))


def suite_from_json(text: str) -> TestSuite:
    """Read a suite document.

    Raises:
        SuiteFormatError: If the text is not JSON or does not follow the suite schema
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise SuiteFormatError(f"Suite is not valid JSON: {e.msg}", context={"line": e.lineno}) from None
    if not isinstance(document, dict) or not isinstance(document.get("suite"), list):
        raise SuiteFormatError("Suite document must be an object with a 'suite' list")

    try:
        return TestSuite(
            cases=tuple(document["suite"]),
            provenance=SuiteProvenance(document.get("provenance", SuiteProvenance.ENUMERATED.value)),
        )
    except (ValidationError, ValueError) as e:
        raise SuiteFormatError(f"Suite does not follow the schema: {e}") from None


def report_to_json(report: CoverageReport) -> str:
    return _dump(report.model_dump(mode="json"))


def _ratio(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.4f}"


def report_to_table(report: CoverageReport) -> str:
    """Aligned columns: dimension, covered, total, ratio rounded to 4 places."""
    rows = [("dimension", "covered", "total", "ratio")]
    for dimension, coverage in report.dimensions().items():
        rows.append((dimension.value, str(len(coverage.covered)), str(coverage.total), _ratio(coverage.ratio)))
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = [
        "  ".join(
            cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i]) for i, cell in enumerate(row)
        ).rstrip()
        for row in rows
    ]
    header = f"model {report.model_name}, {report.suite_size} test cases, path bound {report.path_bound}"
    return "\n".join([header, *lines]) + "\n"
