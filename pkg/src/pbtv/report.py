"""JSON and CSV serialization of reports.

JSON documents carry ``"schema": "pbtv/1"`` and sorted keys.  Wall-clock
fields (durations, timestamps) are left out unless ``include_timing`` is
set, which keeps output a pure function of (seed, config, suite).

Suite CSV columns, in order::

    row, suite, check, index, slack, instances, violations, n, p, q, extra

``row`` is ``violation`` for each violating instance and ``summary`` for
the final line, whose ``check``/``slack`` give the smallest asserted slack.
An empty report writes the header only.  ``p``/``q`` are ``;``-joined
floats and ``extra`` is compact JSON.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .bounds import BOUND_CSV_COLUMNS, BoundReport
from .core import Pmf
from .homog import HOMOG_CSV_COLUMNS, HomogReport
from .suites import SearchRecord, SuiteReport

SCHEMA = "pbtv/1"

SUITE_CSV_COLUMNS = ("row", "suite", "check", "index", "slack", "instances", "violations", "n", "p", "q", "extra")
SEARCH_CSV_COLUMNS = ("objective_kind", "objective", "seed", "iteration", "n", "p", "q", "extra")


def _clean(obj):
    """Non-finite floats become None so the JSON stays standard."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _vec(v) -> str:
    return ";".join(repr(float(x)) for x in v)


def suite_to_dict(rep: SuiteReport, include_timing: bool = False) -> dict:
    d = {
        "suite": rep.suite,
        "config": rep.config,
        "instances": rep.instances,
        "passed": rep.passed,
        "violations": [r.to_dict(include_timing) for r in rep.violations],
        "conjectures": list(rep.conjectures),
        "extremes": {
            name: {
                "min_slack": e.min_slack,
                "min_record": e.min_record.to_dict(include_timing),
                "max_slack": e.max_slack,
                "max_record": e.max_record.to_dict(include_timing),
            }
            for name, e in rep.extremes.items()
        },
    }
    if include_timing:
        d["duration"] = rep.duration
    return d


def to_document(report, include_timing: bool = False) -> dict:
    if isinstance(report, SuiteReport):
        kind, body = "suite_report", suite_to_dict(report, include_timing)
    elif isinstance(report, SearchRecord):
        kind, body = "search_record", report.to_dict(include_timing)
    elif isinstance(report, BoundReport):
        kind, body = "bound_report", report.to_dict()
    elif isinstance(report, HomogReport):
        kind, body = "homog_report", report.to_dict()
    elif isinstance(report, Pmf):
        kind, body = "pmf", report.to_dict()
    else:
        raise TypeError(f"cannot serialize {type(report).__name__}")
    return {"schema": SCHEMA, "type": kind, **_clean(body)}


def to_json(report, include_timing: bool = False) -> str:
    return json.dumps(to_document(report, include_timing), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _csv_rows(report) -> tuple[tuple[str, ...], list[list]]:
    if isinstance(report, SuiteReport):
        rows = []
        for r in report.violations:
            check = r.objective_kind.split(":", 1)[1]
            rows.append(
                ["violation", report.suite, check, r.iteration, r.objective, "", "", len(r.p),
                 _vec(r.p), _vec(r.q), json.dumps(r.extra, sort_keys=True, separators=(",", ":"))]
            )
        if report.instances:
            check, slack = report.min_slack()
            rows.append(
                ["summary", report.suite, check or "", "", "" if slack is None else slack,
                 report.instances, len(report.violations), "", "", "", ""]
            )
        return SUITE_CSV_COLUMNS, rows
    if isinstance(report, SearchRecord):
        row = [report.objective_kind, report.objective, report.seed, report.iteration, len(report.p),
               _vec(report.p), _vec(report.q), json.dumps(report.extra, sort_keys=True, separators=(",", ":"))]
        return SEARCH_CSV_COLUMNS, [row]
    if isinstance(report, BoundReport):
        return BOUND_CSV_COLUMNS, [report.csv_row()]
    if isinstance(report, HomogReport):
        return HOMOG_CSV_COLUMNS, [report.csv_row()]
    raise TypeError(f"cannot serialize {type(report).__name__} as CSV")


def to_csv(report) -> str:
    header, rows = _csv_rows(report)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def emit(report, fmt: str, path, include_timing: bool = False) -> None:
    """Write ``report`` as ``json`` or ``csv`` to ``path``."""
    if fmt == "json":
        text = to_json(report, include_timing)
    elif fmt == "csv":
        text = to_csv(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    Path(path).write_text(text, encoding="utf-8")
