"""
Check records, verification reports and their JSON / CSV / text renderings.

Every JSON document is validated against its schema in `schemas/` before it
is emitted.
"""

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import jsonschema
import pandas as pd

from errors import CheckFailure, InternalError

logger = logging.getLogger(__name__)

SCHEMA_DIR = Path(__file__).resolve().parent / "schemas"

SWEEP_COLUMNS = ["c", "independent", "hilbert_match", "first_deviation"]
HILBERT_COLUMNS = ["d", "dim", "formula"]
COMPARISON_COLUMNS = ["d", "dim_A", "dim_I", "dim_J", "equal"]
RECORD_COLUMNS = ["name", "status", "parameters", "wall_time"]


# ============== Records ==============

@dataclass
class CheckRecord:
    """Outcome of one named check."""

    name: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    status: str = "pass"
    witness: Optional[Dict[str, Any]] = None
    wall_time: Optional[float] = None
    result: Any = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self, timings: bool = True) -> Dict[str, Any]:
        out = {"name": self.name, "parameters": self.parameters, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.result is not None:
            out["result"] = self.result
        if timings and self.wall_time is not None:
            out["wall_time"] = round(self.wall_time, 6)
        return out


@dataclass
class VerificationReport:
    """Records of one command run; the verdict passes iff every record passes."""

    command: str
    session: Dict[str, Any]
    records: List[CheckRecord] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)

    def add(self, record: CheckRecord) -> CheckRecord:
        self.records.append(record)
        return record

    @property
    def verdict(self) -> str:
        return "pass" if all(r.passed for r in self.records) else "fail"

    @property
    def first_failure(self) -> Optional[CheckRecord]:
        return next((r for r in self.records if not r.passed), None)

    def to_dict(self, timings: bool = True) -> Dict[str, Any]:
        return {
            "command": self.command,
            "session": self.session,
            "verdict": self.verdict,
            "records": [r.to_dict(timings) for r in self.records],
            **self.extra,
        }


def run_check(name: str, parameters: Dict[str, Any], fn: Callable[..., Any], *args, **kwargs) -> CheckRecord:
    """
    Run fn, timing it, and turn a CheckFailure into a failed record.

    Other exceptions propagate: they are configuration or implementation
    errors, not mathematical outcomes.
    """
    start = time.perf_counter()
    try:
        result = fn(*args, **kwargs)
        record = CheckRecord(name, parameters, "pass", result=result)
    except CheckFailure as e:
        logger.error(f"Check {name} {parameters} failed: {e}")
        record = CheckRecord(name, parameters, "fail", witness=e.to_dict())
    record.wall_time = time.perf_counter() - start
    logger.debug(f"Check {name} {parameters}: {record.status} in {record.wall_time:.3f}s")
    return record


# ============== Schema Validation ==============

def load_schema(name: str) -> Dict[str, Any]:
    with open(SCHEMA_DIR / f"{name}.schema.json", "r", encoding="utf-8") as f:
        return json.load(f)


def validate_document(document: Dict[str, Any], schema_name: str) -> None:
    """
    Raises:
        InternalError: if the document does not match the shipped schema
    """
    schema = load_schema(schema_name)
    try:
        jsonschema.validate(instance=document, schema=schema)
    except jsonschema.ValidationError as e:
        raise InternalError(
            f"report does not match schema {schema_name}: {e.message}",
            {"schema": schema_name, "path": list(e.absolute_path)}
        )


# ============== Rendering ==============

def render_json(document: Dict[str, Any], schema_name: Optional[str] = None) -> str:
    if schema_name:
        validate_document(document, schema_name)
    return json.dumps(document, indent=2, default=str)


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (dict, list)):
        return json.dumps(value, default=str, sort_keys=True)
    return str(value)


def render_csv(rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> str:
    """CSV with a fixed header; cells are pre-formatted strings so types never drift."""
    frame = pd.DataFrame([[_cell(row.get(col)) for col in columns] for row in rows], columns=list(columns))
    return frame.to_csv(index=False, lineterminator="\n")


def render_text(report: VerificationReport, timings: bool = True) -> str:
    lines = [f"{report.command}: {report.verdict.upper()}"]
    lines.append("  " + ", ".join(f"{k}={v}" for k, v in report.session.items()))
    for record in report.records:
        params = ", ".join(f"{k}={v}" for k, v in record.parameters.items())
        timing = f" ({record.wall_time:.3f}s)" if timings and record.wall_time is not None else ""
        lines.append(f"  [{record.status}] {record.name}({params}){timing}")
        if record.witness:
            lines.append(f"      {record.witness.get('message', record.witness)}")
    return "\n".join(lines) + "\n"


def write_output(text: str, path: Optional[Path]) -> None:
    """Write to path (creating parent directories) or to stdout."""
    if path is None:
        print(text, end="" if text.endswith("\n") else "\n")
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {path}")
