"""Run records and their CSV/JSON round-trip serialization.

The CSV column set and order are part of the package's external
contract (golden-tested); the JSON form adds a config header object.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path


class ParseError(Exception):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one episode with full provenance."""

    agent: str
    game: str
    level: int
    repeat: int
    seed: int
    win: int
    score: float
    timesteps: int
    decisions: int
    total_advance_calls: int
    wall_time_ms: float
    agent_error: int = 0

    def sort_key(self) -> tuple:
        return (self.agent, self.game, self.level, self.repeat)


CSV_COLUMNS = tuple(f.name for f in fields(RunRecord))

_INT_FIELDS = {"level", "repeat", "seed", "win", "timesteps", "decisions",
               "total_advance_calls", "agent_error"}
_FLOAT_FIELDS = {"score", "wall_time_ms"}


def _format_cell(name: str, value) -> str:
    if name in _FLOAT_FIELDS:
        return repr(float(value))
    return str(value)


def write_results(records: list[RunRecord], path: str | Path,
                  config: dict | None = None) -> Path:
    """Write records sorted by provenance; format from the extension.

    ``.csv`` writes the fixed column schema; ``.json`` wraps a record
    array with a config header. Either round-trips losslessly.
    """
    path = Path(path)
    ordered = sorted(records, key=RunRecord.sort_key)
    if path.suffix == ".csv":
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for rec in ordered:
                row = asdict(rec)
                writer.writerow([_format_cell(c, row[c]) for c in CSV_COLUMNS])
    elif path.suffix == ".json":
        payload = {"config": config, "records": [asdict(r) for r in ordered]}
        path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n",
                        encoding="utf-8")
    else:
        raise ValueError(f"unsupported results format {path.suffix!r}")
    return path


def _coerce_row(raw: dict, line: int | None = None) -> RunRecord:
    converted = {}
    for name in CSV_COLUMNS:
        if name not in raw or raw[name] is None:
            raise ParseError(f"missing field {name!r}", line)
        value = raw[name]
        try:
            if name in _INT_FIELDS:
                converted[name] = int(value)
            elif name in _FLOAT_FIELDS:
                converted[name] = float(value)
            else:
                converted[name] = str(value)
        except (TypeError, ValueError):
            raise ParseError(f"bad value {value!r} for field {name!r}", line) from None
    return RunRecord(**converted)


def read_results(path: str | Path) -> tuple[list[RunRecord], dict | None]:
    """Inverse of :func:`write_results`; returns (records, config)."""
    path = Path(path)
    if path.suffix == ".csv":
        records = []
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise ParseError("empty results file", 1) from None
            if tuple(header) != CSV_COLUMNS:
                raise ParseError(f"unexpected header {header!r}", 1)
            for line_no, row in enumerate(reader, start=2):
                if len(row) != len(CSV_COLUMNS):
                    raise ParseError(
                        f"expected {len(CSV_COLUMNS)} cells, got {len(row)}", line_no)
                records.append(_coerce_row(dict(zip(CSV_COLUMNS, row)), line_no))
        return records, None
    if path.suffix == ".json":
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON: {exc.msg}", exc.lineno) from None
        if not isinstance(payload, dict) or "records" not in payload:
            raise ParseError("JSON results need a 'records' array")
        records = [_coerce_row(raw) for raw in payload["records"]]
        return records, payload.get("config")
    raise ValueError(f"unsupported results format {path.suffix!r}")
