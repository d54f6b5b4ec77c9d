"""Machine-readable command output: one record, two encodings.

A record is (schema_version, command, inputs, rows).  JSON carries it as a
single object; CSV carries the scalars as leading ``# key=value`` comment
lines followed by a header row and data rows.  Both encodings store doubles
in the shortest form that restores them bit-exactly (up to 17 significant
digits) and parse back into an equivalent record.
"""

import csv
import io
import json
from dataclasses import dataclass

from .errors import ValidationError

__all__ = ["OutputRecord", "SCHEMA_VERSION", "render", "parse", "FORMATS"]

SCHEMA_VERSION = "1"
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class OutputRecord:
    schema_version: str
    command: str
    inputs: dict
    rows: list


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_scalar(text: str):
    if text == "":
        return None
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def render(record: OutputRecord, fmt: str) -> str:
    """Encode a record as 'csv' or 'json' text (LF line endings)."""
    if fmt == "json":
        payload = {
            "schema_version": record.schema_version,
            "command": record.command,
            "inputs": record.inputs,
            "rows": record.rows,
        }
        return json.dumps(payload, indent=2) + "\n"
    if fmt != "csv":
        raise ValidationError(f"format must be one of {FORMATS}, got {fmt!r}")
    buf = io.StringIO()
    buf.write(f"# schema_version={record.schema_version}\n")
    buf.write(f"# command={record.command}\n")
    for key, value in record.inputs.items():
        buf.write(f"# {key}={_fmt(value)}\n")
    if record.rows:
        columns = list(record.rows[0].keys())
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in record.rows:
            writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def parse(text: str) -> OutputRecord:
    """Decode either encoding back into an :class:`OutputRecord`."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        payload = json.loads(text)
        try:
            return OutputRecord(
                schema_version=str(payload["schema_version"]),
                command=str(payload["command"]),
                inputs=dict(payload["inputs"]),
                rows=list(payload["rows"]),
            )
        except KeyError as exc:
            raise ValidationError(f"record is missing field {exc.args[0]!r}") from exc

    meta = {}
    table_lines = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, sep, value = line[2:].partition("=")
            if not sep:
                raise ValidationError(f"malformed metadata line: {line!r}")
            meta[key] = value
        elif line.strip():
            table_lines.append(line)
    if "schema_version" not in meta or "command" not in meta:
        raise ValidationError("CSV record lacks schema_version/command metadata")
    schema_version = meta.pop("schema_version")
    command = meta.pop("command")
    inputs = {k: _parse_scalar(v) for k, v in meta.items()}

    rows = []
    if table_lines:
        reader = csv.reader(table_lines)
        header = next(reader)
        for raw in reader:
            rows.append({k: _parse_scalar(v) for k, v in zip(header, raw)})
    return OutputRecord(schema_version, command, inputs, rows)
