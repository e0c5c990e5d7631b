"""
Artifact writers: CSV tables and JSON documents.

CSV files always start with a header row and print floats with 17
significant digits, so identical runs produce identical bytes.  JSON
documents carry the command, its validated parameters, the result and
the warnings captured during the run under "diagnostics".
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel

from moyal_lab import config

logger = logging.getLogger(__name__)


@dataclass
class Table:
    header: list[str]
    rows: list[list[Any]] = field(default_factory=list)


@dataclass
class CommandResult:
    payload: dict[str, Any]
    table: Table | None = None
    exit_code: int = 0


# ---------------------------------------------------------------------------
# Value conversion
# ---------------------------------------------------------------------------

def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)
    return str(value)


def jsonable(value: Any) -> Any:
    """Plain JSON types; complex numbers become [re, im]."""
    if isinstance(value, BaseModel):
        return jsonable(value.model_dump())
    if isinstance(value, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [jsonable(value.real), jsonable(value.imag)]
    if isinstance(value, Fraction):
        return format_cell(value)
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


# ---------------------------------------------------------------------------
# Writers
# ---------------------------------------------------------------------------

def write_csv(table: Table, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(table.header)
        for row in table.rows:
            writer.writerow([format_cell(v) for v in row])
    return path


def write_json(document: dict[str, Any], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(jsonable(document), indent=2, ensure_ascii=False) + "\n")
    return path


def artifact_paths(name: str, output: Path | None, has_table: bool) -> tuple[Path | None, Path]:
    """(csv path or None, json path).

    A table goes to CSV unless the output path ends in .json; the JSON
    document then sits next to it with the same stem.
    """
    if output is None:
        output = config.OUTPUT_DIR / (f"{name}.csv" if has_table else f"{name}.json")
    if has_table and output.suffix.lower() != ".json":
        return output, output.with_suffix(".json")
    return None, output


def write_artifacts(name: str, result: CommandResult, parameters: dict[str, Any],
                    output: Path | None, diagnostics: list[dict]) -> list[Path]:
    csv_path, json_path = artifact_paths(name, output, result.table is not None)
    written = []
    document: dict[str, Any] = {"command": name, "parameters": parameters, "result": result.payload}
    if result.table is not None:
        if csv_path is not None:
            written.append(write_csv(result.table, csv_path))
        else:
            document["table"] = {"header": result.table.header, "rows": result.table.rows}
    # timestamps are dropped so that identical runs give identical files
    document["diagnostics"] = [{k: v for k, v in d.items() if k != "ts"} for d in diagnostics]
    written.append(write_json(document, json_path))
    for p in written:
        logger.info("wrote %s", p)
    return written
