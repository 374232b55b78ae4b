import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Sequence

import numpy as np

from .errors import OutputError
from .utils import format_number


@dataclass
class Table:
    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)
    meta: Dict[str, Any] = field(default_factory=dict)

    def add_row(self, values: Sequence[Any]) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} cells for {len(self.columns)} columns")
        self.rows.append([_plain(v) for v in values])

    def column(self, name: str) -> List[Any]:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def to_dict(self) -> Dict[str, Any]:
        return {"columns": list(self.columns), "rows": self.rows, "meta": _plain(self.meta)}


def _plain(value: Any) -> Any:
    # numpy scalars and containers -> JSON-native values
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    return value


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_number(value)
    if value is None:
        return ""
    return str(value)


def render_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _json_safe(value: Any) -> Any:
    # inf / nan become the strings the CSV form prints for them
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_json_safe(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return format_number(value)
    return value


def render_json(table: Table) -> str:
    return json.dumps(_json_safe(table.to_dict()), indent=2, allow_nan=False) + "\n"


def render(table: Table, fmt: str) -> str:
    if fmt == "json":
        return render_json(table)
    return render_csv(table)


def write_table(table: Table, path: str | Path, fmt: str) -> Path:
    """Write atomically: a .tmp sibling is filled first, then moved over path."""
    target = Path(path)
    tmp_path = target.with_suffix(target.suffix + ".tmp")
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(tmp_path, "w", encoding="utf-8", newline="\n") as f:
            f.write(render(table, fmt))
        tmp_path.replace(target)
    except OSError as exc:
        raise OutputError(f"cannot write {target}: {exc}") from exc
    return target
