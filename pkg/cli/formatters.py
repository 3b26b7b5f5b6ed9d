import csv
import io
import json
from typing import Any, Iterable, List, Tuple

from pydantic import BaseModel

FORMATS = ("json", "csv", "text")
DECIMALS = 9


def to_plain(value: Any) -> Any:
    """Models, tuples and enums to JSON-ready values; floats fixed to 9 decimals"""
    if isinstance(value, BaseModel):
        return to_plain(value.model_dump(mode="json"))
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, float):
        return round(value, DECIMALS)
    return value


def _flatten(value: Any, prefix: str = "") -> Iterable[Tuple[str, Any]]:
    if isinstance(value, dict):
        for k, v in value.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else k)
    elif isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        for i, v in enumerate(value):
            yield from _flatten(v, f"{prefix}.{i}" if prefix else str(i))
    else:
        yield prefix, value


def _scalar(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.{DECIMALS}f}"
    if isinstance(value, list):
        return " ".join(_scalar(v) for v in value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def render_json(payload: Any) -> str:
    return json.dumps(to_plain(payload), sort_keys=True, separators=(",", ":"))


def render_csv(payload: Any) -> str:
    plain = to_plain(payload)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if isinstance(plain, list) and all(isinstance(row, dict) for row in plain) and plain:
        header: List[str] = sorted({k for row in plain for k in row})
        writer.writerow(header)
        for row in plain:
            writer.writerow([_scalar(row.get(k)) for k in header])
    elif isinstance(plain, list) and all(not isinstance(v, dict) for v in plain):
        for row in plain:
            writer.writerow(row if isinstance(row, list) else [_scalar(row)])
    else:
        writer.writerow(["key", "value"])
        for key, value in _flatten(plain):
            writer.writerow([key, _scalar(value)])
    return buf.getvalue().rstrip("\n")


def render_text(payload: Any) -> str:
    plain = to_plain(payload)
    if isinstance(plain, list):
        return "\n".join(_scalar(v) for v in plain)
    if isinstance(plain, dict):
        return "\n".join(f"{key}: {_scalar(value)}" for key, value in _flatten(plain))
    return _scalar(plain)


def render(payload: Any, fmt: str = "json") -> str:
    if fmt == "json":
        return render_json(payload)
    if fmt == "csv":
        return render_csv(payload)
    return render_text(payload)
