"""Utilities for loading samples and grids and for writing result files."""

import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, List, Optional, Union

import numpy as np
from numpy.typing import NDArray

from .config import settings
from .errors import InvalidSample, InvalidSpecString
from .estimators import Sample
from .numerics import as_grid, uniform_grid

SAMPLE_HEADER = "x"


def parse_sample_text(text: str, source: str = "<sample>") -> Sample:
    """Parse one finite decimal per line, with an optional ``x`` header."""

    values: List[float] = []
    seen_data = False
    for index, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line:
            continue
        if not seen_data and not values and line == SAMPLE_HEADER:
            seen_data = True
            continue
        seen_data = True
        try:
            value = float(line)
        except ValueError as exc:
            raise InvalidSample(
                f"{source}: line {index} is not a number: {raw_line!r}"
            ) from exc
        if not math.isfinite(value):
            raise InvalidSample(f"{source}: line {index} is not finite: {raw_line!r}")
        values.append(value)

    if not values:
        raise InvalidSample(f"{source}: no observations found")
    return Sample(np.asarray(values, dtype=float))


def load_sample(path: Path) -> Sample:
    """Load observations from a text or single-column CSV file."""

    if not path.exists():
        raise InvalidSample(f"Sample file not found: {path}")
    return parse_sample_text(path.read_text(encoding="utf-8"), source=str(path))


def _load_grid_file(path: Path) -> NDArray[np.float64]:
    values: List[float] = []
    for index, raw_line in enumerate(
        path.read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(float(line))
        except ValueError as exc:
            raise InvalidSpecString(
                f"{path}: grid line {index} is not a number: {raw_line!r}"
            ) from exc
    return as_grid(values)


def parse_grid(spec: str) -> NDArray[np.float64]:
    """Grid from ``start:stop:step`` or from a file of one value per line."""

    text = spec.strip()
    if text.count(":") == 2:
        parts = text.split(":")
        try:
            start, stop, step = (float(part) for part in parts)
        except ValueError as exc:
            raise InvalidSpecString(f"Invalid grid spec {spec!r}") from exc
        return uniform_grid(start, stop, step)

    path = Path(text)
    if path.is_file():
        return _load_grid_file(path)
    raise InvalidSpecString(
        f"Grid must be 'start:stop:step' or an existing file, got {spec!r}"
    )


def parse_int_list(text: str, name: str = "list") -> List[int]:
    """Comma-separated integers, e.g. ``1024,4096``."""

    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise InvalidSpecString(f"{name} must contain at least one value")
    try:
        return [int(item) for item in items]
    except ValueError as exc:
        raise InvalidSpecString(f"{name} must be comma-separated integers: {text!r}") from exc


def parse_float_list(text: str, name: str = "list") -> List[float]:
    """Comma-separated floats, e.g. ``0.1,0.05``."""

    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise InvalidSpecString(f"{name} must contain at least one value")
    try:
        return [float(item) for item in items]
    except ValueError as exc:
        raise InvalidSpecString(f"{name} must be comma-separated numbers: {text!r}") from exc


def format_float(value: float) -> str:
    """Decimal with 17 significant digits, enough to round-trip a double."""

    return format(float(value), f".{settings.display.FLOAT_DIGITS}g")


def _json_value(value: Any, indent: int, level: int) -> str:
    if isinstance(value, np.generic):
        value = value.item()
    if value is None or isinstance(value, bool):
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value) if math.isfinite(value) else "null"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, np.ndarray):
        value = value.tolist()

    pad = "\n" + " " * (indent * (level + 1))
    close = "\n" + " " * (indent * level)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{json.dumps(str(key))}: {_json_value(item, indent, level + 1)}"
            for key, item in value.items()
        ]
        return "{" + pad + ("," + pad).join(items) + close + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [_json_value(item, indent, level + 1) for item in value]
        return "[" + pad + ("," + pad).join(items) + close + "]"
    # Enums and other objects
    return json.dumps(str(getattr(value, "value", value)))


def to_json(value: Any, indent: int = settings.display.JSON_INDENT) -> str:
    """Serialize to JSON with 17-digit floats; non-finite floats become null."""

    return _json_value(value, indent, 0) + "\n"


def atomic_write(path: Path, content: str) -> None:
    """Write ``content`` to ``path`` via a temporary file and a rename."""

    path.parent.mkdir(parents=True, exist_ok=True)
    handle = tempfile.NamedTemporaryFile(
        "w",
        encoding="utf-8",
        newline="\n",
        dir=path.parent,
        prefix=f".{path.name}.",
        suffix=".tmp",
        delete=False,
    )
    try:
        with handle:
            handle.write(content)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(handle.name, path)
    except BaseException:
        Path(handle.name).unlink(missing_ok=True)
        raise


def _csv_cell(cell: Optional[Union[int, float]]) -> str:
    if cell is None:
        return ""
    if isinstance(cell, (int, np.integer)):
        return str(cell)
    return format_float(cell)


def csv_text(header: List[str], rows: List[List[Optional[Union[int, float]]]]) -> str:
    """CSV body with ``\\n`` line endings; floats carry 17 significant digits."""

    lines = [",".join(header)]
    for row in rows:
        cells = [_csv_cell(cell) for cell in row]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
