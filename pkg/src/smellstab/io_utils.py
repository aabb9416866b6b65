"""Deterministic CSV/JSON writers with config-echo sidecars."""

from __future__ import annotations

import csv
import json
from pathlib import Path

CSV_SCHEMA_VERSION = 1


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path: str | Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([format_value(v) for v in row])


def write_meta(path: str | Path, *, config_echo: dict, extra: dict | None = None) -> None:
    """Provenance sidecar for ``path``: schema version + full config echo."""
    meta = {"csv_schema_version": CSV_SCHEMA_VERSION, "config": config_echo}
    if extra:
        meta.update(extra)
    sidecar = Path(str(path) + ".meta.json")
    sidecar.write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n")


def write_json(path: str | Path, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")


def read_csv(path: str | Path) -> tuple[list[str], list[dict[str, str]]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return list(reader.fieldnames or []), list(reader)
