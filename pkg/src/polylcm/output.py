"""CSV tables and JSON run manifests."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
from pathlib import Path
from typing import Any, Iterable, Sequence

from . import __version__

SCHEMA_VERSION = 1
OUT_ENV = "POLYLCM_OUT"


def output_dir(explicit: str | None) -> Path:
    return Path(explicit or os.environ.get(OUT_ENV) or "polylcm_out")


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    if isinstance(v, (list, tuple)):
        return ";".join(_cell(x) for x in v)
    return str(v)


def columns(rows: Sequence[dict[str, Any]]) -> list[str]:
    """Union of row keys in first-seen order."""
    out: dict[str, None] = {}
    for r in rows:
        out.update(dict.fromkeys(r))
    return list(out)


def render_csv(rows: Sequence[dict[str, Any]], header: Sequence[str] | None = None) -> str:
    header = list(header) if header is not None else columns(rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in header])
    return buf.getvalue()


def header_hash(header: Iterable[str]) -> str:
    return hashlib.sha256(",".join(header).encode()).hexdigest()


def _jsonable(v: Any) -> Any:
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    return str(v)


def write_run(
    out: Path,
    name: str,
    tables: dict[str, Sequence[dict[str, Any]]],
    *,
    command: str,
    config: dict[str, Any],
    summary: dict[str, Any],
    warnings: Sequence[str] = (),
    elapsed: float = 0.0,
) -> Path:
    """Write ``<name>[_<table>].csv`` files and ``<name>.manifest.json``; return the manifest path."""
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    for table, rows in tables.items():
        if not rows and table != "main":
            continue
        header = columns(rows)
        fname = f"{name}.csv" if table == "main" else f"{name}_{table}.csv"
        text = render_csv(rows, header)
        (out / fname).write_text(text)
        files[table] = {
            "file": fname,
            "rows": len(rows),
            "columns": header,
            "header_sha256": header_hash(header),
            "sha256": hashlib.sha256(text.encode()).hexdigest(),
        }
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "experiment": name,
        "command": command,
        "code_version": __version__,
        "parameters": _jsonable(config),
        "seed": config.get("seed"),
        "xi": config.get("xi"),
        "mode": {k: config.get(k) for k in ("all_units", "exhaustive") if k in config},
        "summary": _jsonable(summary),
        "warnings": list(warnings),
        "timing_seconds": round(elapsed, 3),
        "files": files,
    }
    path = out / f"{name}.manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=False) + "\n")
    return path


def read_manifest(path: str | Path) -> dict[str, Any]:
    data = json.loads(Path(path).read_text())
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"manifest schema {data.get('schema_version')} is not supported (expected {SCHEMA_VERSION})")
    return data
