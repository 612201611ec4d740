"""Serialization helpers shared by the CLI: manifests, round-trip-safe numbers."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from datetime import datetime, timezone
import enum
import io
import json

import numpy as np

from . import __version__


def fmt(x: float) -> str:
    """17 significant digits, enough to round-trip any double."""
    return format(float(x), ".17g")


def jsonable(obj):
    """Recursively convert to JSON types, floats emitted as decimal strings."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return fmt(obj)
    if isinstance(obj, enum.Enum):
        return obj.name
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    return obj


@dataclass
class RunManifest:
    command: str
    params: dict
    seed: int | None = None
    tool_version: str = __version__
    started: str = field(default_factory=lambda: _now())
    finished: str | None = None

    def finish(self) -> RunManifest:
        self.finished = _now()
        return self

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


def json_document(manifest: RunManifest, payload) -> str:
    return json.dumps({"manifest": jsonable(manifest.as_dict()), "payload": jsonable(payload)},
                      indent=2, ensure_ascii=False) + "\n"


def csv_document(manifest: RunManifest, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write("# manifest: " + json.dumps(jsonable(manifest.as_dict()), sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else fmt(v) if isinstance(v, (float, np.floating)) else v
                         for v in row])
    return buf.getvalue()


def read_csv_document(text: str) -> tuple[dict, list[dict]]:
    """Inverse of ``csv_document``: (manifest, rows as dicts of strings)."""
    lines = text.splitlines()
    manifest = {}
    if lines and lines[0].startswith("# manifest: "):
        manifest = json.loads(lines[0][len("# manifest: "):])
        lines = lines[1:]
    return manifest, list(csv.DictReader(lines))


def strip_timestamps(doc: dict) -> dict:
    doc = json.loads(json.dumps(doc))
    for key in ("started", "finished"):
        doc.get("manifest", {}).pop(key, None)
    return doc
