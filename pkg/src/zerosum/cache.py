"""Append-only JSON-lines store for computed constants and extremal reports."""
from __future__ import annotations

import json
import os
import threading
from datetime import datetime, timezone
from pathlib import Path

from . import ENGINE_VERSION
from .extremal import ExtremalReport
from .search import ConstantRecord

ENV_VAR = "DAVENPORT_CACHE"


def default_path() -> Path:
    if os.environ.get(ENV_VAR):
        return Path(os.environ[ENV_VAR])
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "zerosum" / "cache.jsonl"


def cache_key(kind: str, n: int, weights: str) -> str:
    return f"{kind}|{n}|{weights}"


def record_to_entry(record, ts: str | None = None) -> dict:
    ts = ts or datetime.now(timezone.utc).isoformat(timespec="seconds")
    if isinstance(record, ExtremalReport):
        entry = {
            "key": cache_key("X", record.n, record.weight_spec),
            "kind": "X",
            "n": record.n,
            "weights": record.weight_spec,
            "value": record.davenport_value,
            "status": "partial" if record.partial else "exact",
            "witness": list(record.classes[0]) if record.classes else [],
            "classes": [list(c) for c in record.classes],
            "labels": record.labels,
            "unmatched": [list(c) for c in record.unmatched],
            "theorem": record.theorem,
        }
    else:
        entry = {
            "key": cache_key(record.constant_kind, record.n, record.weight_spec),
            "kind": record.constant_kind,
            "n": record.n,
            "weights": record.weight_spec,
            "value": record.value,
            "status": record.status,
            "witness": list(record.witness),
            "nodes": record.node_count,
        }
    entry["engine_version"] = ENGINE_VERSION
    entry["ts"] = ts
    return entry


def entry_to_record(entry: dict):
    if entry["kind"] == "X":
        return ExtremalReport(
            entry["n"], entry["weights"], entry["value"],
            [tuple(c) for c in entry["classes"]], entry["labels"],
            [tuple(c) for c in entry["unmatched"]], entry["theorem"],
            entry["status"] == "partial",
        )
    return ConstantRecord(
        entry["n"], entry["weights"], entry["kind"], entry["value"],
        tuple(entry["witness"]), entry["status"], 0.0, entry.get("nodes", 0),
    )


def dumps(entry: dict) -> str:
    return json.dumps(entry, sort_keys=True, separators=(",", ":"))


class ResultCache:
    """Last entry per key wins; entries from other engine versions are ignored."""

    def __init__(self, path=None):
        self.path = Path(path) if path else default_path()
        self._lock = threading.Lock()

    def entries(self) -> dict[str, dict]:
        out: dict[str, dict] = {}
        if not self.path.exists():
            return out
        with self.path.open() as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError:
                    continue
                if entry.get("engine_version") != ENGINE_VERSION or "key" not in entry:
                    continue
                out[entry["key"]] = entry
        return out

    def get(self, kind: str, n: int, weights: str):
        entry = self.entries().get(cache_key(kind, n, weights))
        return entry_to_record(entry) if entry else None

    def put(self, record) -> dict:
        entry = record_to_entry(record)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a") as fh:
                fh.write(dumps(entry) + "\n")
        return entry
