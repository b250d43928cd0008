"""Report documents: JSON with a stable key order, plus a plain text view.

Everything that varies between runs on the same input lives under the
top-level ``timing`` key, so two reports agree byte for byte once that key
is dropped.
"""
from __future__ import annotations

import hashlib
import json
import math
import time
from contextlib import contextmanager
from pathlib import Path

from .. import __version__

SCHEMA = "reslie-report/1"


def jsonable(obj):
    """Tuples to lists, infinities to the string 'inf', sets sorted."""
    if isinstance(obj, float) and math.isinf(obj):
        return "inf"
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    return obj


def digest_text(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


def input_entry(path, text: str, algebra=None) -> dict:
    entry = {"path": str(path), "digest": digest_text(text)}
    if algebra is not None:
        F = algebra.field
        entry["field"] = {"p": F.p, "k": F.k, "modulus": list(F.modulus)}
        entry["dim"] = algebra.dim
    return entry


class Report:
    def __init__(self, command: str):
        self.command = command
        self.inputs: list = []
        self.body: dict = {}
        self.timing: dict = {}

    @contextmanager
    def timed(self, label: str):
        t = time.perf_counter()
        try:
            yield
        finally:
            self.timing[label] = round(time.perf_counter() - t, 6)

    def as_dict(self, include_timing: bool = True) -> dict:
        doc = {
            "schema": SCHEMA,
            "tool": {"name": "reslie", "version": __version__},
            "command": self.command,
            "inputs": self.inputs,
            "result": self.body,
        }
        if include_timing:
            doc["timing"] = self.timing
        return jsonable(doc)

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.as_dict(include_timing), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.command} ({SCHEMA}, reslie {__version__})"]
        for inp in self.inputs:
            lines.append(f"input {inp['path']} {inp['digest']}")
        _text_lines(jsonable(self.body), lines, "")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "structured" else self.to_text()

    def write(self, path, fmt: str = "structured") -> None:
        Path(path).write_text(self.render(fmt))


def _text_lines(obj, out: list, indent: str):
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                out.append(f"{indent}{k}:")
                _text_lines(v, out, indent + "  ")
            else:
                out.append(f"{indent}{k}: {_flat_text(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, dict):
                out.append(f"{indent}-")
                _text_lines(v, out, indent + "  ")
            else:
                out.append(f"{indent}- {_flat_text(v)}")


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _flat_text(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(map(str, v)) + "]"
    if isinstance(v, dict):
        return "{}"
    return str(v)


def strip_timing(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k != "timing"}
