"""Structural validation of run reports against the shipped schema.

Implements the small JSON-Schema subset the shipped schema uses (type,
required, properties, items, additionalProperties, in-document $ref), which
keeps validation dependency-free.
"""

from __future__ import annotations

import importlib.resources as resources
import json

from .errors import InputError

_TYPES = {
    "object": dict,
    "array": list,
    "string": str,
    "integer": int,
    "number": (int, float),
    "boolean": bool,
    "null": type(None),
}


def load_schema() -> dict:
    text = resources.files("pcut").joinpath("data", "report_schema.json").read_text()
    return json.loads(text)


def _resolve(schema, root):
    if "$ref" in schema:
        path = schema["$ref"].lstrip("#/").split("/")
        node = root
        for part in path:
            node = node[part]
        return node
    return schema


def _check(value, schema, root, where):
    schema = _resolve(schema, root)
    expected = schema.get("type")
    if expected is not None:
        types = expected if isinstance(expected, list) else [expected]
        ok = False
        for t in types:
            pytype = _TYPES[t]
            if isinstance(value, pytype) and not (t in ("integer", "number")
                                                  and isinstance(value, bool)):
                ok = True
                break
        if not ok:
            raise InputError(f"{where}: expected type {expected}, got "
                             f"{type(value).__name__}")
    if isinstance(value, dict):
        for key in schema.get("required", []):
            if key not in value:
                raise InputError(f"{where}: missing required key {key!r}")
        props = schema.get("properties", {})
        for key, sub in props.items():
            if key in value:
                _check(value[key], sub, root, f"{where}.{key}")
        extra = schema.get("additionalProperties")
        if isinstance(extra, dict):
            for key, item in value.items():
                if key not in props:
                    _check(item, extra, root, f"{where}.{key}")
    if isinstance(value, list) and "items" in schema:
        for i, item in enumerate(value):
            _check(item, schema["items"], root, f"{where}[{i}]")


def validate_report(report: dict) -> None:
    """Raise InputError when the report does not match the shipped schema."""
    schema = load_schema()
    _check(report, schema, schema, "report")
