"""Structural schemas for the CLI's JSON payloads, with a small validator.

Each subcommand's output has a schema file shipped alongside this module;
``validate_payload(payload, name)`` checks a parsed payload against one.
The validator covers the subset of JSON Schema the files actually use:
``type`` (string or list), ``properties``, ``required``,
``additionalProperties`` (bool or schema), ``items``, ``enum``, and
``$ref`` to a sibling schema file.
"""

from __future__ import annotations

import json
from importlib import resources

__all__ = ["SCHEMA_BY_COMMAND", "load_schema", "validate", "validate_payload"]

# subcommand -> schema file stem ("geo verify-*" keyed by the full phrase)
SCHEMA_BY_COMMAND = {
    "irv": "irv",
    "pairwise": "pairwise",
    "check-zone": "zone_check",
    "min-zone": "zone",
    "all-zones": "zones",
    "approx-zone": "approx_zone",
    "check-approx": "approx_check",
    "family": "family",
    "census": "census",
    "gadget": "gadget",
    "geo verify-chain": "chain",
    "geo verify-flag": "flag",
    "geo verify-condorcet": "condorcet",
    "geo verify-projection": "projection",
    "error": "error",
}


def load_schema(name: str) -> dict:
    path = resources.files(__package__).joinpath(f"{name}.json")
    with path.open("r", encoding="utf-8") as fh:
        return json.load(fh)


def _type_ok(value, tname: str) -> bool:
    if tname == "object":
        return isinstance(value, dict)
    if tname == "array":
        return isinstance(value, list)
    if tname == "string":
        return isinstance(value, str)
    if tname == "boolean":
        return isinstance(value, bool)
    if tname == "integer":
        return isinstance(value, int) and not isinstance(value, bool)
    if tname == "number":
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if tname == "null":
        return value is None
    raise ValueError(f"schema uses unsupported type {tname!r}")


def validate(value, schema: dict, path: str = "$") -> list[str]:
    """Return a list of violations; empty means the value conforms."""
    while "$ref" in schema:
        schema = load_schema(schema["$ref"])
    errors: list[str] = []
    if "enum" in schema and value not in schema["enum"]:
        errors.append(f"{path}: {value!r} not in {schema['enum']}")
        return errors
    if "type" in schema:
        types = schema["type"]
        if isinstance(types, str):
            types = [types]
        if not any(_type_ok(value, t) for t in types):
            errors.append(f"{path}: expected {types}, got {type(value).__name__}")
            return errors
    if isinstance(value, dict):
        for key in schema.get("required", ()):
            if key not in value:
                errors.append(f"{path}: missing required key {key!r}")
        props = schema.get("properties", {})
        extra = schema.get("additionalProperties", True)
        for key, item in value.items():
            if key in props:
                errors.extend(validate(item, props[key], f"{path}.{key}"))
            elif extra is False:
                errors.append(f"{path}: unexpected key {key!r}")
            elif isinstance(extra, dict):
                errors.extend(validate(item, extra, f"{path}.{key}"))
    if isinstance(value, list) and "items" in schema:
        for i, item in enumerate(value):
            errors.extend(validate(item, schema["items"], f"{path}[{i}]"))
    return errors


def validate_payload(payload, name: str) -> None:
    """Raise ValueError when the payload does not match the named schema."""
    errors = validate(payload, load_schema(name))
    if errors:
        raise ValueError(f"payload does not match schema {name}: " + "; ".join(errors))
