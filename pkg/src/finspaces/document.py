"""JSON poset documents: parsing with field diagnostics, serialization and round trips."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jsonschema

from .errors import SchemaError
from .poset import Poset, build

_NAME_LIST = {"type": "array", "items": {"type": "string"}}
_PAIR = {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2}

SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "PosetDocument",
    "type": "object",
    "required": ["elements"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "elements": _NAME_LIST,
        "relations": {"type": "array", "items": _PAIR},
        "subsets": {"type": "object", "additionalProperties": _NAME_LIST},
        "filtrations": {"type": "object", "additionalProperties": {"type": "array", "items": _NAME_LIST}},
        "matchings": {"type": "object", "additionalProperties": {"type": "array", "items": _PAIR}},
        "colorings": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["group"],
                "additionalProperties": False,
                "properties": {
                    "group": {"oneOf": [
                        {"type": "string"},
                        {"type": "object", "required": ["table"],
                         "properties": {"names": {"type": "array"}, "table": {"type": "array"},
                                        "label": {"type": "string"}}},
                    ]},
                    "labels": {"type": "array", "items": {
                        "type": "array", "minItems": 3, "maxItems": 3,
                        "prefixItems": [{"type": "string"}, {"type": "string"}],
                    }},
                },
            },
        },
    },
}


@dataclass
class PosetDocument:
    elements: list[str]
    relations: list[tuple[str, str]] = field(default_factory=list)
    name: str | None = None
    description: str | None = None
    subsets: dict[str, list[str]] = field(default_factory=dict)
    filtrations: dict[str, list[list[str]]] = field(default_factory=dict)
    matchings: dict[str, list[tuple[str, str]]] = field(default_factory=dict)
    colorings: dict[str, dict] = field(default_factory=dict)

    def poset(self) -> Poset:
        return build(self.elements, self.relations)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {}
        if self.name is not None:
            out["name"] = self.name
        if self.description is not None:
            out["description"] = self.description
        out["elements"] = list(self.elements)
        out["relations"] = [list(r) for r in self.relations]
        for key in ("subsets", "filtrations", "matchings", "colorings"):
            value = getattr(self, key)
            if value:
                out[key] = json.loads(json.dumps(value))
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_poset(cls, P: Poset, name: str | None = None, **extra) -> "PosetDocument":
        return cls(list(P.elements), [tuple(c) for c in P.sorted_covers], name, **extra)


def _path(err: jsonschema.ValidationError) -> str:
    return "/".join(str(p) for p in err.absolute_path) or "<root>"


def _check_refs(doc: PosetDocument) -> None:
    known = set(doc.elements)

    def need(names, where):
        for x in names:
            if x not in known:
                raise SchemaError(f"{where}: unknown element {x!r}", where)

    for k, r in enumerate(doc.relations):
        need(r, f"relations/{k}")
    for key, names in doc.subsets.items():
        need(names, f"subsets/{key}")
    for key, levels in doc.filtrations.items():
        for k, lv in enumerate(levels):
            need(lv, f"filtrations/{key}/{k}")
    for key, edges in doc.matchings.items():
        for k, e in enumerate(edges):
            need(e, f"matchings/{key}/{k}")
    for key, col in doc.colorings.items():
        for k, t in enumerate(col.get("labels", [])):
            need(t[:2], f"colorings/{key}/labels/{k}")


def parse(data: Any) -> PosetDocument:
    """Validate a decoded JSON value and turn it into a document."""
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise SchemaError(f"{_path(err)}: {err.message}", _path(err))
    doc = PosetDocument(
        elements=list(data["elements"]),
        relations=[tuple(r) for r in data.get("relations", [])],
        name=data.get("name"),
        description=data.get("description"),
        subsets={k: list(v) for k, v in data.get("subsets", {}).items()},
        filtrations={k: [list(lv) for lv in v] for k, v in data.get("filtrations", {}).items()},
        matchings={k: [tuple(e) for e in v] for k, v in data.get("matchings", {}).items()},
        colorings={k: dict(v) for k, v in data.get("colorings", {}).items()},
    )
    _check_refs(doc)
    return doc


def loads(text: str) -> PosetDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise SchemaError(f"line {err.lineno}, column {err.colno}: {err.msg}", err.lineno) from None
    return parse(data)


def load(path: str | Path) -> PosetDocument:
    return loads(Path(path).read_text(encoding="utf-8"))


def dump(doc: PosetDocument, path: str | Path) -> None:
    Path(path).write_text(doc.dumps(), encoding="utf-8")
