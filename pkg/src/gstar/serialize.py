"""JSON forms of objects, categories, and diagrams, and canonical dumping.

Diagram files name their index category either as a builtin,

    {"builtin": "F", "N": 2}
    {"builtin": "G", "N": 2, "q_max": 2}
    {"builtin": "E", "d": 2, "q_max": 2}

or inline as a category table.  Values are keyed by object keys (``"1"``,
``"(1,2)"``, ``"*"``) and morphism ids, which are stable for builtins.  A file
may instead say ``"representable": "<object>"``.
"""

from __future__ import annotations

import json
import re
from importlib import resources
from pathlib import Path
from typing import Any

from .category import FinCategory, PointedFunctor, object_key
from .diagrams import CAT, SET, PointedDiagram, is_point_category, point_category, representable
from .pointed import PointedMap
from .skeletal import STAR, fskel

_TUPLE = re.compile(r"^\(\s*(-?\d+(\s*,\s*-?\d+)*)?\s*,?\s*\)$")


def parse_object(text: str) -> Any:
    """``"*"``, ``"()"``, ``"(2)"``, ``"(1,2)"``, an integer, or a bare name."""
    text = str(text).strip()
    if text == "*":
        return STAR
    if _TUPLE.match(text):
        inner = text[1:-1].strip().rstrip(",")
        return tuple(int(x) for x in inner.split(",")) if inner else ()
    if re.fullmatch(r"-?\d+", text):
        return int(text)
    if text.startswith("(") or text.startswith("["):
        raise ValueError(f"cannot parse object {text!r}")
    return text


def dumps(data: Any) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# index categories


def build_index(spec: dict):
    """A FinCategory for an index description; tuple categories return their ``.cat``."""
    from .relative import FIXTURE_CATEGORIES
    from .tuples import build_e, build_gstar

    if "builtin" in spec:
        kind = spec["builtin"]
        if kind == "F":
            return fskel(int(spec.get("N", 2)))
        if kind == "G":
            return build_gstar(int(spec.get("N", 2)), int(spec.get("q_max", 2))).cat
        if kind == "E":
            return build_e(int(spec.get("d", 2)), int(spec.get("q_max", 2))).cat
        raise ValueError(f"unknown builtin index category {kind!r}")
    if "fixture" in spec:
        return FIXTURE_CATEGORIES[spec["fixture"]]()
    if "category" in spec:
        return FinCategory.from_json(spec["category"], parse_object)
    raise ValueError("an index description needs 'builtin', 'fixture' or 'category'")


_INDEX_CACHE: dict[str, FinCategory] = {}


def cached_index(spec: dict) -> FinCategory:
    key = json.dumps(spec, sort_keys=True)
    if key not in _INDEX_CACHE:
        _INDEX_CACHE[key] = build_index(spec)
    return _INDEX_CACHE[key]


# diagrams


def _category_value(data: dict) -> FinCategory:
    if data.get("point"):
        return point_category()
    return build_index(data)


def diagram_from_json(data: dict, index: FinCategory | None = None) -> PointedDiagram:
    C = index if index is not None else cached_index(data["index"])
    if "representable" in data:
        return representable(C, parse_object(data["representable"]))
    kind = data.get("kind", SET)
    if kind == SET:
        objs = {parse_object(k): int(v) for k, v in data["on_objects"].items()}
        maps = {}
        for k, vals in data["on_morphisms"].items():
            m = int(k)
            maps[m] = PointedMap(objs[C.dom(m)], objs[C.cod(m)], tuple(int(v) for v in vals))
        return PointedDiagram(C, SET, objs, maps, name=data.get("name", ""))
    if kind == CAT:
        objs = {parse_object(k): _category_value(v) for k, v in data["on_objects"].items()}
        maps = {}
        for k, v in data["on_morphisms"].items():
            m = int(k)
            src, tgt = objs[C.dom(m)], objs[C.cod(m)]
            omap = {parse_object(a): parse_object(b) for a, b in v["object_map"].items()}
            maps[m] = PointedFunctor(src, tgt, omap, [int(x) for x in v["morphism_map"]])
        return PointedDiagram(C, CAT, objs, maps, name=data.get("name", ""))
    raise ValueError(f"unknown diagram kind {kind!r}")


def _category_json(c: FinCategory) -> dict:
    return {"point": True} if is_point_category(c) else {"category": c.to_json()}


def diagram_to_json(X: PointedDiagram, index_spec: dict) -> dict:
    C = X.index
    out = {"index": index_spec, "kind": X.kind, "name": X.name}
    if X.kind == SET:
        out["on_objects"] = {object_key(c): X.on_objects[c] for c in C.objects}
        out["on_morphisms"] = {str(m): list(X.on_morphisms[m].values) for m in C.morphisms()}
    else:
        out["on_objects"] = {object_key(c): _category_json(X.on_objects[c]) for c in C.objects}
        out["on_morphisms"] = {
            str(m): {"object_map": {object_key(a): object_key(b)
                                    for a, b in X.on_morphisms[m].object_map.items()},
                     "morphism_map": list(X.on_morphisms[m].morphism_map)}
            for m in C.morphisms()}
    return out


# files and packaged fixtures


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("gstar") / "fixtures" / name))


def load_json(path: str | Path) -> dict:
    """Read a JSON file, falling back to the packaged fixture of the same name."""
    p = Path(path)
    if not p.exists():
        packaged = fixture_path(p.name)
        if not packaged.exists():
            raise FileNotFoundError(f"no such file or packaged fixture: {path}")
        p = packaged
    with p.open(encoding="utf-8") as fh:
        return json.load(fh)


def load_diagram(path: str | Path) -> PointedDiagram:
    return diagram_from_json(load_json(path))


def load_category(path: str | Path) -> FinCategory:
    data = load_json(path)
    return FinCategory.from_json(data.get("category", data), parse_object)
