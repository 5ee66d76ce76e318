"""JSON instance files.

Rationals are written as strings ``"p/q"`` (integers are accepted bare on
input).  One file holds one instance; ``kind`` may be omitted when the keys
make it unambiguous.

    polytope       {"vertices": [["0","0"],["2","1"],["1","2"]]}
    lattice-set    {"points": [[0,0],[1,1]]}
    ideal          {"generators": [[6,0],[4,1],[2,2],[1,3],[0,4]]}
    decomposition  {"pool": [...], "parent": [0,1,2], "cells": [[0,1,3],...]}
    lattice-map    {"matrix": [[1,1,0],[1,0,1],[0,1,1]]}   (row-major; columns are images of e_j)
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from jetbound import jets
from jetbound.geometry import GeometryError, LatticeMap, LatticePointSet, RationalPolytope, hull_to_halfspaces
from jetbound.methods import Decomposition

KINDS = ("polytope", "lattice-set", "ideal", "decomposition", "lattice-map")
_KEY_TO_KIND = {"vertices": "polytope", "points": "lattice-set", "generators": "ideal", "cells": "decomposition",
                "matrix": "lattice-map"}


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class InstanceSpec:
    kind: str
    name: str
    obj: Any


def frac_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _rational(v, where: str) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise InputError(f"{where}: expected an integer or a \"p/q\" string, got {v!r}")
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{where}: cannot parse {v!r} as a rational") from None


def _integer(v, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"{where}: expected an integer, got {v!r}")
    return v


def _list(v, where: str) -> list:
    if not isinstance(v, list):
        raise InputError(f"{where}: expected a list")
    return v


def _rat_rows(rows, where: str) -> list[tuple[Fraction, ...]]:
    return [
        tuple(_rational(x, f"{where}[{i}][{j}]") for j, x in enumerate(_list(r, f"{where}[{i}]")))
        for i, r in enumerate(_list(rows, where))
    ]


def _int_rows(rows, where: str) -> list[tuple[int, ...]]:
    return [
        tuple(_integer(x, f"{where}[{i}][{j}]") for j, x in enumerate(_list(r, f"{where}[{i}]")))
        for i, r in enumerate(_list(rows, where))
    ]


def _polytope(verts: list, where: str) -> RationalPolytope:
    if not verts:
        raise InputError(f"{where}: need at least one vertex")
    try:
        return hull_to_halfspaces(verts)
    except GeometryError as e:
        raise InputError(f"{where}: {e}") from None


def parse_payload(data: dict, kind: str | None = None, name: str = "") -> InstanceSpec:
    if not isinstance(data, dict):
        raise InputError("top level: expected a JSON object")
    kind = kind or data.get("kind")
    if kind is None:
        found = [k for key, k in _KEY_TO_KIND.items() if key in data]
        if len(found) != 1:
            raise InputError("top level: cannot infer instance kind; add a \"kind\" field")
        kind = found[0]
    if kind not in KINDS:
        raise InputError(f"kind: unknown instance kind {kind!r}")
    name = data.get("name", name)
    try:
        if kind == "polytope":
            obj = _polytope(_rat_rows(data.get("vertices"), "vertices"), "vertices")
        elif kind == "lattice-set":
            obj = LatticePointSet.of(_int_rows(data.get("points"), "points"))
        elif kind == "ideal":
            obj = jets.staircase_from_generators(_int_rows(data.get("generators"), "generators"))
        elif kind == "lattice-map":
            obj = LatticeMap(tuple(_int_rows(data.get("matrix"), "matrix")))
        else:
            obj = _decomposition(data)
    except (GeometryError, jets.JetError) as e:
        raise InputError(f"{kind}: {e}") from None
    return InstanceSpec(kind, name, obj)


def _decomposition(data: dict) -> Decomposition:
    parent = data.get("parent")
    pool = _rat_rows(data["pool"], "pool") if "pool" in data else None

    def pick(idx_list, where):
        if pool is None:
            raise InputError(f"{where}: vertex indices need a \"pool\"")
        out = []
        for j, i in enumerate(_list(idx_list, where)):
            i = _integer(i, f"{where}[{j}]")
            if not 0 <= i < len(pool):
                raise InputError(f"{where}[{j}]: index {i} outside pool of size {len(pool)}")
            out.append(pool[i])
        return out

    if isinstance(parent, dict):
        parent_poly = parse_payload(parent, "polytope").obj
    elif isinstance(parent, list):
        parent_poly = _polytope(pick(parent, "parent"), "parent")
    else:
        raise InputError("parent: expected a polytope object or a list of pool indices")
    cells = tuple(
        _polytope(pick(c, f"cells[{i}]"), f"cells[{i}]") for i, c in enumerate(_list(data.get("cells"), "cells"))
    )
    return Decomposition(parent_poly, cells)


def loads(text: str, name: str = "") -> InstanceSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    return parse_payload(data, name=name)


def load(path: str) -> InstanceSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        return loads(text, name=path)
    except InputError as e:
        raise InputError(f"{path}: {e}") from None


def emit(spec: InstanceSpec) -> dict:
    obj = spec.obj
    out: dict[str, Any] = {"kind": spec.kind}
    if spec.name:
        out["name"] = spec.name
    if spec.kind == "polytope":
        out["vertices"] = [[frac_str(x) for x in v] for v in obj.vertices]
    elif spec.kind == "lattice-set":
        out["points"] = [list(p) for p in obj.points]
    elif spec.kind == "ideal":
        out["generators"] = [list(g) for g in obj.generators]
    elif spec.kind == "lattice-map":
        out["matrix"] = [list(r) for r in obj.matrix]
    else:
        pool = sorted({v for c in (obj.parent,) + obj.cells for v in c.vertices})
        index = {v: i for i, v in enumerate(pool)}
        out["pool"] = [[frac_str(x) for x in v] for v in pool]
        out["parent"] = [index[v] for v in obj.parent.vertices]
        out["cells"] = [[index[v] for v in c.vertices] for c in obj.cells]
    return out


def dumps(spec: InstanceSpec) -> str:
    return json.dumps(emit(spec), indent=2)


def canonical_hash(spec: InstanceSpec) -> str:
    body = emit(InstanceSpec(spec.kind, "", spec.obj))
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()
