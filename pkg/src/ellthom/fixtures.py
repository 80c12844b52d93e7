"""Loading fixed-point fixtures from JSON, validated against a schema.

A fixture is either a single component (keys ``T``, ``V`` at top level), a
model with several ``components``, or a point-base shorthand ``rep`` giving
V − T as a Laurent polynomial.  Roots are written as {"y1": 1, "y2": -2},
as a single pair ["y1", 1], or as a list of pairs.  ``delta`` and
``delta_prime`` are 0 when the orientations of T and V at the special point
agree with the reference orientation and 1 otherwise.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import jsonschema

from .equivrep import VirtualRep
from .nilpotent import LinearForm, NilpotentRing
from .thomfix import BundleSummand, FixedComponent, FixedPointModel, point_component

_ROOT = {
    "oneOf": [
        {"type": "object", "additionalProperties": {"type": "integer"}},
        {"type": "array", "prefixItems": [{"type": "string"}, {"type": "integer"}],
         "minItems": 2, "maxItems": 2, "items": False},
        {"type": "array", "items": {"type": "array", "prefixItems": [{"type": "string"}, {"type": "integer"}],
                                    "minItems": 2, "maxItems": 2}},
    ]
}

_SUMMAND = {
    "type": "object",
    "required": ["m", "d"],
    "properties": {
        "m": {"type": "integer", "not": {"const": 0}},
        "d": {"type": "integer", "minimum": 1},
        "roots": {"type": "array", "items": _ROOT},
    },
    "additionalProperties": False,
}

_BIT = {"type": "integer", "enum": [0, 1]}

_COMPONENT = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "T": {"type": "array", "items": _SUMMAND},
        "V": {"type": "array", "items": _SUMMAND},
        "rep": {"type": "string"},
        "fixed_T_roots": {"type": "array", "items": _ROOT},
        "fixed_V_roots": {"type": "array", "items": _ROOT},
        "delta": _BIT,
        "delta_prime": _BIT,
    },
    "additionalProperties": False,
}

SCHEMA = {
    "type": "object",
    "properties": {
        **_COMPONENT["properties"],
        "description": {"type": "string"},
        "ring": {
            "type": "object",
            "required": ["generators", "cap"],
            "properties": {
                "generators": {"type": "array", "items": {
                    "type": "object", "required": ["name"],
                    "properties": {"name": {"type": "string"}, "degree": {"const": 2}},
                    "additionalProperties": False}},
                "cap": {"type": "integer", "minimum": 0},
                "integral": {"type": "string"},
            },
            "additionalProperties": False,
        },
        "components": {"type": "array", "items": _COMPONENT, "minItems": 1},
        "groups": {"type": "object", "additionalProperties": {
            "type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}}},
        "isotropy": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        "special": {"type": "array", "items": {
            "type": "object", "required": ["a", "n"],
            "properties": {"a": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
                           "n": {"type": "integer", "minimum": 1}},
            "additionalProperties": False}},
    },
    "additionalProperties": False,
}


class FixtureError(ValueError):
    """Schema or consistency violation; ``path`` locates the offending field."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


def _path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _root(obj) -> LinearForm:
    if isinstance(obj, dict):
        return LinearForm(obj)
    if len(obj) == 2 and isinstance(obj[0], str):
        return LinearForm({obj[0]: obj[1]})
    out = LinearForm()
    for g, c in obj:
        out = out + LinearForm({g: c})
    return out


def _monomial(text: str) -> dict:
    out: dict = {}
    for part in text.replace(" ", "").split("*"):
        if not part:
            continue
        g, _, e = part.partition("^")
        out[g] = out.get(g, 0) + (int(e) if e else 1)
    return out


def _ring(data: dict) -> NilpotentRing:
    r = data.get("ring")
    if r is None:
        return NilpotentRing((), 0, {})
    gens = [g["name"] for g in r["generators"]]
    try:
        return NilpotentRing(gens, r["cap"], _monomial(r.get("integral", "")))
    except ValueError as e:
        raise FixtureError(str(e), "$.ring.integral") from None


def _component(ring: NilpotentRing, c: dict, path: str) -> FixedComponent:
    if "rep" in c:
        try:
            f = VirtualRep.parse(c["rep"])
        except ValueError as e:
            raise FixtureError(str(e), path + ".rep") from None
        F = point_component(f, c.get("name", ""))
        return FixedComponent(F.ring, F.T, F.V, delta=c.get("delta", 0),
                              delta_prime=c.get("delta_prime", 0), name=F.name)

    def summands(key):
        out = []
        for i, s in enumerate(c.get(key, [])):
            try:
                out.append(BundleSummand(s["m"], s["d"], tuple(_root(r) for r in s.get("roots", []))))
            except ValueError as e:
                raise FixtureError(str(e), f"{path}.{key}[{i}]") from None
        return out

    try:
        return FixedComponent(ring, summands("T"), summands("V"),
                              tuple(_root(r) for r in c.get("fixed_T_roots", [])),
                              tuple(_root(r) for r in c.get("fixed_V_roots", [])),
                              c.get("delta", 0), c.get("delta_prime", 0), c.get("name", ""))
    except FixtureError:
        raise
    except ValueError as e:
        raise FixtureError(str(e), path) from None


def parse_fixture(data: dict, name: str = "") -> FixedPointModel:
    """Validate a decoded fixture and build the model."""
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise FixtureError(e.message, _path(e.absolute_path))
    ring = _ring(data)
    if "components" in data:
        comps = tuple(_component(ring, c, f"$.components[{i}]") for i, c in enumerate(data["components"]))
    else:
        comps = (_component(ring, data, "$"),)
    groups = {}
    for k, gs in data.get("groups", {}).items():
        for j, g in enumerate(gs):
            for i in g:
                if i >= len(comps):
                    raise FixtureError("component index out of range", f"$.groups.{k}[{j}]")
        groups[int(k)] = [list(g) for g in gs]
    special = tuple(((float(s["a"][0]), float(s["a"][1])), int(s["n"])) for s in data.get("special", []))
    return FixedPointModel(comps, groups, tuple(data.get("isotropy", [])), special,
                           name or data.get("description", ""))


def load_fixture(path) -> FixedPointModel:
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise FixtureError(f"invalid JSON: {e.msg}", "$") from None
    return parse_fixture(data, p.stem)


SHIPPED = (
    "w_zero",
    "point_z3_9z",
    "point_z2_4z",
    "point_z4_16z",
    "nilpotent_two_gen",
    "nilpotent_odd",
    "s2_rotation",
    "s2_speed3",
)


def shipped_path(name: str):
    return resources.files("ellthom") / "data" / f"{name}.json"


def load_shipped(name: str) -> FixedPointModel:
    with resources.as_file(shipped_path(name)) as p:
        return load_fixture(p)
