"""Corpus builders and the JSON instance format."""

from __future__ import annotations

import itertools
import json
import math
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import jsonschema

from .algebra import POINT, LaurentElement, RingError, RingPresentation
from .model import (
    EquivariantClass,
    Instance,
    InstanceError,
    check_instance,
    make_component,
    validate_abbv,
    validate_extrema,
    validate_morse,
)


class BuilderError(ValueError):
    pass


# ---------------------------------------------------------------------------
# builders

def _self_check(inst: Instance) -> Instance:
    check_instance(inst)
    for report in (validate_abbv(inst), validate_morse(inst), validate_extrema(inst)):
        if not report.ok:
            raise BuilderError(f"builder produced an invalid instance {inst.name}: " + "; ".join(report.lines()))
    return inst


def _monomial_name(parts: Sequence[tuple[str, int]]) -> str:
    out = []
    for sym, e in parts:
        if e == 1:
            out.append(sym)
        elif e > 1:
            out.append(f"{sym}^{e}")
    return " ".join(out) or "1"


def build_projective_space(weights: Sequence[int], shift=0, degree_bound: int | None = None) -> Instance:
    """Linear circle action on CP^n with the given weights.

    The fixed point ``p_i`` sits at moment value ``a_i - shift`` with normal
    weights ``a_j - a_i``.  The class ``u`` restricts to ``a_i t`` there.
    """
    a = [int(w) for w in weights]
    if len(set(a)) != len(a):
        raise BuilderError("weights must be distinct")
    n = len(a) - 1
    if n < 1:
        raise BuilderError("need at least two weights")
    shift = Fraction(shift)
    dim_m = 2 * n
    bound = dim_m if degree_bound is None else degree_bound
    comps = [
        make_component(f"p{i}", 0, ai - shift, [(aj - ai, 1) for j, aj in enumerate(a) if j != i], dim_m=dim_m)
        for i, ai in enumerate(a)
    ]
    classes = []
    for k in range(bound // 2 + 1):
        for j in range(min(k, n) + 1):
            restr = {f"p{i}": LaurentElement.scalar(POINT, Fraction(ai) ** j, k) for i, ai in enumerate(a)}
            classes.append(EquivariantClass(_monomial_name([("u", j), ("t", k - j)]), 2 * k, restr))
    label = ",".join(map(str, a))
    return _self_check(Instance(f"CP{n}[{label}]shift={shift}", dim_m, tuple(comps), tuple(classes), bound))


def build_sphere_product(factor_weights: Sequence[int], shift=0, degree_bound: int | None = None) -> Instance:
    """Product of 2-spheres, the i-th rotated with weight ``lambda_i``.

    Fixed points are pole choices ``sigma``; the height class ``u_i``
    restricts to ``sigma_i lambda_i t``.
    """
    lam = [int(w) for w in factor_weights]
    if not lam:
        raise BuilderError("need at least one factor")
    if any(x == 0 for x in lam):
        raise BuilderError("factor weights must be nonzero")
    m = len(lam)
    shift = Fraction(shift)
    dim_m = 2 * m
    bound = dim_m if degree_bound is None else degree_bound
    poles = list(itertools.product((1, -1), repeat=m))

    def pid(s):
        return "p" + "".join("+" if x > 0 else "-" for x in s)

    comps = [
        make_component(pid(s), 0, sum(x * l for x, l in zip(s, lam)) - shift,
                       [(-x * l, 1) for x, l in zip(s, lam)], dim_m=dim_m)
        for s in poles
    ]
    classes = []
    for k in range(bound // 2 + 1):
        for size in range(min(k, m) + 1):
            for subset in itertools.combinations(range(m), size):
                restr = {
                    pid(s): LaurentElement.scalar(POINT, math.prod(s[i] * lam[i] for i in subset), k)
                    for s in poles
                }
                name = _monomial_name([(f"u{i + 1}", 1) for i in subset] + [("t", k - size)])
                classes.append(EquivariantClass(name, 2 * k, restr))
    label = ",".join(map(str, lam))
    return _self_check(Instance(f"S2^{m}[{label}]shift={shift}", dim_m, tuple(comps), tuple(classes), bound))


def corpus() -> dict[str, Instance]:
    """The reference instances used throughout the tests."""
    return {
        "s2": build_sphere_product([1]),
        "s2s2": build_sphere_product([1, 1]),
        "s2cubed": build_sphere_product([1, 1, 2]),
        "cp2": build_projective_space([0, 1, 3], 1),
        "cp3": build_projective_space([0, 1, 2, 3], Fraction(3, 2)),
    }


# ---------------------------------------------------------------------------
# JSON

_RATIONAL = {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}
_VECTOR_BY_DEGREE = {
    "type": "object",
    "patternProperties": {r"^\d+$": {"type": "array", "items": _RATIONAL}},
    "additionalProperties": False,
}
_LAURENT = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["power", "coeff"],
        "properties": {"power": {"type": "integer"}, "coeff": _VECTOR_BY_DEGREE},
        "additionalProperties": False,
    },
}
_BASIS_REF = {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2}
_RING = {
    "type": "object",
    "required": ["dims", "products", "topDegree", "integral"],
    "properties": {
        "dims": {"type": "object", "patternProperties": {r"^\d+$": {"type": "integer", "minimum": 0}},
                 "additionalProperties": False},
        "labels": {"type": "object", "patternProperties": {r"^\d+$": {"type": "array", "items": {"type": "string"}}},
                   "additionalProperties": False},
        "products": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["left", "right", "value"],
                "properties": {"left": _BASIS_REF, "right": _BASIS_REF, "value": _VECTOR_BY_DEGREE},
                "additionalProperties": False,
            },
        },
        "topDegree": {"type": "integer", "minimum": 0},
        "integral": {"type": "array", "items": _RATIONAL},
    },
    "additionalProperties": False,
}

INSTANCE_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["name", "dimM", "degreeBound", "components", "classes"],
    "properties": {
        "name": {"type": "string"},
        "dimM": {"type": "integer"},
        "degreeBound": {"type": "integer"},
        "components": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "dim", "momentValue", "weights", "cohomology"],
                "properties": {
                    "id": {"type": "string"},
                    "dim": {"type": "integer"},
                    "momentValue": _RATIONAL,
                    "weights": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["k", "mult"],
                            "properties": {"k": {"type": "integer"}, "mult": {"type": "integer"}},
                            "additionalProperties": False,
                        },
                    },
                    "cohomology": {"anyOf": [{"const": "point"}, _RING]},
                    "eulerClass": _LAURENT,
                },
                "additionalProperties": False,
            },
        },
        "classes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "degree", "restrictions"],
                "properties": {
                    "name": {"type": "string"},
                    "degree": {"type": "integer"},
                    "restrictions": {"type": "object", "additionalProperties": _LAURENT},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}


class SchemaError(ValueError):
    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


def rational_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(x) -> Fraction:
    if isinstance(x, str) and not re.fullmatch(r"-?\d+(/\d+)?", x.strip()):
        raise ValueError(f"not a rational: {x!r}")
    q = Fraction(x)
    return q


def _element_to_json(ring: RingPresentation, v) -> dict[str, list[str]]:
    return {str(d): [rational_str(c) for c in coords] for d, coords in ring.parts(v).items()}


def _laurent_to_json(a: LaurentElement) -> list[dict]:
    return [{"power": j, "coeff": _element_to_json(a.ring, c)} for j, c in a.terms]


def _ring_to_json(ring: RingPresentation):
    if ring == POINT:
        return "point"
    products = []
    for i in range(1, ring.size):
        for j in range(i, ring.size):
            v = ring.table[i][j]
            if any(v):
                di, dj = ring.degrees[i], ring.degrees[j]
                products.append({
                    "left": [di, i - ring.offsets[di]],
                    "right": [dj, j - ring.offsets[dj]],
                    "value": _element_to_json(ring, v),
                })
    labels = {}
    for d, n in ring.dims.items():
        o = ring.offsets[d]
        labels[str(d)] = list(ring.labels[o:o + n])
    return {
        "dims": {str(d): n for d, n in ring.dims.items()},
        "labels": labels,
        "products": products,
        "topDegree": ring.top_degree,
        "integral": [rational_str(x) for x in ring.integral],
    }


def save_instance(inst: Instance) -> dict:
    comps = []
    for F in inst.components:
        entry = {
            "id": F.id,
            "dim": F.dim,
            "momentValue": rational_str(F.moment),
            "weights": [{"k": k, "mult": m} for k, m in F.weights],
            "cohomology": _ring_to_json(F.cohomology),
        }
        if F.euler is not None:
            entry["eulerClass"] = _laurent_to_json(F.euler)
        comps.append(entry)
    classes = [
        {"name": c.name, "degree": c.degree,
         "restrictions": {F.id: _laurent_to_json(c.restrictions[F.id]) for F in inst.components}}
        for c in inst.classes
    ]
    return {"name": inst.name, "dimM": inst.dim_m, "degreeBound": inst.degree_bound,
            "components": comps, "classes": classes}


def _element_from_json(ring: RingPresentation, doc, path: str):
    try:
        return ring.element({int(d): [parse_rational(x) for x in v] for d, v in doc.items()})
    except (RingError, ValueError) as exc:
        raise InstanceError(str(exc), path) from None


def _laurent_from_json(ring: RingPresentation, doc, path: str) -> LaurentElement:
    terms = [(t["power"], _element_from_json(ring, t["coeff"], f"{path}[{i}].coeff")) for i, t in enumerate(doc)]
    return LaurentElement.make(ring, terms)


def _ring_from_json(doc, path: str) -> RingPresentation:
    if doc == "point":
        return POINT
    products = {}
    for i, p in enumerate(doc["products"]):
        key = (tuple(p["left"]), tuple(p["right"]))
        products[key] = {int(d): [parse_rational(x) for x in v] for d, v in p["value"].items()}
    try:
        return RingPresentation(
            {int(d): n for d, n in doc["dims"].items()},
            products,
            integral=[parse_rational(x) for x in doc["integral"]],
            labels={int(d): v for d, v in doc.get("labels", {}).items()},
            top_degree=doc["topDegree"],
        )
    except (RingError, ValueError) as exc:
        raise InstanceError(str(exc), path) from None


def load_instance(doc: dict) -> Instance:
    """Schema-check, build and invariant-check an instance document."""
    validator = jsonschema.Draft202012Validator(INSTANCE_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise SchemaError(e.message, e.json_path)
    dim_m = doc["dimM"]
    comps = []
    rings = {}
    for i, c in enumerate(doc["components"]):
        path = f"$.components[{i}]"
        ring = _ring_from_json(c["cohomology"], f"{path}.cohomology")
        rings[c["id"]] = ring
        euler = _laurent_from_json(ring, c["eulerClass"], f"{path}.eulerClass") if "eulerClass" in c else None
        try:
            moment = parse_rational(c["momentValue"])
        except (ValueError, ZeroDivisionError) as exc:
            raise InstanceError(str(exc), f"{path}.momentValue") from None
        ks = [w["k"] for w in c["weights"]]
        if len(set(ks)) != len(ks):
            raise InstanceError(f"component {c['id']!r}: weights must be distinct", f"{path}.weights")
        if c["dim"] % 2:
            raise InstanceError(f"component {c['id']!r}: dim must be even, got {c['dim']}", f"{path}.dim")
        comps.append(make_component(c["id"], c["dim"], moment, [(w["k"], w["mult"]) for w in c["weights"]],
                                    ring, euler, dim_m=dim_m))
    classes = []
    for i, c in enumerate(doc["classes"]):
        restr = {}
        for cid, terms in c["restrictions"].items():
            if cid not in rings:
                raise InstanceError(f"class {c['name']!r}: unknown component {cid!r}",
                                    f"$.classes[{i}].restrictions.{cid}")
            restr[cid] = _laurent_from_json(rings[cid], terms, f"$.classes[{i}].restrictions.{cid}")
        classes.append(EquivariantClass(c["name"], c["degree"], restr))
    inst = Instance(doc["name"], dim_m, tuple(comps), tuple(classes), doc["degreeBound"])
    check_instance(inst)
    return inst


def dumps(inst: Instance) -> str:
    return json.dumps(save_instance(inst), indent=1, sort_keys=True) + "\n"


def read_instance(path: str | Path) -> Instance:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    return load_instance(doc)


def write_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps(inst), encoding="utf-8")
