"""JSON documents describing operators, generator sets and predicted groups.

Operator document::

    {
      "dimension": 2,
      "field": {"kind": "multi-quadratic", "radicands": [2, 3]},
      "sigma": [["1", "0"]],
      "drift": ["0", "1/2"],
      "drift_convention": "canonical",
      "components": [
        {"type": "atom", "z": ["sqrt2", "sqrt3"], "weight": "1", "convention": "pure_difference"},
        {"type": "sphere", "radius": "1", "surface_weight": "1"},
        {"type": "stable_subspace", "basis": [["0", "1"]], "alpha": "1/2", "scale": "1"},
        {"type": "ball_support", "center": ["0", "0"], "radius": "1"}
      ],
      "truncation": "first 20 atoms of an infinite family"
    }

Transcendental fields list their symbols as
``{"name": "pi", "enclosure": "3.14159..."}``.  Generator documents carry
``atoms`` and ``lines`` instead of operator data, and optionally a
``predicted`` block ``{"v_basis": [...], "lattice_basis": [...]}``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import DocumentError
from .operator import (
    CANONICAL,
    Atom,
    BallSupport,
    LevyOperator,
    Sphere,
    StableSubspace,
)
from .scalar import Field, FieldDescriptor, make_field
from .subgroup import ClosedSubgroup, GeneratorSet

TRUNCATION_WARNING = "the measure is a finite truncation ({}); the verdict applies to the truncation only"


def load_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise DocumentError(f"{path}: top level must be an object")
    return doc


def _require(doc: dict, key: str, where: str = "document"):
    if key not in doc:
        raise DocumentError(f"{where} is missing {key!r}")
    return doc[key]


def parse_field(block) -> Field:
    if block is None:
        block = {"kind": "rational"}
    if not isinstance(block, dict):
        raise DocumentError("field must be an object")
    symbols = []
    for s in block.get("symbols", []) or []:
        if isinstance(s, dict):
            symbols.append((_require(s, "name", "symbol"), _require(s, "enclosure", "symbol")))
        elif isinstance(s, (list, tuple)) and len(s) == 2:
            symbols.append((s[0], s[1]))
        else:
            raise DocumentError(f"bad symbol entry {s!r}")
    try:
        desc = FieldDescriptor(block.get("kind", "rational"), tuple(block.get("radicands", []) or ()), tuple(symbols))
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"bad field block: {exc}") from exc
    return make_field(desc)


def field_to_doc(F: Field) -> dict:
    out = {"kind": F.desc.kind}
    if F.desc.radicands:
        out["radicands"] = list(F.desc.radicands)
    if F.desc.symbols:
        out["symbols"] = [{"name": n, "enclosure": e} for n, e in F.desc.symbols]
    return out


def _scalar_text(x) -> str:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise DocumentError(f"scalars must be strings (or integers), got {x!r}")
    return str(x)


def _vector(F: Field, entries, d: int, what: str):
    if not isinstance(entries, list) or len(entries) != d:
        raise DocumentError(f"{what} must be a list of {d} scalars")
    return F.vector(_scalar_text(x) for x in entries)


def _rational(x, what: str) -> Fraction:
    try:
        return Fraction(_scalar_text(x))
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"{what} must be a rational number, got {x!r}") from exc


def _component(F: Field, d: int, c) -> object:
    if not isinstance(c, dict):
        raise DocumentError("components must be objects")
    kind = _require(c, "type", "component")
    if kind == "atom":
        return Atom(_vector(F, _require(c, "z", "atom"), d, "atom z"),
                    _rational(c.get("weight", "1"), "atom weight"),
                    c.get("convention", CANONICAL))
    if kind == "sphere":
        return Sphere(F.scalar(_scalar_text(_require(c, "radius", "sphere"))),
                      _rational(c.get("surface_weight", "1"), "surface weight"))
    if kind == "stable_subspace":
        basis = _require(c, "basis", "stable_subspace")
        if not isinstance(basis, list):
            raise DocumentError("stable_subspace basis must be a list of vectors")
        return StableSubspace(tuple(_vector(F, v, d, "stable basis vector") for v in basis),
                              _rational(_require(c, "alpha", "stable_subspace"), "alpha"),
                              _rational(c.get("scale", "1"), "scale"))
    if kind == "ball_support":
        return BallSupport(_vector(F, _require(c, "center", "ball_support"), d, "ball center"),
                           F.scalar(_scalar_text(_require(c, "radius", "ball_support"))))
    raise DocumentError(f"unknown component type {kind!r}")


def _dimension(doc: dict) -> int:
    d = _require(doc, "dimension")
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise DocumentError("dimension must be an integer >= 1")
    return d


def parse_operator(doc: dict) -> LevyOperator:
    d = _dimension(doc)
    F = parse_field(doc.get("field"))
    if doc.get("drift_convention", CANONICAL) != CANONICAL:
        raise DocumentError("drift_convention must be \"canonical\"; write shifted atoms as pure_difference instead")
    sigma = doc.get("sigma", []) or []
    if not isinstance(sigma, list):
        raise DocumentError("sigma must be a list of column vectors")
    drift = doc.get("drift")
    comps = doc.get("components", []) or []
    if not isinstance(comps, list):
        raise DocumentError("components must be a list")
    notes = ()
    if doc.get("truncation"):
        notes = (TRUNCATION_WARNING.format(doc["truncation"]),)
    return LevyOperator(
        dim=d,
        field=F,
        sigma=tuple(_vector(F, col, d, "sigma column") for col in sigma),
        drift=_vector(F, drift, d, "drift") if drift is not None else None,
        components=tuple(_component(F, d, c) for c in comps),
        notes=notes,
    )


def _vec_doc(v) -> list[str]:
    return [str(x) for x in v]


def operator_to_doc(op: LevyOperator, truncation: str | None = None) -> dict:
    comps = []
    for c in op.components:
        if isinstance(c, Atom):
            comps.append({"type": "atom", "z": _vec_doc(c.z), "weight": str(c.weight), "convention": c.convention})
        elif isinstance(c, Sphere):
            comps.append({"type": "sphere", "radius": str(c.radius), "surface_weight": str(c.surface_weight)})
        elif isinstance(c, StableSubspace):
            comps.append({"type": "stable_subspace", "basis": [_vec_doc(v) for v in c.basis],
                          "alpha": str(c.alpha), "scale": str(c.scale)})
        else:
            comps.append({"type": "ball_support", "center": _vec_doc(c.center), "radius": str(c.radius)})
    out = {
        "dimension": op.dim,
        "field": field_to_doc(op.field),
        "sigma": [_vec_doc(s) for s in op.sigma],
        "drift": _vec_doc(op.drift),
        "drift_convention": CANONICAL,
        "components": comps,
    }
    if truncation:
        out["truncation"] = truncation
    return out


def parse_generators(doc: dict) -> GeneratorSet:
    d = _dimension(doc)
    F = parse_field(doc.get("field"))
    atoms = doc.get("atoms", []) or []
    lines = doc.get("lines", []) or []
    if not isinstance(atoms, list) or not isinstance(lines, list):
        raise DocumentError("atoms and lines must be lists of vectors")
    return GeneratorSet(d, atoms=[_vector(F, a, d, "atom") for a in atoms],
                        lines=[_vector(F, h, d, "line") for h in lines], field=F)


def parse_group(block: dict, dim: int, F: Field) -> ClosedSubgroup:
    """A predicted group, taken as given (no normalisation)."""
    if not isinstance(block, dict):
        raise DocumentError("predicted group must be an object with v_basis and lattice_basis")
    V = tuple(_vector(F, v, dim, "v_basis vector") for v in block.get("v_basis", []) or [])
    L = tuple(_vector(F, v, dim, "lattice vector") for v in block.get("lattice_basis", []) or [])
    return ClosedSubgroup(dim, F, V, L)


def group_to_doc(G: ClosedSubgroup) -> dict:
    return G.to_dict()
